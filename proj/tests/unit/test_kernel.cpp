#include <doctest.h>

#include <cmath>
#include <random>

#include "cylflow/errors.hpp"
#include "cylflow/kernel.hpp"

using namespace cylflow;

namespace {
const double pi = 0.5 * two_pi;
}

TEST_CASE("green: closed-form values") {
    // Delta = (0, pi): -1/2 log 2
    CHECK(green({0.0, 0.0}, {0.0, pi}) == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-12));
    // Delta = (1, 0): -1/2 log(cosh 1 - 1)
    CHECK(green({1.0, 0.3}, {0.0, 0.3}) ==
          doctest::Approx(-0.5 * std::log(std::cosh(1.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("green: symmetric in (x, y)") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u1(-5.0, 5.0), u2(0.0, two_pi);
    for (int k = 0; k < 1000; ++k) {
        CylPoint x{u1(gen), u2(gen)}, y{u1(gen), u2(gen)};
        CHECK(green(x, y) == green(y, x)); // even in both differences
    }
}

TEST_CASE("green: no overflow at large axial separation") {
    // cosh overflows near |d1| ~ 710; the rescaled form must survive 1e4.
    for (double d1 : {50.0, 700.0, 1e4}) {
        const double g = green({d1, 1.0}, {0.0, 0.0});
        CHECK(std::isfinite(g));
        // G ~ -|d1|/2 + log(2)/2 far out
        CHECK(g == doctest::Approx(-0.5 * d1 + 0.5 * std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("green: singular at coincident points") {
    CHECK_THROWS_AS((void)green({1.0, 2.0}, {1.0, 2.0}), SingularInputError);
    CHECK_THROWS_AS((void)dG_dx2({1.0, 2.0}, {1.0, 2.0}), SingularInputError);
}

TEST_CASE("dG_dx2: closed-form values") {
    // Delta = (1, pi/2): -1/(2 cosh 1)
    CHECK(dG_dx2({1.0, 0.5 * pi}, {0.0, 0.0}) ==
          doctest::Approx(-1.0 / (2.0 * std::cosh(1.0))).epsilon(1e-12));
    // Delta2 = 0: exactly zero
    CHECK(dG_dx2({3.7, 1.0}, {0.0, 1.0}) == 0.0);
}

TEST_CASE("dG_dx2: antisymmetry is exact over 1e4 random pairs") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u1(-20.0, 20.0), u2(0.0, two_pi);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        CylPoint x{u1(gen), u2(gen)}, y{u1(gen), u2(gen)};
        worst = std::max(worst, std::abs(dG_dx2(x, y) + dG_dx2(y, x)));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("dG_dx2: zero angular mean (2^10-node quadrature)") {
    // Rectangle rule on the periodic integrand; spectrally exact here.
    constexpr int n = 1 << 10;
    for (double d1 : {0.1, 0.5, 2.0, 10.0}) {
        for (double x2 : {0.0, 1.1, 4.5}) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                const double y2 = two_pi * static_cast<double>(k) / n;
                sum += dG_dx2({d1, x2}, {0.0, y2});
            }
            CHECK(std::abs(sum * two_pi / n) <= 1e-10);
        }
    }
}

TEST_CASE("green: harmonic away from the singularity") {
    // 5-point stencil, step 1e-3. The mean-value residual (undivided stencil)
    // is h^4 * 12/(12 r^4) and stays below 1e-5 down to r = 0.1; the scaled
    // Laplacian carries the h^2/r^4 truncation error and is checked where it
    // is meaningful (r >= 1).
    const double h = 1e-3;
    auto stencil = [&](double a, double b) {
        const CylPoint y{0.0, 1.0};
        return green({a + h, b}, y) + green({a - h, b}, y) + green({a, b + h}, y) +
               green({a, b - h}, y) - 4.0 * green({a, b}, y);
    };
    double worst_raw = 0.0, worst_scaled = 0.0;
    for (double r = 0.1; r <= 30.0; r *= 1.5) {
        for (double th = 0.1; th < two_pi; th += 0.7) {
            const double raw = std::abs(stencil(r * std::cos(th), 1.0 + r * std::sin(th)));
            worst_raw = std::max(worst_raw, raw);
            if (r >= 1.0) worst_scaled = std::max(worst_scaled, raw / (h * h));
        }
    }
    CHECK(worst_raw <= 1e-5);
    CHECK(worst_scaled <= 1e-5);
}

TEST_CASE("grad_perp_green: components and conventions") {
    KernelConfig cfg;
    cfg.normalization = 1.0;

    SUBCASE("exact kernel values at Delta = (1, pi/2)") {
        const Vec2 v = grad_perp_green({1.0, 0.5 * pi}, {0.0, 0.0}, cfg);
        CHECK(v.u1 == doctest::Approx(-1.0 / (2.0 * std::cosh(1.0))).epsilon(1e-12));
        CHECK(v.u2 == doctest::Approx(std::sinh(1.0) / (2.0 * std::cosh(1.0))).epsilon(1e-12));
    }
    SUBCASE("self-interaction convention at core_radius = 0") {
        const Vec2 v = grad_perp_green({0.4, 2.0}, {0.4, 2.0}, cfg);
        CHECK(v.u1 == 0.0);
        CHECK(v.u2 == 0.0);
    }
    SUBCASE("truncated pairs contribute exactly zero") {
        KernelConfig tcfg = cfg;
        tcfg.truncation_radius = 10.0;
        const Vec2 v = grad_perp_green({20.0, 1.0}, {0.0, 0.0}, tcfg);
        CHECK(v.u1 == 0.0);
        CHECK(v.u2 == 0.0);
    }
    SUBCASE("axial decay of the angular derivative") {
        const Vec2 v = grad_perp_green({20.0, 1.0}, {0.0, 0.0}, cfg);
        CHECK(std::abs(v.u1) <= 1e-7); // ~ e^{-20}
        // The untruncated second component approaches the far-field constant.
        CHECK(v.u2 == doctest::Approx(0.5).epsilon(1e-8));
    }
    SUBCASE("kappa scales linearly") {
        KernelConfig half = cfg;
        half.normalization = 0.5;
        const Vec2 a = grad_perp_green({1.0, 2.0}, {0.0, 0.5}, cfg);
        const Vec2 b = grad_perp_green({1.0, 2.0}, {0.0, 0.5}, half);
        CHECK(b.u1 == doctest::Approx(0.5 * a.u1));
        CHECK(b.u2 == doctest::Approx(0.5 * a.u2));
    }
}

TEST_CASE("grad_perp_green: desingularized kernel is total and antisymmetric") {
    KernelConfig cfg;
    cfg.normalization = 1.0;
    cfg.core_radius = 0.1;
    const Vec2 self = grad_perp_green({0.4, 2.0}, {0.4, 2.0}, cfg);
    CHECK(self.u1 == 0.0); // sin(0) = 0
    CHECK(self.u2 == 0.0);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u1(-3.0, 3.0), u2(0.0, two_pi);
    for (int k = 0; k < 1000; ++k) {
        CylPoint x{u1(gen), u2(gen)}, y{u1(gen), u2(gen)};
        const Vec2 a = grad_perp_green(x, y, cfg);
        const Vec2 b = grad_perp_green(y, x, cfg);
        CHECK(a.u1 == -b.u1);
        CHECK(a.u2 == -b.u2);
    }
}

TEST_CASE("mollified denominator matches cosh - cos + core^2/2") {
    KernelConfig cfg;
    cfg.normalization = 1.0;
    cfg.core_radius = 0.3;
    const double d1 = 0.7, d2 = 1.4;
    const double denom = std::cosh(d1) - std::cos(d2) + 0.5 * 0.3 * 0.3;
    const Vec2 v = grad_perp_green({d1, d2}, {0.0, 0.0}, cfg);
    CHECK(v.u1 == doctest::Approx(-std::sin(d2) / (2.0 * denom)).epsilon(1e-13));
    CHECK(v.u2 == doctest::Approx(std::sinh(d1) / (2.0 * denom)).epsilon(1e-13));
}

TEST_CASE("validate_decay_envelope") {
    SUBCASE("default constants certify") {
        const auto rep = validate_decay_envelope({2.0, 0.5}, 4096);
        CHECK(rep.pass);
        CHECK(rep.max_ratio > 0.5); // tight enough to mean something
        CHECK(rep.max_ratio <= 1.0);
        CHECK(rep.samples >= 4096);
    }
    SUBCASE("an envelope below the kernel fails") {
        const auto rep = validate_decay_envelope({1e-6, 10.0}, 2048);
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("sample floor enforced") {
        CHECK_THROWS_AS((void)validate_decay_envelope({2.0, 0.5}, 10), ConfigError);
    }
    SUBCASE("kernel vanishes on the antipodal ray") {
        CHECK(std::abs(dG_dx2({0.0, pi}, {0.0, 0.0})) <= 1e-15);
    }
}

TEST_CASE("KernelConfig validation") {
    KernelConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.truncation_radius = 5.0; // finite but below the documented floor
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.truncation_radius = 30.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.core_radius = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.core_radius = 0.0;
    cfg.normalization = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("CylPoint wraps the angle canonically") {
    CHECK(CylPoint(0.0, two_pi).x2 == 0.0);
    CHECK(CylPoint(0.0, -1.0).x2 == doctest::Approx(two_pi - 1.0));
    CHECK(CylPoint(0.0, 3.0 * two_pi + 0.5).x2 == doctest::Approx(0.5));
    // Values already canonical pass through bit-identically.
    const double v = 1.2345678901234567;
    CHECK(CylPoint(0.0, v).x2 == v);
}
