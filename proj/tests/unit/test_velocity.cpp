#include <doctest.h>

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cylflow/velocity.hpp"

using namespace cylflow;

namespace {

const double pi = 0.5 * two_pi;

std::vector<Blob> random_blobs(std::size_t n, std::uint64_t seed, double core = 0.05) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u1(-3.0, 3.0), u2(0.0, two_pi);
    std::vector<Blob> out(n);
    for (auto& b : out) {
        b.pos = CylPoint(u1(gen), u2(gen));
        b.gamma = 1.0 / static_cast<double>(n);
        b.core = core;
    }
    return out;
}

// Quantize to a multiple of 2^-47 so that adding the double closest to 2*pi
// is exact and the periodicity check can demand bit identity.
double quantize(double v) { return std::ldexp(std::round(std::ldexp(v, 47)), -47); }

} // namespace

TEST_CASE("induced_velocity: single-source examples") {
    KernelConfig cfg;
    cfg.normalization = 1.0 / two_pi;

    SUBCASE("self-interaction gives zero") {
        std::vector<CylPoint> t{{0.0, pi}};
        std::vector<PointSource> s{{{0.0, pi}, 1.0}};
        const auto v = induced_velocity(t, s, cfg);
        CHECK(v[0].u1 == 0.0);
        CHECK(v[0].u2 == 0.0);
    }
    SUBCASE("single term reproduces the kernel") {
        // Gamma = 2 pi and kappa = 1/(2 pi) cancel.
        std::vector<CylPoint> t{{1.0, pi + 0.5 * pi}};
        std::vector<PointSource> s{{{0.0, pi}, two_pi}};
        const auto v = induced_velocity(t, s, cfg);
        CHECK(v[0].u1 == doctest::Approx(-1.0 / (2.0 * std::cosh(1.0))).epsilon(1e-12));
        CHECK(v[0].u2 == doctest::Approx(std::sinh(1.0) / (2.0 * std::cosh(1.0))).epsilon(1e-12));
    }
}

TEST_CASE("induced_velocity: dipole translates rigidly") {
    // Mirror pair Gamma = +-1 at x2 = pi -+ a: equal u1 at both members.
    KernelConfig cfg;
    cfg.normalization = 1.0;
    const double a = 0.35;
    std::vector<CylPoint> t{{0.0, pi - a}, {0.0, pi + a}};
    std::vector<PointSource> s{{{0.0, pi - a}, 1.0}, {{0.0, pi + a}, -1.0}};
    const auto v = induced_velocity(t, s, cfg);
    // Two-term oracle: dG/dx2 at Delta2 = -+2a.
    const double expect = -(-std::sin(2.0 * a) / (2.0 * (1.0 - std::cos(2.0 * a))));
    CHECK(v[0].u1 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(v[1].u1 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("fast summation agrees with the serial reference") {
    const auto blobs = random_blobs(120, 5);
    std::vector<CylPoint> pts;
    std::vector<PointSource> srcs;
    for (const auto& b : blobs) {
        pts.push_back(b.pos);
        srcs.push_back({b.pos, b.gamma});
    }
    KernelConfig cfg;
    cfg.core_radius = 0.05;
    const auto ref = induced_velocity_serial(pts, srcs, cfg);
    const auto fast = induced_velocity(pts, srcs, cfg);
    std::vector<Vec2> self;
    self_induced_velocity(blobs, cfg, self);
    double scale = 0.0;
    for (const auto& v : ref) scale = std::max({scale, std::abs(v.u1), std::abs(v.u2)});
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(std::abs(fast[i].u1 - ref[i].u1) <= 1e-12 * scale);
        CHECK(std::abs(fast[i].u2 - ref[i].u2) <= 1e-12 * scale);
        CHECK(std::abs(self[i].u1 - ref[i].u1) <= 1e-12 * scale);
        CHECK(std::abs(self[i].u2 - ref[i].u2) <= 1e-12 * scale);
    }
}

TEST_CASE("thread count does not change self-induced velocities beyond 1e-12") {
#ifdef _OPENMP
    const auto blobs = random_blobs(200, 17);
    KernelConfig cfg;
    cfg.core_radius = 0.05;
    std::vector<Vec2> v1, v8;
    omp_set_num_threads(1);
    self_induced_velocity(blobs, cfg, v1);
    omp_set_num_threads(8);
    self_induced_velocity(blobs, cfg, v8);
    omp_set_num_threads(1);
    double scale = 0.0;
    for (const auto& v : v1) scale = std::max({scale, std::abs(v.u1), std::abs(v.u2)});
    for (std::size_t i = 0; i < v1.size(); ++i) {
        CHECK(std::abs(v1[i].u1 - v8[i].u1) <= 1e-12 * scale);
        CHECK(std::abs(v1[i].u2 - v8[i].u2) <= 1e-12 * scale);
    }
#endif
}

TEST_CASE("source ordering changes results only at the reduction-rounding level") {
    auto blobs = random_blobs(80, 23);
    std::vector<CylPoint> pts{{0.3, 1.0}, {-1.0, 4.0}};
    std::vector<PointSource> srcs;
    for (const auto& b : blobs) srcs.push_back({b.pos, b.gamma});
    KernelConfig cfg;
    cfg.core_radius = 0.05;
    const auto a = induced_velocity(pts, srcs, cfg);
    std::reverse(srcs.begin(), srcs.end());
    const auto b = induced_velocity(pts, srcs, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].u1 == doctest::Approx(b[i].u1).epsilon(1e-12));
        CHECK(a[i].u2 == doctest::Approx(b[i].u2).epsilon(1e-12));
    }
}

TEST_CASE("periodicity: shifting x2 by 2*pi is bit-identical") {
    // Coordinates quantized so that +2*pi introduces no rounding; the wrap
    // then restores the original bits exactly (Sterbenz).
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u1(-3.0, 3.0), u2(0.0, two_pi);
    std::vector<PointSource> srcs;
    for (int i = 0; i < 40; ++i)
        srcs.push_back({CylPoint(u1(gen), quantize(u2(gen))), 0.025});
    std::vector<CylPoint> t1, t2;
    for (int i = 0; i < 20; ++i) {
        const double x1 = u1(gen), x2 = quantize(u2(gen));
        t1.push_back(CylPoint(x1, x2));
        t2.push_back(CylPoint(x1, x2 + two_pi));
    }
    KernelConfig cfg;
    const auto a = induced_velocity(t1, srcs, cfg);
    const auto b = induced_velocity(t2, srcs, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].u1 == b[i].u1);
        CHECK(a[i].u2 == b[i].u2);
    }
    // Shifted sources as well.
    std::vector<PointSource> shifted = srcs;
    for (auto& s : shifted) s.pos = CylPoint(s.pos.x1, s.pos.x2 + two_pi);
    const auto c = induced_velocity(t1, shifted, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].u1 == c[i].u1);
        CHECK(a[i].u2 == c[i].u2);
    }
}

TEST_CASE("truncation at radius 30 is indistinguishable for compact ensembles") {
    const auto blobs = random_blobs(100, 31); // |x1| <= 3 < 5
    std::vector<CylPoint> pts;
    std::vector<PointSource> srcs;
    for (const auto& b : blobs) {
        pts.push_back(b.pos);
        srcs.push_back({b.pos, b.gamma});
    }
    KernelConfig open;
    open.core_radius = 0.05;
    KernelConfig trunc = open;
    trunc.truncation_radius = 30.0;
    const auto a = induced_velocity(pts, srcs, open);
    const auto b = induced_velocity(pts, srcs, trunc);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max({scale, std::abs(a[i].u1), std::abs(a[i].u2)});
        diff = std::max({diff, std::abs(a[i].u1 - b[i].u1), std::abs(a[i].u2 - b[i].u2)});
    }
    CHECK(diff <= 1e-9 * scale);
}

TEST_CASE("far_field_u2_limit") {
    KernelConfig cfg; // kappa = 1/(2 pi)

    SUBCASE("dipole: both limits vanish") {
        std::vector<PointSource> s{{{0.0, pi - 0.3}, 1.0}, {{0.0, pi + 0.3}, -1.0}};
        const auto [lm, lp] = far_field_u2_limit(s, cfg);
        CHECK(std::abs(lm) <= 1e-8);
        CHECK(std::abs(lp) <= 1e-8);
    }
    SUBCASE("positive total circulation: antisymmetric limits of size kappa M0 / 2") {
        std::vector<PointSource> s;
        std::mt19937_64 gen(41);
        std::uniform_real_distribution<double> u1(-2.0, 2.0), u2(0.0, two_pi);
        double m0 = 0.0;
        for (int i = 0; i < 25; ++i) {
            const double g = 0.1 + 0.01 * i;
            s.push_back({CylPoint(u1(gen), u2(gen)), g});
            m0 += g;
        }
        const auto [lm, lp] = far_field_u2_limit(s, cfg);
        CHECK(std::abs(lm + lp) <= 1e-6 * std::abs(lp));
        CHECK(lp == doctest::Approx(cfg.normalization * m0 / 2.0).epsilon(1e-6));
        CHECK(lm == doctest::Approx(-cfg.normalization * m0 / 2.0).epsilon(1e-6));
    }
}
