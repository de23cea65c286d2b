#include <doctest.h>

#include <cmath>
#include <random>

#include "cylflow/errors.hpp"
#include "cylflow/mollifier.hpp"

using namespace cylflow;

TEST_CASE("mollifier: plateau, transition, and tail values") {
    const MollifierProfile w = make_mollifier(4.0, 1.5);
    CHECK(w.eval(0.0) == 1.0);
    CHECK(w.eval(4.0) == 1.0);
    CHECK(w.eval(5.5) == 0.0);
    CHECK(w.eval(-7.0) == 0.0);
    // Midpoint of the transition: p(1/2) = 1/2.
    CHECK(w.eval(4.0 + 0.75) == doctest::Approx(0.5).epsilon(1e-14));
    for (double xi = -8.0; xi <= 8.0; xi += 0.01) {
        CHECK(w.eval(xi) >= 0.0);
        CHECK(w.eval(xi) <= 1.0);
    }
}

TEST_CASE("mollifier: evenness is bit-identical") {
    const MollifierProfile w = make_mollifier(2.0, 1.0);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        const double xi = u(gen);
        CHECK(w.eval(xi) == w.eval(-xi));
        CHECK(w.eval_d2(xi) == w.eval_d2(-xi));
        CHECK(w.eval_d1(xi) == -w.eval_d1(-xi));
    }
}

TEST_CASE("mollifier: first derivative closed form and FD consistency") {
    const double R = 3.0, h = 1.2;
    const MollifierProfile w = make_mollifier(R, h);
    // At xi = +-(R + h/2): -+ p'(1/2)/h = -+ 15/(8h).
    CHECK(w.eval_d1(R + 0.5 * h) == doctest::Approx(-15.0 / (8.0 * h)).epsilon(1e-14));
    CHECK(w.eval_d1(-(R + 0.5 * h)) == doctest::Approx(15.0 / (8.0 * h)).epsilon(1e-14));
    // Central differences across the whole axis (step 1e-5 h).
    const double step = 1e-5 * h;
    for (double xi = -(R + 2.0 * h); xi <= R + 2.0 * h; xi += 0.037) {
        const double fd = (w.eval(xi + step) - w.eval(xi - step)) / (2.0 * step);
        CHECK(fd == doctest::Approx(w.eval_d1(xi)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("mollifier: certified second-derivative constant") {
    const double R = 2.0, h = 0.7;
    const MollifierProfile w = make_mollifier(R, h);
    CHECK(w.c_w() == doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-12));
    // Dense scan: |W''| h^2 <= c_w, attained at u = (3 -+ sqrt 3)/6.
    double worst = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double xi = R + h * static_cast<double>(i) / 100000.0;
        worst = std::max(worst, std::abs(w.eval_d2(xi)));
    }
    CHECK(worst * h * h <= w.c_w() * (1.0 + 1e-12));
    CHECK(worst * h * h == doctest::Approx(w.c_w()).epsilon(1e-6));
    const double u_star = (3.0 - std::sqrt(3.0)) / 6.0;
    CHECK(std::abs(w.eval_d2(R + h * u_star)) * h * h ==
          doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("mollifier: derivatives vanish off the transition") {
    const MollifierProfile w = make_mollifier(2.0, 1.0);
    for (double xi : {0.0, 1.0, 2.0, -1.5, 3.0, 5.0, -4.0}) {
        if (std::abs(xi) <= 2.0 || std::abs(xi) >= 3.0) {
            CHECK(w.eval_d1(xi) == 0.0);
            CHECK(w.eval_d2(xi) == 0.0);
        }
    }
}

TEST_CASE("mollifier: Lipschitz bound on the first derivative") {
    const double R = 2.4, h = 0.9;
    const MollifierProfile w = make_mollifier(R, h);
    const double lip = w.c_w() / (h * h);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-(R + 2.0 * h), R + 2.0 * h);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(gen), b = u(gen);
        CHECK(std::abs(w.eval_d1(a) - w.eval_d1(b)) <=
              lip * std::abs(a - b) * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("mollifier: domain errors") {
    CHECK_THROWS_AS(make_mollifier(1.0, 0.6), ConfigError);  // R < 2h
    CHECK_THROWS_AS(make_mollifier(1.0, 0.0), ConfigError);  // h = 0
    CHECK_THROWS_AS(make_mollifier(1.0, -0.1), ConfigError); // h < 0
    CHECK_NOTHROW(make_mollifier(1.0, 0.5));                 // boundary R = 2h
}
