#include "cylflow/mollifier.hpp"

#include <cmath>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep5_d1(double u) { return 30.0 * u * u * (u - 1.0) * (u - 1.0); }
double smoothstep5_d2(double u) { return 60.0 * u * (2.0 * u - 1.0) * (u - 1.0); }

constexpr double k_cw = 5.7735026918962576451; // 10/sqrt(3) = max |p''| on [0,1]

} // namespace

MollifierProfile::MollifierProfile(double R, double h) : R_(R), h_(h), c_w_(k_cw) {
    if (!(h > 0.0)) throw ConfigError("mollifier: h must be positive");
    if (!(R >= 2.0 * h)) throw ConfigError("mollifier: R >= 2h required");

    // Numerical certification of |W''| * h^2 <= c_w across the transition.
    constexpr int n = 100001;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        worst = std::max(worst, std::abs(smoothstep5_d2(u)));
    }
    if (worst > c_w_ * (1.0 + 1e-12))
        throw NumericalError("mollifier: second-derivative certification failed");
}

double MollifierProfile::eval(double xi) const {
    const double a = std::fabs(xi);
    if (a <= R_) return 1.0;
    if (a >= R_ + h_) return 0.0;
    return 1.0 - smoothstep5((a - R_) / h_);
}

double MollifierProfile::eval_d1(double xi) const {
    const double a = std::fabs(xi);
    if (a <= R_ || a >= R_ + h_) return 0.0;
    const double d = -smoothstep5_d1((a - R_) / h_) / h_;
    return xi > 0.0 ? d : -d;
}

double MollifierProfile::eval_d2(double xi) const {
    const double a = std::fabs(xi);
    if (a <= R_ || a >= R_ + h_) return 0.0;
    return -smoothstep5_d2((a - R_) / h_) / (h_ * h_);
}

} // namespace cylflow
