#include "avfc/controller.hpp"

#include "avfc/error.hpp"

#include <cmath>
#include <string>

namespace avfc {

NominalGains matching_gains(const Mat& a, const Mat& b, const Mat& a_d, const Mat& b_d) {
    const Mat pinv = left_pinv_col(b);
    NominalGains gains;
    gains.k_x = pinv * (a_d - a);
    gains.k_r = (pinv * b_d)(0, 0);
    gains.residual_A = (a - a_d + b * gains.k_x).max_abs();
    gains.residual_B = (gains.k_r * b - b_d).max_abs();
    return gains;
}

NominalGains synthesize_gains(const Mat& a, const Mat& b, const Mat& a_d, const Mat& b_d) {
    NominalGains gains = matching_gains(a, b, a_d, b_d);
    if (gains.residual_A > kMatchingTol || gains.residual_B > kMatchingTol)
        throw MatchingConditionViolated("reference model is not reachable through b (residuals " +
                                        std::to_string(gains.residual_A) + ", " +
                                        std::to_string(gains.residual_B) + ")");
    return gains;
}

double nominal_control(const NominalGains& gains, const NonlinearPair& nl, double t, std::span<const double> x,
                       double r) {
    const double g = nl.g(t, x);
    if (std::abs(g) < nl.g_min)
        throw InputGainTooSmall("input gain |g| = " + std::to_string(std::abs(g)) + " below g_min");
    return (-nl.f(t, x) + gains.k_r * r + dot(gains.k_x.row_span(0), x)) / g;
}

} // namespace avfc
