#pragma once

#include "avfc/numerics.hpp"
#include "avfc/plant.hpp"

#include <span>

namespace avfc {

/// Model-matching gains of the feedback-linearizing controller.
///
/// k_x is built from (A_d - A) and multiplies the state; k_r is built from
/// B_d and multiplies the reference. With exact matching the closed loop
/// becomes x' = A_d x + B_d r.
struct NominalGains {
    Mat k_x;               // 1 x n
    double k_r = 0.0;
    double residual_A = 0.0; // max |A - A_d + b k_x|
    double residual_B = 0.0; // max |b k_r - B_d|
};

inline constexpr double kMatchingTol = 1e-8;

/// Least-squares gains and their residuals, without enforcing the matching condition.
NominalGains matching_gains(const Mat& a, const Mat& b, const Mat& a_d, const Mat& b_d);

/// Throws MatchingConditionViolated when A_d - A or B_d is not in range(b).
NominalGains synthesize_gains(const Mat& a, const Mat& b, const Mat& a_d, const Mat& b_d);

/// u = (-f(x) + k_r r + k_x x) / g(x). Throws InputGainTooSmall if |g| < g_min.
double nominal_control(const NominalGains& gains, const NonlinearPair& nl, double t, std::span<const double> x,
                       double r);

} // namespace avfc
