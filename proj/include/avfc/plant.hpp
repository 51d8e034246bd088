#pragma once

#include "avfc/expr.hpp"
#include "avfc/numerics.hpp"

#include <span>

namespace avfc {

/// Known linear part (A, b, C) of the affine plant. Single input: b is n x 1.
struct LinearCore {
    Mat A;
    Mat b;
    Mat C;

    std::size_t n() const noexcept { return A.rows(); }
    std::size_t l() const noexcept { return C.rows(); }

    /// Throws InvalidModel on inconsistent shapes or an uncontrollable (A, b).
    void validate() const;

    friend bool operator==(const LinearCore&, const LinearCore&) = default;
};

/// Rank test on [b, Ab, ..., A^{n-1}b] by pivoted elimination.
bool is_controllable(const Mat& a, const Mat& b, double tol = 1e-9);

struct NonlinearPair {
    expr::SourceExpr f;  // drift nonlinearity
    expr::SourceExpr g;  // input gain
    double g_min = 1e-6;

    /// Requires |g(t=0, x=0)| > g_min.
    void validate(std::size_t n) const;

    friend bool operator==(const NonlinearPair&, const NonlinearPair&) = default;
};

struct ReferenceModel {
    Mat A_d;
    Mat B_d;

    /// Shapes plus a Hurwitz check: solve_lyapunov(A_d, I) must be positive definite.
    void validate(std::size_t n) const;

    friend bool operator==(const ReferenceModel&, const ReferenceModel&) = default;
};

/// How the external disturbance d(t) enters the faulty plant.
struct DisturbanceChannel {
    enum class Mode { Constant, Matched };

    Mode mode = Mode::Constant;
    Mat E;              // n x 1, Constant mode
    double scale = 0.0; // Matched mode: E(t) = scale * b * g(t, x_f)

    static DisturbanceChannel constant(Mat e) { return {Mode::Constant, std::move(e), 0.0}; }
    static DisturbanceChannel matched(double s) { return {Mode::Matched, Mat{}, s}; }

    void validate(std::size_t n) const;

    friend bool operator==(const DisturbanceChannel&, const DisturbanceChannel&) = default;
};

Vec reference_deriv(const ReferenceModel& m, std::span<const double> x_d, double r);

/// A x + b (f(x) + g(x) u)
Vec nominal_deriv(const LinearCore& core, const NonlinearPair& nl, double t, std::span<const double> x, double u);

/// A x_f + b f(x_f) + b theta g(x_f) (u_f + d_f) + E d
Vec faulty_deriv(const LinearCore& core, const NonlinearPair& nl, double t, std::span<const double> x_f,
                 double u_f, double theta, double d_f, double d, const DisturbanceChannel& ch);

Vec output(const LinearCore& core, std::span<const double> x);

} // namespace avfc
