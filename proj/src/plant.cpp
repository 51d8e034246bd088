#include "avfc/plant.hpp"

#include "avfc/error.hpp"

#include <cmath>
#include <string>

namespace avfc {

bool is_controllable(const Mat& a, const Mat& b, double tol) {
    const std::size_t n = a.rows();
    Mat ctrb(n, n);
    Mat col = b;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) ctrb(i, k) = col(i, 0);
        col = a * col;
    }
    return elimination_rank(ctrb, tol) == n;
}

void LinearCore::validate() const {
    const std::size_t n = A.rows();
    if (n == 0 || !A.is_square()) throw InvalidModel("A must be a non-empty square matrix");
    if (b.rows() != n || b.cols() != 1) throw InvalidModel("b must be n x 1");
    if (C.cols() != n || C.rows() == 0) throw InvalidModel("C must be l x n");
    if (!A.all_finite() || !b.all_finite() || !C.all_finite()) throw InvalidModel("system matrices must be finite");
    if (!is_controllable(A, b)) throw InvalidModel("(A, b) is not controllable");
}

void NonlinearPair::validate(std::size_t n) const {
    if (!(g_min > 0.0)) throw InvalidModel("g_min must be positive");
    if (f.expr.arity() > n || g.expr.arity() > n) throw InvalidModel("nonlinearity references too many states");
    const Vec zero(n, 0.0);
    const double g0 = g(0.0, zero);
    if (!(std::abs(g0) > g_min))
        throw InvalidModel("input gain g(0) = " + std::to_string(g0) + " does not exceed g_min");
}

void ReferenceModel::validate(std::size_t n) const {
    if (A_d.rows() != n || A_d.cols() != n) throw InvalidModel("A_d must be n x n");
    if (B_d.rows() != n || B_d.cols() != 1) throw InvalidModel("B_d must be n x 1");
    try {
        if (!is_positive_definite(solve_lyapunov(A_d, Mat::identity(n))))
            throw InvalidModel("A_d is not Hurwitz");
    } catch (const SingularSystem&) {
        throw InvalidModel("A_d is not Hurwitz (singular Lyapunov system)");
    }
}

void DisturbanceChannel::validate(std::size_t n) const {
    if (mode == Mode::Constant && (E.rows() != n || E.cols() != 1))
        throw InvalidModel("disturbance matrix E must be n x 1");
    if (mode == Mode::Matched && !std::isfinite(scale)) throw InvalidModel("matched scale must be finite");
}

Vec reference_deriv(const ReferenceModel& m, std::span<const double> x_d, double r) {
    Vec dx = m.A_d * x_d;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += m.B_d(i, 0) * r;
    return dx;
}

Vec nominal_deriv(const LinearCore& core, const NonlinearPair& nl, double t, std::span<const double> x, double u) {
    const double input = nl.f(t, x) + nl.g(t, x) * u;
    Vec dx = core.A * x;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += core.b(i, 0) * input;
    return dx;
}

Vec faulty_deriv(const LinearCore& core, const NonlinearPair& nl, double t, std::span<const double> x_f,
                 double u_f, double theta, double d_f, double d, const DisturbanceChannel& ch) {
    const double g = nl.g(t, x_f);
    const double input = nl.f(t, x_f) + (theta * g) * (u_f + d_f);
    Vec dx = core.A * x_f;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        const double e = ch.mode == DisturbanceChannel::Mode::Matched ? ch.scale * core.b(i, 0) * g : ch.E(i, 0);
        dx[i] += core.b(i, 0) * input + e * d;
    }
    return dx;
}

Vec output(const LinearCore& core, std::span<const double> x) { return core.C * x; }

} // namespace avfc
