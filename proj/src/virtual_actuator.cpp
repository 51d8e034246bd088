#include "avfc/virtual_actuator.hpp"

#include "avfc/error.hpp"

#include <algorithm>
#include <cmath>

namespace avfc {

void AdaptiveState::pack(std::span<double> out) const {
    if (out.size() != M.size() + 2) throw DimensionMismatch("adaptive state slot has wrong size");
    std::copy(M.begin(), M.end(), out.begin());
    out[M.size()] = N;
    out[M.size() + 1] = d_hat;
}

AdaptiveState AdaptiveState::unpack(std::span<const double> in) {
    if (in.size() < 2) throw DimensionMismatch("adaptive state slot too short");
    const std::size_t n = in.size() - 2;
    return {Vec(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n)), in[n], in[n + 1]};
}

double AdaptationConfig::mu_gamma() const {
    switch (mu_rate) {
    case MuRate::Gamma1: return gamma1;
    case MuRate::Gamma3: return gamma3;
    case MuRate::Gamma2: break;
    }
    return gamma2;
}

void AdaptationConfig::validate(std::size_t n) const {
    if (!(gamma1 > 0.0 && gamma2 > 0.0 && gamma3 > 0.0)) throw InvalidModel("adaptation rates must be positive");
    if (!(theta_design > 0.0 && theta_design < 1.0)) throw InvalidModel("theta_design must lie in (0, 1)");
    if (!(d_tilde_max >= 0.0 && d_dot_max >= 0.0)) throw InvalidModel("disturbance bounds must be non-negative");
    if (P.rows() != n || P.cols() != n) throw InvalidModel("adaptation P must be n x n");
    if (!is_positive_definite(P)) throw InvalidModel("adaptation P is not positive definite");
}

double reconfigure(const AdaptiveState& s, std::span<const double> x_tilde, double u) {
    return dot(s.M, x_tilde) + s.N * u - s.d_hat;
}

AdaptRates adapt_deriv(const AdaptationConfig& cfg, const LinearCore& core, const NonlinearPair& nl, double t,
                       std::span<const double> x_f, std::span<const double> x_tilde, double u) {
    const std::size_t n = core.n();
    // b^T P x~ = (P^T b) . x~; P is symmetric so P b works.
    double bpx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pb_i = 0.0;
        for (std::size_t k = 0; k < n; ++k) pb_i += cfg.P(k, i) * core.b(k, 0);
        bpx += pb_i * x_tilde[i];
    }
    const double s = nl.g(t, x_f) * bpx;

    AdaptRates rates;
    rates.M_dot.resize(n);
    for (std::size_t i = 0; i < n; ++i) rates.M_dot[i] = -cfg.gamma1 * s * x_tilde[i];
    rates.N_dot = -cfg.gamma2 * s * u;
    rates.d_hat_dot = cfg.gamma3 * s;
    return rates;
}

double ideal_feedforward(const NonlinearPair& nl, double t, std::span<const double> x_f) {
    const double g = nl.g(t, x_f);
    if (std::abs(g) < nl.g_min) throw InputGainTooSmall("input gain below g_min in ideal feedforward");
    return -nl.f(t, x_f) / g;
}

double uub_radius_from(double beta, double mu, double theta) {
    const double disc = std::max(beta * beta - 4.0 * theta * mu, 0.0);
    return (beta + std::sqrt(disc)) / (2.0 * theta);
}

namespace {

// Spectral norm of a matrix via the largest eigenvalue of its Gram matrix.
double spectral_norm(const Mat& m) {
    const std::vector<double> ev = eig_symmetric(m.transpose() * m);
    return std::sqrt(std::max(ev.back(), 0.0));
}

} // namespace

UubTerms uub_terms(const AdaptationConfig& cfg, const LinearCore& core, const NominalGains& gains, double r_bound,
                   double x_hat_bound) {
    const Mat pb = cfg.P * core.b;
    UubTerms out;
    out.beta = spectral_norm(pb) * std::abs(gains.k_r) * r_bound + spectral_norm(pb * gains.k_x) * x_hat_bound;
    out.mu = cfg.d_tilde_max * cfg.d_dot_max / cfg.mu_gamma();
    out.radius = uub_radius_from(out.beta, out.mu, cfg.theta_design);
    return out;
}

} // namespace avfc
