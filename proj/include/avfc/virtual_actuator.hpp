#pragma once

#include "avfc/controller.hpp"
#include "avfc/numerics.hpp"
#include "avfc/plant.hpp"

#include <span>

namespace avfc {

/// Adjustable parameters of the reconfiguration block u_f = M x~ + N u - d_hat.
struct AdaptiveState {
    Vec M;            // 1 x n row
    double N = 1.0;
    double d_hat = 0.0;

    /// Transparent block: M = 0, N = 1, d_hat = 0.
    static AdaptiveState identity(std::size_t n) { return {Vec(n, 0.0), 1.0, 0.0}; }

    /// Layout [M..., N, d_hat], n + 2 entries.
    void pack(std::span<double> out) const;
    static AdaptiveState unpack(std::span<const double> in);

    friend bool operator==(const AdaptiveState&, const AdaptiveState&) = default;
};

/// Which adaptation rate divides the disturbance term of the ultimate bound.
enum class MuRate { Gamma1, Gamma2, Gamma3 };

struct AdaptationConfig {
    double gamma1 = 20.0;   // M law
    double gamma2 = 200.0;  // N law
    double gamma3 = 1000.0; // d_hat law
    Mat P;                  // Lyapunov weight of the update laws
    double theta_design = 0.5;
    double d_tilde_max = 1.0;
    double d_dot_max = 1.0;
    MuRate mu_rate = MuRate::Gamma2;

    double mu_gamma() const;

    /// Throws InvalidModel unless every rate is positive, 0 < theta_design < 1,
    /// bounds are non-negative and P is symmetric positive definite.
    void validate(std::size_t n) const;

    friend bool operator==(const AdaptationConfig&, const AdaptationConfig&) = default;
};

struct AdaptRates {
    Vec M_dot;
    double N_dot = 0.0;
    double d_hat_dot = 0.0;
};

double reconfigure(const AdaptiveState& s, std::span<const double> x_tilde, double u);

/// Update laws driven by s = g(x_f) b^T P x~:
///   M' = -gamma1 s x~^T,  N' = -gamma2 s u,  d_hat' = gamma3 s.
AdaptRates adapt_deriv(const AdaptationConfig& cfg, const LinearCore& core, const NonlinearPair& nl, double t,
                       std::span<const double> x_f, std::span<const double> x_tilde, double u);

/// Input cancelling the drift at x_f: -f(x_f) / g(x_f). Diagnostic only.
double ideal_feedforward(const NonlinearPair& nl, double t, std::span<const double> x_f);

/// Positive root of theta rho^2 - beta rho + mu = 0; falls back to the vertex
/// beta / (2 theta) when the discriminant is negative.
double uub_radius_from(double beta, double mu, double theta);

struct UubTerms {
    double beta = 0.0;
    double mu = 0.0;
    double radius = 0.0;
};

/// beta = ||P b k_r|| r_bound + ||P b k_x|| x_hat_bound, mu = d_tilde_max d_dot_max / gamma_mu.
UubTerms uub_terms(const AdaptationConfig& cfg, const LinearCore& core, const NominalGains& gains, double r_bound,
                   double x_hat_bound);

inline double uub_radius(const AdaptationConfig& cfg, const LinearCore& core, const NominalGains& gains,
                         double r_bound, double x_hat_bound) {
    return uub_terms(cfg, core, gains, r_bound, x_hat_bound).radius;
}

} // namespace avfc
