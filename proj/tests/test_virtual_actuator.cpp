#include "avfc/controller.hpp"
#include "avfc/error.hpp"
#include "avfc/virtual_actuator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace avfc;

namespace {

const Mat kP2{{2.8, 2.6, 0.5}, {2.6, 7.1, 1.8}, {0.5, 1.8, 1.1}};

LinearCore core37() {
    return {Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -3}}, Mat{{0}, {0}, {1}}, Mat{{1, 1, 1}}};
}
NonlinearPair nl_paper() {
    return {expr::SourceExpr::from("0.05*sin(x3)", 3), expr::SourceExpr::from("0.5*sin(t)+4", 3)};
}
AdaptationConfig cfg_paper() {
    AdaptationConfig c;
    c.P = kP2;
    return c;
}

} // namespace

TEST_CASE("reconfigure examples") {
    CHECK(reconfigure(AdaptiveState::identity(3), Vec{1, -2, 3}, 0.37) == 0.37);
    CHECK(reconfigure({Vec{1, 0, 0}, 0.0, 0.0}, Vec{2, 5, 7}, 9.0) == 2.0);
    CHECK(reconfigure({Vec{0, 0, -1}, 0.5, 0.1}, Vec{0, 0, 2}, 4.0) == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("reconfigure is affine in (x~, u)") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const AdaptiveState s{Vec{u(rng), u(rng), u(rng)}, u(rng), u(rng)};
        const Vec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const double ua = u(rng), ub = u(rng), w = u(rng);
        Vec mix(3);
        for (int i = 0; i < 3; ++i) mix[i] = w * a[i] + (1 - w) * b[i];
        const double lhs = reconfigure(s, mix, w * ua + (1 - w) * ub);
        const double rhs = w * reconfigure(s, a, ua) + (1 - w) * reconfigure(s, b, ub);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("adapt_deriv examples") {
    const auto core = core37();
    const auto nl = nl_paper();
    auto cfg = cfg_paper();
    const AdaptRates r = adapt_deriv(cfg, core, nl, 0.0, Vec{0, 0, 0}, Vec{0, 0, 1}, 1.0);
    CHECK(r.M_dot[0] == 0.0);
    CHECK(r.M_dot[1] == 0.0);
    CHECK(r.M_dot[2] == doctest::Approx(-88.0).epsilon(1e-14));
    CHECK(r.N_dot == doctest::Approx(-880.0).epsilon(1e-14));
    CHECK(r.d_hat_dot == doctest::Approx(4400.0).epsilon(1e-14));

    const AdaptRates z = adapt_deriv(cfg, core, nl, 3.0, Vec{1, 2, 3}, Vec{0, 0, 0}, 5.0);
    CHECK(z.M_dot == Vec{0, 0, 0});
    CHECK(z.N_dot == 0.0);
    CHECK(z.d_hat_dot == 0.0);

    cfg.gamma3 = 0.0;
    CHECK(adapt_deriv(cfg, core, nl, 1.0, Vec{1, 2, 3}, Vec{0.3, 0.1, -2}, 5.0).d_hat_dot == 0.0);
}

TEST_CASE("ideal_feedforward") {
    const auto nl = nl_paper();
    CHECK(ideal_feedforward(nl, 0.0, Vec{0, 0, 0}) == 0.0);
    CHECK(ideal_feedforward(nl, 0.0, Vec{0, 0, std::numbers::pi / 2}) == doctest::Approx(-0.0125).epsilon(1e-15));
    const NonlinearPair weak{expr::SourceExpr::from("1", 3), expr::SourceExpr::from("0", 3)};
    CHECK_THROWS_AS(ideal_feedforward(weak, 0.0, Vec{0, 0, 0}), InputGainTooSmall);
}

TEST_CASE("uub_radius_from examples") {
    CHECK(uub_radius_from(1.0, 0.0, 0.5) == 2.0);
    CHECK(uub_radius_from(0.0, 0.0, 0.5) == 0.0);
    CHECK(uub_radius_from(2.0, 1.0, 0.5) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
    // Negative discriminant falls back to the vertex beta / (2 theta).
    CHECK(uub_radius_from(1.0, 10.0, 0.5) == 1.0);
}

TEST_CASE("uub_terms on the reference design") {
    const auto core = core37();
    const auto cfg = cfg_paper();
    const NominalGains g = synthesize_gains(core.A, core.b, Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -4}}, core.b);
    const UubTerms u = uub_terms(cfg, core, g, 1.0, 2.0);
    // ||P b|| is the norm of P's last column; ||P b k_x|| equals it because |k_x| = 1.
    const double pb = std::sqrt(0.5 * 0.5 + 1.8 * 1.8 + 1.1 * 1.1);
    CHECK(u.beta == doctest::Approx(pb * 1.0 + pb * 2.0).epsilon(1e-12));
    CHECK(u.mu == doctest::Approx(1.0 / 200.0).epsilon(1e-15));
    CHECK(u.radius == doctest::Approx(uub_radius_from(u.beta, u.mu, 0.5)).epsilon(1e-15));
    CHECK(std::isfinite(u.radius));
    CHECK(u.radius > 0.0);
}

TEST_CASE("config validation and state packing") {
    auto cfg = cfg_paper();
    CHECK_NOTHROW(cfg.validate(3));
    CHECK(cfg.mu_gamma() == 200.0);
    cfg.mu_rate = MuRate::Gamma3;
    CHECK(cfg.mu_gamma() == 1000.0);
    auto bad = cfg_paper();
    bad.theta_design = 1.0;
    CHECK_THROWS_AS(bad.validate(3), InvalidModel);
    bad = cfg_paper();
    bad.gamma1 = -1.0;
    CHECK_THROWS_AS(bad.validate(3), InvalidModel);
    bad = cfg_paper();
    bad.P = Mat{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
    CHECK_THROWS_AS(bad.validate(3), InvalidModel);

    const AdaptiveState s{Vec{1, 2, 3}, 4, 5};
    Vec packed(5);
    s.pack(packed);
    CHECK(packed == Vec{1, 2, 3, 4, 5});
    CHECK(AdaptiveState::unpack(packed) == s);
}

// Synthetic closed loop with f = 0, g = g0 and a known effectiveness theta, so
// the ideal parameters are M* = 0, N* = 1/theta, d* = 0. With the rates as
// implemented, V = x~'Px~/2 + theta (|M~|^2/g1 + N~^2/g2 + d~^2/g3)/2 must obey
// dV/dt = -x~'Qx~/2 where Q = -(A'P + PA).
TEST_CASE("Lyapunov derivative along the adaptive loop") {
    const auto core = core37();
    const NonlinearPair nl{expr::SourceExpr::from("0", 3), expr::SourceExpr::from("4", 3)};
    const auto cfg = cfg_paper();
    const Mat ad{{0, 1, 0}, {0, 0, 1}, {-1, -2, -4}};
    const NominalGains gains = synthesize_gains(core.A, core.b, ad, core.b);
    const double theta = 0.65, n_star = 1.0 / theta;
    const Mat q = -1.0 * (core.A.transpose() * cfg.P + cfg.P * core.A);
    const auto ch = DisturbanceChannel::constant(Mat{{0}, {0}, {0}});

    // z = [x_hat; x_f; M; N; d_hat]
    const Derivative deriv = [&](double t, std::span<const double> z) {
        const std::span<const double> xh = z.subspan(0, 3), xf = z.subspan(3, 3);
        const AdaptiveState s = AdaptiveState::unpack(z.subspan(6, 5));
        Vec xt(3);
        for (int i = 0; i < 3; ++i) xt[i] = xf[i] - xh[i];
        const double r = std::sin(0.7 * t) + 1.0;
        const double u = nominal_control(gains, nl, t, xh, r);
        const double uf = reconfigure(s, xt, u);
        const Vec dxh = nominal_deriv(core, nl, t, xh, u);
        const Vec dxf = faulty_deriv(core, nl, t, xf, uf, theta, 0.0, 0.0, ch);
        const AdaptRates rates = adapt_deriv(cfg, core, nl, t, xf, xt, u);
        Vec dz(11);
        for (int i = 0; i < 3; ++i) {
            dz[i] = dxh[i];
            dz[3 + i] = dxf[i];
            dz[6 + i] = rates.M_dot[i];
        }
        dz[9] = rates.N_dot;
        dz[10] = rates.d_hat_dot;
        return dz;
    };
    const auto lyap = [&](std::span<const double> z) {
        Vec xt(3);
        for (int i = 0; i < 3; ++i) xt[i] = z[3 + i] - z[i];
        const Vec pxt = cfg.P * xt;
        const double m2 = z[6] * z[6] + z[7] * z[7] + z[8] * z[8];
        const double dn = n_star - z[9];
        return 0.5 * dot(xt, pxt) +
               0.5 * theta * (m2 / cfg.gamma1 + dn * dn / cfg.gamma2 + z[10] * z[10] / cfg.gamma3);
    };
    const auto rhs = [&](std::span<const double> z) {
        Vec xt(3);
        for (int i = 0; i < 3; ++i) xt[i] = z[3 + i] - z[i];
        return -0.5 * dot(xt, q * xt);
    };

    const double h = 1e-4;
    Vec z{0, 0, 0, 0.2, -0.1, 0.05, 0, 0, 0, 1, 0};
    std::vector<Vec> traj{z};
    for (int k = 0; k < 20000; ++k) {
        z = rk4_step(deriv, k * h, z, h);
        traj.push_back(z);
    }
    double worst = 0.0;
    int checked = 0;
    for (std::size_t k = 1; k + 1 < traj.size(); k += 97) {
        const double fd = (lyap(traj[k + 1]) - lyap(traj[k - 1])) / (2 * h);
        const double ref = rhs(traj[k]);
        if (std::fabs(ref) < 1e-8) continue;
        worst = std::max(worst, std::fabs(fd - ref) / std::fabs(ref));
        ++checked;
    }
    CHECK(checked > 100);
    CHECK(worst <= 1e-3);
}
