#include "avfc/engine.hpp"

#include "avfc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace avfc {

std::string_view to_string(RunMode m) {
    switch (m) {
    case RunMode::NominalOnly: return "nominal_only";
    case RunMode::FaultyNoVa: return "faulty_no_va";
    case RunMode::FaultyWithVa: return "faulty_with_va";
    }
    return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view s) {
    if (s == "nominal_only") return RunMode::NominalOnly;
    if (s == "faulty_no_va") return RunMode::FaultyNoVa;
    if (s == "faulty_with_va") return RunMode::FaultyWithVa;
    return std::nullopt;
}

namespace {

bool is_grid_multiple(double value, double h) {
    const double ratio = value / h;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
}

} // namespace

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(t_end / h)); }

void Scenario::validate() const {
    core.validate();
    const std::size_t dim = n();
    nl.validate(dim);
    ref.validate(dim);
    disturbance_channel.validate(dim);
    adaptation.validate(dim);
    if (P_nominal) {
        if (P_nominal->rows() != dim || P_nominal->cols() != dim) throw InvalidModel("P1 must be n x n");
        symmetrized(*P_nominal);
    }
    try {
        synthesize_gains(core.A, core.b, ref.A_d, ref.B_d);
    } catch (const MatchingConditionViolated& e) {
        throw InvalidModel(e.what());
    }
    if (!r_signal.expr.valid() || r_signal.expr.arity() != 0) throw InvalidModel("r must be a function of t only");
    if (x0_hat.size() != dim || x0_f.size() != dim || x0_d.size() != dim)
        throw InvalidModel("initial states must have dimension n");
    if (!(t_end > 0.0) || !(h > 0.0) || !std::isfinite(t_end)) throw InvalidModel("t_end and h must be positive");
    if (!is_grid_multiple(t_end, h)) throw InvalidModel("t_end must be an integer multiple of h");
    for (const auto& e : schedule.events())
        if (!is_grid_multiple(e.at, h))
            throw InvalidModel("fault event at " + std::to_string(e.at) + " s is not on the integration grid");
    if (!(eps_band > 0.0)) throw InvalidModel("eps_band must be positive");
}

namespace {

struct Layout {
    std::size_t n;
    std::size_t xd() const { return 0; }
    std::size_t xh() const { return n; }
    std::size_t xf() const { return 2 * n; }
    std::size_t ad() const { return 3 * n; }
    std::size_t size() const { return 4 * n + 2; }
};

Vec difference(std::span<const double> a, std::span<const double> b) {
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

class Simulator {
public:
    explicit Simulator(const Scenario& s)
        : s_(s), gains_(synthesize_gains(s.core.A, s.core.b, s.ref.A_d, s.ref.B_d)), lay_{s.n()} {}

    SimTrace run() {
        const std::size_t n = lay_.n;
        const std::size_t steps = s_.steps();
        Vec z(lay_.size());
        std::copy(s_.x0_d.begin(), s_.x0_d.end(), z.begin() + lay_.xd());
        std::copy(s_.x0_hat.begin(), s_.x0_hat.end(), z.begin() + lay_.xh());
        const Vec& xf0 = s_.mode == RunMode::NominalOnly ? s_.x0_hat : s_.x0_f;
        std::copy(xf0.begin(), xf0.end(), z.begin() + lay_.xf());
        AdaptiveState::identity(n).pack(std::span<double>(z).subspan(lay_.ad(), n + 2));

        SimTrace tr;
        tr.n = n;
        tr.l = s_.core.l();
        tr.h = s_.h;
        tr.mode = s_.mode;
        tr.rows.reserve(steps + 1);

        const Derivative deriv = [this](double t, std::span<const double> x) { return derivative(t, x); };
        double t = 0.0;
        try {
            for (std::size_t k = 0;; ++k) {
                t = static_cast<double>(k) * s_.h;
                gate_ = t + 1e-9 * s_.h;
                tr.rows.push_back(record(t, z));
                if (k == steps) break;
                z = rk4_step(deriv, t, z, s_.h);
            }
        } catch (const InputGainTooSmall& e) {
            throw SimulationAbort(t, std::string("feedback-linearization singularity: ") + e.what());
        } catch (const DomainError& e) {
            throw SimulationAbort(t, std::string("expression domain error: ") + e.what());
        } catch (const NonFiniteDerivative& e) {
            throw SimulationAbort(t, std::string("divergence: ") + e.what());
        }
        return tr;
    }

private:
    struct Signals {
        double r = 0.0;
        double u = 0.0;
        double u_f = 0.0;
        FaultSample faults;
    };

    Signals signals(double t, std::span<const double> z) const {
        const std::size_t n = lay_.n;
        const auto xh = z.subspan(lay_.xh(), n);
        Signals sig;
        sig.r = s_.r_signal(t, {});
        sig.u = nominal_control(gains_, s_.nl, t, xh, sig.r);
        sig.u_f = sig.u;
        if (s_.mode == RunMode::NominalOnly) return sig;
        sig.faults = s_.schedule.sample(t, gate_);
        if (s_.mode == RunMode::FaultyWithVa) {
            const auto xf = z.subspan(lay_.xf(), n);
            const AdaptiveState ad = AdaptiveState::unpack(z.subspan(lay_.ad(), n + 2));
            sig.u_f = reconfigure(ad, difference(xf, xh), sig.u);
        }
        return sig;
    }

    Vec derivative(double t, std::span<const double> z) const {
        const std::size_t n = lay_.n;
        const auto xd = z.subspan(lay_.xd(), n);
        const auto xh = z.subspan(lay_.xh(), n);
        const auto xf = z.subspan(lay_.xf(), n);
        const Signals sig = signals(t, z);

        Vec dz(lay_.size(), 0.0);
        const Vec dxd = reference_deriv(s_.ref, xd, sig.r);
        const Vec dxh = nominal_deriv(s_.core, s_.nl, t, xh, sig.u);
        std::copy(dxd.begin(), dxd.end(), dz.begin() + lay_.xd());
        std::copy(dxh.begin(), dxh.end(), dz.begin() + lay_.xh());

        if (s_.mode == RunMode::NominalOnly) {
            std::copy(dxh.begin(), dxh.end(), dz.begin() + lay_.xf());
            return dz;
        }
        const Vec dxf = faulty_deriv(s_.core, s_.nl, t, xf, sig.u_f, sig.faults.theta, sig.faults.d_f,
                                     sig.faults.d, s_.disturbance_channel);
        std::copy(dxf.begin(), dxf.end(), dz.begin() + lay_.xf());

        if (s_.mode == RunMode::FaultyWithVa) {
            const AdaptRates rates = adapt_deriv(s_.adaptation, s_.core, s_.nl, t, xf, difference(xf, xh), sig.u);
            std::copy(rates.M_dot.begin(), rates.M_dot.end(), dz.begin() + lay_.ad());
            dz[lay_.ad() + n] = rates.N_dot;
            dz[lay_.ad() + n + 1] = rates.d_hat_dot;
        }
        return dz;
    }

    TraceRow record(double t, std::span<const double> z) const {
        const std::size_t n = lay_.n;
        for (double v : z)
            if (!std::isfinite(v)) throw NonFiniteDerivative("state became non-finite");
        const Signals sig = signals(t, z);
        TraceRow row;
        row.t = t;
        row.x_d.assign(z.begin() + lay_.xd(), z.begin() + lay_.xd() + n);
        row.x_hat.assign(z.begin() + lay_.xh(), z.begin() + lay_.xh() + n);
        row.x_f.assign(z.begin() + lay_.xf(), z.begin() + lay_.xf() + n);
        row.u = sig.u;
        row.u_f = sig.u_f;
        row.adaptive = AdaptiveState::unpack(z.subspan(lay_.ad(), n + 2));
        row.e = difference(row.x_hat, row.x_d);
        row.x_tilde = difference(row.x_f, row.x_hat);
        row.y_d = output(s_.core, row.x_d);
        row.y_hat = output(s_.core, row.x_hat);
        row.y_f = output(s_.core, row.x_f);
        row.r = sig.r;
        row.faults = sig.faults;
        return row;
    }

    const Scenario& s_;
    NominalGains gains_;
    Layout lay_;
    double gate_ = 0.0;
};

double output_error(const TraceRow& row) { return norm2(difference(row.y_f, row.y_d)); }

} // namespace

SimTrace run(const Scenario& s) { return Simulator(s).run(); }

double rms_output_error(const SimTrace& tr, double t0, double t1) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : tr.rows) {
        if (row.t < t0 || row.t > t1) continue;
        const double err = output_error(row);
        sum += err * err;
        ++count;
    }
    return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

double sup_output_error(const SimTrace& tr, double t0, double t1) {
    double sup = 0.0;
    for (const auto& row : tr.rows)
        if (row.t >= t0 && row.t <= t1) sup = std::max(sup, output_error(row));
    return sup;
}

Metrics compute_metrics(const SimTrace& tr, const Scenario& s, double eps_band) {
    Metrics m;
    if (tr.rows.empty()) return m;
    const double t_end = tr.rows.back().t;
    const double tail_start = 0.8 * t_end - 1e-9 * tr.h;

    for (const auto& row : tr.rows) {
        m.r_bound = std::max(m.r_bound, std::abs(row.r));
        m.x_hat_bound = std::max(m.x_hat_bound, norm2(row.x_hat));
        if (row.t >= tail_start) {
            m.sup_e_tail = std::max(m.sup_e_tail, norm2(row.e));
            m.sup_xtilde_tail = std::max(m.sup_xtilde_tail, norm2(row.x_tilde));
        }
    }

    std::vector<double> times;
    for (double at : s.schedule.event_times())
        if (at <= t_end) times.push_back(at);
    const double snap = 1e-9 * tr.h;
    for (std::size_t i = 0; i < times.size(); ++i) {
        EventOutcome ev;
        ev.at = times[i];
        ev.window_end = i + 1 < times.size() ? times[i + 1] : t_end;
        const bool last = i + 1 == times.size();

        // Index of the first sample at which the error enters the band for good.
        std::optional<double> entered;
        bool any_sample = false;
        for (const auto& row : tr.rows) {
            if (row.t < ev.at - snap) continue;
            if (last ? row.t > ev.window_end + snap : row.t >= ev.window_end - snap) break;
            any_sample = true;
            const double err = output_error(row);
            ev.peak_error = std::max(ev.peak_error, err);
            if (err <= eps_band) {
                if (!entered) entered = row.t;
            } else {
                entered.reset();
            }
        }
        ev.recovered = any_sample && entered.has_value();
        ev.recovery_time = ev.recovered ? std::max(0.0, *entered - ev.at) : 0.0;
        m.events.push_back(ev);
    }

    const NominalGains gains = synthesize_gains(s.core.A, s.core.b, s.ref.A_d, s.ref.B_d);
    m.uub = uub_terms(s.adaptation, s.core, gains, m.r_bound, m.x_hat_bound);
    m.uub_satisfied = m.sup_xtilde_tail <= m.uub.radius;
    return m;
}

} // namespace avfc
