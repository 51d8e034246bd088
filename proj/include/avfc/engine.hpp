#pragma once

#include "avfc/controller.hpp"
#include "avfc/expr.hpp"
#include "avfc/faults.hpp"
#include "avfc/numerics.hpp"
#include "avfc/plant.hpp"
#include "avfc/virtual_actuator.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace avfc {

enum class RunMode { NominalOnly, FaultyNoVa, FaultyWithVa };

std::string_view to_string(RunMode m);
std::optional<RunMode> parse_run_mode(std::string_view s);

/// One complete experiment. Scenario values are immutable once validated and
/// can be shared between concurrent runs.
struct Scenario {
    LinearCore core;
    NonlinearPair nl;
    ReferenceModel ref;
    DisturbanceChannel disturbance_channel;
    AdaptationConfig adaptation;
    bool p_auto = false;            // adaptation.P came from solve_lyapunov(A, I)
    std::optional<Mat> P_nominal;   // optional weight for the nominal-loop certificate
    FaultSchedule schedule;
    expr::SourceExpr r_signal;
    Vec x0_hat, x0_f, x0_d;
    double t_end = 40.0;
    double h = 1e-3;
    RunMode mode = RunMode::FaultyWithVa;
    double eps_band = 0.05;

    std::size_t n() const noexcept { return core.n(); }
    std::size_t steps() const;

    /// Throws InvalidModel describing the first violated invariant.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct TraceRow {
    double t = 0.0;
    Vec x_d, x_hat, x_f;
    double u = 0.0;
    double u_f = 0.0;
    AdaptiveState adaptive;
    Vec e;       // x_hat - x_d
    Vec x_tilde; // x_f - x_hat
    Vec y_d, y_hat, y_f;
    double r = 0.0;
    FaultSample faults;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SimTrace {
    std::size_t n = 0;
    std::size_t l = 0;
    double h = 0.0;
    RunMode mode = RunMode::FaultyWithVa;
    std::vector<TraceRow> rows;

    friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// Integrates the augmented state [x_d; x_hat; x_f; M; N; d_hat] with fixed-step
/// RK4. Throws SimulationAbort on an input-gain singularity, a domain error or
/// divergence.
SimTrace run(const Scenario& s);

struct EventOutcome {
    double at = 0.0;
    double window_end = 0.0;
    bool recovered = false;
    double recovery_time = 0.0; // seconds after `at`; meaningful when recovered
    double peak_error = 0.0;    // max ||y_f - y_d|| over the window
};

struct Metrics {
    double sup_e_tail = 0.0;      // last 20 % of the run
    double sup_xtilde_tail = 0.0;
    std::vector<EventOutcome> events;
    double r_bound = 0.0;
    double x_hat_bound = 0.0;
    UubTerms uub;
    bool uub_satisfied = false;
};

/// Per-event recovery uses windows [event, next event); an event recovers at
/// the first sample after which ||y_f - y_d|| stays within `eps_band` until the
/// window closes.
Metrics compute_metrics(const SimTrace& tr, const Scenario& s, double eps_band);

/// Root-mean-square of ||y_f - y_d|| over samples with t0 <= t <= t1.
double rms_output_error(const SimTrace& tr, double t0, double t1);

/// Maximum of ||y_f - y_d|| over samples with t0 <= t <= t1.
double sup_output_error(const SimTrace& tr, double t0, double t1);

} // namespace avfc
