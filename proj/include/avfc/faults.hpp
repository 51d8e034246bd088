#pragma once

#include "avfc/expr.hpp"

#include <vector>

namespace avfc {

struct FaultEvent {
    enum class Kind { LossOfEffectiveness, AdditiveActuator, ExternalDisturbance };

    double at = 0.0;
    Kind kind = Kind::LossOfEffectiveness;
    double theta = 1.0;        // LossOfEffectiveness
    expr::SourceExpr signal;   // AdditiveActuator / ExternalDisturbance, function of t only

    static FaultEvent loss(double at, double theta);
    static FaultEvent additive(double at, std::string_view signal);
    static FaultEvent disturbance(double at, std::string_view signal);

    friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

/// Fault quantities in force at one instant.
struct FaultSample {
    double theta = 1.0;
    double d_f = 0.0;
    double d = 0.0;

    friend bool operator==(const FaultSample&, const FaultSample&) = default;
};

/// Time-ordered fault and disturbance events. An event is active from its
/// time onwards (right-continuous); later loss events override earlier ones.
class FaultSchedule {
public:
    FaultSchedule() = default;
    /// Sorts events by time (stable) and validates them; throws InvalidModel.
    explicit FaultSchedule(std::vector<FaultEvent> events);

    const std::vector<FaultEvent>& events() const noexcept { return events_; }
    bool empty() const noexcept { return events_.empty(); }

    double effective_theta(double t) const { return sample(t, t).theta; }
    double additive_fault(double t) const { return sample(t, t).d_f; }
    double external_disturbance(double t) const { return sample(t, t).d; }

    /// Events with at <= gate are active; their signals are evaluated at t.
    /// The engine gates on the step start so every RK4 stage of a step sees
    /// the same active set.
    FaultSample sample(double t, double gate) const;

    /// Distinct event times in ascending order.
    std::vector<double> event_times() const;

    friend bool operator==(const FaultSchedule&, const FaultSchedule&) = default;

private:
    std::vector<FaultEvent> events_;
};

} // namespace avfc
