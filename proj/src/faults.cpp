#include "avfc/faults.hpp"

#include "avfc/error.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace avfc {

FaultEvent FaultEvent::loss(double at, double theta) {
    FaultEvent e;
    e.at = at;
    e.kind = Kind::LossOfEffectiveness;
    e.theta = theta;
    return e;
}

FaultEvent FaultEvent::additive(double at, std::string_view signal) {
    FaultEvent e;
    e.at = at;
    e.kind = Kind::AdditiveActuator;
    e.signal = expr::SourceExpr::from(signal, 0);
    return e;
}

FaultEvent FaultEvent::disturbance(double at, std::string_view signal) {
    FaultEvent e;
    e.at = at;
    e.kind = Kind::ExternalDisturbance;
    e.signal = expr::SourceExpr::from(signal, 0);
    return e;
}

FaultSchedule::FaultSchedule(std::vector<FaultEvent> events) : events_(std::move(events)) {
    for (const auto& e : events_) {
        if (!(e.at >= 0.0) || !std::isfinite(e.at)) throw InvalidModel("fault event time must be finite and >= 0");
        if (e.kind == FaultEvent::Kind::LossOfEffectiveness) {
            if (!(e.theta > 0.0 && e.theta <= 1.0)) throw InvalidModel("loss-of-effectiveness theta must lie in (0, 1]");
        } else if (!e.signal.expr.valid() || e.signal.expr.arity() != 0) {
            throw InvalidModel("fault signal must be a function of t only");
        }
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const FaultEvent& a, const FaultEvent& b) { return a.at < b.at; });
}

FaultSample FaultSchedule::sample(double t, double gate) const {
    FaultSample s;
    const std::span<const double> none;
    for (const auto& e : events_) {
        if (e.at > gate) break;
        switch (e.kind) {
        case FaultEvent::Kind::LossOfEffectiveness: s.theta = e.theta; break;
        case FaultEvent::Kind::AdditiveActuator: s.d_f += e.signal(t, none); break;
        case FaultEvent::Kind::ExternalDisturbance: s.d += e.signal(t, none); break;
        }
    }
    return s;
}

std::vector<double> FaultSchedule::event_times() const {
    std::vector<double> times;
    for (const auto& e : events_)
        if (times.empty() || times.back() != e.at) times.push_back(e.at);
    return times;
}

} // namespace avfc
