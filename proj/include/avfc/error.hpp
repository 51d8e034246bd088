#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avfc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// numerics
class NonFiniteDerivative : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };
class NotSymmetric : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class ZeroColumn : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

// expression evaluation
class DomainError : public Error { public: using Error::Error; };

// control synthesis / evaluation
class MatchingConditionViolated : public Error { public: using Error::Error; };
class InputGainTooSmall : public Error { public: using Error::Error; };

/// Invalid model data (uncontrollable pair, non-Hurwitz reference, bad gains...).
class InvalidModel : public Error { public: using Error::Error; };

/// Simulation stopped early; carries the simulation time of the failure.
class SimulationAbort : public Error {
public:
    SimulationAbort(double time, const std::string& what)
        : Error(what + " (t = " + std::to_string(time) + " s)"), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace avfc
