#pragma once

#include "avfc/engine.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace avfc {

struct RunOutcome {
    std::optional<SimTrace> trace;
    std::optional<Metrics> metrics;
    std::string error;        // empty on success
    double abort_time = 0.0;  // valid when the run was aborted

    bool ok() const noexcept { return trace.has_value(); }
};

/// Runs each scenario and its metrics in order on the calling thread.
std::vector<RunOutcome> run_batch_serial(std::span<const Scenario> scenarios);

/// Same results as run_batch_serial, with scenarios distributed over `jobs`
/// OpenMP threads (jobs <= 0 uses the OpenMP default). Outcome i always
/// belongs to scenario i.
std::vector<RunOutcome> run_batch(std::span<const Scenario> scenarios, int jobs);

/// True when the library was compiled with OpenMP.
bool parallel_enabled() noexcept;

} // namespace avfc
