#include "avfc/batch.hpp"

#include "avfc/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace avfc {

namespace {

RunOutcome run_one(const Scenario& s) {
    RunOutcome out;
    try {
        out.trace = run(s);
        out.metrics = compute_metrics(*out.trace, s, s.eps_band);
    } catch (const SimulationAbort& e) {
        out.trace.reset();
        out.error = e.what();
        out.abort_time = e.time();
    } catch (const std::exception& e) {
        out.trace.reset();
        out.error = e.what();
    }
    return out;
}

} // namespace

std::vector<RunOutcome> run_batch_serial(std::span<const Scenario> scenarios) {
    std::vector<RunOutcome> out;
    out.reserve(scenarios.size());
    for (const auto& s : scenarios) out.push_back(run_one(s));
    return out;
}

std::vector<RunOutcome> run_batch(std::span<const Scenario> scenarios, int jobs) {
    std::vector<RunOutcome> out(scenarios.size());
    const auto count = static_cast<long>(scenarios.size());
#ifdef _OPENMP
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = run_one(scenarios[static_cast<std::size_t>(i)]);
#else
    (void)jobs;
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = run_one(scenarios[static_cast<std::size_t>(i)]);
#endif
    return out;
}

bool parallel_enabled() noexcept {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace avfc
