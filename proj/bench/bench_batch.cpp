// Serial vs OpenMP batch throughput on a gain sweep of the reference scenario.
//
//   bench_batch [scenarios=16] [t_end=10] [jobs=0]

#include "avfc/batch.hpp"
#include "avfc/scenario_io.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    const int count = argc > 1 ? std::atoi(argv[1]) : 16;
    const double t_end = argc > 2 ? std::atof(argv[2]) : 10.0;
    const int jobs = argc > 3 ? std::atoi(argv[3]) : 0;

    std::vector<avfc::Scenario> sweep;
    for (int i = 0; i < count; ++i) {
        avfc::Scenario s = avfc::paper_scenario();
        s.t_end = t_end;
        s.adaptation.gamma3 = 250.0 * (1 + i % 8);
        s.adaptation.gamma2 = 50.0 * (1 + i / 8);
        sweep.push_back(std::move(s));
    }

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const auto serial = avfc::run_batch_serial(sweep);
    auto t1 = clock::now();
    const auto parallel = avfc::run_batch(sweep, jobs);
    auto t2 = clock::now();

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
        identical = serial[i].ok() && parallel[i].ok() && *serial[i].trace == *parallel[i].trace;

    const auto ms = [](auto d) { return std::chrono::duration<double, std::milli>(d).count(); };
    std::cout << "scenarios  " << count << " x " << t_end << " s\n";
    std::cout << "openmp     " << (avfc::parallel_enabled() ? "yes" : "no") << '\n';
    std::cout << "serial     " << ms(t1 - t0) << " ms\n";
    std::cout << "parallel   " << ms(t2 - t1) << " ms\n";
    std::cout << "speedup    " << ms(t1 - t0) / ms(t2 - t1) << "\n";
    std::cout << "identical  " << (identical ? "yes" : "NO") << '\n';
    return identical ? 0 : 1;
}
