#include "avfc/batch.hpp"
#include "avfc/scenario_io.hpp"

#include <doctest.h>

using namespace avfc;

TEST_CASE("parallel batch reproduces the serial reference") {
    std::vector<Scenario> sweep;
    for (int i = 0; i < 6; ++i) {
        Scenario s = paper_scenario();
        s.t_end = 3.0;
        s.adaptation.gamma3 = 200.0 * (i + 1);
        sweep.push_back(s);
    }
    // One scenario that aborts, to check error slots stay aligned.
    Scenario bad = paper_scenario();
    bad.t_end = 2.0;
    bad.nl.g = expr::SourceExpr::from("1-t", 3);
    sweep.insert(sweep.begin() + 2, bad);

    const auto serial = run_batch_serial(sweep);
    for (int jobs : {1, 2, 4, 0}) {
        const auto parallel = run_batch(sweep, jobs);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CAPTURE(i);
            CHECK(parallel[i].ok() == serial[i].ok());
            CHECK(parallel[i].error == serial[i].error);
            if (serial[i].ok()) {
                CHECK(*parallel[i].trace == *serial[i].trace);
                CHECK(parallel[i].metrics->sup_xtilde_tail == serial[i].metrics->sup_xtilde_tail);
            }
        }
    }
    CHECK_FALSE(serial[2].ok());
    CHECK(serial[2].abort_time > 0.99);
    CHECK(serial[2].abort_time <= 1.0);
}

TEST_CASE("empty batch") {
    CHECK(run_batch({}, 4).empty());
    CHECK(run_batch_serial({}).empty());
}
