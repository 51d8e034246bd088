#include "avfc/error.hpp"
#include "avfc/plant.hpp"

#include <doctest.h>

#include <random>

using namespace avfc;

namespace {

LinearCore core37() {
    return {Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -3}}, Mat{{0}, {0}, {1}}, Mat{{1, 1, 1}}};
}
ReferenceModel ref38() { return {Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -4}}, Mat{{0}, {0}, {1}}}; }
NonlinearPair nl_paper() {
    return {expr::SourceExpr::from("0.05*sin(x3)", 3), expr::SourceExpr::from("0.5*sin(t)+4", 3)};
}

} // namespace

TEST_CASE("reference_deriv") {
    const auto m = ref38();
    CHECK(reference_deriv(m, Vec{0, 0, 0}, 0.0) == Vec{0, 0, 0});
    CHECK(reference_deriv(m, Vec{0, 0, 0}, 1.0) == Vec{0, 0, 1});
    CHECK(reference_deriv(m, Vec{1, 0, 0}, 0.0) == Vec{0, 0, -1});
}

TEST_CASE("nominal_deriv") {
    const auto core = core37();
    const auto nl = nl_paper();
    CHECK(nominal_deriv(core, nl, 0.0, Vec{0, 0, 0}, 0.0) == Vec{0, 0, 0});
    CHECK(nominal_deriv(core, nl, 0.0, Vec{0, 0, 0}, 1.0) == Vec{0, 0, 4});
    const NonlinearPair zero{expr::SourceExpr::from("0", 3), expr::SourceExpr::from("1", 3)};
    CHECK(nominal_deriv(core, zero, 2.0, Vec{0, 0, 0}, 0.0) == Vec{0, 0, 0});
}

TEST_CASE("faulty_deriv examples") {
    const auto core = core37();
    const auto nl = nl_paper();
    const auto none = DisturbanceChannel::matched(0.5);
    const Vec a = faulty_deriv(core, nl, 0.0, Vec{0, 0, 0}, 0.0, 0.65, 1.0, 0.0, none);
    CHECK(a[0] == 0.0);
    CHECK(a[1] == 0.0);
    CHECK(a[2] == doctest::Approx(2.6).epsilon(1e-15));
    CHECK(faulty_deriv(core, nl, 0.0, Vec{0, 0, 0}, 0.0, 1.0, 0.0, 1.0, none) == Vec{0, 0, 2.0});

    const auto constant = DisturbanceChannel::constant(Mat{{1}, {0}, {-1}});
    CHECK(faulty_deriv(core, nl, 0.0, Vec{0, 0, 0}, 0.0, 1.0, 0.0, 2.0, constant) == Vec{2, 0, -2});
}

TEST_CASE("healthy faulty plant reduces exactly to the nominal plant") {
    const auto core = core37();
    const auto nl = nl_paper();
    const auto ch = DisturbanceChannel::matched(0.5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        const Vec x{u(rng), u(rng), u(rng)};
        const double t = 8.0 + u(rng), v = u(rng);
        CHECK(faulty_deriv(core, nl, t, x, v, 1.0, 0.0, 0.0, ch) == nominal_deriv(core, nl, t, x, v));
    }
}

TEST_CASE("faulty_deriv is affine in the disturbance") {
    const auto core = core37();
    const auto nl = nl_paper();
    for (const auto& ch : {DisturbanceChannel::matched(0.5), DisturbanceChannel::constant(Mat{{0.3}, {-1}, {2}})}) {
        const Vec x{0.4, -0.2, 1.1};
        const Vec d0 = faulty_deriv(core, nl, 3.0, x, 0.7, 0.65, 0.1, 0.0, ch);
        const Vec d1 = faulty_deriv(core, nl, 3.0, x, 0.7, 0.65, 0.1, 1.0, ch);
        const Vec d2 = faulty_deriv(core, nl, 3.0, x, 0.7, 0.65, 0.1, 2.0, ch);
        for (int i = 0; i < 3; ++i) CHECK((d2[i] - d0[i]) == doctest::Approx(2.0 * (d1[i] - d0[i])).epsilon(1e-12));
    }
}

TEST_CASE("output") {
    const auto core = core37();
    CHECK(output(core, Vec{1, 2, 3}) == Vec{6});
    CHECK(output(core, Vec{0, 0, 0}) == Vec{0});
    const LinearCore id{core.A, core.b, Mat::identity(3)};
    CHECK(output(id, Vec{1.5, -2, 7}) == Vec{1.5, -2, 7});
}

TEST_CASE("controllability and model validation") {
    CHECK(is_controllable(core37().A, core37().b));
    // b lives in the invariant subspace of the first block.
    const Mat block{{-1, 1, 0}, {0, -1, 0}, {0, 0, -2}};
    CHECK_FALSE(is_controllable(block, Mat{{0}, {1}, {0}}));
    CHECK_THROWS_AS((LinearCore{block, Mat{{0}, {1}, {0}}, Mat{{1, 0, 0}}}.validate()), InvalidModel);
    CHECK_THROWS_AS((LinearCore{core37().A, Mat{{0}, {1}}, Mat{{1, 1, 1}}}.validate()), InvalidModel);
    CHECK_NOTHROW(core37().validate());

    CHECK_NOTHROW(ref38().validate(3));
    const ReferenceModel unstable{Mat{{0, 1, 0}, {0, 0, 1}, {1, 2, 3}}, Mat{{0}, {0}, {1}}};
    CHECK_THROWS_AS(unstable.validate(3), InvalidModel);

    CHECK_NOTHROW(nl_paper().validate(3));
    const NonlinearPair vanishing{expr::SourceExpr::from("0", 3), expr::SourceExpr::from("sin(t)", 3)};
    CHECK_THROWS_AS(vanishing.validate(3), InvalidModel);
}
