#include <cmath>

#include "doctest.h"
#include "qprod/oracle.hpp"
#include "qprod/quadrature.hpp"
#include "test_util.hpp"

using namespace qprod;

namespace {

SearchRegion rect(double x0, double x1, double y0, double y1) {
    SearchRegion r;
    r.corner_a = {x0, y0};
    r.corner_b = {x1, y1};
    return r;
}

} // namespace

TEST_CASE("square-well oracle: canonical well") {
    const auto qs = square_well_bound_oracle(1.0, -8.0, 1.0);
    REQUIRE(qs.size() == 2);
    // bisected to 1e-12; frozen from the transcendental conditions
    CHECK(std::abs(qs[0] - 1.2760900965704678) < 1e-11);
    CHECK(std::abs(qs[1] - 3.4289210733300526) < 1e-11);

    // each rate is a zero of the In-family denominator
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    for (double q : qs) {
        const Amplitudes a = amplitudes(pot, cplx{0.0, q}, Family::right_in());
        const double scale = std::abs(amplitudes(pot, cplx{1e-3, q}, Family::right_in()).D);
        CHECK(std::abs(a.D) < 1e-8 * scale);
    }
}

TEST_CASE("square-well oracle: counts across depths, ceiling bound") {
    const std::vector<std::pair<double, std::size_t>> cases = {
        {-0.8, 1}, {-3.0, 1}, {-8.0, 2}, {-30.0, 3}, {-60.0, 4}};
    for (auto [V, n] : cases) {
        const auto qs = square_well_bound_oracle(1.0, V, 1.0);
        CHECK(qs.size() == n);
        const double bound = std::ceil(std::sqrt(2.0 * std::abs(V)) / M_PI);
        CHECK(static_cast<double>(qs.size()) <= bound + 1e-9);
    }
    // a 1-D well always binds: vanishing depth still yields one state
    CHECK(square_well_bound_oracle(1.0, -0.02, 1.0).size() == 1);
    CHECK_THROWS_AS(square_well_bound_oracle(1.0, 2.0, 1.0), Error);
}

TEST_CASE("numeric oracle: bound-bound pair decays to zero") {
    auto pot = std::make_shared<PotentialSpec>(1.0, std::vector<Segment>{{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(*pot, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95));
    REQUIRE(fr.points.size() == 2);
    const StateRef a = make_discrete_state(pot, fr.points[0]);
    const StateRef b = make_discrete_state(pot, fr.points[1]);
    QuadratureConfig cfg;
    cfg.lambda_sequence = {1e-2, 1e-3, 1e-4, 1e-5};
    const auto sweep = numeric_product(a, b, cfg);
    REQUIRE(sweep.size() == 4);
    CHECK(std::abs(sweep.back().second) < 1e-2 * std::abs(sweep.front().second));
    CHECK(std::abs(sweep.back().second) < 1e-6 * bound_norm(a));
}

TEST_CASE("numeric oracle: resonance self-product blows up") {
    auto pot = std::make_shared<PotentialSpec>(1.0, std::vector<Segment>{{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(*pot, Family::right_in(), rect(3.0, 5.0, -3.5, -1.5));
    REQUIRE(fr.points.size() == 1);
    const StateRef r = make_discrete_state(pot, fr.points[0]);
    QuadratureConfig cfg;
    const double g = 2.0 * std::abs(r.z.imag());
    const double l0 = std::max(5e-2, g * g / 400.0);
    cfg.lambda_sequence = {l0, l0 / 3.16, l0 / 10.0, l0 / 31.6, l0 / 100.0};
    const auto sweep = numeric_product(r, r, cfg);
    REQUIRE(sweep.size() >= 2);
    CHECK(std::abs(sweep.back().second) > 1e3 * std::abs(sweep.front().second));
}

TEST_CASE("numeric oracle: bound norm converges to the closed form") {
    auto pot = std::make_shared<PotentialSpec>(1.0, std::vector<Segment>{{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(*pot, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95));
    const StateRef a = make_discrete_state(pot, fr.points[0]);
    QuadratureConfig cfg;
    cfg.lambda_sequence = {1e-3, 1e-4, 1e-5, 1e-6};
    const auto sweep = numeric_product(a, a, cfg);
    const double norm = bound_norm(a);
    CHECK(std::abs(sweep.back().second - norm) < 1e-6 * norm);
}

TEST_CASE("numeric oracle: guards") {
    auto pot = std::make_shared<PotentialSpec>(1.0, std::vector<Segment>{{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(*pot, Family::right_in(), rect(3.0, 5.0, -3.5, -1.5));
    const StateRef r = make_discrete_state(pot, fr.points[0]);
    QuadratureConfig cfg;
    cfg.lambda_sequence = {1e-6}; // integrand peak overflows immediately
    CHECK_THROWS_AS(numeric_product(r, r, cfg), QuadratureFailure);
    cfg.lambda_sequence = {1e-3, 1e-2};
    CHECK_THROWS_AS(numeric_product(r, r, cfg), Error);
}
