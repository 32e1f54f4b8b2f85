#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qprod/oracle.hpp"
#include "qprod/spectrum.hpp"
#include "test_util.hpp"

using namespace qprod;

namespace {

SearchRegion rect(double x0, double x1, double y0, double y1) {
    SearchRegion r;
    r.corner_a = {x0, y0};
    r.corner_b = {x1, y1};
    return r;
}

std::vector<SpectralPoint> of_kind(const FindResult& fr, SpectralKind k) {
    std::vector<SpectralPoint> out;
    for (const auto& p : fr.points)
        if (p.kind == k) out.push_back(p);
    return out;
}

} // namespace

TEST_CASE("free potential: no zeros away from the origin") {
    PotentialSpec pot(1.0, {{1.0, 0.0}});
    CHECK(count_zeros(pot, Family::right_in(), rect(0.5, 8.0, -4.0, 4.0)) == 0);
    CHECK(count_zeros(pot, Family::right_in(), rect(-9.0, -0.5, -3.0, 3.0)) == 0);
    const FindResult fr = find_spectrum(pot, Family::right_in(), rect(0.3, 10.0, -5.0, 5.0));
    CHECK(fr.points.empty());
}

TEST_CASE("bound momenta sit on the upper imaginary axis of the In denominator") {
    // The square-well bound rates solve the textbook matching conditions and
    // are zeros of the first closed-form denominator line (the In family);
    // the Out family carries their mirror images below the axis.
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    const auto oracle = square_well_bound_oracle(1.0, -8.0, 1.0);
    REQUIRE(oracle.size() == 2);

    const FindResult fr = find_spectrum(pot, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95));
    const auto bound = of_kind(fr, SpectralKind::Bound);
    REQUIRE(bound.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(std::abs(bound[i].z.imag() - oracle[i]) < 1e-8);
        CHECK(std::abs(bound[i].z.real()) < 1e-10);
        CHECK(bound[i].residual < 1e-10);
    }

    // count matches the oracle through the argument principle as well
    CHECK(count_zeros(pot, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95)) == 2);

    // mirror statement for the Out family
    const FindResult frm =
        find_spectrum(pot, Family::right_out(), rect(-0.4, 0.4, -3.95, -0.05));
    REQUIRE(frm.points.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(std::abs(frm.points[i].z.imag() + oracle[oracle.size() - 1 - i]) < 1e-8);
}

TEST_CASE("In-family zeros in the open lower half plane: resonances") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(pot, Family::right_in(), rect(-10.0, 10.0, -6.0, -1e-3));
    REQUIRE(fr.points.size() >= 4);
    for (const auto& p : fr.points) {
        CHECK(p.z.imag() < 0.0);
        CHECK(p.residual < 1e-10);
    }
    // mirror pairing z -> -conj(z) within the family
    for (const auto& p : fr.points) {
        const cplx mirror = -std::conj(p.z);
        bool found = false;
        for (const auto& q : fr.points)
            if (std::abs(q.z - mirror) < 1e-8 * (1.0 + std::abs(mirror))) found = true;
        CHECK(found);
    }
    // count equals the list length on the same region
    CHECK(count_zeros(pot, Family::right_in(), rect(-10.0, 10.0, -6.0, -1e-3)) ==
          static_cast<int>(fr.points.size()));
    // regions mirrored about the imaginary axis hold equal counts
    CHECK(count_zeros(pot, Family::right_in(), rect(2.0, 9.0, -5.0, -0.5)) ==
          count_zeros(pot, Family::right_in(), rect(-9.0, -2.0, -5.0, -0.5)));
}

TEST_CASE("Out-family zero set is the conjugate of the In-family set") {
    PotentialSpec pot = testutil::load_fixture("table_fixture.json");
    const FindResult in_fr =
        find_spectrum(pot, Family::right_in(), rect(0.5, 9.0, -3.0, -1e-3));
    const FindResult out_fr =
        find_spectrum(pot, Family::right_out(), rect(0.5, 9.0, 1e-3, 3.0));
    REQUIRE(in_fr.points.size() >= 2);
    REQUIRE(in_fr.points.size() == out_fr.points.size());
    for (const auto& p : in_fr.points) {
        bool found = false;
        for (const auto& q : out_fr.points)
            if (std::abs(q.z - std::conj(p.z)) < 1e-8 * (1.0 + std::abs(p.z))) found = true;
        CHECK(found);
    }
}

TEST_CASE("barrier-dominant resonances stay inside the octants") {
    PotentialSpec pot = testutil::load_fixture("table_fixture.json");
    const FindResult fr =
        find_spectrum(pot, Family::right_in(), rect(0.5, 11.0, -3.0, -1e-3));
    REQUIRE(!fr.points.empty());
    for (const auto& p : fr.points)
        CHECK(std::abs(p.z.real()) > std::abs(p.z.imag()));
}

TEST_CASE("pole-location identity for resonances (alpha != 0)") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    const FindResult fr =
        find_spectrum(pot, Family::right_in(), rect(0.5, 12.0, -6.0, -0.5));
    REQUIRE(fr.points.size() >= 3);
    for (const auto& p : fr.points) {
        REQUIRE(p.kind == SpectralKind::Resonance);
        CHECK(verify_pole_location(pot, p) < 1e-6);
    }
    // incoming resonances (Out family) carry the opposite ratio sign
    const FindResult fro =
        find_spectrum(pot, Family::right_out(), rect(0.5, 12.0, 0.5, 6.0));
    REQUIRE(!fro.points.empty());
    for (const auto& p : fro.points) CHECK(verify_pole_location(pot, p) < 1e-6);
}

TEST_CASE("verify_pole_location rejects purely imaginary momenta") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    const FindResult fr = find_spectrum(pot, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95));
    REQUIRE(!fr.points.empty());
    CHECK_THROWS_AS(verify_pole_location(pot, fr.points.front()), NotAResonance);
}

TEST_CASE("momentum-derivative identity on the imaginary axis") {
    // anti-bound states of the deeper well
    PotentialSpec pot(1.0, {{1.0, -18.0}});
    const FindResult fr =
        find_spectrum(pot, Family::right_in(), rect(-0.4, 0.4, -3.5, -0.05));
    const auto anti = of_kind(fr, SpectralKind::AntiBound);
    REQUIRE(anti.size() == 2);
    for (const auto& p : anti) {
        const ImaginaryPoleCheck c = verify_pole_location_imaginary(pot, p);
        CHECK(c.derivative_identity_residual < 1e-6);
        // the boundary-only ratio misses the denominator-derivative term at a
        // simple zero; the discrepancy is O(1), not small
        CHECK(c.boundary_ratio_discrepancy > 0.05);
    }
    // bound states satisfy the same derivative identity
    PotentialSpec pot8(1.0, {{1.0, -8.0}});
    const FindResult frb =
        find_spectrum(pot8, Family::right_in(), rect(-0.4, 0.4, 0.05, 3.95));
    for (const auto& p : frb.points) {
        const ImaginaryPoleCheck c = verify_pole_location_imaginary(pot8, p);
        CHECK(c.derivative_identity_residual < 1e-6);
    }
}

TEST_CASE("excluded points are reported, never returned as spectrum") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    // region straddling +4i, where the closed-form scale factor vanishes
    const FindResult fr = find_spectrum(pot, Family::right_in(), rect(-0.5, 0.5, 3.0, 4.5));
    bool reported = false;
    for (cplx e : fr.excluded)
        if (std::abs(e - cplx{0.0, 4.0}) < 1e-9) reported = true;
    CHECK(reported);
    for (const auto& p : fr.points) CHECK(std::abs(p.z - cplx{0.0, 4.0}) > 1e-3);
    // the genuine bound state at ~3.43i is still found
    bool found_bound = false;
    for (const auto& p : fr.points)
        if (std::abs(p.z - cplx{0.0, 3.4289210733}) < 1e-6) found_bound = true;
    CHECK(found_bound);
}

TEST_CASE("subdivision depth cap raises MaxDepthExceeded") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    SearchRegion r = rect(-10.0, 10.0, -6.0, -0.5);
    r.max_subdivision_depth = 1;
    CHECK_THROWS_AS(find_spectrum(pot, Family::right_in(), r), MaxDepthExceeded);
}

TEST_CASE("spectrum CSV schema") {
    PotentialSpec pot(1.0, {{1.0, -8.0}});
    const FindResult fr = find_spectrum(pot, Family::right_in(), rect(0.5, 9.0, -5.0, -0.5));
    const std::string csv = spectrum_to_csv(fr.points);
    CHECK(csv.rfind("kind,family,re_z,im_z,re_E,im_E,residual\n", 0) == 0);
    const std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == fr.points.size() + 1);
    CHECK(csv.find("Resonance,right-in,") != std::string::npos);
}
