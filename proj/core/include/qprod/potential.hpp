#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "qprod/errors.hpp"

namespace qprod {

using cplx = std::complex<double>;

/// One piecewise-constant slab of the potential.
struct Segment {
    double width  = 0.0;
    double height = 0.0;
};

/// Piecewise-constant potential with support [0, L], hbar = 1.
/// V(x) = segments[j].height on the j-th slab and identically zero outside.
class PotentialSpec {
  public:
    PotentialSpec(double mass, std::vector<Segment> segments);

    double mass() const { return mass_; }
    const std::vector<Segment>& segments() const { return segments_; }
    double total_width() const { return width_; }

    /// Local momentum squared z^2 - 2 m V_j; entire in z.
    cplx local_k2(cplx z, std::size_t j) const {
        return z * z - 2.0 * mass_ * segments_[j].height;
    }

    bool operator==(const PotentialSpec& o) const {
        if (mass_ != o.mass_ || segments_.size() != o.segments_.size()) return false;
        for (std::size_t j = 0; j < segments_.size(); ++j)
            if (segments_[j].width != o.segments_[j].width ||
                segments_[j].height != o.segments_[j].height)
                return false;
        return true;
    }

    std::string to_json() const;
    static PotentialSpec from_json(const std::string& text);

  private:
    double mass_;
    std::vector<Segment> segments_;
    double width_;
};

/// Which of the four exterior solution families an amplitude set describes.
///
/// bc In  pairs with the denominator that equals the first line of the
/// square-well closed form (the convention anchor); bc Out pairs with the
/// second line. Left-moving families share the denominator of the
/// right-moving family with the same bc.
enum class Direction { Right, Left };
enum class BcType { In, Out };

struct Family {
    Direction direction = Direction::Right;
    BcType bc           = BcType::In;

    bool operator==(const Family&) const = default;

    /// +1 for In, -1 for Out: the sign carried by the incident exponent.
    int sign() const { return bc == BcType::In ? +1 : -1; }

    static Family right_in() { return {Direction::Right, BcType::In}; }
    static Family right_out() { return {Direction::Right, BcType::Out}; }
    static Family left_in() { return {Direction::Left, BcType::In}; }
    static Family left_out() { return {Direction::Left, BcType::Out}; }
};

std::string to_string(Family f);

/// The holomorphic amplitude quadruple of the master solution at momentum z.
///
/// D is the family denominator; R_num and T_num the reflection/transmission
/// numerators (physical amplitudes are R_num/D and T_num/D); N the
/// delta-energy normalization sqrt(m)/sqrt(2 pi z), principal branch.
struct Amplitudes {
    cplx z{};
    Family family{};
    cplx D{};
    cplx R_num{};
    cplx T_num{};
    cplx N{};
};

/// Interior representation: exponential coefficients (a_j, b_j) per segment
/// multiplying e^{+i k_j (x - x_j)} and e^{-i k_j (x - x_j)} measured from the
/// segment's left edge x_j, plus the (value, derivative) pair at x_j which is
/// what evaluation actually propagates (stable when k_j -> 0).
struct InteriorState {
    struct SegmentData {
        double x0 = 0.0;           // left edge
        double width = 0.0;
        cplx k{};                  // local momentum sqrt(z^2 - 2 m V_j), principal branch
        cplx a{};                  // e^{+ik(x-x0)} coefficient (unreliable if |k| tiny)
        cplx b{};                  // e^{-ik(x-x0)} coefficient
        cplx phi{};                // value at x0
        cplx dphi{};               // derivative at x0
        bool k_degenerate = false; // |k * width| below the series switchover
    };
    std::vector<SegmentData> segs;
    cplx phi_L{};   // value at x = L
    cplx dphi_L{};  // derivative at x = L
};

/// 2x2 complex matrix propagating (phi, phi') across [0, L]; det = 1.
using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Threshold on |k w| below which sin(kw)/k and cos(kw) switch to series.
inline constexpr double kDegenerateSwitch = 1e-4;

/// Transfer matrix of the full potential at complex momentum z.
///
/// Entries are entire functions of z (they depend on the local momenta only
/// through k_j^2), so no branch choice enters here. Throws
/// DegenerateLocalMomentum only if allow_limit is false and some |k_j w_j|
/// falls below the series switchover.
Mat2 transfer_matrix(const PotentialSpec& pot, cplx z, bool allow_limit = true,
                     double eps_khat = 1e-12);

/// Family denominator with the Eq.-9-anchored scale stripped: an entire
/// function of z whose zeros are exactly the discrete spectrum (no spurious
/// zeros at the excluded points, no branch cuts). Root finding operates on
/// this function.
cplx denominator_raw(const PotentialSpec& pot, cplx z, BcType bc);

/// Full amplitude set for the family at z. The scale convention multiplies
/// the raw solution by +-2i * prod_j k_j so that the single-segment
/// denominators reproduce the square-well closed form verbatim.
Amplitudes amplitudes(const PotentialSpec& pot, cplx z, Family fam);

/// Interior coefficients for a master solution with exterior coefficients
/// (d, r, t); the Amplitudes overload uses (D, R_num, T_num).
InteriorState interior_state(const PotentialSpec& pot, const Amplitudes& amps);
InteriorState interior_state(const PotentialSpec& pot, cplx z, Family fam, cplx d,
                             cplx r, cplx t, cplx N);

/// Master solution value at x (exterior pieces analytic, interior propagated).
cplx master_solution_eval(const PotentialSpec& pot, const Amplitudes& amps, double x);

/// Value and derivative; used by boundary-condition residual checks.
struct ValueDeriv {
    cplx phi{};
    cplx dphi{};
};
ValueDeriv master_solution_eval_deriv(const PotentialSpec& pot, const Amplitudes& amps,
                                      double x);

/// Evaluation against an explicit coefficient triple (the products module
/// feeds physical or rescaled coefficients through this).
cplx master_eval_coeffs(const PotentialSpec& pot, cplx z, Family fam, cplx d, cplx r,
                        cplx t, cplx N, const InteriorState& interior, double x);

/// N(z) = sqrt(m) / sqrt(2 pi z), principal square roots.
cplx normalization_factor(double mass, cplx z);

} // namespace qprod
