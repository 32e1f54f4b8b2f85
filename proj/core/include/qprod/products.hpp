#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qprod/potential.hpp"
#include "qprod/regint.hpp"
#include "qprod/spectrum.hpp"

namespace qprod {

enum class StateKind {
    Bound,
    AntiBound,
    Resonance,
    AntiResonance,
    IncomingResonance,
    Scattering,
    Background
};

std::string to_string(StateKind k);

/// A concrete solution the inner-product engine can pair.
///
/// Exterior coefficients (d, r, t) fix the normalization convention:
///  - discrete states (Bound/AntiBound/Resonance/...) carry the
///    denominator-multiplied master amplitudes with d = 0 exactly;
///  - Scattering carries the physical delta-energy normalization
///    d = 1, r = R/D, t = T/D at real momentum p > 0;
///  - Background carries the master triple (D, R, T) at generic z.
struct StateRef {
    StateKind kind = StateKind::Background;
    int index = -1; // position in the sorted spectrum, for discrete kinds
    cplx z{};
    Family family{};
    cplx d{}, r{}, t{};
    cplx N{};
    std::shared_ptr<const PotentialSpec> pot;
    double zero_residual = 0.0; // |D| / local scale at build time (discrete kinds)
    InteriorState interior;     // cached propagation data

    /// wavefunction value at x under this state's own normalization
    cplx eval(double x) const;
    /// (value, derivative) at x = 0 and x = L from the exterior forms
    ValueDeriv boundary0() const;
    ValueDeriv boundaryL() const;
};

StateRef make_discrete_state(std::shared_ptr<const PotentialSpec> pot,
                             const SpectralPoint& sp);
StateRef make_scattering_state(std::shared_ptr<const PotentialSpec> pot, double p);
StateRef make_background_state(std::shared_ptr<const PotentialSpec> pot, cplx z,
                               Family fam = Family::right_in());
/// Same state with (d, r, t) multiplied by alpha.
StateRef scaled_state(const StateRef& s, cplx alpha);

enum class ProductTag { Zero, FiniteValue, KroneckerDelta, DiracDelta, Divergent };

std::string to_string(ProductTag t);

struct ProductValue {
    ProductTag tag = ProductTag::Zero;
    /// FiniteValue: the value. KroneckerDelta: <a|a> (1 for unit-normalized
    /// states). Zero: the raw residual complex, kept for audit.
    cplx value{};
    /// Zero: |value| relative to the largest assembled term magnitude.
    double residual = 0.0;
    /// DiracDelta: coefficient of delta(p - p'); m/p under the delta-energy
    /// normalization, so the product equals delta(E - E').
    double delta_coeff = 0.0;
    /// Divergent: the offending wedge (apex) and the momentum that fell in it.
    std::optional<Wedge> wedge;
    cplx wedge_offender{};
    std::string divergent_term; // which amplitude pairing diverged, e.g. "r*r"
};

/// Threshold separating Zero from FiniteValue, relative to term scale.
inline constexpr double kEpsZero = 1e-9;

/// The master inner product <a|b> with the regularized prescription, fully
/// dispatched: exact-coincidence cases first (delta normalization, norms),
/// then term-by-term sector classification, closed-form interior, and the
/// Zero/FiniteValue threshold.
ProductValue master_inner_product(const StateRef& a, const StateRef& b);

/// Closed-form interior integral int_0^L conj(Phi_a) Phi_b dx via the
/// boundary Wronskian reduction. Throws DegenerateEnergyPair when
/// conj(z_a)^2 == z_b^2.
cplx wronskian_interior(const StateRef& a, const StateRef& b);

/// Full-line norm of a bound state from boundary amplitudes and the
/// denominator derivative:
///   norm = | N^2 (R^2 + T^2 e^{2 i z0 L}) / q  -  i N^2 R D'(z0) |,
/// scaled by the state's own amplitude scale. The boundary-only expression
/// without the D' term is not an identity (the denominator derivative does
/// not vanish at simple zeros), so it is not used here.
double bound_norm(const StateRef& a);

/// Exterior growth rate of conj(Phi_a) Phi_b: the largest positive exponent
/// rate among the nonvanishing piece pairings on either tail. Zero for a
/// pair whose product decays or stays bounded outside [0, L].
double pair_growth_rate(const StateRef& a, const StateRef& b);

/// The tail product conj(Phi_a(x)) Phi_b(x) as a sum of c e^{i mu x} terms
/// with the combined exponents (stable even where a single factor overflows).
struct TailTerm {
    cplx coeff;
    cplx mu;
};
std::vector<TailTerm> tail_terms(const StateRef& a, const StateRef& b, bool right_side);

struct ProductTable {
    std::vector<std::string> labels;
    std::vector<std::vector<ProductValue>> cells;
};

ProductTable product_table(const PotentialSpec& pot, const std::vector<StateRef>& states);

std::string state_label(const StateRef& s);
std::string table_to_csv(const ProductTable& t);
std::string table_to_json(const ProductTable& t);

} // namespace qprod
