#include "qprod/products.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "qprod/quadrature.hpp"

namespace qprod {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Piece {
    cplx coeff;
    cplx mu; // exponent momentum: the piece is coeff * e^{i mu x}
    const char* name;
};

struct SideForms {
    std::array<Piece, 2> left{};
    std::array<Piece, 2> right{};
    int n_left = 0, n_right = 0;
};

SideForms side_forms(const StateRef& s) {
    const double sg = static_cast<double>(s.family.sign());
    SideForms f;
    if (s.family.direction == Direction::Right) {
        f.left = {Piece{s.d, sg * s.z, "d"}, Piece{s.r, -sg * s.z, "r"}};
        f.n_left = 2;
        f.right = {Piece{s.t, sg * s.z, "t"}, Piece{}};
        f.n_right = 1;
    } else {
        f.left = {Piece{s.t, -sg * s.z, "t"}, Piece{}};
        f.n_left = 1;
        f.right = {Piece{s.d, -sg * s.z, "d"}, Piece{s.r, sg * s.z, "r"}};
        f.n_right = 2;
    }
    return f;
}

bool near_zero(cplx k, double scale) { return std::abs(k) < 1e-12 * (1.0 + scale); }

double axis_tol(cplx z) { return 1e-8 * (1.0 + std::abs(z)); }

} // namespace

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::Bound: return "Bound";
        case StateKind::AntiBound: return "AntiBound";
        case StateKind::Resonance: return "Resonance";
        case StateKind::AntiResonance: return "AntiResonance";
        case StateKind::IncomingResonance: return "IncomingResonance";
        case StateKind::Scattering: return "Scattering";
        case StateKind::Background: return "Background";
    }
    return "?";
}

std::string to_string(ProductTag t) {
    switch (t) {
        case ProductTag::Zero: return "Zero";
        case ProductTag::FiniteValue: return "FiniteValue";
        case ProductTag::KroneckerDelta: return "KroneckerDelta";
        case ProductTag::DiracDelta: return "DiracDelta";
        case ProductTag::Divergent: return "Divergent";
    }
    return "?";
}

cplx StateRef::eval(double x) const {
    return master_eval_coeffs(*pot, z, family, d, r, t, N, interior, x);
}

ValueDeriv StateRef::boundary0() const {
    const double sg = static_cast<double>(family.sign());
    if (family.direction == Direction::Right)
        return {N * (d + r), kI * sg * z * N * (d - r)};
    return {N * t, -kI * sg * z * N * t};
}

ValueDeriv StateRef::boundaryL() const {
    const double L = pot->total_width();
    const double sg = static_cast<double>(family.sign());
    const cplx ep = std::exp(kI * sg * z * L);
    const cplx em = std::exp(-kI * sg * z * L);
    if (family.direction == Direction::Right)
        return {N * t * ep, kI * sg * z * N * t * ep};
    const cplx u = d * em;
    const cplx v = r * ep;
    return {N * (u + v), kI * sg * z * N * (v - u)};
}

StateRef make_discrete_state(std::shared_ptr<const PotentialSpec> pot,
                             const SpectralPoint& sp) {
    StateRef s;
    s.pot = std::move(pot);
    s.z = sp.z;
    s.family = sp.family;
    const Amplitudes a = amplitudes(*s.pot, sp.z, sp.family);
    s.d = {0.0, 0.0}; // exact zero: the state obeys its two-sided conditions exactly
    s.r = a.R_num;
    s.t = a.T_num;
    s.N = a.N;
    s.zero_residual = sp.residual;
    switch (sp.kind) {
        case SpectralKind::Bound: s.kind = StateKind::Bound; break;
        case SpectralKind::AntiBound: s.kind = StateKind::AntiBound; break;
        case SpectralKind::Resonance:
            s.kind = sp.family.bc == BcType::Out ? StateKind::IncomingResonance
                                                 : StateKind::Resonance;
            break;
        case SpectralKind::AntiResonance:
            s.kind = sp.family.bc == BcType::Out ? StateKind::IncomingResonance
                                                 : StateKind::AntiResonance;
            break;
    }
    s.interior = interior_state(*s.pot, s.z, s.family, s.d, s.r, s.t, s.N);
    return s;
}

StateRef make_scattering_state(std::shared_ptr<const PotentialSpec> pot, double p) {
    if (!(p > 0.0)) throw Error("scattering state requires real momentum p > 0");
    StateRef s;
    s.pot = std::move(pot);
    s.z = {p, 0.0};
    s.family = Family::right_in();
    const Amplitudes a = amplitudes(*s.pot, s.z, s.family);
    s.kind = StateKind::Scattering;
    s.d = {1.0, 0.0};
    s.r = a.R_num / a.D;
    s.t = a.T_num / a.D;
    s.N = a.N;
    s.interior = interior_state(*s.pot, s.z, s.family, s.d, s.r, s.t, s.N);
    return s;
}

StateRef make_background_state(std::shared_ptr<const PotentialSpec> pot, cplx z,
                               Family fam) {
    StateRef s;
    s.pot = std::move(pot);
    s.z = z;
    s.family = fam;
    const Amplitudes a = amplitudes(*s.pot, z, fam);
    s.kind = StateKind::Background;
    s.d = a.D;
    s.r = a.R_num;
    s.t = a.T_num;
    s.N = a.N;
    s.interior = interior_state(*s.pot, s.z, s.family, s.d, s.r, s.t, s.N);
    return s;
}

StateRef scaled_state(const StateRef& s, cplx alpha) {
    StateRef out = s;
    out.d = s.d * alpha;
    out.r = s.r * alpha;
    out.t = s.t * alpha;
    out.interior = interior_state(*out.pot, out.z, out.family, out.d, out.r, out.t, out.N);
    return out;
}

double bound_norm(const StateRef& a) {
    if (a.kind != StateKind::Bound)
        throw NotBound("bound_norm: state is not a bound state");
    if (std::abs(a.z.real()) >= axis_tol(a.z) || a.z.imag() <= 0.0)
        throw NotBound("bound_norm: momentum is not on the positive imaginary axis");
    const double q = a.z.imag();
    const double L = a.pot->total_width();
    const Amplitudes m = amplitudes(*a.pot, a.z, a.family);
    const cplx dD = denominator_derivative(*a.pot, a.z, a.family.bc);
    const cplx N2 = m.N * m.N;
    const cplx gen = N2 * (m.R_num * m.R_num +
                           m.T_num * m.T_num * std::exp(2.0 * kI * a.z * L)) / q -
                     kI * N2 * m.R_num * dD;
    const double master_norm = std::abs(gen);
    const double rescale = std::norm(a.r / m.R_num); // |alpha|^2 for scaled states
    return master_norm * rescale;
}

cplx wronskian_interior(const StateRef& a, const StateRef& b) {
    const cplx u2 = std::conj(a.z) * std::conj(a.z);
    const cplx v2 = b.z * b.z;
    const cplx denom = u2 - v2;
    if (std::abs(denom) < 1e-10 * (std::abs(u2) + std::abs(v2) + 1.0))
        throw DegenerateEnergyPair(
            "wronskian_interior: conj(E_a) == E_b, the boundary reduction is singular");
    const ValueDeriv a0 = a.boundary0(), aL = a.boundaryL();
    const ValueDeriv b0 = b.boundary0(), bL = b.boundaryL();
    const cplx WL = std::conj(aL.phi) * bL.dphi - bL.phi * std::conj(aL.dphi);
    const cplx W0 = std::conj(a0.phi) * b0.dphi - b0.phi * std::conj(a0.dphi);
    return (WL - W0) / denom;
}

namespace {

cplx interior_by_quadrature(const StateRef& a, const StateRef& b) {
    auto f = [&](double x) { return std::conj(a.eval(x)) * b.eval(x); };
    return integrate_gk(f, 0.0, a.pot->total_width(), 1e-13, 1e-11).value;
}

ProductValue dirac_delta_product(const StateRef& a, const StateRef& b) {
    // All principal-value pieces cancel pairwise; the surviving content is
    // the delta ridge with coefficient  pi conj(N)N' (d*d' + r*r' + t*t').
    ProductValue out;
    out.tag = ProductTag::DiracDelta;
    const cplx c = std::conj(a.N) * b.N * M_PI *
                   (std::conj(a.d) * b.d + std::conj(a.r) * b.r + std::conj(a.t) * b.t);
    out.delta_coeff = c.real();
    out.value = c;
    return out;
}

} // namespace

ProductValue master_inner_product(const StateRef& a, const StateRef& b) {
    if (!a.pot || !b.pot || !(*a.pot == *b.pot))
        throw SamePotentialRequired("master_inner_product: states live on different potentials");

    const double L = a.pot->total_width();

    // exact-coincidence dispatch
    if (a.kind == StateKind::Scattering && b.kind == StateKind::Scattering) {
        const double p = a.z.real(), pp = b.z.real();
        if (std::abs(p - pp) <= 1e-12 * std::max(p, pp)) return dirac_delta_product(a, b);
    }
    if (a.kind == StateKind::Bound && b.kind == StateKind::Bound &&
        std::abs(a.z - b.z) <= 1e-12 * (1.0 + std::abs(a.z))) {
        ProductValue out;
        out.tag = ProductTag::KroneckerDelta;
        const double na = std::sqrt(bound_norm(a));
        const double nb = std::sqrt(bound_norm(b));
        out.value = {na * nb, 0.0};
        return out;
    }

    // generic assembly: exterior sector integrals term by term
    const SideForms fa = side_forms(a);
    const SideForms fb = side_forms(b);
    const cplx NN = std::conj(a.N) * b.N;
    const double mu_scale = std::abs(a.z) + std::abs(b.z);

    cplx total{0.0, 0.0};
    double scale = 0.0;
    ProductValue out;

    auto handle_term = [&](const Piece& pa, const Piece& pb, bool right_side) -> bool {
        if (pa.coeff == cplx{0.0, 0.0} || pb.coeff == cplx{0.0, 0.0}) return true;
        const cplx cab = NN * std::conj(pa.coeff) * pb.coeff;
        const cplx k = right_side ? pb.mu - std::conj(pa.mu) : std::conj(pa.mu) - pb.mu;
        // real k != 0 lies in the convergence sector; its pointwise limit is
        // i/k, and the delta ridge at k = 0 was dispatched above
        if (near_zero(k, mu_scale) || !in_convergence_sector(k)) {
            out.tag = ProductTag::Divergent;
            out.wedge = Wedge{right_side ? std::conj(pa.mu) : -std::conj(pa.mu)};
            out.wedge_offender = right_side ? pb.mu : -pb.mu;
            out.divergent_term = std::string(pa.name) + "*" + pb.name +
                                 (right_side ? " (right sector)" : " (left sector)");
            return false;
        }
        // finite pointwise value i/k; on the real axis this is the
        // lambda -> 0 pointwise limit (the delta ridge lives only at k = 0,
        // which was dispatched above)
        cplx term = cab * (kI / k);
        if (right_side) term *= std::exp(kI * k * L);
        total += term;
        scale = std::max(scale, std::abs(term));
        return true;
    };

    for (int ia = 0; ia < fa.n_left; ++ia)
        for (int ib = 0; ib < fb.n_left; ++ib)
            if (!handle_term(fa.left[ia], fb.left[ib], false)) return out;
    for (int ia = 0; ia < fa.n_right; ++ia)
        for (int ib = 0; ib < fb.n_right; ++ib)
            if (!handle_term(fa.right[ia], fb.right[ib], true)) return out;

    // interior piece
    cplx interior;
    const cplx u2 = std::conj(a.z) * std::conj(a.z);
    const cplx v2 = b.z * b.z;
    if (std::abs(u2 - v2) < 1e-10 * (std::abs(u2) + std::abs(v2) + 1.0))
        interior = interior_by_quadrature(a, b);
    else
        interior = wronskian_interior(a, b);
    total += interior;
    scale = std::max(scale, std::abs(interior));
    scale = std::max(scale, 1e-300);

    if (std::abs(total) < kEpsZero * scale) {
        out.tag = ProductTag::Zero;
        out.value = total;
        out.residual = std::abs(total) / scale;
        return out;
    }
    out.tag = ProductTag::FiniteValue;
    out.value = total;
    out.residual = std::abs(total) / scale;
    return out;
}

std::vector<TailTerm> tail_terms(const StateRef& a, const StateRef& b, bool right_side) {
    const SideForms fa = side_forms(a);
    const SideForms fb = side_forms(b);
    const cplx NN = std::conj(a.N) * b.N;
    std::vector<TailTerm> out;
    const auto& pa = right_side ? fa.right : fa.left;
    const auto& pb = right_side ? fb.right : fb.left;
    const int na = right_side ? fa.n_right : fa.n_left;
    const int nb = right_side ? fb.n_right : fb.n_left;
    for (int ia = 0; ia < na; ++ia)
        for (int ib = 0; ib < nb; ++ib) {
            if (pa[ia].coeff == cplx{0.0, 0.0} || pb[ib].coeff == cplx{0.0, 0.0}) continue;
            out.push_back({NN * std::conj(pa[ia].coeff) * pb[ib].coeff,
                           pb[ib].mu - std::conj(pa[ia].mu)});
        }
    return out;
}

double pair_growth_rate(const StateRef& a, const StateRef& b) {
    const SideForms fa = side_forms(a);
    const SideForms fb = side_forms(b);
    double rate = 0.0;
    // |e^{i mu x}| = e^{-Im(mu) x}; conjugation preserves the magnitude
    for (int ia = 0; ia < fa.n_left; ++ia)
        for (int ib = 0; ib < fb.n_left; ++ib) {
            if (fa.left[ia].coeff == cplx{0.0, 0.0} || fb.left[ib].coeff == cplx{0.0, 0.0})
                continue;
            rate = std::max(rate, fa.left[ia].mu.imag() + fb.left[ib].mu.imag());
        }
    for (int ia = 0; ia < fa.n_right; ++ia)
        for (int ib = 0; ib < fb.n_right; ++ib) {
            if (fa.right[ia].coeff == cplx{0.0, 0.0} || fb.right[ib].coeff == cplx{0.0, 0.0})
                continue;
            rate = std::max(rate, -(fa.right[ia].mu.imag() + fb.right[ib].mu.imag()));
        }
    return rate;
}

ProductTable product_table(const PotentialSpec& pot, const std::vector<StateRef>& states) {
    for (const auto& s : states)
        if (!s.pot || !(*s.pot == pot))
            throw SamePotentialRequired("product_table: state potential mismatch");
    ProductTable t;
    t.labels.reserve(states.size());
    for (const auto& s : states) t.labels.push_back(state_label(s));
    t.cells.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        t.cells[i].reserve(states.size());
        for (std::size_t j = 0; j < states.size(); ++j)
            t.cells[i].push_back(master_inner_product(states[i], states[j]));
    }
    return t;
}

std::string state_label(const StateRef& s) {
    char buf[128];
    switch (s.kind) {
        case StateKind::Bound:
            std::snprintf(buf, sizeof(buf), "bound%d", s.index);
            break;
        case StateKind::AntiBound:
            std::snprintf(buf, sizeof(buf), "antibound%d", s.index);
            break;
        case StateKind::Resonance:
            std::snprintf(buf, sizeof(buf), "res%d", s.index);
            break;
        case StateKind::AntiResonance:
            std::snprintf(buf, sizeof(buf), "antires%d", s.index);
            break;
        case StateKind::IncomingResonance:
            std::snprintf(buf, sizeof(buf), "incoming%d", s.index);
            break;
        case StateKind::Scattering:
            std::snprintf(buf, sizeof(buf), "E(p=%.6g)", s.z.real());
            break;
        case StateKind::Background:
            std::snprintf(buf, sizeof(buf), "bg(%.6g%+.6gi,%s)", s.z.real(), s.z.imag(),
                          to_string(s.family).c_str());
            break;
    }
    return buf;
}

std::string table_to_csv(const ProductTable& t) {
    std::string out = "bra\\ket";
    for (const auto& l : t.labels) out += "," + l;
    out += "\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        out += t.labels[i];
        for (const auto& c : t.cells[i]) out += "," + to_string(c.tag);
        out += "\n";
    }
    return out;
}

std::string table_to_json(const ProductTable& t) {
    nlohmann::json j;
    j["labels"] = t.labels;
    j["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        for (std::size_t k = 0; k < t.cells[i].size(); ++k) {
            const auto& c = t.cells[i][k];
            nlohmann::json cell;
            cell["bra"] = t.labels[i];
            cell["ket"] = t.labels[k];
            cell["tag"] = to_string(c.tag);
            cell["value_re"] = c.value.real();
            cell["value_im"] = c.value.imag();
            cell["residual"] = c.residual;
            if (c.tag == ProductTag::DiracDelta) cell["delta_coeff"] = c.delta_coeff;
            if (c.tag == ProductTag::Divergent && c.wedge) {
                cell["wedge_apex_re"] = c.wedge->apex.real();
                cell["wedge_apex_im"] = c.wedge->apex.imag();
                cell["wedge_offender_re"] = c.wedge_offender.real();
                cell["wedge_offender_im"] = c.wedge_offender.imag();
                cell["divergent_term"] = c.divergent_term;
            }
            j["cells"].push_back(cell);
        }
    }
    return j.dump(2);
}

} // namespace qprod
