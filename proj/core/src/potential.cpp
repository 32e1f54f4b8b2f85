#include "qprod/potential.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace qprod {

namespace {

constexpr cplx kI{0.0, 1.0};

/// cos(k w) and sin(k w)/k as entire functions of k^2, series-protected at
/// small |k w|.
struct SegFns {
    cplx cos_kw;
    cplx sinc_w; // sin(k w) / k  (-> w as k -> 0)
};

SegFns segment_fns(cplx k2, double w) {
    const cplx k = std::sqrt(k2);
    const cplx x = k * w;
    if (std::abs(x) < kDegenerateSwitch) {
        const cplx x2 = x * x;
        const cplx c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0;
        const cplx s = w * (1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0);
        return {c, s};
    }
    return {std::cos(x), std::sin(x) / k};
}

Mat2 identity2() {
    return {{{cplx{1.0, 0.0}, cplx{0.0, 0.0}}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}}};
}

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

Mat2 segment_matrix(cplx k2, double w) {
    const SegFns f = segment_fns(k2, w);
    return {{{f.cos_kw, f.sinc_w}, {-k2 * f.sinc_w, f.cos_kw}}};
}

} // namespace

PotentialSpec::PotentialSpec(double mass, std::vector<Segment> segments)
    : mass_(mass), segments_(std::move(segments)) {
    if (!(mass_ > 0.0)) throw Error("PotentialSpec: mass must be positive");
    if (segments_.empty()) throw Error("PotentialSpec: at least one segment required");
    width_ = 0.0;
    for (const auto& s : segments_) {
        if (!(s.width > 0.0)) throw Error("PotentialSpec: segment widths must be positive");
        if (!std::isfinite(s.height)) throw Error("PotentialSpec: segment height must be finite");
        width_ += s.width;
    }
}

std::string PotentialSpec::to_json() const {
    nlohmann::json j;
    j["mass"] = mass_;
    j["segments"] = nlohmann::json::array();
    for (const auto& s : segments_)
        j["segments"].push_back({{"width", s.width}, {"height", s.height}});
    return j.dump(2);
}

PotentialSpec PotentialSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("mass") || !j.contains("segments"))
        throw Error("potential JSON needs \"mass\" and \"segments\"");
    std::vector<Segment> segs;
    for (const auto& js : j["segments"])
        segs.push_back({js.at("width").get<double>(), js.at("height").get<double>()});
    return PotentialSpec(j["mass"].get<double>(), std::move(segs));
}

std::string to_string(Family f) {
    std::string s = f.direction == Direction::Right ? "right" : "left";
    s += f.bc == BcType::In ? "-in" : "-out";
    return s;
}

Mat2 transfer_matrix(const PotentialSpec& pot, cplx z, bool allow_limit, double eps_khat) {
    Mat2 M = identity2();
    for (std::size_t j = 0; j < pot.segments().size(); ++j) {
        const cplx k2 = pot.local_k2(z, j);
        const double w = pot.segments()[j].width;
        if (!allow_limit && std::abs(std::sqrt(k2)) < eps_khat) {
            std::ostringstream os;
            os << "transfer_matrix: local momentum vanishes in segment " << j
               << " (|k| < " << eps_khat << "); the series limiting form was disallowed";
            throw DegenerateLocalMomentum(os.str());
        }
        M = mul(segment_matrix(k2, w), M);
    }
    return M;
}

cplx denominator_raw(const PotentialSpec& pot, cplx z, BcType bc) {
    const Mat2 M = transfer_matrix(pot, z);
    const cplx iz = kI * z;
    if (bc == BcType::In)
        return M[1][0] - iz * (M[0][0] + M[1][1]) - z * z * M[0][1];
    return M[1][0] + iz * (M[0][0] + M[1][1]) - z * z * M[0][1];
}

cplx normalization_factor(double mass, cplx z) {
    if (z == cplx{0.0, 0.0}) throw ZeroMomentum("normalization factor undefined at z = 0");
    return std::sqrt(cplx{mass, 0.0}) / std::sqrt(2.0 * M_PI * z);
}

Amplitudes amplitudes(const PotentialSpec& pot, cplx z, Family fam) {
    if (z == cplx{0.0, 0.0}) throw ZeroMomentum("amplitudes undefined at z = 0");
    const Mat2 M = transfer_matrix(pot, z);
    const cplx iz = kI * z;
    const double L = pot.total_width();

    // Columns of M applied to the two exterior basis vectors (1, +-iz).
    const cplx A1 = M[0][0] + iz * M[0][1];
    const cplx A2 = M[1][0] + iz * M[1][1];
    const cplx B1 = M[0][0] - iz * M[0][1];
    const cplx B2 = M[1][0] - iz * M[1][1];

    // Scale reproducing the square-well closed form in the single-segment
    // case: +-2i times the product of local momenta (principal branch).
    cplx scale = 2.0 * kI * static_cast<double>(fam.sign());
    for (std::size_t j = 0; j < pot.segments().size(); ++j)
        scale *= std::sqrt(pot.local_k2(z, j));

    cplx Draw, Rraw, Traw;
    if (fam.bc == BcType::In) {
        Draw = B2 - iz * B1; // = m21 - iz(m11+m22) - z^2 m12
        Traw = -2.0 * iz * std::exp(-iz * L);
        if (fam.direction == Direction::Right)
            Rraw = -(A2 - iz * A1);
        else
            Rraw = -(B2 + iz * B1) * std::exp(-2.0 * iz * L);
    } else {
        Draw = A2 + iz * A1; // = m21 + iz(m11+m22) - z^2 m12
        Traw = 2.0 * iz * std::exp(iz * L);
        if (fam.direction == Direction::Right)
            Rraw = -(B2 + iz * B1);
        else
            Rraw = -(A2 - iz * A1) * std::exp(2.0 * iz * L);
    }

    Amplitudes out;
    out.z = z;
    out.family = fam;
    out.D = scale * Draw;
    out.R_num = scale * Rraw;
    out.T_num = scale * Traw;
    out.N = normalization_factor(pot.mass(), z);
    return out;
}

InteriorState interior_state(const PotentialSpec& pot, cplx z, Family fam, cplx d, cplx r,
                             cplx t, cplx N) {
    InteriorState st;
    const cplx iz = kI * z;
    const int s = fam.sign();

    // (phi, phi') at x = 0 from the exterior representation.
    cplx phi, dphi;
    if (fam.direction == Direction::Right) {
        phi = N * (d + r);
        dphi = static_cast<double>(s) * iz * N * (d - r);
    } else {
        phi = N * t;
        dphi = -static_cast<double>(s) * iz * N * t;
    }

    double x0 = 0.0;
    st.segs.reserve(pot.segments().size());
    for (std::size_t j = 0; j < pot.segments().size(); ++j) {
        const double w = pot.segments()[j].width;
        const cplx k2 = pot.local_k2(z, j);
        const cplx k = std::sqrt(k2);

        InteriorState::SegmentData sd;
        sd.x0 = x0;
        sd.width = w;
        sd.k = k;
        sd.phi = phi;
        sd.dphi = dphi;
        sd.k_degenerate = std::abs(k * w) < kDegenerateSwitch;
        if (!sd.k_degenerate && std::abs(k) > 0.0) {
            sd.a = 0.5 * (phi + dphi / (kI * k));
            sd.b = 0.5 * (phi - dphi / (kI * k));
        }
        st.segs.push_back(sd);

        const SegFns f = segment_fns(k2, w);
        const cplx phi_next = f.cos_kw * phi + f.sinc_w * dphi;
        const cplx dphi_next = -k2 * f.sinc_w * phi + f.cos_kw * dphi;
        phi = phi_next;
        dphi = dphi_next;
        x0 += w;
    }
    st.phi_L = phi;
    st.dphi_L = dphi;
    return st;
}

InteriorState interior_state(const PotentialSpec& pot, const Amplitudes& amps) {
    return interior_state(pot, amps.z, amps.family, amps.D, amps.R_num, amps.T_num, amps.N);
}

namespace {

/// exp(i mu x) with a guard: zero coefficient short-circuits so that growing
/// exponentials multiplied by exactly-zero coefficients stay zero.
cplx cexp_term(cplx coeff, cplx mu, double x) {
    if (coeff == cplx{0.0, 0.0}) return {0.0, 0.0};
    return coeff * std::exp(kI * mu * x);
}

} // namespace

cplx master_eval_coeffs(const PotentialSpec& pot, cplx z, Family fam, cplx d, cplx r, cplx t,
                        cplx N, const InteriorState& interior, double x) {
    const double L = pot.total_width();
    const double s = static_cast<double>(fam.sign());
    if (x <= 0.0) {
        if (fam.direction == Direction::Right)
            return N * (cexp_term(d, s * z, x) + cexp_term(r, -s * z, x));
        return N * cexp_term(t, -s * z, x);
    }
    if (x >= L) {
        if (fam.direction == Direction::Right) return N * cexp_term(t, s * z, x);
        return N * (cexp_term(d, -s * z, x) + cexp_term(r, s * z, x));
    }
    // interior: propagate from the containing segment's left edge
    std::size_t j = 0;
    while (j + 1 < interior.segs.size() &&
           x >= interior.segs[j].x0 + interior.segs[j].width)
        ++j;
    const auto& sd = interior.segs[j];
    const cplx k2 = sd.k * sd.k;
    const SegFns f = segment_fns(k2, x - sd.x0);
    return f.cos_kw * sd.phi + f.sinc_w * sd.dphi;
}

cplx master_solution_eval(const PotentialSpec& pot, const Amplitudes& amps, double x) {
    const InteriorState st = interior_state(pot, amps);
    return master_eval_coeffs(pot, amps.z, amps.family, amps.D, amps.R_num, amps.T_num,
                              amps.N, st, x);
}

ValueDeriv master_solution_eval_deriv(const PotentialSpec& pot, const Amplitudes& amps,
                                      double x) {
    const cplx z = amps.z;
    const double s = static_cast<double>(amps.family.sign());
    const double L = pot.total_width();
    const cplx N = amps.N;
    if (x <= 0.0) {
        if (amps.family.direction == Direction::Right) {
            const cplx u = cexp_term(amps.D, s * z, x);
            const cplx v = cexp_term(amps.R_num, -s * z, x);
            return {N * (u + v), N * kI * s * z * (u - v)};
        }
        const cplx u = cexp_term(amps.T_num, -s * z, x);
        return {N * u, -N * kI * s * z * u};
    }
    if (x >= L) {
        if (amps.family.direction == Direction::Right) {
            const cplx u = cexp_term(amps.T_num, s * z, x);
            return {N * u, N * kI * s * z * u};
        }
        const cplx u = cexp_term(amps.D, -s * z, x);
        const cplx v = cexp_term(amps.R_num, s * z, x);
        return {N * (u + v), N * kI * s * z * (v - u)};
    }
    const InteriorState st = interior_state(pot, amps);
    std::size_t j = 0;
    while (j + 1 < st.segs.size() && x >= st.segs[j].x0 + st.segs[j].width) ++j;
    const auto& sd = st.segs[j];
    const cplx k2 = sd.k * sd.k;
    const SegFns f = segment_fns(k2, x - sd.x0);
    return {f.cos_kw * sd.phi + f.sinc_w * sd.dphi,
            -k2 * f.sinc_w * sd.phi + f.cos_kw * sd.dphi};
}

} // namespace qprod
