#include "qprod/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qprod/quadrature.hpp"

namespace qprod {

namespace {

constexpr cplx kI{0.0, 1.0};

double axis_tol(cplx z) { return 1e-8 * (1.0 + std::abs(z)); }

struct Rect {
    double x0, x1, y0, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diam() const { return std::hypot(width(), height()); }
    cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(cplx z, double pad = 0.0) const {
        return z.real() >= x0 - pad && z.real() <= x1 + pad && z.imag() >= y0 - pad &&
               z.imag() <= y1 + pad;
    }
};

/// Winding number of D along the rectangle boundary, adaptive in the phase
/// step. Returns false if refinement hit its cap without taming the phase.
bool winding_number(const PotentialSpec& pot, BcType bc, const Rect& r, double& winding,
                    double& min_abs, double& median_abs) {
    auto D = [&](cplx z) { return denominator_raw(pot, z, bc); };

    const std::array<cplx, 4> corners = {cplx{r.x0, r.y0}, cplx{r.x1, r.y0},
                                         cplx{r.x1, r.y1}, cplx{r.x0, r.y1}};
    double total = 0.0;
    std::vector<double> mags;
    mags.reserve(512);
    bool ok = true;

    for (int e = 0; e < 4; ++e) {
        const cplx a = corners[e];
        const cplx b = corners[(e + 1) % 4];
        // adaptive subdivision of the edge until each phase step < pi/2
        struct Seg {
            double t0, t1;
            cplx f0, f1;
            int depth;
        };
        const cplx fa = D(a), fb = D(b);
        std::vector<Seg> stack{{0.0, 1.0, fa, fb, 0}};
        mags.push_back(std::abs(fa));
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            const double dphi = std::arg(s.f1 / s.f0);
            if ((std::abs(dphi) < M_PI_2 && s.depth >= 4) || s.depth >= 26) {
                if (std::abs(dphi) >= M_PI_2) ok = false;
                total += dphi;
                continue;
            }
            const double tm = 0.5 * (s.t0 + s.t1);
            const cplx zm = a + tm * (b - a);
            const cplx fm = D(zm);
            mags.push_back(std::abs(fm));
            stack.push_back({tm, s.t1, fm, s.f1, s.depth + 1});
            stack.push_back({s.t0, tm, s.f0, fm, s.depth + 1});
        }
    }
    std::sort(mags.begin(), mags.end());
    min_abs = mags.empty() ? 0.0 : mags.front();
    median_abs = mags.empty() ? 0.0 : mags[mags.size() / 2];
    winding = total / (2.0 * M_PI);
    return ok;
}

int count_zeros_rect(const PotentialSpec& pot, BcType bc, Rect r) {
    const double jitter = 1e-6 * std::max(r.diam(), 1e-6);
    for (int attempt = 0; attempt < 3; ++attempt) {
        double w = 0.0, min_abs = 0.0, median_abs = 0.0;
        const bool ok = winding_number(pot, bc, r, w, min_abs, median_abs);
        const bool clean = min_abs >= 1e-8 * median_abs;
        const long n = std::lround(w);
        if (ok && clean && std::abs(w - static_cast<double>(n)) < 0.25)
            return static_cast<int>(n);
        r.x0 -= jitter;
        r.x1 += jitter;
        r.y0 -= jitter;
        r.y1 += jitter;
    }
    std::ostringstream os;
    os << "count_zeros: a denominator zero sits on the counting contour near ["
       << r.x0 << "," << r.x1 << "]x[" << r.y0 << "," << r.y1
       << "] after 3 jitter attempts";
    throw ContourTooClose(os.str());
}

double local_scale(const PotentialSpec& pot, BcType bc, cplx z) {
    const double h = 1e-3 * (1.0 + std::abs(z));
    double s = 0.0;
    for (const cplx dz : {cplx{h, 0.0}, cplx{-h, 0.0}, cplx{0.0, h}, cplx{0.0, -h}})
        s = std::max(s, std::abs(denominator_raw(pot, z + dz, bc)));
    return std::max(s, 1e-300);
}

cplx raw_derivative(const PotentialSpec& pot, BcType bc, cplx z, double h) {
    // central difference, spec step scaling
    const cplx fp = denominator_raw(pot, z + cplx{h, 0.0}, bc);
    const cplx fm = denominator_raw(pot, z - cplx{h, 0.0}, bc);
    return (fp - fm) / (2.0 * h);
}

cplx newton_polish(const PotentialSpec& pot, BcType bc, cplx z0, double eps_root,
                   double& rel_residual) {
    cplx z = z0;
    for (int it = 0; it < 50; ++it) {
        const cplx f = denominator_raw(pot, z, bc);
        const double h = 1e-7 * std::max(std::abs(z), 1.0);
        const cplx df = raw_derivative(pot, bc, z, h);
        if (df == cplx{0.0, 0.0}) break;
        const cplx step = f / df;
        z -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(z))) break;
    }
    rel_residual = std::abs(denominator_raw(pot, z, bc)) / local_scale(pot, bc, z);
    if (!(rel_residual < eps_root)) {
        std::ostringstream os;
        os << "Newton refinement stalled at z = (" << z.real() << ", " << z.imag()
           << ") with relative residual " << rel_residual;
        throw NonConvergence(os.str());
    }
    return z;
}

SpectralKind classify(cplx z, Family) {
    if (std::abs(z.real()) < axis_tol(z))
        return z.imag() > 0.0 ? SpectralKind::Bound : SpectralKind::AntiBound;
    return z.real() > 0.0 ? SpectralKind::Resonance : SpectralKind::AntiResonance;
}

} // namespace

std::string to_string(SpectralKind k) {
    switch (k) {
        case SpectralKind::Bound: return "Bound";
        case SpectralKind::AntiBound: return "AntiBound";
        case SpectralKind::Resonance: return "Resonance";
        case SpectralKind::AntiResonance: return "AntiResonance";
    }
    return "?";
}

std::vector<cplx> default_exclusions(const PotentialSpec& pot) {
    std::vector<cplx> out;
    for (const auto& s : pot.segments()) {
        if (s.height == 0.0) continue;
        const double q = std::sqrt(2.0 * pot.mass() * std::abs(s.height));
        out.push_back({0.0, q});
        out.push_back({0.0, -q});
    }
    return out;
}

int count_zeros(const PotentialSpec& pot, Family fam, const SearchRegion& region) {
    Rect r{region.re_min(), region.re_max(), region.im_min(), region.im_max()};
    if (!(r.width() > 0.0) || !(r.height() > 0.0))
        throw Error("count_zeros: degenerate search rectangle");
    return count_zeros_rect(pot, fam.bc, r);
}

FindResult find_spectrum(const PotentialSpec& pot, Family fam, const SearchRegion& region,
                         double eps_root) {
    Rect root{region.re_min(), region.re_max(), region.im_min(), region.im_max()};
    if (!(root.width() > 0.0) || !(root.height() > 0.0))
        throw Error("find_spectrum: degenerate search rectangle");

    std::vector<cplx> exclusions = region.exclusions;
    for (cplx p : default_exclusions(pot)) exclusions.push_back(p);

    FindResult result;
    for (cplx p : exclusions)
        if (root.contains(p)) result.excluded.push_back(p);

    std::vector<std::pair<Rect, int>> stack{{root, 0}};
    std::vector<cplx> roots;
    while (!stack.empty()) {
        auto [r, depth] = stack.back();
        stack.pop_back();
        const int n = count_zeros_rect(pot, fam.bc, r);
        if (n == 0) continue;
        if (n == 1) {
            double rel = 0.0;
            const cplx z = newton_polish(pot, fam.bc, r.center(), eps_root, rel);
            if (!r.contains(z, 1e-6 * (1.0 + r.diam())) && depth < region.max_subdivision_depth) {
                // Newton escaped the box; split further and retry.
            } else {
                roots.push_back(z);
                continue;
            }
        }
        if (depth >= region.max_subdivision_depth) {
            std::ostringstream os;
            os << "find_spectrum: max subdivision depth " << region.max_subdivision_depth
               << " exceeded with " << n << " zeros left in a box";
            throw MaxDepthExceeded(os.str());
        }
        // split the longer side, slightly off-center so zeros avoid the cut
        if (r.width() >= r.height()) {
            const double xm = r.x0 + r.width() * 0.5000003;
            stack.push_back({{r.x0, xm, r.y0, r.y1}, depth + 1});
            stack.push_back({{xm, r.x1, r.y0, r.y1}, depth + 1});
        } else {
            const double ym = r.y0 + r.height() * 0.5000003;
            stack.push_back({{r.x0, r.x1, r.y0, ym}, depth + 1});
            stack.push_back({{r.x0, r.x1, ym, r.y1}, depth + 1});
        }
    }

    // dedupe and drop anything that coincides with an exclusion point
    std::vector<cplx> unique;
    for (cplx z : roots) {
        bool dup = false;
        for (cplx u : unique)
            if (std::abs(z - u) < 1e-8 * (1.0 + std::abs(z))) dup = true;
        if (dup) continue;
        bool is_excluded = false;
        for (cplx p : exclusions)
            if (std::abs(z - p) < 1e-6 * (1.0 + std::abs(z))) is_excluded = true;
        if (is_excluded) {
            result.excluded.push_back(z);
            continue;
        }
        unique.push_back(z);
    }

    for (cplx z : unique) {
        SpectralPoint sp;
        sp.z = z;
        sp.energy = z * z / (2.0 * pot.mass());
        sp.family = fam;
        sp.kind = classify(z, fam);
        sp.residual =
            std::abs(denominator_raw(pot, z, fam.bc)) / local_scale(pot, fam.bc, z);
        result.points.push_back(sp);
    }
    std::sort(result.points.begin(), result.points.end(),
              [](const SpectralPoint& a, const SpectralPoint& b) {
                  if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
                  return a.z.imag() < b.z.imag();
              });
    return result;
}

cplx denominator_derivative(const PotentialSpec& pot, cplx z, BcType bc) {
    // 5-point stencil on the scale-stripped denominator, then the scale
    // factor at z. Exact at zeros of D (where scale' * D_raw vanishes).
    const double h = 1e-3 * (1.0 + std::abs(z));
    auto f = [&](cplx w) { return denominator_raw(pot, w, bc); };
    const cplx d_raw =
        (-f(z + 2.0 * h) + 8.0 * f(z + cplx{h, 0}) - 8.0 * f(z - cplx{h, 0}) + f(z - 2.0 * h)) /
        (12.0 * h);
    cplx scale = 2.0 * kI * (bc == BcType::In ? 1.0 : -1.0);
    for (std::size_t j = 0; j < pot.segments().size(); ++j)
        scale *= std::sqrt(pot.local_k2(z, j));
    return scale * d_raw;
}

namespace {

struct PoleState {
    Amplitudes amps;    // with D forced to exactly zero
    InteriorState interior;
    cplx u0, uL;        // boundary values
};

PoleState make_pole_state(const PotentialSpec& pot, const SpectralPoint& sp) {
    PoleState ps;
    ps.amps = amplitudes(pot, sp.z, sp.family);
    ps.amps.D = {0.0, 0.0};
    ps.interior = interior_state(pot, ps.amps);
    ps.u0 = ps.interior.segs.front().phi;
    ps.uL = ps.interior.phi_L;
    return ps;
}

cplx interior_integral(const PotentialSpec& pot, const PoleState& ps,
                       bool conjugate_first) {
    auto f = [&](double x) {
        const cplx v = master_eval_coeffs(pot, ps.amps.z, ps.amps.family, ps.amps.D,
                                          ps.amps.R_num, ps.amps.T_num, ps.amps.N,
                                          ps.interior, x);
        return conjugate_first ? std::conj(v) * v : v * v;
    };
    const auto q = integrate_gk(f, 0.0, pot.total_width(), 1e-13, 1e-11);
    return q.value;
}

} // namespace

double verify_pole_location(const PotentialSpec& pot, const SpectralPoint& sp) {
    if (std::abs(sp.z.real()) < axis_tol(sp.z))
        throw NotAResonance(
            "verify_pole_location: purely imaginary momentum; use the momentum-derivative "
            "variant");
    const PoleState ps = make_pole_state(pot, sp);
    const double i2 = interior_integral(pot, ps, true).real();
    const double s = static_cast<double>(sp.family.sign());
    const double beta_pred =
        -s * (std::norm(ps.u0) + std::norm(ps.uL)) / (2.0 * i2);
    return std::abs(sp.z.imag() - beta_pred) / std::abs(sp.z.imag());
}

ImaginaryPoleCheck verify_pole_location_imaginary(const PotentialSpec& pot,
                                                  const SpectralPoint& sp) {
    if (std::abs(sp.z.real()) >= axis_tol(sp.z))
        throw Error("verify_pole_location_imaginary: momentum is not purely imaginary");

    if (sp.family.bc == BcType::Out) {
        // conjugate problem: the Out state at z is the In state at conj(z)
        SpectralPoint mirror = sp;
        mirror.z = std::conj(sp.z);
        mirror.family = Family{sp.family.direction, BcType::In};
        ImaginaryPoleCheck c = verify_pole_location_imaginary(pot, mirror);
        return c;
    }

    const PoleState ps = make_pole_state(pot, sp);
    const cplx z0 = sp.z;
    const double L = pot.total_width();
    const cplx N = ps.amps.N;
    const cplx R = ps.amps.R_num;
    const cplx T = ps.amps.T_num;

    const cplx i2 = interior_integral(pot, ps, false); // generalized, no conjugation
    const cplx dD = denominator_derivative(pot, z0, sp.family.bc);

    const cplx lhs = 2.0 * z0 * i2;
    const cplx rhs = kI * N * N * (T * T * std::exp(2.0 * kI * z0 * L) + R * R) -
                     2.0 * kI * z0 * N * N * R * dD;

    ImaginaryPoleCheck out;
    out.derivative_identity_residual =
        std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));

    const double i2c = interior_integral(pot, ps, true).real();
    const double s = static_cast<double>(sp.family.sign());
    const double beta_pred = -s * (std::norm(ps.u0) + std::norm(ps.uL)) / (2.0 * i2c);
    out.boundary_ratio_discrepancy = std::abs(sp.z.imag() - beta_pred) / std::abs(sp.z.imag());
    return out;
}

std::string spectrum_to_csv(const std::vector<SpectralPoint>& pts) {
    std::string out = "kind,family,re_z,im_z,re_E,im_E,residual\n";
    char buf[256];
    for (const auto& p : pts) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      to_string(p.kind).c_str(), to_string(p.family).c_str(), p.z.real(),
                      p.z.imag(), p.energy.real(), p.energy.imag(), p.residual);
        out += buf;
    }
    return out;
}

} // namespace qprod
