#include "qprod/faddeeva.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace qprod {

namespace {

using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};
constexpr double kSqrtPi = 1.7724538509055160273;

/// Rational-series coefficients (Weideman 1994 construction, N terms).
/// a'_j = Re(DFT of the half-circle samples), computed once.
template <int N>
const std::array<double, N>& weideman_coeffs() {
    static const std::array<double, N> coeffs = [] {
        constexpr int M = 2 * N;
        constexpr int M2 = 2 * M;
        const double L = std::sqrt(N / std::sqrt(2.0));
        // samples f[n], n = 0..M2-1: f[0] = 0, then t_k = L tan(k pi / M2)
        // for k = -M+1 .. M-1.
        std::vector<double> f(M2, 0.0);
        for (int idx = 1; idx < M2; ++idx) {
            const int k = idx - M; // -M+1 .. M-1
            const double theta = k * M_PI / M;
            const double t = L * std::tan(theta / 2.0);
            f[idx] = std::exp(-t * t) * (L * L + t * t);
        }
        // g = fftshift(f); c_j = Re(DFT(g))[j] / M2 for j = 1..N
        std::array<double, N> c{};
        for (int j = 1; j <= N; ++j) {
            double acc = 0.0;
            for (int n = 0; n < M2; ++n) {
                const double g = f[(n + M) % M2];
                acc += g * std::cos(2.0 * M_PI * j * n / M2);
            }
            c[j - 1] = acc / M2; // coefficient of Z^{j-1}
        }
        return c;
    }();
    return coeffs;
}

/// Weideman rational series; requires Im z >= 0.
cplx w_weideman(cplx z) {
    constexpr int N = 64;
    const auto& c = weideman_coeffs<N>();
    const double L = std::sqrt(N / std::sqrt(2.0));
    const cplx iz = kI * z;
    const cplx denom = L - iz;
    const cplx Z = (L + iz) / denom;
    cplx p{0.0, 0.0};
    for (int j = N - 1; j >= 0; --j) p = p * Z + c[j];
    return 2.0 * p / (denom * denom) + (1.0 / kSqrtPi) / denom;
}

/// Laplace continued fraction, accurate for large |z| with Im z >= 0.
cplx w_contfrac(cplx z) {
    constexpr int kLevels = 24;
    cplx t{0.0, 0.0};
    for (int n = kLevels; n >= 1; --n) t = (n / 2.0) / (z - t);
    return kI / (kSqrtPi * (z - t));
}

cplx exp_guarded(cplx z) {
    // exp with graceful overflow to inf (std::exp already does this for the
    // magnitude; keep phase finite).
    if (z.real() > 709.0) {
        const double c = std::cos(z.imag());
        const double s = std::sin(z.imag());
        const double inf = std::numeric_limits<double>::infinity();
        return {c == 0.0 ? 0.0 : inf * c, s == 0.0 ? 0.0 : inf * s};
    }
    return std::exp(z);
}

} // namespace

cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) {
        if (std::norm(z) >= 144.0) return w_contfrac(z);
        return w_weideman(z);
    }
    // reflection into the upper half plane
    const cplx wneg = faddeeva_w(-z);
    return 2.0 * exp_guarded(-z * z) - wneg;
}

cplx erfcx_complex(cplx t) { return faddeeva_w(kI * t); }

} // namespace qprod
