#include "qprod/regint.hpp"

#include <cmath>

#include "qprod/faddeeva.hpp"

namespace qprod {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr double kSqrtPi = 1.7724538509055160273;
} // namespace

bool in_convergence_sector(cplx k) {
    if (k == cplx{0.0, 0.0}) return false;
    const double th = std::arg(k); // principal, (-pi, pi]
    return th > Wedge::ray_hi || th < Wedge::ray_lo;
}

bool Wedge::test(cplx z_prime) const { return !in_convergence_sector(z_prime - apex); }

cplx gaussian_j(cplx k, double lambda) {
    const double sl = std::sqrt(lambda);
    if (k == cplx{0.0, 0.0}) return {kSqrtPi / (2.0 * sl), 0.0};
    const cplx tau = -kI * k / (2.0 * sl);
    // e^{tau^2} erfc(tau) = w(i tau)
    const cplx W = faddeeva_w(kI * tau);
    return (kI / k) * kSqrtPi * tau * W;
}

double gaussian_j_log_abs(cplx k, double lambda) {
    const double sl = std::sqrt(lambda);
    if (k == cplx{0.0, 0.0}) return std::log(kSqrtPi / (2.0 * sl));
    const cplx tau = -kI * k / (2.0 * sl);
    const double re_tau2 = (tau * tau).real();
    if (re_tau2 > 600.0) {
        // w(i tau) = 2 e^{tau^2} - w(-i tau); the reflected part is O(1/tau)
        // and negligible against the exponential.
        return std::log(kSqrtPi * std::abs(tau) / std::abs(k)) + M_LN2 + re_tau2;
    }
    const cplx v = gaussian_j(k, lambda);
    return std::log(std::abs(v));
}

RegIntValue reg_i(cplx k) {
    RegIntValue out;
    if (k == cplx{0.0, 0.0}) {
        out.tag = RegIntValue::Tag::Divergent;
        return out;
    }
    if (k.imag() == 0.0) {
        out.tag = RegIntValue::Tag::Distribution;
        out.pv_coeff = kI;
        out.delta_coeff = {M_PI, 0.0};
        return out;
    }
    if (in_convergence_sector(k)) {
        out.tag = RegIntValue::Tag::Finite;
        out.finite_value = kI / k;
        return out;
    }
    out.tag = RegIntValue::Tag::Divergent;
    return out;
}

WedgeClass wedge_classify(cplx z, cplx z_prime) {
    const Wedge w{std::conj(z)};
    return w.test(z_prime) ? WedgeClass::Divergent : WedgeClass::Convergent;
}

} // namespace qprod
