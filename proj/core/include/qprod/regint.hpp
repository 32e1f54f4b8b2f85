#pragma once

#include <complex>

namespace qprod {

using cplx = std::complex<double>;

/// Outcome of the regularized half-line integral I(k) = lim J(k, lambda).
///
/// Finite:       I(k) = i/k, for k != 0 with arg(k) strictly inside
///               (-pi/4, 5pi/4) (principal argument; the allowed set in
///               (-pi, pi] form is (-pi/4, pi] union (-pi, -3pi/4)).
/// Distribution: real k; i PV(1/k) + pi delta(k).
/// Divergent:    everything else, including k = 0 and the closed wedge
///               boundary rays.
struct RegIntValue {
    enum class Tag { Finite, Divergent, Distribution };
    Tag tag = Tag::Divergent;
    cplx finite_value{};   // i/k when Finite
    cplx pv_coeff{};       // coefficient of PV(1/k) when Distribution (= i)
    cplx delta_coeff{};    // coefficient of delta(k) when Distribution (= pi)
};

/// Divergence wedge of a state with momentum z: apex at conj(z), divergent
/// directions arg(z' - apex) in the closed cone [-3pi/4, -pi/4].
struct Wedge {
    cplx apex{};
    /// true iff the pair (apex owner, z') is divergent
    bool test(cplx z_prime) const;
    /// boundary ray angles (radians, principal)
    static constexpr double ray_lo = -2.356194490192344837; // -3pi/4
    static constexpr double ray_hi = -0.785398163397448279; // -pi/4
};

/// arg(k) lies in the open convergence sector (-pi/4, 5pi/4); false for k=0
/// and on the boundary rays (classified divergent by convention).
bool in_convergence_sector(cplx k);

/// Gaussian-regularized half-line integral
/// J(k, lambda) = integral_0^inf exp(-lambda x^2) exp(i k x) dx
///              = (i/k) sqrt(pi) tau exp(tau^2) erfc(tau),  tau = -i k / (2 sqrt(lambda)),
/// evaluated through the scaled form w(i tau); J(0, lambda) = sqrt(pi)/(2 sqrt(lambda)).
/// Overflow in the divergent sector yields inf components.
cplx gaussian_j(cplx k, double lambda);

/// log |J(k, lambda)|, finite even where J overflows doubles.
double gaussian_j_log_abs(cplx k, double lambda);

/// The lambda -> 0 prescription.
RegIntValue reg_i(cplx k);

enum class WedgeClass { Convergent, Divergent };

/// Pairwise wedge rule: divergent iff arg(z' - conj(z)) falls outside the
/// open sector (-pi/4, 5pi/4). Reciprocal: classify(z, z') == classify(z', z).
WedgeClass wedge_classify(cplx z, cplx z_prime);

} // namespace qprod
