#pragma once

#include <utility>
#include <vector>

#include "qprod/products.hpp"

namespace qprod {

/// Settings for the brute-force regularized quadrature oracle.
struct QuadratureConfig {
    std::vector<double> lambda_sequence{1e-2, 1e-3, 1e-4}; // strictly decreasing
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    /// stop the sweep once |value| exceeds this multiple of the first value
    double blowup_stop = 1e9;
};

/// Direct evaluation of integral exp(-lambda x^2) conj(Phi_a) Phi_b dx over
/// the truncated real line, one entry per lambda. The truncation point is
/// x_max = (g + sqrt(g^2 + 73 lambda)) / lambda with g = max |Im z|, where the
/// Gaussian beats the worst-case exponential growth by e^{-73} ~ 1e-32.
/// The sweep stops early once blow-up is evident (the integrand's peak would
/// overflow doubles); a first-lambda overflow throws QuadratureFailure.
std::vector<std::pair<double, cplx>> numeric_product(const StateRef& a, const StateRef& b,
                                                     const QuadratureConfig& cfg);

/// All decay rates q > 0 of the square well (support [0,L], depth V < 0) from
/// the even/odd transcendental matching conditions, bisected to 1e-12.
/// These are the upper-imaginary-axis zeros of the In-family denominator.
std::vector<double> square_well_bound_oracle(double m, double V, double L);

} // namespace qprod
