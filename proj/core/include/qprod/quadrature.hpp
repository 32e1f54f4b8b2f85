#pragma once

#include <complex>
#include <functional>

namespace qprod {

/// Adaptive Gauss-Kronrod (G7, K15) integration of a complex-valued function
/// on [a, b]. Bisects while the local K-G error estimate exceeds
/// max(abs_tol_local, rel_tol * |I_local|), down to max_depth.
struct QuadResult {
    std::complex<double> value{};
    double error_estimate = 0.0;
    bool converged = true;
};

QuadResult integrate_gk(const std::function<std::complex<double>(double)>& f, double a,
                        double b, double abs_tol = 1e-12, double rel_tol = 1e-10,
                        int max_depth = 30);

} // namespace qprod
