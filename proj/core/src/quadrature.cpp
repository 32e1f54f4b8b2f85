#include "qprod/quadrature.hpp"

#include <array>
#include <cmath>

namespace qprod {

namespace {

using cplx = std::complex<double>;

// QUADPACK dqk15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr std::array<double, 4> kWg = {0.1294849661688697, 0.2797053914892767,
                                       0.3818300505051189, 0.4179591836734694};

struct Panel {
    cplx integral{};
    double error = 0.0;
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx resk = kWgk[7] * fc;
    cplx resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const cplx fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    Panel p;
    p.integral = resk * h;
    p.error = std::abs((resk - resg) * h);
    return p;
}

void adapt(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
           double rel_tol, int depth, int max_depth, cplx& total, double& err_total,
           bool& converged) {
    const Panel p = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(p.integral));
    if (p.error <= tol || depth >= max_depth) {
        if (p.error > tol) converged = false;
        total += p.integral;
        err_total += p.error;
        return;
    }
    const double c = 0.5 * (a + b);
    adapt(f, a, c, abs_tol * 0.5, rel_tol, depth + 1, max_depth, total, err_total, converged);
    adapt(f, c, b, abs_tol * 0.5, rel_tol, depth + 1, max_depth, total, err_total, converged);
}

} // namespace

QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_depth) {
    QuadResult r;
    if (a == b) return r;
    adapt(f, a, b, abs_tol, rel_tol, 0, max_depth, r.value, r.error_estimate, r.converged);
    return r;
}

} // namespace qprod
