#include "qprod/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qprod/quadrature.hpp"

namespace qprod {

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(b)); ++it) {
        const double c = 0.5 * (a + b);
        const double fc = f(c);
        if ((fa <= 0.0) == (fc <= 0.0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::vector<double> square_well_bound_oracle(double m, double V, double L) {
    if (!(V < 0.0)) throw Error("square_well_bound_oracle: requires a well, V < 0");
    if (!(m > 0.0) || !(L > 0.0)) throw Error("square_well_bound_oracle: m, L > 0 required");
    const double theta0 = 0.5 * L * std::sqrt(2.0 * m * std::abs(V));
    std::vector<double> qs;
    auto q_of = [&](double th) {
        const double s = theta0 * theta0 - th * th;
        return (2.0 / L) * std::sqrt(std::max(s, 0.0));
    };

    // even channel: theta tan(theta) = sqrt(theta0^2 - theta^2),
    // one root per branch theta in [n pi, n pi + pi/2)
    auto fe = [&](double th) { return th * std::tan(th) - 0.5 * L * q_of(th); };
    for (int n = 0; n * M_PI < theta0; ++n) {
        const double a = n * M_PI + 1e-12;
        const double b = std::min(n * M_PI + M_PI_2 - 1e-12, theta0 - 1e-13);
        if (a >= b) continue;
        if (fe(a) * fe(b) < 0.0) {
            const double th = bisect(fe, a, b);
            const double q = q_of(th);
            if (q > 1e-12) qs.push_back(q);
        }
    }
    // odd channel: theta cot(theta) = -sqrt(theta0^2 - theta^2),
    // one root per branch theta in (n pi + pi/2, (n+1) pi)
    auto fo = [&](double th) { return th / std::tan(th) + 0.5 * L * q_of(th); };
    for (int n = 0; (n + 0.5) * M_PI < theta0; ++n) {
        const double a = (n + 0.5) * M_PI + 1e-12;
        const double b = std::min((n + 1.0) * M_PI - 1e-12, theta0 - 1e-13);
        if (a >= b) continue;
        if (fo(a) * fo(b) < 0.0) {
            const double th = bisect(fo, a, b);
            const double q = q_of(th);
            if (q > 1e-12) qs.push_back(q);
        }
    }
    std::sort(qs.begin(), qs.end());
    return qs;
}

std::vector<std::pair<double, cplx>> numeric_product(const StateRef& a, const StateRef& b,
                                                     const QuadratureConfig& cfg) {
    if (!a.pot || !b.pot || !(*a.pot == *b.pot))
        throw SamePotentialRequired("numeric_product: states live on different potentials");
    for (std::size_t i = 1; i < cfg.lambda_sequence.size(); ++i)
        if (!(cfg.lambda_sequence[i] < cfg.lambda_sequence[i - 1]) ||
            !(cfg.lambda_sequence[i] > 0.0))
            throw Error("numeric_product: lambda sequence must be strictly decreasing, > 0");

    // Tail rate of the product: exponents may cancel between bra and ket, so
    // the cutoff and the overflow guard use the pair rate, not the single-state
    // worst case. The tail product itself is evaluated from the combined
    // exponents, which stays finite even where one factor alone overflows.
    const double g_pair = pair_growth_rate(a, b);
    const double L = a.pot->total_width();
    const auto left = tail_terms(a, b, false);
    const auto right = tail_terms(a, b, true);
    std::vector<std::pair<double, cplx>> out;

    auto tail_eval = [](const std::vector<TailTerm>& terms, double lambda, double x) {
        cplx v{0.0, 0.0};
        const cplx ix{0.0, x};
        for (const auto& t : terms) v += t.coeff * std::exp(ix * t.mu);
        return std::exp(-lambda * x * x) * v;
    };

    for (double lambda : cfg.lambda_sequence) {
        // largest tail term is exp(g_pair^2 / (4 lambda)); refuse to evaluate
        // past double range
        const double log_peak = g_pair * g_pair / (4.0 * lambda);
        if (log_peak > 600.0) {
            if (out.empty()) {
                std::ostringstream os;
                os << "numeric_product: integrand peak exp(" << log_peak
                   << ") overflows at lambda = " << lambda
                   << "; start the sequence at larger lambda";
                throw QuadratureFailure(os.str());
            }
            break; // blow-up already evident from earlier entries
        }
        // where the Gaussian beats the worst tail growth by e^{-73} ~ 1e-32
        const double x_max =
            (0.5 * g_pair + std::sqrt(0.25 * g_pair * g_pair + 73.0 * lambda)) / lambda;
        auto f_mid = [&](double x) {
            return std::exp(-lambda * x * x) * std::conj(a.eval(x)) * b.eval(x);
        };
        auto f_left = [&](double x) { return tail_eval(left, lambda, x); };
        auto f_right = [&](double x) { return tail_eval(right, lambda, x); };

        cplx total{0.0, 0.0};
        double err = 0.0;
        bool conv = true;
        auto accumulate = [&](const std::function<cplx(double)>& f, double lo, double hi) {
            const QuadResult q = integrate_gk(f, lo, hi, cfg.abs_tol, cfg.rel_tol, 22);
            total += q.value;
            err += q.error_estimate;
            conv = conv && q.converged;
        };
        accumulate(f_left, -x_max, 0.0);
        accumulate(f_mid, 0.0, L);
        accumulate(f_right, L, L + x_max);
        if (!conv && err > 1e-4 * std::max(1.0, std::abs(total))) {
            std::ostringstream os;
            os << "numeric_product: achieved tolerance " << err << " at lambda = " << lambda
               << " (value magnitude " << std::abs(total) << ")";
            throw QuadratureFailure(os.str());
        }
        out.emplace_back(lambda, total);
        if (std::abs(total) > cfg.blowup_stop * (std::abs(out.front().second) + 1.0)) break;
    }
    return out;
}

} // namespace qprod
