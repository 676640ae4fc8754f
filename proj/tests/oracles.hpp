#pragma once

// Test-only oracles, independent of the solver paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "epinet/analytics.hpp"

namespace epinet::oracle {

// Smallest root of s = E[(1-psi+psi s)^(D~-1)] by bisection on
// f(s) = excess_pgf(...) - s over [0, 1-1e-9]; independent of the
// fixed-point iteration.  f is convex with exactly two zeros on [0,1]
// (the root and 1 itself), so f > 0 left of the root and f < 0 between
// the root and 1; a single bracket suffices.
inline double qtilde_bisection(const EpidemicParameters& p) {
    const double psi = compute_psi(p);
    const auto f = [&](double s) { return p.degree.excess_pgf(1.0 - psi + psi * s) - s; };
    if (compute_r0(p) <= 1.0) return 1.0;
    // f(1 - 1e-9) < 0 already follows from r0 > 1 and convexity (f vanishes
    // at 1 with slope r0 - 1 > 0); evaluating it would force million-term
    // series for heavy-tailed laws, so the bracket is taken on trust
    double lo = 0.0, hi = 1.0 - 1e-9;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Expected alive count m(t) of a CMJ process from the renewal equation
// m(t) = P(Lambda > t) + integral_0^t intensity(s) m(t-s) ds,
// discretized with the trapezoid rule on a uniform grid.
inline std::vector<double> renewal_mean(const std::function<double(double)>& intensity,
                                        const std::function<double(double)>& survival,
                                        double t_end, double h) {
    const int n = static_cast<int>(std::ceil(t_end / h));
    std::vector<double> m(static_cast<std::size_t>(n) + 1);
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) f[static_cast<std::size_t>(i)] = intensity(i * h);
    m[0] = survival(0.0);
    for (int i = 1; i <= n; ++i) {
        double conv = 0.5 * f[static_cast<std::size_t>(i)] * m[0];
        for (int j = 1; j < i; ++j)
            conv += f[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(i - j)];
        const double rhs = survival(i * h) + h * conv;
        m[static_cast<std::size_t>(i)] = rhs / (1.0 - 0.5 * h * f[0]);
    }
    return m;
}

inline double mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double mu = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// Kolmogorov-Smirnov statistic of samples against a survival function.
// Atoms (e.g. a cutoff mass) are handled by comparing the pre-jump count
// against the left limit of the cdf.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& survival) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        const double v = samples[i];
        std::size_t j = i;
        while (j < samples.size() && samples[j] == v) ++j;
        const double cdf = 1.0 - survival(v);
        const double cdf_left = 1.0 - survival(std::nextafter(v, -1.0));
        d = std::max(d, std::abs(cdf - static_cast<double>(j) / n));
        d = std::max(d, std::abs(cdf_left - static_cast<double>(i) / n));
        i = j;
    }
    return d;
}

// Upper chi-square quantile via the Wilson-Hilferty cube approximation.
inline double chi_square_upper(double df, double z) {
    const double a = 2.0 / (9.0 * df);
    const double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double xb = mean(x), yb = mean(y), num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - xb) * (y[i] - yb);
        den += (x[i] - xb) * (x[i] - xb);
    }
    return num / den;
}

// Mixed-family parameter draws for the property suites.
inline EpidemicParameters random_params(Rng& rng) {
    const int fam = static_cast<int>(rng.uniform_below(5));
    DegreeModel degree = DegreeModel::regular(2 + static_cast<int>(rng.uniform_below(7)));
    switch (fam) {
        case 0: break;
        case 1: degree = DegreeModel::poisson(0.8 + 5.0 * rng.uniform01()); break;
        case 2: {
            const double p1 = 0.2 + 0.5 * rng.uniform01();
            const double p2 = (1.0 - p1) * rng.uniform01();
            const double p3 = 1.0 - p1 - p2;
            degree = DegreeModel::table(
                {{1, p1}, {3, p2}, {4 + static_cast<int>(rng.uniform_below(8)), p3}});
            break;
        }
        case 3: degree = DegreeModel::power_law(2.2 + 1.3 * rng.uniform01(), 1, -1); break;
        default: degree = DegreeModel::power_law(2.4 + rng.uniform01(), 2, 60); break;
    }
    const int lfam = static_cast<int>(rng.uniform_below(5));
    InfectiousPeriodModel period = InfectiousPeriodModel::exponential(0.4 + 1.6 * rng.uniform01());
    switch (lfam) {
        case 0: break;
        case 1: period = InfectiousPeriodModel::constant(0.3 + 2.0 * rng.uniform01()); break;
        case 2:
            period = InfectiousPeriodModel::exponential_cutoff(0.3 + rng.uniform01(),
                                                               0.5 + 4.0 * rng.uniform01());
            break;
        case 3:
            period =
                InfectiousPeriodModel::gamma(0.6 + 2.0 * rng.uniform01(), 0.5 + 1.5 * rng.uniform01());
            break;
        default: period = InfectiousPeriodModel::infinite(); break;
    }
    // sure transmission with sure offspring has extinction probability 0,
    // outside the q~* in (0,1) regime the suites assert
    if (period.family() == "infinite" && degree.pmf(1) <= 0.0)
        period = InfectiousPeriodModel::exponential(0.5 + rng.uniform01());
    return {degree, period, 0.4 + 2.0 * rng.uniform01()};
}

// Draws restricted to finite second moments (closed-form growth rates).
inline EpidemicParameters random_params_finite_variance(Rng& rng) {
    for (;;) {
        auto p = random_params(rng);
        if (std::isfinite(p.degree.size_biased_excess_mean())) return p;
    }
}

} // namespace epinet::oracle
