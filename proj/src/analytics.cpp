#include "epinet/analytics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "epinet/lambert_w.hpp"

namespace epinet {

namespace {

constexpr double kRootTol = 1e-12;        // absolute tolerance on root abscissas
constexpr double kFixedPointTol = 1e-13;  // successive-iterate tolerance for q~*
constexpr double kCriticalGuard = 1e-8;
constexpr long kFixedPointCap = 1000000;
constexpr double kBoundaryTol = 1e-9;  // Remark-style boundary-limit comparisons

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

nlohmann::json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

// g strictly decreasing with g(lo) > 1 > g(hi); returns the crossing point
double bisect_decreasing(const std::function<double(double)>& g, double lo, double hi,
                         RootDiagnostics* diag) {
    const double lo0 = lo, hi0 = hi;
    int iter = 0;
    while (hi - lo > kRootTol && iter < 200) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
        ++iter;
    }
    const double root = 0.5 * (lo + hi);
    if (diag) {
        diag->value = root;
        diag->residual = std::abs(g(root) - 1.0);
        diag->iterations = iter;
        diag->bracket_lo = lo0;
        diag->bracket_hi = hi0;
    }
    return root;
}

double solve_growth_root(const std::function<double(double)>& g, RootDiagnostics* diag) {
    double hi = 1.0;
    int doublings = 0;
    while (g(hi) >= 1.0) {
        hi *= 2.0;
        if (++doublings > 500) throw std::runtime_error("growth-rate bracket did not close");
    }
    return bisect_decreasing(g, 0.0, hi, diag);
}

// alpha = inf{x : g(x) < 1} for strictly decreasing g with g(0) < 1 and
// divergence abscissa `dagger` (may be -inf).  When the boundary limit of g
// exceeds 1 the infimum is the root of g(x) = 1; otherwise it is dagger
// itself, Malthusian only if the limit equals 1.
AlphaStarResult solve_decay_root(const std::function<double(double)>& g, double dagger,
                                 RootDiagnostics* diag) {
    AlphaStarResult res;
    res.dagger = dagger;
    if (std::isinf(dagger)) {
        double lo = -1.0;
        int doublings = 0;
        while (g(lo) <= 1.0) {
            lo *= 2.0;
            if (++doublings > 500) throw std::runtime_error("decay-rate bracket did not close");
        }
        res.value = bisect_decreasing(g, lo, 0.0, diag);
        res.malthusian = true;
        return res;
    }
    // monotone limit from the right: x_j = dagger + 2^{-j}, early exit once
    // the value passes 1 (a root certainly exists then)
    double prev = nan_value();
    for (int j = 0; j <= 60; ++j) {
        const double x = dagger + std::ldexp(1.0, -j);
        if (x >= 0.0) continue;
        const double v = g(x);
        if (v > 1.0) {
            res.value = bisect_decreasing(g, x, 0.0, diag);
            res.malthusian = true;
            return res;
        }
        if (!std::isnan(prev) && std::abs(v - prev) < kBoundaryTol) {
            prev = v;
            break;
        }
        prev = v;
    }
    // finite boundary limit <= 1: the infimum sits at the divergence abscissa
    res.value = dagger;
    res.malthusian = std::abs(prev - 1.0) <= kBoundaryTol;
    if (diag) {
        diag->value = dagger;
        diag->residual = std::abs(prev - 1.0);
        diag->iterations = 0;
        diag->bracket_lo = dagger;
        diag->bracket_hi = 0.0;
    }
    return res;
}

} // namespace

nlohmann::json EpidemicParameters::descriptor() const {
    return {{"degree", degree.descriptor()},
            {"infectious_period", period.descriptor()},
            {"beta", beta}};
}

EpidemicParameters EpidemicParameters::from_json(const nlohmann::json& j) {
    EpidemicParameters p{DegreeModel::from_json(j.at("degree")),
                         InfectiousPeriodModel::from_json(j.at("infectious_period")),
                         j.at("beta").get<double>()};
    if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    return p;
}

double compute_psi(const EpidemicParameters& p) { return contact_transform(p.period, p.beta, 0.0); }

double compute_r0(const EpidemicParameters& p) {
    const double em = p.degree.size_biased_excess_mean();
    const double psi = compute_psi(p);
    if (std::isinf(em)) return psi > 0.0 ? kInf : 0.0;
    return psi * em;
}

double solve_qtilde_star(const EpidemicParameters& p, RootDiagnostics* diag) {
    const double psi = compute_psi(p);
    if (compute_r0(p) <= 1.0) {
        if (diag) *diag = RootDiagnostics{1.0, 0.0, 0, 0.0, 1.0};
        return 1.0;  // subcritical: extinction certain
    }
    double s = 0.0;
    for (long it = 0; it < kFixedPointCap; ++it) {
        const double next = p.degree.excess_pgf(1.0 - psi + psi * s);
        const double delta = next - s;
        s = next;
        if (std::abs(delta) < kFixedPointTol) {
            if (diag) {
                diag->value = s;
                diag->residual = std::abs(p.degree.excess_pgf(1.0 - psi + psi * s) - s);
                diag->iterations = static_cast<int>(it + 1);
                diag->bracket_lo = 0.0;
                diag->bracket_hi = 1.0;
            }
            return s;
        }
    }
    // the iteration crawls when r0* is within ~1e-6 of 1 (vaccination sweeps
    // grazing criticality); the iterate is still a lower bound on the root,
    // so finish with a bracketed bisection on f(s) = excess_pgf(Q(s)) - s,
    // walking the upper end in from the iterate to keep series arguments
    // away from 1
    const auto f = [&](double t) { return p.degree.excess_pgf(1.0 - psi + psi * t) - t; };
    double lo = s, hi = s + 0.125 * (1.0 - s);
    while (f(hi) > 0.0 && 1.0 - hi > 1e-14) {
        lo = hi;
        hi = 1.0 - 0.5 * (1.0 - hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    s = 0.5 * (lo + hi);
    if (diag) {
        diag->value = s;
        diag->residual = std::abs(f(s));
        diag->iterations = static_cast<int>(kFixedPointCap);
        diag->bracket_lo = lo;
        diag->bracket_hi = hi;
    }
    return s;
}

double compute_qstar(const EpidemicParameters& p, double q_tilde_star) {
    const double psi = compute_psi(p);
    return p.degree.pgf(1.0 - psi + psi * q_tilde_star);
}

double compute_r0_star(const EpidemicParameters& p, double q_tilde_star) {
    const double psi = compute_psi(p);
    return psi * p.degree.excess_derivative_weighted(1.0 - psi + psi * q_tilde_star);
}

namespace {

double scaled_transform(double weight, const EpidemicParameters& p, double x) {
    const double phi = contact_transform(p.period, p.beta, x);
    if (std::isinf(weight)) return phi > 0.0 ? kInf : 0.0;
    if (std::isinf(phi)) return weight > 0.0 ? kInf : 0.0;
    return weight * phi;
}

} // namespace

double g_prime(const EpidemicParameters& p, double x) {
    return scaled_transform(p.degree.size_biased_excess_mean(), p, x);
}

double g_star(const EpidemicParameters& p, double q_tilde_star, double x) {
    const double psi = compute_psi(p);
    const double m = p.degree.excess_derivative_weighted(1.0 - psi + psi * q_tilde_star);
    return scaled_transform(m, p, x);
}

double solve_alpha_prime(const EpidemicParameters& p, RootDiagnostics* diag) {
    if (compute_r0(p) <= 1.0) throw std::domain_error("alpha' requires a supercritical model (r0 > 1)");
    const double em = p.degree.size_biased_excess_mean();
    if (std::isinf(em)) {
        if (diag) *diag = RootDiagnostics{kInf, 0.0, 0, 0.0, kInf};
        return kInf;
    }
    return solve_growth_root([&](double x) { return scaled_transform(em, p, x); }, diag);
}

AlphaStarResult solve_alpha_star(const EpidemicParameters& p, double q_tilde_star,
                                 RootDiagnostics* diag) {
    if (compute_r0(p) <= 1.0) throw std::domain_error("alpha* requires a supercritical model (r0 > 1)");
    const double psi = compute_psi(p);
    const double m = p.degree.excess_derivative_weighted(1.0 - psi + psi * q_tilde_star);
    if (!(psi * m < 1.0)) throw std::runtime_error("r0* >= 1: q~* is not the smallest fixed point");
    const double r = p.period.tail_rate();
    const double dagger = std::isinf(r) ? -kInf : -(p.beta + r);
    if (m == 0.0) {
        // empty final-phase offspring measure (deterministic sure-transmission
        // corner): g* vanishes identically, the infimum runs away to -inf
        if (diag) *diag = RootDiagnostics{-kInf, 1.0, 0, -kInf, 0.0};
        return AlphaStarResult{-kInf, dagger, false};
    }
    return solve_decay_root([&](double x) { return scaled_transform(m, p, x); }, dagger, diag);
}

bool check_condition_14(const EpidemicParameters& p, double alpha_star) {
    const double r = p.period.tail_rate();
    if (std::isinf(r)) return true;  // bounded support: every exponential moment is finite
    return std::abs(alpha_star) <= r * (1.0 + 1e-12) + 1e-12;
}

double duration_constant(const EpidemicParameters& p) {
    const double r0 = compute_r0(p);
    // near-critical guard first: alpha' degenerates to 0 on both sides of 1
    if (!std::isinf(r0) && std::abs(r0 - 1.0) < kCriticalGuard) return kInf;
    if (r0 <= 1.0) throw std::domain_error("duration constant requires a supercritical model");
    const double qt = solve_qtilde_star(p);
    const double ap = solve_alpha_prime(p);
    const auto as = solve_alpha_star(p, qt);
    return (std::isinf(ap) ? 0.0 : 1.0 / ap) + 1.0 / std::abs(as.value);
}

EpidemicSummary analyze(const EpidemicParameters& p) {
    EpidemicSummary s;
    s.psi = compute_psi(p);
    s.excess_mean = p.degree.size_biased_excess_mean();
    s.r0 = std::isinf(s.excess_mean) ? (s.psi > 0.0 ? kInf : 0.0) : s.psi * s.excess_mean;
    s.critical = std::isfinite(s.r0) && std::abs(s.r0 - 1.0) < kCriticalGuard;
    s.supercritical = s.r0 > 1.0 && !s.critical;

    if (!s.supercritical) {
        s.q_tilde_star = 1.0;
        s.big_q = 1.0;
        s.q_star = 1.0;
        s.m_star = s.excess_mean;
        s.r0_star = s.r0;
        s.alpha_prime = nan_value();
        s.alpha_dagger = nan_value();
        s.alpha_star = nan_value();
        s.alpha_star_is_malthusian = false;
        s.condition14 = false;
        s.duration_constant = s.critical ? kInf : nan_value();
        return s;
    }

    s.q_tilde_star = solve_qtilde_star(p, &s.qtilde_diag);
    s.big_q = 1.0 - s.psi + s.psi * s.q_tilde_star;
    s.q_star = p.degree.pgf(s.big_q);
    s.m_star = p.degree.excess_derivative_weighted(s.big_q);
    s.r0_star = s.psi * s.m_star;
    s.alpha_prime = solve_alpha_prime(p, &s.alpha_prime_diag);
    const auto as = solve_alpha_star(p, s.q_tilde_star, &s.alpha_star_diag);
    s.alpha_star = as.value;
    s.alpha_dagger = as.dagger;
    s.alpha_star_is_malthusian = as.malthusian;
    s.condition14 = check_condition_14(p, s.alpha_star);
    s.duration_constant =
        (std::isinf(s.alpha_prime) ? 0.0 : 1.0 / s.alpha_prime) + 1.0 / std::abs(s.alpha_star);
    return s;
}

EpidemicSummary vaccinated_summary(const EpidemicParameters& p, double c) {
    const EpidemicParameters thinned{p.degree.vaccinate(c), p.period, p.beta};
    return analyze(thinned);
}

SusceptibleDegreeProfile susceptible_degree_profile(const EpidemicParameters& p, double q_tilde_star) {
    const double psi = compute_psi(p);
    const double q = 1.0 - psi + psi * q_tilde_star;
    const double xi = p.degree.pgf(q);

    SusceptibleDegreeProfile prof;
    prof.p_ss = q > 0.0 ? q_tilde_star / q : 1.0;

    const int max_deg = p.degree.max_degree();
    const int hard_cap = 200000;
    double covered = 0.0;
    for (int k = 0;; ++k) {
        if (max_deg >= 0 && k > max_deg) break;
        const double qk = k == 0 ? 1.0 : std::pow(q, k);
        const double pk = p.degree.pmf(k) * qk / xi;
        const double ptk = k == 0 ? 0.0 : p.degree.size_biased_pmf(k) * (k == 1 ? 1.0 : std::pow(q, k - 1)) / q_tilde_star;
        prof.pk_star.push_back(pk);
        prof.ptilde_star.push_back(ptk);
        if (k >= 1) prof.excess_mean += (k - 1) * ptk;
        covered += pk;
        if (max_deg < 0 && (covered > 1.0 - 1e-12 || k >= hard_cap)) break;
    }
    return prof;
}

namespace {

// E over L of G(1 - (1 - e^{-beta L})(1 - z)), where G is the excess pgf
// (excess_level) or the full pgf.  Integration by parts turns the law of L
// into its survival function.  Heavy-tailed degree laws put a t^{-g}
// singularity into G' at t -> 0 (g = 3 - a for tail exponent a < 3); the
// substitution t = s^m with m chosen from the measured growth of G' near 1
// leaves the integrand at least s^3-smooth at the origin.
double shared_period_mixture(const EpidemicParameters& p, double z, bool excess_level) {
    if (z >= 1.0) return 1.0;
    const double beta = p.beta;
    const double t_max = std::min(p.period.support_bound(), 45.0 / beta);
    if (t_max <= 0.0) return 1.0;
    double g = 0.0;
    if (std::isinf(p.degree.size_biased_excess_mean())) {
        const double d1 = p.degree.excess_derivative_weighted_complement(1e-6);
        const double d2 = p.degree.excess_derivative_weighted_complement(1e-8);
        g = std::min(0.95, std::max(0.0, std::log(d2 / d1) / std::log(100.0)));
    }
    const double m = std::min(48.0, std::ceil(4.0 / (1.0 - g)));
    const auto integrand = [&](double s) {
        const double t = std::pow(s, m);
        const double pt = -std::expm1(-beta * t);
        const double eps = pt * (1.0 - z);
        const double deriv = excess_level
                                 ? p.degree.excess_derivative_weighted_complement(eps)
                                 : p.degree.mean() * p.degree.excess_pgf(1.0 - eps);
        return m * std::pow(s, m - 1.0) * beta * std::exp(-beta * t) * (1.0 - z) * deriv *
               p.period.survival(t);
    };
    return 1.0 - integrate_adaptive(integrand, 0.0, std::pow(t_max, 1.0 / m), 1e-11);
}

} // namespace

double forward_extinction_probability(const EpidemicParameters& p) {
    if (compute_r0(p) <= 1.0) return 1.0;
    // smallest root of z = E[(1 - (1-e^{-beta L})(1-z))^(D~-1)]: the map is
    // convex in z with the root and 1 as its only fixed points, so a single
    // bracket below 1 suffices (cf. the q~* bisection oracle)
    double lo = 0.0, hi = 1.0 - 1e-9;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shared_period_mixture(p, mid, true) > mid)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double major_outbreak_probability(const EpidemicParameters& p) {
    const double z = forward_extinction_probability(p);
    if (z >= 1.0) return 0.0;
    return 1.0 - shared_period_mixture(p, z, false);
}

UniformMixingLimit uniform_mixing_limit(double beta_prime, const InfectiousPeriodModel& period, double c) {
    if (!(beta_prime > 0.0)) throw std::invalid_argument("uniform_mixing_limit requires beta' > 0");
    if (!(c > 0.0) || c > 1.0) throw std::domain_error("uniform_mixing_limit requires c in (0,1]");
    const double mean_l = period.mean();
    if (!std::isfinite(mean_l)) throw std::domain_error("uniform_mixing_limit requires E[L] < inf");
    const double x = c * beta_prime * mean_l;
    if (x <= 1.0) throw std::domain_error("unsupported regime: c * beta' * E[L] <= 1");

    UniformMixingLimit lim;
    lim.q_tilde_star = -lambert_w0(-x * std::exp(-x)) / x;

    const auto scaled = [&](double weight, double a) {
        const double s = survival_transform(period, a);
        if (std::isinf(s)) return kInf;
        return weight * s;
    };
    lim.alpha_prime =
        solve_growth_root([&](double a) { return scaled(c * beta_prime, a); }, nullptr);
    const double r = period.tail_rate();
    const double dagger = std::isinf(r) ? -kInf : -r;
    lim.alpha_star = solve_decay_root(
        [&](double a) { return scaled(c * beta_prime * lim.q_tilde_star, a); }, dagger, nullptr);
    return lim;
}

nlohmann::json EpidemicSummary::to_json() const {
    nlohmann::json diag = {
        {"q_tilde_star",
         {{"iterations", qtilde_diag.iterations}, {"residual", num(qtilde_diag.residual)}}},
        {"alpha_prime",
         {{"iterations", alpha_prime_diag.iterations},
          {"residual", num(alpha_prime_diag.residual)},
          {"bracket", {num(alpha_prime_diag.bracket_lo), num(alpha_prime_diag.bracket_hi)}}}},
        {"alpha_star",
         {{"iterations", alpha_star_diag.iterations},
          {"residual", num(alpha_star_diag.residual)},
          {"bracket", {num(alpha_star_diag.bracket_lo), num(alpha_star_diag.bracket_hi)}}}}};
    return {{"psi", num(psi)},
            {"excess_mean", num(excess_mean)},
            {"r0", num(r0)},
            {"supercritical", supercritical},
            {"critical", critical},
            {"q_tilde_star", num(q_tilde_star)},
            {"Q", num(big_q)},
            {"q_star", num(q_star)},
            {"m_star", num(m_star)},
            {"r0_star", num(r0_star)},
            {"alpha_prime", num(alpha_prime)},
            {"alpha_dagger", num(alpha_dagger)},
            {"alpha_star", num(alpha_star)},
            {"alpha_star_is_malthusian", alpha_star_is_malthusian},
            {"condition14", condition14},
            {"duration_constant", num(duration_constant)},
            {"diagnostics", diag}};
}

} // namespace epinet
