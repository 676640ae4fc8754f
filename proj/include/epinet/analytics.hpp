#pragma once

#include <vector>

#include <json.hpp>

#include "epinet/degree_model.hpp"
#include "epinet/infectious_period.hpp"
#include "epinet/transforms.hpp"

namespace epinet {

struct EpidemicParameters {
    DegreeModel degree;
    InfectiousPeriodModel period;
    double beta;  // per-edge contact rate, > 0

    nlohmann::json descriptor() const;
    static EpidemicParameters from_json(const nlohmann::json& j);
};

struct RootDiagnostics {
    double value = 0.0;
    double residual = 0.0;  // |g(root) - 1| at a solved root
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Full analytic output for one parameter set.  The growth rate alpha'
/// (early phase) and the decay rate alpha* (final phase) carry the
/// epidemic-duration constant 1/alpha' + 1/|alpha*|.
struct EpidemicSummary {
    double psi = 0.0;          // per-neighbor transmission probability
    double excess_mean = 0.0;  // E[D~ - 1], may be +inf
    double r0 = 0.0;           // psi * E[D~ - 1]
    bool supercritical = false;
    bool critical = false;  // |r0 - 1| below the near-critical guard

    double q_tilde_star = 1.0;  // forward extinction probability
    double big_q = 1.0;         // Q = 1 - psi + psi * q_tilde_star
    double q_star = 1.0;        // asymptotic ultimately-susceptible fraction
    double m_star = 0.0;        // E[(D~-1) Q^(D~-2)]
    double r0_star = 0.0;       // psi * m_star

    double alpha_prime = 0.0;   // growth rate, +inf when E[D~-1] = inf
    double alpha_dagger = 0.0;  // divergence abscissa of g*, may be -inf
    double alpha_star = 0.0;    // decay rate, in [alpha_dagger, 0)
    bool alpha_star_is_malthusian = false;
    bool condition14 = false;  // |alpha*| <= r(L): strong extinction scales too
    double duration_constant = 0.0;

    RootDiagnostics qtilde_diag, alpha_prime_diag, alpha_star_diag;

    nlohmann::json to_json() const;
};

// ---- individual operations ------------------------------------------------

double compute_psi(const EpidemicParameters& p);
double compute_r0(const EpidemicParameters& p);

// Smallest fixed point of s = E[(1-psi+psi s)^(D~-1)] by monotone iteration
// from 0; returns 1 when r0 <= 1.
double solve_qtilde_star(const EpidemicParameters& p, RootDiagnostics* diag = nullptr);

double compute_qstar(const EpidemicParameters& p, double q_tilde_star);
double compute_r0_star(const EpidemicParameters& p, double q_tilde_star);

double g_prime(const EpidemicParameters& p, double x);
double g_star(const EpidemicParameters& p, double q_tilde_star, double x);

// Unique positive root of g'(x) = 1; +inf when E[D~-1] = inf.
// Throws std::domain_error when r0 <= 1.
double solve_alpha_prime(const EpidemicParameters& p, RootDiagnostics* diag = nullptr);

struct AlphaStarResult {
    double value = 0.0;
    double dagger = 0.0;
    bool malthusian = false;  // g*(alpha*) = 1
};

// alpha* = inf{x : g*(x) < 1}: either the root of g*(x) = 1 in (dagger, 0),
// or dagger itself when the boundary limit of g* stays <= 1.
AlphaStarResult solve_alpha_star(const EpidemicParameters& p, double q_tilde_star,
                                 RootDiagnostics* diag = nullptr);

// True iff every exponential moment of L below |alpha*| is finite,
// equivalently |alpha*| <= r(L).
bool check_condition_14(const EpidemicParameters& p, double alpha_star);

// 1/alpha' + 1/|alpha*| (zero contribution from alpha' = inf).
// Throws std::domain_error when r0 <= 1.
double duration_constant(const EpidemicParameters& p);

EpidemicSummary analyze(const EpidemicParameters& p);

// Summary for the model thinned by an all-or-nothing vaccine with escape
// probability c; subcritical outcomes are labeled, not errors.
EpidemicSummary vaccinated_summary(const EpidemicParameters& p, double c);

// Degree structure of the ultimately susceptible population.
struct SusceptibleDegreeProfile {
    std::vector<double> pk_star;      // degree pmf of S(inf), index = degree
    std::vector<double> ptilde_star;  // size-biased variant
    double p_ss = 1.0;                // q~*/Q: susceptible fraction among their neighbors
    double excess_mean = 0.0;         // E[D~* - 1], from the truncated series
};
SusceptibleDegreeProfile susceptible_degree_profile(const EpidemicParameters& p, double q_tilde_star);

// Extinction probability of the forward (early-phase) branching process.
// All contacts of one infective share its infectious period, so the
// offspring law is binomial with the random success probability
// 1 - e^{-beta L} mixed over both D~-1 and L; this differs from the
// independent-psi fixed point q~* (the susceptibility-set dual that drives
// final sizes) whenever L is random.
double forward_extinction_probability(const EpidemicParameters& p);

// Large-outbreak probability from one uniformly chosen initial case: the
// two-stage survival, with the ancestor reproducing through its full
// degree D and later particles through D~-1.
double major_outbreak_probability(const EpidemicParameters& p);

// Dense-graph limit: contacts at overall rate c * beta' with mean degree
// sent to infinity.  q~* comes from the principal Lambert W branch; the
// two rates solve 1 = c beta' S(a) and 1 = c beta' q~* S(a).
struct UniformMixingLimit {
    double q_tilde_star = 0.0;
    double alpha_prime = 0.0;
    AlphaStarResult alpha_star;
};
UniformMixingLimit uniform_mixing_limit(double beta_prime, const InfectiousPeriodModel& period, double c);

} // namespace epinet
