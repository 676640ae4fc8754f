#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "epinet/analytics.hpp"

namespace epinet {

/// Reproduction law of a continuous-time branching process in the family
/// the epidemic approximations live in: a particle draws a lifetime, a
/// number of contact opportunities ("trials"), an i.i.d. exponential age
/// for each, and keeps each contact independently with the success
/// probability.  Births never occur past the parent's lifetime.
struct ReproductionLaw {
    std::function<int(Rng&)> sample_trials;
    double trials_mean = 0.0;
    double success_prob = 1.0;
    double beta = 1.0;
    InfectiousPeriodModel lifetime = InfectiousPeriodModel::exponential(1.0);
    nlohmann::json descriptor;

    // mean total offspring: trials_mean * success_prob * psi
    double mean_offspring() const;
    // mean offspring measure density at age t
    double intensity(double t) const;
    // Malthusian transform integral of e^{-xt} against the offspring measure
    double transform(double x) const;

    // Early-phase law: trials distributed as D~-1, every contact accepted.
    static ReproductionLaw supercritical(const EpidemicParameters& p);
    // Final-phase law: trials distributed as D~*-1 (the size-biased law of
    // the ultimately susceptible), success probability p*_ss = q~*/Q.
    static ReproductionLaw subcritical_final_phase(const EpidemicParameters& p, double q_tilde_star);
    // Explicit trials pmf (index = trial count).
    static ReproductionLaw explicit_trials(std::vector<double> pmf, double success_prob, double beta,
                                           InfectiousPeriodModel lifetime);

    static ReproductionLaw from_json(const nlohmann::json& j);
};

struct CmjEvent {
    double time;
    bool birth;
    std::int64_t id;
    std::int64_t parent;  // -1 for ancestors
};

struct CmjOptions {
    int ancestors = 1;
    std::uint64_t seed = 0;
    double time_horizon = kInf;
    std::vector<std::int64_t> alive_thresholds;  // ascending; run stops at the last
    std::int64_t ever_born_cap = 10'000'000;
    bool record_events = false;
};

struct PopulationTrace {
    bool extinct = false;
    double extinction_time = kInf;
    bool truncated = false;  // population cap or horizon reached first
    std::vector<double> threshold_times;  // hit time per requested threshold, NaN if missed
    std::int64_t ever_born = 0;
    std::int64_t max_alive = 0;
    std::int64_t final_alive = 0;
    double end_time = 0.0;
    std::vector<CmjEvent> events;
};

// Exact event-driven realization with `ancestors` independent lines, each
// owning its RNG stream so a k-line run decomposes into single-line runs.
PopulationTrace simulate_cmj(const ReproductionLaw& law, const CmjOptions& opt);
PopulationTrace simulate_cmj_with_line_seeds(const ReproductionLaw& law,
                                             const std::vector<std::uint64_t>& line_seeds,
                                             const CmjOptions& opt);
std::uint64_t cmj_line_seed(std::uint64_t seed, int line);

// Alive count at time t from a trace recorded with record_events.
std::int64_t alive_at(const PopulationTrace& trace, double t);

struct HittingTimeResult {
    bool survived = false;  // reached the threshold before extinction
    double time = kInf;
    bool truncated = false;
};

// First time the alive count reaches k; extinct runs report survived = false.
HittingTimeResult hitting_time_supercritical(const ReproductionLaw& law, std::int64_t k,
                                             std::uint64_t seed);

// Extinction time of the k-ancestor process (a.s. finite for subcritical laws).
double extinction_time_subcritical(const ReproductionLaw& law, int k, std::uint64_t seed);

} // namespace epinet
