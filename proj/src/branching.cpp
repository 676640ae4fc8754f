#include "epinet/branching.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace epinet {

double ReproductionLaw::mean_offspring() const {
    return trials_mean * success_prob * contact_transform(lifetime, beta, 0.0);
}

double ReproductionLaw::intensity(double t) const {
    return trials_mean * success_prob * beta * std::exp(-beta * t) * lifetime.survival(t);
}

double ReproductionLaw::transform(double x) const {
    const double phi = contact_transform(lifetime, beta, x);
    if (std::isinf(phi)) return kInf;
    return trials_mean * success_prob * phi;
}

namespace {

std::function<int(Rng&)> excess_sampler(const DegreeModel& degree) {
    return [degree](Rng& rng) {
        // inverse-cdf walk over the size-biased pmf
        double u = rng.uniform01();
        int k = 1;
        const int cap = degree.max_degree();
        for (;;) {
            const double w = degree.size_biased_pmf(k);
            if (u < w || (cap >= 0 && k >= cap)) return k - 1;
            u -= w;
            ++k;
        }
    };
}

} // namespace

ReproductionLaw ReproductionLaw::supercritical(const EpidemicParameters& p) {
    ReproductionLaw law;
    law.sample_trials = excess_sampler(p.degree);
    law.trials_mean = p.degree.size_biased_excess_mean();
    law.success_prob = 1.0;
    law.beta = p.beta;
    law.lifetime = p.period;
    law.descriptor = {{"kind", "supercritical"}, {"parameters", p.descriptor()}};
    return law;
}

ReproductionLaw ReproductionLaw::subcritical_final_phase(const EpidemicParameters& p, double q_tilde_star) {
    const double psi = compute_psi(p);
    const double q = 1.0 - psi + psi * q_tilde_star;
    ReproductionLaw law;
    // trials ~ D~* - 1 with P(D~* = k) = ptilde_k Q^(k-1) / q~*
    law.sample_trials = [degree = p.degree, q, q_tilde_star](Rng& rng) {
        double u = rng.uniform01() * q_tilde_star;
        int k = 1;
        const int cap = degree.max_degree();
        for (;;) {
            const double w = degree.size_biased_pmf(k) * (k == 1 ? 1.0 : std::pow(q, k - 1));
            if (u < w || (cap >= 0 && k >= cap)) return k - 1;
            u -= w;
            ++k;
        }
    };
    law.trials_mean = q * p.degree.excess_derivative_weighted(q) / q_tilde_star;
    law.success_prob = q_tilde_star / q;
    law.beta = p.beta;
    law.lifetime = p.period;
    law.descriptor = {
        {"kind", "subcritical_final"}, {"parameters", p.descriptor()}, {"q_tilde_star", q_tilde_star}};
    return law;
}

ReproductionLaw ReproductionLaw::explicit_trials(std::vector<double> pmf, double success_prob,
                                                 double beta, InfectiousPeriodModel lifetime) {
    double total = 0.0, mean = 0.0;
    for (std::size_t m = 0; m < pmf.size(); ++m) {
        if (pmf[m] < 0.0) throw std::invalid_argument("trials pmf: negative probability");
        total += pmf[m];
        mean += static_cast<double>(m) * pmf[m];
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("trials pmf must sum to 1");
    if (!(success_prob >= 0.0 && success_prob <= 1.0))
        throw std::invalid_argument("success probability outside [0,1]");
    ReproductionLaw law;
    nlohmann::json jp = pmf;
    law.sample_trials = [pmf = std::move(pmf)](Rng& rng) {
        double u = rng.uniform01();
        for (std::size_t m = 0; m + 1 < pmf.size(); ++m) {
            if (u < pmf[m]) return static_cast<int>(m);
            u -= pmf[m];
        }
        return static_cast<int>(pmf.size() - 1);
    };
    law.trials_mean = mean / total;
    law.success_prob = success_prob;
    law.beta = beta;
    law.lifetime = lifetime;
    law.descriptor = {{"kind", "explicit"},
                      {"trials_pmf", jp},
                      {"success_prob", success_prob},
                      {"beta", beta},
                      {"lifetime", lifetime.descriptor()}};
    return law;
}

ReproductionLaw ReproductionLaw::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "supercritical")
        return supercritical(EpidemicParameters::from_json(j.at("parameters")));
    if (kind == "subcritical_final") {
        const auto p = EpidemicParameters::from_json(j.at("parameters"));
        const double qt = j.contains("q_tilde_star") ? j["q_tilde_star"].get<double>() : solve_qtilde_star(p);
        return subcritical_final_phase(p, qt);
    }
    if (kind == "explicit") {
        return explicit_trials(j.at("trials_pmf").get<std::vector<double>>(),
                               j.at("success_prob").get<double>(), j.at("beta").get<double>(),
                               InfectiousPeriodModel::from_json(j.at("lifetime")));
    }
    throw std::invalid_argument("unknown reproduction law kind: " + kind);
}

std::uint64_t cmj_line_seed(std::uint64_t seed, int line) {
    return derive_seed(seed, 0xc3a5c85c97cb3127ULL + static_cast<std::uint64_t>(line));
}

namespace {

struct BirthEvent {
    double time;
    std::uint8_t kind;  // 0 = birth, 1 = death
    std::uint64_t seq;
    std::int64_t id;      // particle id (death) or child id (birth)
    std::int64_t parent;  // birth only
    int line;
};

struct Later {
    bool operator()(const BirthEvent& a, const BirthEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

} // namespace

PopulationTrace simulate_cmj_with_line_seeds(const ReproductionLaw& law,
                                             const std::vector<std::uint64_t>& line_seeds,
                                             const CmjOptions& opt) {
    if (line_seeds.empty()) throw std::invalid_argument("at least one ancestor line required");
    std::vector<Rng> rngs;
    rngs.reserve(line_seeds.size());
    for (auto s : line_seeds) rngs.emplace_back(s);

    PopulationTrace trace;
    trace.threshold_times.assign(opt.alive_thresholds.size(),
                                 std::numeric_limits<double>::quiet_NaN());
    std::size_t next_threshold = 0;

    std::priority_queue<BirthEvent, std::vector<BirthEvent>, Later> queue;
    std::uint64_t seq = 0;
    std::int64_t next_id = 0;
    std::int64_t alive = 0;

    const auto spawn = [&](double t, std::int64_t parent, int line) {
        const std::int64_t id = next_id++;
        ++trace.ever_born;
        ++alive;
        trace.max_alive = std::max(trace.max_alive, alive);
        if (opt.record_events) trace.events.push_back(CmjEvent{t, true, id, parent});
        Rng& rng = rngs[static_cast<std::size_t>(line)];
        const double life = law.lifetime.sample(rng);
        const int trials = law.sample_trials(rng);
        for (int i = 0; i < trials; ++i) {
            const double age = rng.exponential(law.beta);
            const bool kept = law.success_prob >= 1.0 ? true : rng.bernoulli(law.success_prob);
            if (kept && age < life) queue.push(BirthEvent{t + age, 0, seq++, next_id, id, line});
        }
        if (std::isfinite(life)) queue.push(BirthEvent{t + life, 1, seq++, id, -1, line});
        while (next_threshold < opt.alive_thresholds.size() &&
               alive >= opt.alive_thresholds[next_threshold]) {
            trace.threshold_times[next_threshold] = t;
            ++next_threshold;
        }
    };

    for (int line = 0; line < static_cast<int>(line_seeds.size()); ++line) spawn(0.0, -1, line);

    const bool stop_at_last_threshold = !opt.alive_thresholds.empty();
    while (!queue.empty()) {
        if (stop_at_last_threshold && next_threshold == opt.alive_thresholds.size()) {
            trace.end_time = trace.threshold_times.back();
            trace.final_alive = alive;
            return trace;
        }
        if (trace.ever_born >= opt.ever_born_cap) {
            trace.truncated = true;
            break;
        }
        const BirthEvent ev = queue.top();
        if (ev.time > opt.time_horizon) {
            trace.truncated = true;
            trace.end_time = opt.time_horizon;
            trace.final_alive = alive;
            return trace;
        }
        queue.pop();
        trace.end_time = ev.time;
        if (ev.kind == 0) {
            spawn(ev.time, ev.parent, ev.line);
        } else {
            --alive;
            if (opt.record_events) trace.events.push_back(CmjEvent{ev.time, false, ev.id, -1});
            if (alive == 0) {
                trace.extinct = true;
                trace.extinction_time = ev.time;
                trace.final_alive = 0;
                return trace;
            }
        }
    }
    trace.final_alive = alive;
    if (!trace.truncated && alive > 0) {
        // queue drained with immortal particles still alive (infinite lifetimes)
        trace.end_time = std::max(trace.end_time, 0.0);
    }
    return trace;
}

PopulationTrace simulate_cmj(const ReproductionLaw& law, const CmjOptions& opt) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(opt.ancestors));
    for (int i = 0; i < opt.ancestors; ++i) seeds.push_back(cmj_line_seed(opt.seed, i));
    return simulate_cmj_with_line_seeds(law, seeds, opt);
}

std::int64_t alive_at(const PopulationTrace& trace, double t) {
    std::int64_t alive = 0;
    for (const auto& ev : trace.events) {
        if (ev.time > t) break;
        alive += ev.birth ? 1 : -1;
    }
    return alive;
}

HittingTimeResult hitting_time_supercritical(const ReproductionLaw& law, std::int64_t k,
                                             std::uint64_t seed) {
    CmjOptions opt;
    opt.ancestors = 1;
    opt.seed = seed;
    opt.alive_thresholds = {k};
    const auto trace = simulate_cmj(law, opt);
    HittingTimeResult res;
    res.truncated = trace.truncated;
    if (!trace.threshold_times.empty() && !std::isnan(trace.threshold_times[0])) {
        res.survived = true;
        res.time = trace.threshold_times[0];
    }
    return res;
}

double extinction_time_subcritical(const ReproductionLaw& law, int k, std::uint64_t seed) {
    CmjOptions opt;
    opt.ancestors = k;
    opt.seed = seed;
    const auto trace = simulate_cmj(law, opt);
    if (!trace.extinct) throw std::runtime_error("subcritical process hit a cap before extinction");
    return trace.extinction_time;
}

} // namespace epinet
