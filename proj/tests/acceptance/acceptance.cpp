// Acceptance suite: one pass/fail gate per shipped guarantee, each with its
// tolerance pinned in code.  Run all gates or a single one:
//
//   epinet_acceptance [--criterion N] [--list]
//
// Every gate is deterministic (fixed seeds); the printed detail carries the
// measured numbers so a failure is diagnosable from the log alone.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "epinet/branching.hpp"
#include "epinet/experiment.hpp"
#include "oracles.hpp"

using namespace epinet;

namespace {

struct GateResult {
    bool pass = true;
    std::string detail;
};

#define EXPECT(res, cond, ...)                        \
    do {                                              \
        if (!(cond)) {                                \
            (res).pass = false;                       \
            char _buf[256];                           \
            std::snprintf(_buf, sizeof(_buf), __VA_ARGS__); \
            if (!(res).detail.empty()) (res).detail += "; "; \
            (res).detail += _buf;                     \
        }                                             \
    } while (0)

void note(GateResult& res, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    if (!res.detail.empty()) res.detail += "; ";
    res.detail += buf;
}

EpidemicParameters markov_regular4() {
    return {DegreeModel::regular(4), InfectiousPeriodModel::exponential(1.0), 1.0};
}

// ---------------------------------------------------------------------------
// 1. three-point degree table with a cut exponential period: the duration
//    constant lands within 0.02 of the published pair (2.04, 2.021)
GateResult criterion1() {
    GateResult res;
    const EpidemicParameters p{
        DegreeModel::table({{1, 100.0 / 201.0}, {2, 100.0 / 201.0}, {100, 1.0 / 201.0}}),
        InfectiousPeriodModel::exponential_cutoff(0.01, 1000.0), 0.99};
    const double unvacc = duration_constant(p);
    const double vacc = vaccinated_summary(p, 0.99).duration_constant;
    EXPECT(res, std::abs(unvacc - 2.04) <= 0.02, "unvaccinated %.6f vs 2.04 +-0.02", unvacc);
    EXPECT(res, std::abs(vacc - 2.021) <= 0.02, "c=0.99 %.6f vs 2.021 +-0.02", vacc);
    note(res, "duration=%.6f vaccinated=%.6f", unvacc, vacc);
    return res;
}

// 2. exponential-period closed forms: solver alpha' = E[D~-1]b - b - mu and
//    solver alpha* = Mb - b - mu to 1e-9 on a 100-point random grid
GateResult criterion2() {
    GateResult res;
    Rng rng(20240501);
    int accepted = 0;
    double worst_prime = 0.0, worst_star = 0.0;
    while (accepted < 100) {
        auto p = oracle::random_params_finite_variance(rng);
        const double mu = 0.3 + 2.0 * rng.uniform01();
        p.period = InfectiousPeriodModel::exponential(mu);
        if (compute_r0(p) <= 1.05) continue;
        ++accepted;
        const double em = p.degree.size_biased_excess_mean();
        const double ap_closed = em * p.beta - p.beta - mu;
        const double ap = solve_alpha_prime(p);
        worst_prime = std::max(worst_prime, std::abs(ap - ap_closed));

        const double qt = oracle::qtilde_bisection(p);
        const double psi = compute_psi(p);
        const double m = p.degree.excess_derivative_weighted(1.0 - psi + psi * qt);
        const double as_closed = m * p.beta - p.beta - mu;
        const double as = solve_alpha_star(p, solve_qtilde_star(p)).value;
        worst_star = std::max(worst_star, std::abs(as - as_closed));
    }
    EXPECT(res, worst_prime < 1e-9, "alpha' worst |solver-closed| = %.3e", worst_prime);
    EXPECT(res, worst_star < 1e-9, "alpha* worst |solver-closed| = %.3e", worst_star);
    note(res, "100 draws, worst dev alpha'=%.2e alpha*=%.2e", worst_prime, worst_star);
    return res;
}

// 3. 1000 supercritical mixed-family draws: r0* < 1, alpha* < 0, q~* in (0,1),
//    fixed-point and bisection roots within 1e-10
GateResult criterion3() {
    GateResult res;
    Rng rng(777001);
    int accepted = 0;
    double worst_gap = 0.0;
    while (accepted < 1000) {
        const auto p = oracle::random_params(rng);
        if (!(compute_r0(p) > 1.05)) continue;
        ++accepted;
        const double qt = solve_qtilde_star(p);
        EXPECT(res, qt > 0.0 && qt < 1.0, "q~* = %.3e outside (0,1)", qt);
        const double gap = std::abs(qt - oracle::qtilde_bisection(p));
        worst_gap = std::max(worst_gap, gap);
        const double r0s = compute_r0_star(p, qt);
        EXPECT(res, r0s < 1.0, "r0* = %.6f >= 1", r0s);
        const double as = solve_alpha_star(p, qt).value;
        EXPECT(res, as < 0.0, "alpha* = %.6f >= 0", as);
        if (!res.pass) break;
    }
    EXPECT(res, worst_gap < 1e-10, "worst solver/oracle q~* gap = %.3e", worst_gap);
    note(res, "1000 draws, worst q~* gap %.2e", worst_gap);
    return res;
}

// 4. final size: mean ultimately susceptible fraction over >= 50 major
//    outbreaks at n = 1e5 within 0.01 of q*
GateResult criterion4() {
    GateResult res;
    const auto p = markov_regular4();
    const double q_star = compute_qstar(p, oracle::qtilde_bisection(p));
    const auto batch = collect_major_outbreaks(p, 100000, 50, 2000, 1, 2);
    EXPECT(res, batch.quota_met, "only %lld majors", static_cast<long long>(batch.majors));
    double total = 0.0;
    for (std::size_t i = 0; i < batch.outcomes.size(); ++i)
        if (batch.conditioned[i]) total += batch.outcomes[i].final_susceptible_fraction;
    const double mean = total / static_cast<double>(batch.majors);
    EXPECT(res, std::abs(mean - q_star) <= 0.01, "mean %.5f vs q* %.5f +-0.01", mean, q_star);
    note(res, "mean fraction %.5f, q* %.5f, majors %lld", mean, q_star,
         static_cast<long long>(batch.majors));
    return res;
}

// 5. ultimately susceptible structure: pooled p_ss within 0.02 of q~*/Q over
//    >= 20 major runs; degree pmf of the susceptible set within 3 sigma
GateResult criterion5() {
    GateResult res;
    const auto p = markov_regular4();
    const double qt = oracle::qtilde_bisection(p);
    const double q = 1.0 - 0.5 + 0.5 * qt;
    const double target = qt / q;
    const auto profile = susceptible_degree_profile(p, qt);

    std::int64_t ss_hits = 0, ss_total = 0, susceptible = 0;
    std::vector<std::int64_t> degree_hist(8, 0);
    int majors = 0;
    for (std::uint64_t seed = 1; majors < 20 && seed < 200; ++seed) {
        const auto seq = sample_degree_sequence(p.degree, 100000, seed);
        SimOptions opt;
        opt.beta = p.beta;
        opt.period = p.period;
        opt.seed = seed;
        opt.record_vertex_data = true;
        opt.record_pairing = true;
        const auto out = run_epidemic(seq, opt);
        if (out.infections <= default_major_threshold(100000)) continue;
        ++majors;
        const auto stats = neighbor_susceptibility_stats(seq, out);
        ss_hits += static_cast<std::int64_t>(std::llround(stats.p_ss * stats.susceptible_stubs));
        ss_total += stats.susceptible_stubs;
        susceptible += stats.susceptible_vertices;
        for (std::size_t k = 0; k < stats.degree_histogram.size() && k < degree_hist.size(); ++k)
            degree_hist[k] += stats.degree_histogram[k];
    }
    EXPECT(res, majors >= 20, "only %d majors", majors);
    const double p_ss = static_cast<double>(ss_hits) / static_cast<double>(ss_total);
    EXPECT(res, std::abs(p_ss - target) <= 0.02, "p_ss %.5f vs %.5f +-0.02", p_ss, target);
    for (std::size_t k = 0; k < degree_hist.size(); ++k) {
        const double pk = k < profile.pk_star.size() ? profile.pk_star[k] : 0.0;
        const double expect = pk * static_cast<double>(susceptible);
        const double sd = std::sqrt(std::max(expect * (1.0 - pk), 1.0));
        EXPECT(res, std::abs(degree_hist[k] - expect) <= 3.0 * sd + 1.0,
               "degree %zu count %lld vs %.1f (3sd %.1f)", k,
               static_cast<long long>(degree_hist[k]), expect, 3.0 * sd);
    }
    note(res, "p_ss %.5f (target %.5f), %d majors pooled", p_ss, target, majors);
    return res;
}

// 6. weak-extinction scaling: regression slope of mean T-dagger against log n
//    across n = 1e3, 1e4, 1e5 within 15% of the duration constant, per-n
//    scaled means approaching the constant monotonically
GateResult criterion6() {
    GateResult res;
    const auto p = markov_regular4();
    const double target = duration_constant(p);
    const std::vector<int> ns{1000, 10000, 100000};
    const std::vector<std::int64_t> quotas{400, 150, 50};
    std::vector<double> log_ns, means, scaled_err;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto batch = collect_major_outbreaks(p, ns[i], quotas[i], 100000, 1, 2);
        EXPECT(res, batch.quota_met, "n=%d: only %lld majors", ns[i],
               static_cast<long long>(batch.majors));
        double total = 0.0;
        for (std::size_t j = 0; j < batch.outcomes.size(); ++j)
            if (batch.conditioned[j]) total += batch.outcomes[j].t_dagger;
        const double mean = total / static_cast<double>(batch.majors);
        const double logn = std::log(static_cast<double>(ns[i]));
        log_ns.push_back(logn);
        means.push_back(mean);
        scaled_err.push_back(std::abs(mean / logn - target));
    }
    const double slope = oracle::regression_slope(log_ns, means);
    EXPECT(res, std::abs(slope - target) <= 0.15 * target, "slope %.4f vs %.4f +-15%%", slope,
           target);
    EXPECT(res, scaled_err[1] <= scaled_err[0] && scaled_err[2] <= scaled_err[1],
           "approach not monotone: errors %.4f %.4f %.4f", scaled_err[0], scaled_err[1],
           scaled_err[2]);
    note(res, "slope %.4f, target %.4f, scaled means %.4f %.4f %.4f", slope, target,
         means[0] / log_ns[0], means[1] / log_ns[1], means[2] / log_ns[2]);
    return res;
}

// 7. strong-vs-weak extinction: a bounded-period model shows the two scaled
//    means agreeing within 5% at n = 1e5, a heavy-exponential-tail model
//    shows a gap above 0.05 and gets its t_star scaling claim refused
GateResult criterion7() {
    GateResult res;
    // positive side: exponential with a hard cutoff keeps every moment finite
    const EpidemicParameters bounded{DegreeModel::regular(4),
                                     InfectiousPeriodModel::exponential_cutoff(1.0, 2.0), 1.0};
    {
        const auto s = analyze(bounded);
        EXPECT(res, s.condition14, "bounded-period model not inside the tail condition");
        const auto batch = collect_major_outbreaks(bounded, 100000, 50, 2000, 1, 2);
        EXPECT(res, batch.quota_met, "bounded: only %lld majors",
               static_cast<long long>(batch.majors));
        double ts = 0.0, td = 0.0;
        for (std::size_t i = 0; i < batch.outcomes.size(); ++i)
            if (batch.conditioned[i]) {
                ts += batch.outcomes[i].t_star;
                td += batch.outcomes[i].t_dagger;
            }
        const double gap = (ts - td) / td;
        EXPECT(res, std::abs(gap) <= 0.05, "bounded model mean gap %.4f above 5%%", gap);
        note(res, "bounded: relative T* vs T-dagger gap %.4f", gap);

        ExperimentConfig cfg = ExperimentConfig::from_json(
            {{"kind", "scaling"}, {"parameters", bounded.descriptor()}, {"target", "t_star"},
             {"n_list", {500}}, {"major_outbreaks_required", 2}, {"base_seed", 1}});
        cfg.jobs = 2;
        try {
            (void)run_experiment(cfg);
        } catch (const RefusedConfig&) {
            EXPECT(res, false, "t_star scaling wrongly refused for the bounded model");
        }
    }
    // negative side: psi = 0.8 exponential-period model decays faster than
    // its lifetime tail, so late lifetimes dominate strong extinction
    const EpidemicParameters heavy{DegreeModel::regular(4), InfectiousPeriodModel::exponential(1.0),
                                   4.0};
    {
        const auto s = analyze(heavy);
        EXPECT(res, !s.condition14, "heavy-tail model unexpectedly inside the tail condition");
        EXPECT(res, std::abs(s.alpha_star) > heavy.period.tail_rate(),
               "|alpha*| = %.3f not above the tail rate", std::abs(s.alpha_star));
        const auto batch = collect_major_outbreaks(heavy, 100000, 50, 2000, 1, 2);
        EXPECT(res, batch.quota_met, "heavy: only %lld majors",
               static_cast<long long>(batch.majors));
        double gap = 0.0;
        std::int64_t majors = 0;
        for (std::size_t i = 0; i < batch.outcomes.size(); ++i)
            if (batch.conditioned[i]) {
                gap += batch.outcomes[i].t_star - batch.outcomes[i].t_dagger;
                ++majors;
            }
        const double scaled = gap / static_cast<double>(majors) / std::log(1e5);
        EXPECT(res, scaled > 0.05, "heavy model mean (T*-T-dagger)/log n = %.4f <= 0.05", scaled);
        note(res, "heavy: mean (T*-T-dagger)/log n = %.4f", scaled);

        ExperimentConfig cfg = ExperimentConfig::from_json(
            {{"kind", "scaling"}, {"parameters", heavy.descriptor()}, {"target", "t_star"},
             {"n_list", {500}}, {"major_outbreaks_required", 2}, {"base_seed", 1}});
        cfg.jobs = 2;
        bool refused = false;
        try {
            (void)run_experiment(cfg);
        } catch (const RefusedConfig&) {
            refused = true;
        }
        EXPECT(res, refused, "t_star scaling claim was not refused for the heavy-tail model");
    }
    return res;
}

// 8. branching corollaries: scaled hitting time of the growth law within 15%
//    of 1/alpha' at k = 1e4 over >= 200 surviving runs; scaled extinction
//    time of the decay law within 15% of 1/|alpha*| at k = 1e4 with the
//    error decreasing over k = 1e2, 1e3, 1e4
GateResult criterion8() {
    GateResult res;
    // growth law: four contact opportunities, unit rates, alpha' = 2
    const auto growth = ReproductionLaw::explicit_trials({0, 0, 0, 0, 1.0}, 1.0, 1.0,
                                                         InfectiousPeriodModel::exponential(1.0));
    {
        std::vector<double> scaled;
        for (std::uint64_t seed = 1; scaled.size() < 200 && seed < 1000; ++seed) {
            const auto r = hitting_time_supercritical(growth, 10000, seed);
            if (r.survived) scaled.push_back(r.time / std::log(1e4));
        }
        EXPECT(res, scaled.size() >= 200, "only %zu surviving runs", scaled.size());
        const double mean = oracle::mean(scaled);
        EXPECT(res, std::abs(mean - 0.5) <= 0.15 * 0.5, "hitting mean %.4f vs 0.5 +-15%%", mean);
        note(res, "hitting mean T/log k = %.4f (target 0.5)", mean);
    }
    // decay law: the regular(4) half-transmission final phase, |alpha*| = 0.8541
    const auto p = markov_regular4();
    const double qt = solve_qtilde_star(p);
    const auto decay = ReproductionLaw::subcritical_final_phase(p, qt);
    const double inv_alpha = 1.0 / std::abs(solve_alpha_star(p, qt).value);
    {
        std::vector<double> errs;
        double mean_at_1e4 = 0.0;
        std::uint64_t seed = 50000;
        for (int k : {100, 1000, 10000}) {
            double total = 0.0;
            const int reps = 200;
            for (int r = 0; r < reps; ++r)
                total += extinction_time_subcritical(decay, k, seed++);
            const double mean = total / reps / std::log(static_cast<double>(k));
            errs.push_back(std::abs(mean - inv_alpha) / inv_alpha);
            if (k == 10000) mean_at_1e4 = mean;
            note(res, "extinction k=%d scaled mean %.4f (target %.4f, err %.1f%%)", k, mean,
                 inv_alpha, 100.0 * errs.back());
        }
        EXPECT(res, errs[1] < errs[0] && errs[2] < errs[1],
               "finite-k error not decreasing: %.3f %.3f %.3f", errs[0], errs[1], errs[2]);
        // the slow lifetime mode (rate mu - |alpha*| = 0.146) leaves a ~24%
        // finite-k offset at k = 1e4; the 15% gate documents it honestly
        EXPECT(res, std::abs(mean_at_1e4 - inv_alpha) <= 0.15 * inv_alpha,
               "extinction mean at k=1e4 is %.4f, outside 15%% of %.4f", mean_at_1e4, inv_alpha);
    }
    return res;
}

// 9. vaccination calculus: closed-form d(c q~*_c)/dc against central
//    differences to 1e-6; duration decreasing in c; identity vaccine exact
GateResult criterion9() {
    GateResult res;
    const EpidemicParameters p{DegreeModel::poisson(4.0), InfectiousPeriodModel::exponential(1.0),
                               1.0};
    const double psi = compute_psi(p);
    const auto cq = [&](double c) {
        return c * solve_qtilde_star({p.degree.vaccinate(c), p.period, p.beta});
    };
    double worst = 0.0;
    for (double c : {0.6, 0.7, 0.8, 0.9, 0.95}) {
        const double qt = vaccinated_summary(p, c).q_tilde_star;
        const double formula = qt * (c * 4.0 * psi - 1.0) / (c * 4.0 * psi * qt - 1.0);
        const double h = 1e-4;
        const double fd = (cq(c + h) - cq(c - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(formula - fd));
    }
    EXPECT(res, worst < 1e-6, "worst |formula - central difference| = %.3e", worst);

    double prev = kInf;
    for (int i = 0; i <= 9; ++i) {
        const double c = std::min(1.0, 0.55 + 0.05 * i);
        const auto s = vaccinated_summary(p, c);
        EXPECT(res, s.supercritical, "c=%.2f unexpectedly subcritical", c);
        EXPECT(res, s.duration_constant < prev, "duration not decreasing at c=%.2f", c);
        prev = s.duration_constant;
    }

    const auto a = analyze(p);
    const auto b = vaccinated_summary(p, 1.0);
    EXPECT(res, std::abs(a.q_tilde_star - b.q_tilde_star) < 1e-12 &&
                    std::abs(a.alpha_prime - b.alpha_prime) < 1e-12 &&
                    std::abs(a.alpha_star - b.alpha_star) < 1e-12 &&
                    std::abs(a.duration_constant - b.duration_constant) < 1e-12,
           "identity vaccine drifts the summary");
    note(res, "worst derivative gap %.2e", worst);
    return res;
}

// 10. simulation invariants: conservation after every event, weak before
//     strong extinction, a valid infection tree, and the modified-lifetime
//     cross-check exact over 100 shared seeds
GateResult criterion10() {
    GateResult res;
    const auto table = DegreeModel::table({{1, 0.3}, {2, 0.3}, {5, 0.4}});
    // conservation sweep (the engine throws on any violation)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto seq = sample_degree_sequence(table, 20000, seed);
        SimOptions opt;
        opt.beta = 1.0;
        opt.period = InfectiousPeriodModel::exponential(1.0);
        opt.seed = seed;
        opt.validate_invariants = true;
        opt.record_vertex_data = true;
        try {
            const auto out = run_epidemic(seq, opt);
            EXPECT(res, out.t_dagger <= out.t_star, "T-dagger %.4f above T* %.4f", out.t_dagger,
                   out.t_star);
            for (int v = 0; v < out.n; ++v) {
                const auto uv = static_cast<std::size_t>(v);
                if (std::isnan(out.sigma[uv]) || out.infector[uv] < 0) continue;
                const auto uz = static_cast<std::size_t>(out.infector[uv]);
                if (!(out.sigma[uz] <= out.sigma[uv] &&
                      out.sigma[uv] <= out.sigma[uz] + out.lifetime[uz])) {
                    EXPECT(res, false, "infector of %d not infectious at transmission", v);
                    break;
                }
            }
        } catch (const std::exception& e) {
            EXPECT(res, false, "invariant sweep: %s", e.what());
        }
    }
    // modified-lifetime cross-check, bit-exact
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto seq = sample_degree_sequence(table, 500, seed);
        SimOptions a;
        a.beta = 1.0;
        a.period = InfectiousPeriodModel::exponential(1.0);
        a.seed = seed;
        SimOptions b = a;
        b.lprime_lifetimes = true;
        const auto oa = run_epidemic(seq, a);
        const auto ob = run_epidemic(seq, b);
        if (ob.t_star == oa.t_dagger && oa.infections == ob.infections) ++exact;
    }
    EXPECT(res, exact == 100, "modified-lifetime cross-check exact on %d/100 seeds", exact);
    note(res, "cross-check exact on %d/100 seeds", exact);
    return res;
}

struct Gate {
    int id;
    const char* name;
    std::function<GateResult()> run;
};

const std::vector<Gate>& gates() {
    static const std::vector<Gate> g{
        {1, "three-point-table duration pair (2.04 / 2.021 +-0.02)", criterion1},
        {2, "exponential-family closed-form rates to 1e-9 on a random grid", criterion2},
        {3, "supercritical property suite over 1000 mixed draws", criterion3},
        {4, "final susceptible fraction vs q* at n=1e5 (+-0.01)", criterion4},
        {5, "ultimately susceptible structure: p_ss and degree pmf", criterion5},
        {6, "weak-extinction scaling slope within 15% of the duration constant", criterion6},
        {7, "strong-vs-weak extinction split and the t_star refusal", criterion7},
        {8, "branching hitting/extinction time corollaries at k=1e4", criterion8},
        {9, "vaccination calculus: derivative, monotone duration, identity", criterion9},
        {10, "simulation invariants and the modified-lifetime cross-check", criterion10},
    };
    return g;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--list") == 0) {
            for (const auto& gate : gates()) std::printf("%2d  %s\n", gate.id, gate.name);
            return 0;
        }
    }
    int failures = 0;
    for (const auto& gate : gates()) {
        if (only != 0 && gate.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        GateResult res;
        try {
            res = gate.run();
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] C%d %s (%.1fs)%s%s\n", res.pass ? "PASS" : "FAIL", gate.id, gate.name,
                    secs, res.detail.empty() ? "" : ": ", res.detail.c_str());
        std::fflush(stdout);
        failures += res.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
