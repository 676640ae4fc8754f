#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "epinet/experiment.hpp"

namespace epinet {

namespace {

using nlohmann::json;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fd(double v) { return format_double(v); }

json base_manifest(const ExperimentConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg.raw)));
    return {{"config", cfg.raw},
            {"config_hash", std::string(hash)},
            {"kind", cfg.kind},
            {"base_seed", cfg.base_seed},
            {"seed_schedule", "base_seed + replicate_index"},
            {"tool", {{"name", "epinet"}, {"version", "0.1.0"}}}};
}

std::string short_hash(const ExperimentConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg.raw)));
    return hash;
}

EpidemicParameters params_from(const ExperimentConfig& cfg) {
    if (!cfg.raw.contains("parameters"))
        throw RefusedConfig("config requires a \"parameters\" block");
    try {
        return EpidemicParameters::from_json(cfg.raw.at("parameters"));
    } catch (const std::exception& e) {
        throw RefusedConfig(std::string("bad parameters: ") + e.what());
    }
}

std::vector<int> n_list_from(const ExperimentConfig& cfg) {
    std::vector<int> ns;
    if (cfg.raw.contains("n_list"))
        ns = cfg.raw.at("n_list").get<std::vector<int>>();
    else if (cfg.raw.contains("n"))
        ns = {cfg.raw.at("n").get<int>()};
    else
        throw RefusedConfig("config requires \"n\" or \"n_list\"");
    for (int n : ns)
        if (n < 2) throw RefusedConfig("population size must be at least 2");
    return ns;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// least-squares slope of y against x
double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double xbar = mean_of(x), ybar = mean_of(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - xbar) * (y[i] - ybar);
        den += (x[i] - xbar) * (x[i] - xbar);
    }
    return num / den;
}

json outcome_to_json(const SimulationOutcome& out) {
    json seeds = out.initial_infectives;
    auto num = [](double v) -> json {
        if (std::isnan(v)) return nullptr;
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    return {{"t_star", num(out.t_star)},
            {"t_dagger", num(out.t_dagger)},
            {"infections", out.infections},
            {"final_susceptible_fraction", out.final_susceptible_fraction},
            {"major", out.major},
            {"n", out.n},
            {"seed", out.seed},
            {"initial_infectives", seeds},
            {"contact_events", out.contact_events},
            {"wasted_contacts", out.wasted_contacts},
            {"pairings", out.pairings}};
}

} // namespace

ResultTable run_analyze(const ExperimentConfig& cfg) {
    const auto p = params_from(cfg);
    const auto summary = analyze(p);
    ResultTable table;
    table.header = {"config_hash", "psi",         "r0",          "q_tilde_star", "q_star",
                    "r0_star",     "alpha_prime", "alpha_star",  "condition14",  "duration_constant",
                    "supercritical", "critical"};
    table.add_row({short_hash(cfg), fd(summary.psi), fd(summary.r0), fd(summary.q_tilde_star),
                   fd(summary.q_star), fd(summary.r0_star), fd(summary.alpha_prime),
                   fd(summary.alpha_star), summary.condition14 ? "true" : "false",
                   fd(summary.duration_constant), summary.supercritical ? "true" : "false",
                   summary.critical ? "true" : "false"});
    table.manifest = base_manifest(cfg);
    json sj = summary.to_json();
    sj["parameters"] = p.descriptor();
    table.extra_files.emplace_back("summary.json", sj.dump(2) + "\n");
    return table;
}

ResultTable run_simulate(const ExperimentConfig& cfg) {
    const auto p = params_from(cfg);
    const auto& raw = cfg.raw;
    SimOptions opt;
    opt.beta = p.beta;
    opt.period = p.period;
    opt.seed = cfg.base_seed;
    opt.record_time_series = raw.value("record_events", false);
    opt.record_vertex_data = raw.value("record_tree", false);
    opt.record_pairing = raw.value("record_pairing", false);
    opt.validate_invariants = raw.value("validate", false);
    opt.lprime_lifetimes = raw.value("lprime_lifetimes", false);
    opt.initial_vertex = raw.value("initial_vertex", -1);
    opt.initial_infective_count = raw.value("initial_infective_count", 1);

    DegreeSequence seq;
    if (raw.contains("degrees"))
        seq = make_degree_sequence(raw.at("degrees").get<std::vector<int>>());
    else
        seq = sample_degree_sequence(p.degree, n_list_from(cfg).front(), opt.seed);

    const auto out = run_epidemic(seq, opt);

    ResultTable table;
    table.header = {"config_hash", "seed",  "n",      "major",   "infections",
                    "final_susceptible_fraction", "t_star", "t_dagger", "contact_events",
                    "wasted_contacts"};
    table.add_row({short_hash(cfg), std::to_string(out.seed), std::to_string(out.n),
                   out.major ? "1" : "0", std::to_string(out.infections),
                   fd(out.final_susceptible_fraction), fd(out.t_star), fd(out.t_dagger),
                   std::to_string(out.contact_events), std::to_string(out.wasted_contacts)});
    table.manifest = base_manifest(cfg);

    json oj = outcome_to_json(out);
    oj["config"] = cfg.raw;
    table.extra_files.emplace_back("outcome.json", oj.dump() + "\n");

    if (opt.record_time_series) {
        std::string ev = "t,event_type,vertex,n_s,n_i,n_r,x\n";
        for (const auto& row : out.events) {
            ev += fd(row.t);
            ev += ',';
            ev += row.type;
            ev += ',' + std::to_string(row.vertex) + ',' + std::to_string(row.n_s) + ',' +
                  std::to_string(row.n_i) + ',' + std::to_string(row.n_r) + ',' +
                  std::to_string(row.x) + '\n';
        }
        table.extra_files.emplace_back("events.csv", std::move(ev));
    }
    if (opt.record_vertex_data) {
        std::string tree = "vertex,infector,sigma,lifetime,degree\n";
        for (int v = 0; v < out.n; ++v) {
            const auto uv = static_cast<std::size_t>(v);
            if (std::isnan(out.sigma[uv])) continue;
            tree += std::to_string(v) + ',' + std::to_string(out.infector[uv]) + ',' +
                    fd(out.sigma[uv]) + ',' + fd(out.lifetime[uv]) + ',' +
                    std::to_string(seq.degrees[uv]) + '\n';
        }
        table.extra_files.emplace_back("tree.csv", std::move(tree));
    }
    return table;
}

ResultTable run_montecarlo(const ExperimentConfig& cfg) {
    const auto p = params_from(cfg);
    const auto ns = n_list_from(cfg);
    const std::int64_t quota = cfg.raw.value("major_outbreaks_required", std::int64_t{0});
    const std::int64_t max_attempts =
        cfg.raw.value("replicates", quota > 0 ? std::max<std::int64_t>(quota * 200, 1000) : 100);
    const std::int64_t threshold = cfg.raw.value("major_threshold", std::int64_t{-1});

    const double t0 = now_ms();
    ResultTable table;
    table.header = {"n",      "replicate", "seed",   "major",    "infections",
                    "final_susceptible_fraction", "t_star", "t_dagger", "contact_events",
                    "wasted_contacts", "config_hash"};
    table.manifest = base_manifest(cfg);

    json derived = json::array();
    bool partial = false;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const int n = ns[ni];
        const auto batch =
            collect_major_outbreaks(p, n, quota, max_attempts, cfg.base_seed, cfg.jobs, {}, threshold);
        partial = partial || !batch.quota_met;
        std::vector<double> major_fracs;
        for (std::int64_t i = 0; i < batch.attempts; ++i) {
            const auto& out = batch.outcomes[static_cast<std::size_t>(i)];
            const bool major = batch.conditioned[static_cast<std::size_t>(i)] != 0;
            table.add_row({std::to_string(n), std::to_string(i), std::to_string(out.seed),
                           major ? "1" : "0", std::to_string(out.infections),
                           fd(out.final_susceptible_fraction), fd(out.t_star), fd(out.t_dagger),
                           std::to_string(out.contact_events), std::to_string(out.wasted_contacts),
                           short_hash(cfg)});
            if (major) major_fracs.push_back(out.final_susceptible_fraction);
        }
        const double analytic_major = major_outbreak_probability(p);
        const double qt = solve_qtilde_star(p);
        derived.push_back(
            {{"n", n},
             {"major_threshold_infections", batch.threshold},
             {"attempts", batch.attempts},
             {"majors", batch.majors},
             {"quota_met", batch.quota_met},
             {"rejection_rate",
              batch.attempts > 0
                  ? 1.0 - static_cast<double>(batch.majors) / static_cast<double>(batch.attempts)
                  : 0.0},
             {"empirical_major_frequency",
              batch.attempts > 0
                  ? static_cast<double>(batch.majors) / static_cast<double>(batch.attempts)
                  : 0.0},
             {"analytic_major_probability", analytic_major},
             {"mean_final_susceptible_fraction_major", mean_of(major_fracs)},
             {"analytic_q_star", compute_qstar(p, qt)}});
    }
    table.manifest["derived"] = derived;
    table.manifest["partial"] = partial;
    table.manifest["wall_ms"] = now_ms() - t0;
    return table;
}

ResultTable run_scaling(const ExperimentConfig& cfg) {
    const auto p = params_from(cfg);
    const std::string target = cfg.raw.value("target", std::string("t_dagger"));
    if (target != "t_star" && target != "t_dagger")
        throw RefusedConfig("scaling target must be \"t_star\" or \"t_dagger\"");

    const auto summary = analyze(p);
    if (!summary.supercritical)
        throw RefusedConfig("scaling study requires a supercritical model (r0 > 1)");
    if (target == "t_star" && !summary.condition14) {
        std::ostringstream msg;
        msg << "refusing a strong-extinction (t_star) scaling claim: the infectious-period tail "
               "rate r(L) = "
            << format_double(p.period.tail_rate()) << " is below |alpha*| = "
            << format_double(std::abs(summary.alpha_star))
            << ", so late long infectious periods dominate t_star and t_star/log n does not "
               "converge to the duration constant; use target = \"t_dagger\" instead";
        throw RefusedConfig(msg.str());
    }

    const auto ns = n_list_from(cfg);
    const std::int64_t quota = cfg.raw.value("major_outbreaks_required", std::int64_t{50});
    std::vector<std::int64_t> quotas(ns.size(), quota);
    if (cfg.raw.contains("majors_per_n")) {
        const auto q = cfg.raw.at("majors_per_n").get<std::vector<std::int64_t>>();
        if (q.size() != ns.size()) throw RefusedConfig("majors_per_n must match n_list length");
        quotas = q;
    }

    const double t0 = now_ms();
    ResultTable table;
    table.header = {"n",        "replicate", "seed",     "major", "t_star",
                    "t_dagger", "t_target",  "t_target_over_logn", "config_hash"};
    table.manifest = base_manifest(cfg);

    std::string summary_csv =
        "n,majors,attempts,mean_t_over_logn,band_lo,band_hi,target_constant\n";
    std::vector<double> log_ns, mean_ts;
    json derived = json::array();
    bool partial = false;
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        const int n = ns[ni];
        const double logn = std::log(static_cast<double>(n));
        const std::int64_t cap =
            cfg.raw.value("max_attempts", std::max<std::int64_t>(quotas[ni] * 200, 1000));
        const std::int64_t threshold = cfg.raw.value("major_threshold", std::int64_t{-1});
        const auto batch =
            collect_major_outbreaks(p, n, quotas[ni], cap, cfg.base_seed, cfg.jobs, {}, threshold);
        partial = partial || !batch.quota_met;
        std::vector<double> scaled, raw_t;
        for (std::int64_t i = 0; i < batch.attempts; ++i) {
            const auto& out = batch.outcomes[static_cast<std::size_t>(i)];
            const bool major = batch.conditioned[static_cast<std::size_t>(i)] != 0;
            const double t_target = target == "t_star" ? out.t_star : out.t_dagger;
            table.add_row({std::to_string(n), std::to_string(i), std::to_string(out.seed),
                           major ? "1" : "0", fd(out.t_star), fd(out.t_dagger), fd(t_target),
                           fd(t_target / logn), short_hash(cfg)});
            if (major) {
                scaled.push_back(t_target / logn);
                raw_t.push_back(t_target);
            }
        }
        const double mean_scaled = mean_of(scaled);
        summary_csv += std::to_string(n) + ',' + std::to_string(batch.majors) + ',' +
                       std::to_string(batch.attempts) + ',' + fd(mean_scaled) + ',' +
                       fd(quantile(scaled, 0.1)) + ',' + fd(quantile(scaled, 0.9)) + ',' +
                       fd(summary.duration_constant) + '\n';
        log_ns.push_back(logn);
        mean_ts.push_back(mean_of(raw_t));
        derived.push_back({{"n", n},
                           {"major_threshold_infections", batch.threshold},
                           {"majors", batch.majors},
                           {"attempts", batch.attempts},
                           {"mean_t_over_logn", mean_scaled},
                           {"band_lo", quantile(scaled, 0.1)},
                           {"band_hi", quantile(scaled, 0.9)}});
    }
    const double slope = ns.size() > 1 ? regression_slope(log_ns, mean_ts)
                                       : std::numeric_limits<double>::quiet_NaN();
    table.manifest["derived"] = {{"per_n", derived},
                                 {"target", target},
                                 {"duration_constant", summary.duration_constant},
                                 {"slope_t_vs_logn", slope},
                                 {"condition14", summary.condition14}};
    table.manifest["partial"] = partial;
    table.manifest["wall_ms"] = now_ms() - t0;
    table.extra_files.emplace_back("summary.csv", std::move(summary_csv));
    return table;
}

ResultTable run_vaccinate_sweep(const ExperimentConfig& cfg) {
    const auto p = params_from(cfg);
    std::vector<double> c_grid;
    if (cfg.raw.contains("c_grid")) {
        c_grid = cfg.raw.at("c_grid").get<std::vector<double>>();
    } else {
        for (int i = 1; i <= 20; ++i) c_grid.push_back(0.05 * i);
    }
    for (double c : c_grid)
        if (!(c > 0.0) || c > 1.0) throw RefusedConfig("c grid values must lie in (0,1]");

    const bool is_poisson = p.degree.family() == "poisson";
    const double lambda = is_poisson ? p.degree.mean() : 0.0;
    const double psi = compute_psi(p);

    const auto cq = [&](double c) {
        return c * solve_qtilde_star({p.degree.vaccinate(c), p.period, p.beta});
    };

    ResultTable table;
    table.header = {"c",          "supercritical", "critical",   "psi_effective", "r0",
                    "q_tilde_star", "q_star",      "r0_star",    "alpha_prime",   "alpha_star",
                    "duration_constant", "dcq_dc_fd", "dcq_dc_formula", "config_hash"};
    table.manifest = base_manifest(cfg);
    json derived = json::array();
    for (double c : c_grid) {
        const auto s = vaccinated_summary(p, c);
        const double h = 1e-4;
        double fdiff = std::numeric_limits<double>::quiet_NaN();
        if (s.supercritical && c - h > 0.0 && c + h <= 1.0)
            fdiff = (cq(c + h) - cq(c - h)) / (2.0 * h);
        double formula = std::numeric_limits<double>::quiet_NaN();
        if (is_poisson && s.supercritical) {
            const double qt = s.q_tilde_star;
            formula = qt * (c * lambda * psi - 1.0) / (c * lambda * psi * qt - 1.0);
        }
        table.add_row({fd(c), s.supercritical ? "true" : "false", s.critical ? "true" : "false",
                       fd(c * psi), fd(s.r0), fd(s.q_tilde_star), fd(s.q_star), fd(s.r0_star),
                       fd(s.alpha_prime), fd(s.alpha_star), fd(s.duration_constant), fd(fdiff),
                       fd(formula), short_hash(cfg)});
        derived.push_back({{"c", c},
                           {"supercritical", s.supercritical},
                           {"duration_constant",
                            std::isfinite(s.duration_constant) ? json(s.duration_constant) : json()}});
    }
    table.manifest["derived"] = derived;
    return table;
}

ResultTable run_branching(const ExperimentConfig& cfg) {
    if (!cfg.raw.contains("law")) throw RefusedConfig("branching config requires a \"law\" block");
    ReproductionLaw law;
    try {
        law = ReproductionLaw::from_json(cfg.raw.at("law"));
    } catch (const std::exception& e) {
        throw RefusedConfig(std::string("bad reproduction law: ") + e.what());
    }
    const std::string mode = cfg.raw.value("mode", std::string("hitting"));
    if (mode != "hitting" && mode != "extinction")
        throw RefusedConfig("branching mode must be \"hitting\" or \"extinction\"");
    auto k_list = cfg.raw.value("k_list", std::vector<std::int64_t>{100, 1000, 10000});
    std::sort(k_list.begin(), k_list.end());
    const int replicates = cfg.raw.value("replicates", 100);
    const std::int64_t cap = cfg.raw.value("ever_born_cap", std::int64_t{10'000'000});

    const double t0 = now_ms();
    ResultTable table;
    table.header = {"mode", "replicate", "k", "time", "survived", "truncated", "seed", "config_hash"};
    table.manifest = base_manifest(cfg);

    if (mode == "hitting") {
        std::vector<PopulationTrace> traces(static_cast<std::size_t>(replicates));
        parallel_for_indexed(replicates, cfg.jobs, [&](std::int64_t r) {
            CmjOptions opt;
            opt.ancestors = 1;
            opt.seed = cfg.base_seed + static_cast<std::uint64_t>(r);
            opt.alive_thresholds = k_list;
            opt.ever_born_cap = cap;
            traces[static_cast<std::size_t>(r)] = simulate_cmj(law, opt);
        });
        std::int64_t survivors = 0;
        for (int r = 0; r < replicates; ++r) {
            const auto& tr = traces[static_cast<std::size_t>(r)];
            bool all_hit = true;
            for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
                const double t = tr.threshold_times[ki];
                const bool hit = !std::isnan(t);
                all_hit = all_hit && hit;
                table.add_row({mode, std::to_string(r), std::to_string(k_list[ki]), fd(t),
                               hit ? "1" : "0", tr.truncated ? "1" : "0",
                               std::to_string(cfg.base_seed + static_cast<std::uint64_t>(r)),
                               short_hash(cfg)});
            }
            if (all_hit) ++survivors;
        }
        table.manifest["derived"] = {{"replicates", replicates},
                                     {"survivors", survivors},
                                     {"acceptance_rate",
                                      static_cast<double>(survivors) / std::max(1, replicates)},
                                     {"mean_offspring", law.mean_offspring()}};
    } else {
        struct Row {
            std::int64_t k;
            int replicate;
            double time;
            std::uint64_t seed;
        };
        std::vector<Row> rows(k_list.size() * static_cast<std::size_t>(replicates));
        parallel_for_indexed(static_cast<std::int64_t>(rows.size()), cfg.jobs, [&](std::int64_t i) {
            const std::size_t ki = static_cast<std::size_t>(i) / static_cast<std::size_t>(replicates);
            const int r = static_cast<int>(i % replicates);
            const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
            rows[static_cast<std::size_t>(i)] =
                Row{k_list[ki], r, extinction_time_subcritical(law, static_cast<int>(k_list[ki]), seed),
                    seed};
        });
        for (const auto& row : rows)
            table.add_row({mode, std::to_string(row.replicate), std::to_string(row.k), fd(row.time),
                           "1", "0", std::to_string(row.seed), short_hash(cfg)});
        table.manifest["derived"] = {{"replicates", replicates},
                                     {"mean_offspring", law.mean_offspring()}};
    }
    table.manifest["wall_ms"] = now_ms() - t0;
    return table;
}

ResultTable run_examples(const ExperimentConfig& cfg) {
    ResultTable table;
    table.header = {"example", "quantity", "parameter", "value"};
    table.manifest = base_manifest(cfg);
    json derived;

    // family with mean 4 thinned by vaccination stays in closed form
    {
        const double lambda = cfg.raw.value("example1_lambda", 4.0);
        const EpidemicParameters p{DegreeModel::poisson(lambda),
                                   InfectiousPeriodModel::exponential(1.0), 1.0};
        const double psi = compute_psi(p);
        json rows = json::array();
        for (int i = 0; i <= 9; ++i) {
            const double c = 0.55 + 0.05 * i;
            const auto s = vaccinated_summary(p, c);
            const std::string pc = "c=" + fd(c);
            table.add_row({"example1", "q_tilde_star_c", pc, fd(s.q_tilde_star)});
            table.add_row({"example1", "alpha_prime_c", pc, fd(s.alpha_prime)});
            table.add_row({"example1", "abs_alpha_star_c", pc, fd(std::abs(s.alpha_star))});
            table.add_row({"example1", "duration_constant_c", pc, fd(s.duration_constant)});
            const double qt = s.q_tilde_star;
            const double formula = qt * (c * lambda * psi - 1.0) / (c * lambda * psi * qt - 1.0);
            const double h = 1e-4;
            const auto cq = [&](double cc) {
                return cc * solve_qtilde_star({p.degree.vaccinate(cc), p.period, p.beta});
            };
            const double fdiff = c + h <= 1.0
                                     ? (cq(c + h) - cq(c - h)) / (2.0 * h)
                                     : (cq(c) - cq(c - h)) / h;
            table.add_row({"example1", "dcq_dc_formula", pc, fd(formula)});
            table.add_row({"example1", "dcq_dc_fd", pc, fd(fdiff)});
            rows.push_back({{"c", c},
                            {"duration", s.duration_constant},
                            {"alpha_prime", s.alpha_prime},
                            {"abs_alpha_star", std::abs(s.alpha_star)}});
        }
        derived["example1"] = rows;
    }

    // dense-graph limit: poisson approximants against the Lambert-W values
    {
        const double beta_prime = cfg.raw.value("example2_beta_prime", 2.0);
        const auto period = InfectiousPeriodModel::constant(1.0);
        const auto lim = uniform_mixing_limit(beta_prime, period, 1.0);
        table.add_row({"example2", "q_tilde_limit", "", fd(lim.q_tilde_star)});
        table.add_row({"example2", "alpha_prime_limit", "", fd(lim.alpha_prime)});
        table.add_row({"example2", "alpha_star_limit", "", fd(lim.alpha_star.value)});
        json rows = json::array();
        for (double lambda : {100.0, 1000.0, 10000.0}) {
            const EpidemicParameters p{DegreeModel::poisson(lambda), period, beta_prime / lambda};
            const double qt = solve_qtilde_star(p);
            const std::string pl = "lambda=" + fd(lambda);
            table.add_row({"example2", "q_tilde_poisson", pl, fd(qt)});
            table.add_row({"example2", "q_tilde_gap", pl, fd(std::abs(qt - lim.q_tilde_star))});
            rows.push_back({{"lambda", lambda}, {"gap", std::abs(qt - lim.q_tilde_star)}});
        }
        derived["example2"] = {{"q_tilde_limit", lim.q_tilde_star}, {"scan", rows}};
    }

    // three-point degree table with one-percent vaccination
    {
        const std::map<int, double> pmf{{1, 100.0 / 201.0}, {2, 100.0 / 201.0}, {100, 1.0 / 201.0}};
        json rows = json::array();
        for (double t0 : {10.0, 100.0, 1000.0, 10000.0}) {
            const EpidemicParameters p{DegreeModel::table(pmf),
                                       InfectiousPeriodModel::exponential_cutoff(0.01, t0),
                                       0.99};
            const double unvacc = duration_constant(p);
            const auto vac = vaccinated_summary(p, 0.99);
            const std::string pt = "t0=" + fd(t0);
            table.add_row({"example3", "duration_unvaccinated", pt, fd(unvacc)});
            table.add_row({"example3", "duration_c_0.99", pt, fd(vac.duration_constant)});
            rows.push_back(
                {{"t0", t0}, {"unvaccinated", unvacc}, {"c_0.99", vac.duration_constant}});
        }
        derived["example3"] = rows;
    }

    table.manifest["derived"] = derived;
    return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "analyze") return run_analyze(cfg);
    if (cfg.kind == "simulate") return run_simulate(cfg);
    if (cfg.kind == "montecarlo") return run_montecarlo(cfg);
    if (cfg.kind == "scaling") return run_scaling(cfg);
    if (cfg.kind == "vaccinate-sweep") return run_vaccinate_sweep(cfg);
    if (cfg.kind == "branching") return run_branching(cfg);
    if (cfg.kind == "examples") return run_examples(cfg);
    throw RefusedConfig("unknown experiment kind: " + cfg.kind);
}

} // namespace epinet
