#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "epinet/analytics.hpp"
#include "epinet/branching.hpp"
#include "epinet/epidemic.hpp"

namespace epinet {

// Raised for configurations the tool declines to run (exit code 2):
// semantically invalid requests, most prominently a strong-extinction
// scaling target for a model whose infectious-period tail is too heavy.
struct RefusedConfig : std::runtime_error {
    explicit RefusedConfig(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
    std::string kind;  // analyze | simulate | montecarlo | scaling | vaccinate-sweep | branching | examples
    nlohmann::json raw;
    std::uint64_t base_seed = 1;
    int jobs = 1;

    static ExperimentConfig load(const std::filesystem::path& file);
    static ExperimentConfig from_json(nlohmann::json j);
};

struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json manifest;  // config echo + derived diagnostics

    // extra artifacts keyed by filename (events.csv, tree.csv, summary.json, ...)
    std::vector<std::pair<std::string, std::string>> extra_files;

    void add_row(std::vector<std::string> row);
    std::string csv() const;
    void write(const std::filesystem::path& out_dir) const;
};

std::string format_double(double v);  // shortest round-trip representation
std::uint64_t config_hash(const nlohmann::json& j);

// Deterministic replicate fan-out: f(i) must depend only on i and the
// config; results are identical for any worker count.
void parallel_for_indexed(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& f);

// ---- experiment runners ----------------------------------------------------

ResultTable run_analyze(const ExperimentConfig& cfg);
ResultTable run_simulate(const ExperimentConfig& cfg);
ResultTable run_montecarlo(const ExperimentConfig& cfg);
ResultTable run_scaling(const ExperimentConfig& cfg);
ResultTable run_vaccinate_sweep(const ExperimentConfig& cfg);
ResultTable run_branching(const ExperimentConfig& cfg);
ResultTable run_examples(const ExperimentConfig& cfg);

ResultTable run_experiment(const ExperimentConfig& cfg);

// Conditioning threshold for "major outbreak" in experiments.  The outcome
// flag keeps the literal log n rule, but at desk scale roughly 1% of runs
// flagged that way are o(n) flare-ups (a few dozen infections) whose final
// size sits near 1, biasing conditional means; any threshold growing to
// infinity but o(n) defines the same asymptotic event, and (log n)^2
// separates the two clusters cleanly at every n the harness touches.
std::int64_t default_major_threshold(int n);

// Montecarlo sub-primitive shared with the acceptance suite: runs epidemic
// replicates at one n until `majors_required` major outbreaks are collected
// (or `max_attempts` is exhausted), in deterministic seed order
// seed(attempt) = base_seed + attempt.
struct MonteCarloBatch {
    std::vector<SimulationOutcome> outcomes;  // attempts 0..last, in order
    std::vector<char> conditioned;            // per attempt: infections above threshold
    std::int64_t threshold = 0;
    std::int64_t attempts = 0;
    std::int64_t majors = 0;  // count above threshold
    bool quota_met = false;
};
// major_threshold <= 0 selects default_major_threshold(n).
MonteCarloBatch collect_major_outbreaks(const EpidemicParameters& p, int n,
                                        std::int64_t majors_required, std::int64_t max_attempts,
                                        std::uint64_t base_seed, int jobs,
                                        const SimOptions& proto = {},
                                        std::int64_t major_threshold = -1);

} // namespace epinet
