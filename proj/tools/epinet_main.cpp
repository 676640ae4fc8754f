#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "epinet/experiment.hpp"

namespace {

int run(const std::string& kind, const std::string& config_path, const std::string& out_dir,
        std::uint64_t seed, bool seed_given, int jobs) {
    using namespace epinet;
    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = ExperimentConfig::load(config_path);
            if (!cfg.kind.empty() && cfg.kind != kind)
                throw RefusedConfig("config kind \"" + cfg.kind + "\" does not match subcommand \"" +
                                    kind + "\"");
        } else {
            cfg = ExperimentConfig::from_json({{"kind", kind}});
        }
        cfg.kind = kind;
        cfg.raw["kind"] = kind;
        if (seed_given) {
            cfg.base_seed = seed;
            cfg.raw["base_seed"] = seed;
        }
        cfg.jobs = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
        if (cfg.jobs < 1) cfg.jobs = 1;

        const auto table = run_experiment(cfg);
        table.write(out_dir);

        for (const auto& [name, content] : table.extra_files) {
            if (name == "summary.json" || name == "outcome.json") std::cout << content;
        }
        std::cerr << kind << ": wrote " << table.rows.size() << " result rows to " << out_dir
                  << std::endl;
        return 0;
    } catch (const RefusedConfig& e) {
        std::cerr << "refused: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epinet: analytics, simulation and experiments for SIR epidemics on "
                 "configuration-model graphs"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"analyze",  "simulate",  "montecarlo", "scaling",
                                            "vaccinate-sweep", "branching", "examples"};
    struct Args {
        std::string config;
        std::string out = "out";
        std::uint64_t seed = 0;
        int jobs = 0;
    };
    Args args;
    std::vector<CLI::App*> subs;
    for (const auto& kind : kinds) {
        auto* sub = app.add_subcommand(kind);
        sub->add_option("--config", args.config, "experiment config (JSON)");
        sub->add_option("--out", args.out, "output directory");
        sub->add_option("--seed", args.seed, "override the config base seed");
        sub->add_option("--jobs", args.jobs, "worker threads for replicates");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (subs[i]->parsed()) {
            const bool seed_given = subs[i]->count("--seed") > 0;
            return run(kinds[i], args.config, args.out, args.seed, seed_given, args.jobs);
        }
    }
    return 1;
}
