#include "epinet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

namespace epinet {

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw RefusedConfig("cannot open config file: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw RefusedConfig(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(std::move(j));
}

ExperimentConfig ExperimentConfig::from_json(nlohmann::json j) {
    ExperimentConfig cfg;
    if (!j.contains("kind")) throw RefusedConfig("config requires a \"kind\" field");
    cfg.kind = j.at("kind").get<std::string>();
    cfg.base_seed = j.value("base_seed", std::uint64_t{1});
    cfg.raw = std::move(j);
    return cfg;
}

void ResultTable::add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

std::string ResultTable::csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void ResultTable::write(const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(out_dir / "results.csv", std::ios::binary);
        f << csv();
    }
    {
        std::ofstream f(out_dir / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
    }
    for (const auto& [name, content] : extra_files) {
        std::ofstream f(out_dir / name, std::ios::binary);
        f << content;
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t config_hash(const nlohmann::json& j) {
    // FNV-1a over the canonical dump (nlohmann objects iterate in key order)
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void parallel_for_indexed(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& f) {
    if (count <= 0) return;
    jobs = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count)));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

std::int64_t default_major_threshold(int n) {
    const double logn = std::log(static_cast<double>(n));
    return std::max<std::int64_t>(static_cast<std::int64_t>(logn) + 1,
                                  static_cast<std::int64_t>(logn * logn));
}

MonteCarloBatch collect_major_outbreaks(const EpidemicParameters& p, int n,
                                        std::int64_t majors_required, std::int64_t max_attempts,
                                        std::uint64_t base_seed, int jobs, const SimOptions& proto,
                                        std::int64_t major_threshold) {
    MonteCarloBatch batch;
    batch.threshold = major_threshold > 0 ? major_threshold : default_major_threshold(n);
    const std::int64_t wave = std::max<std::int64_t>(8L * std::max(jobs, 1), 32);
    std::int64_t next_attempt = 0;
    while (next_attempt < max_attempts) {
        const std::int64_t wave_end = std::min(next_attempt + wave, max_attempts);
        const std::int64_t wave_size = wave_end - next_attempt;
        std::vector<SimulationOutcome> wave_out(static_cast<std::size_t>(wave_size));
        parallel_for_indexed(wave_size, jobs, [&](std::int64_t i) {
            const std::int64_t attempt = next_attempt + i;
            SimOptions opt = proto;
            opt.beta = p.beta;
            opt.period = p.period;
            opt.seed = base_seed + static_cast<std::uint64_t>(attempt);
            const auto seq = sample_degree_sequence(p.degree, n, opt.seed);
            wave_out[static_cast<std::size_t>(i)] = run_epidemic(seq, opt);
        });
        for (auto& out : wave_out) {
            const bool is_major = out.infections > batch.threshold;
            batch.outcomes.push_back(std::move(out));
            batch.conditioned.push_back(is_major ? 1 : 0);
            ++batch.attempts;
            if (is_major) ++batch.majors;
            if (majors_required > 0 && batch.majors >= majors_required) {
                batch.quota_met = true;
                return batch;
            }
        }
        next_attempt = wave_end;
    }
    batch.quota_met = majors_required <= 0 || batch.majors >= majors_required;
    return batch;
}

} // namespace epinet
