#include "epinet/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/zeta.hpp>

namespace epinet {

namespace {

constexpr double kPmfTol = 1e-12;      // required normalization accuracy
constexpr double kSeriesTail = 1e-15;  // relative tail bound for infinite sums

double clamp_unit(double x, const char* what) {
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::domain_error(std::string(what) + " argument outside [0,1]");
    return std::min(std::max(x, 0.0), 1.0);
}

// polylogarithm Li_s(x) for x in (0,1); near x = 1 the direct series needs
// O(1/(1-x)) terms, so switch to the expansion in w = -log x,
//   Li_s(e^{-w}) = Gamma(1-s) w^{s-1} + sum_j zeta(s-j) (-w)^j / j!,
// valid for |w| < 2 pi and non-integer s (integer s gets a tiny nudge; the
// induced error is far below the series tolerance).  The expansion branch
// is parameterized by w so callers can keep arguments exponentially close
// to 1 from rounding away.
double polylog_expansion_w(double s, double w) {
    if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s) + 1e-9;
    // only a handful of orders appear per degree model while x varies across
    // a solve, so cache the zeta coefficients and Gamma(1-s) per order
    struct Coeffs {
        double gamma1ms;
        double zeta[61];
    };
    thread_local std::unordered_map<double, Coeffs> cache;
    auto it = cache.find(s);
    if (it == cache.end()) {
        if (cache.size() > 64) cache.clear();
        Coeffs c;
        c.gamma1ms = std::tgamma(1.0 - s);
        for (int j = 0; j <= 60; ++j) c.zeta[j] = boost::math::zeta(s - j);
        it = cache.emplace(s, c).first;
    }
    const Coeffs& coeffs = it->second;
    double acc = coeffs.gamma1ms * std::pow(w, s - 1.0);
    double wpow = 1.0;  // (-w)^j / j!
    for (int j = 0; j <= 60; ++j) {
        const double term = coeffs.zeta[j] * wpow;
        acc += term;
        wpow *= -w / (j + 1.0);
        if (j > 4 && std::abs(term) < 1e-17 * std::abs(acc)) break;
    }
    return acc;
}

double polylog(double s, double x) {
    if (x <= 0.75) {
        double acc = 0.0;
        double k = 1.0;
        for (;;) {
            const double term = std::pow(k, -s) * std::pow(x, k);
            acc += term;
            k += 1.0;
            if (term * x / (1.0 - x) < kSeriesTail * (acc + 1e-300) && k > 8.0) return acc;
        }
    }
    return polylog_expansion_w(s, -std::log(x));
}

// sum_{k>=k0} k^(j-a) x^k for x in [0,1): the full polylog minus the bottom
// terms, with a direct walk when the support is finite
double power_series(double a, int k0, int k_max, int j, double x) {
    if (x <= 0.0) return k0 <= 0 ? 1.0 : std::pow(static_cast<double>(k0), j - a) * std::pow(x, k0);
    if (k_max >= 0) {
        double acc = 0.0;
        for (std::int64_t k = k0; k <= k_max; ++k) {
            const double term =
                std::pow(static_cast<double>(k), j - a) * std::pow(x, static_cast<double>(k));
            acc += term;
            if (term < kSeriesTail * acc && k > k0 + 8) break;
        }
        return acc;
    }
    double acc = polylog(a - j, x);
    for (int k = 1; k < k0; ++k)
        acc -= std::pow(static_cast<double>(k), j - a) * std::pow(x, static_cast<double>(k));
    return acc;
}


// sum_{k>=k0} k^(j-a), i.e. a zeta value less the bottom terms; +inf when
// the exponent does not decay fast enough.
double power_moment(double a, int k0, int k_max, int j) {
    const double expo = j - a;
    if (k_max >= 0) {
        double acc = 0.0;
        for (std::int64_t k = k0; k <= k_max; ++k) acc += std::pow(static_cast<double>(k), expo);
        return acc;
    }
    if (expo >= -1.0) return kInf;
    double acc = boost::math::zeta(-expo);
    for (int k = 1; k < k0; ++k) acc -= std::pow(static_cast<double>(k), expo);
    return acc;
}

double log_binom(std::int64_t m, std::int64_t k) {
    return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(m - k) + 1.0);
}

} // namespace

DegreeModel DegreeModel::regular(int d) {
    if (d < 1) throw std::invalid_argument("regular degree model requires d >= 1");
    return DegreeModel(Regular{d});
}

DegreeModel DegreeModel::poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("poisson degree model requires lambda > 0");
    return DegreeModel(Poisson{lambda});
}

DegreeModel DegreeModel::table(const std::map<int, double>& pmf) {
    Table t;
    double total = 0.0, mean = 0.0, second = 0.0;
    for (const auto& [k, p] : pmf) {
        if (k < 0) throw std::invalid_argument("table degree model: negative degree");
        if (p < 0.0) throw std::invalid_argument("table degree model: negative probability");
        if (p == 0.0) continue;
        t.ks.push_back(k);
        t.ps.push_back(p);
        total += p;
        mean += k * p;
        second += static_cast<double>(k) * k * p;
    }
    if (std::abs(total - 1.0) > kPmfTol)
        throw std::invalid_argument("table degree model: probabilities must sum to 1");
    for (double& p : t.ps) p /= total;
    t.mean = mean / total;
    t.second = second / total;
    if (!(t.mean > 0.0)) throw std::invalid_argument("degenerate degree model: E[D] = 0");
    return DegreeModel(std::move(t));
}

DegreeModel DegreeModel::power_law(double exponent, int k_min, int k_max) {
    if (k_min < 1) throw std::invalid_argument("power_law requires k_min >= 1");
    if (k_max >= 0 && k_max < k_min) throw std::invalid_argument("power_law requires k_max >= k_min");
    if (k_max < 0 && exponent <= 2.0)
        throw std::invalid_argument("power_law with unbounded support requires exponent > 2 (finite mean)");
    PowerLaw pl;
    pl.exponent = exponent;
    pl.k_min = k_min;
    pl.k_max = k_max;
    pl.norm = power_moment(exponent, k_min, k_max, 0);
    pl.mean = power_moment(exponent, k_min, k_max, 1) / pl.norm;
    const double m2 = power_moment(exponent, k_min, k_max, 2);
    pl.second = std::isinf(m2) ? kInf : m2 / pl.norm;
    return DegreeModel(std::move(pl));
}

double DegreeModel::pmf(int k) const {
    if (k < 0) return 0.0;
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return k == m.d ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(k * std::log(m.lambda) - m.lambda - std::lgamma(k + 1.0));
            } else if constexpr (std::is_same_v<T, Table>) {
                auto it = std::lower_bound(m.ks.begin(), m.ks.end(), k);
                if (it == m.ks.end() || *it != k) return 0.0;
                return m.ps[static_cast<std::size_t>(it - m.ks.begin())];
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (k < m.k_min || (m.k_max >= 0 && k > m.k_max)) return 0.0;
                return std::pow(static_cast<double>(k), -m.exponent) / m.norm;
            } else {
                // thinned: mixed binomial over the base law
                const DegreeModel& base = *m.base;
                const double c = m.c;
                double acc = 0.0;
                const int base_max = base.max_degree();
                for (int deg = k;; ++deg) {
                    if (base_max >= 0 && deg > base_max) break;
                    const double pb = base.pmf(deg);
                    double term = 0.0;
                    if (pb > 0.0) {
                        term = pb * std::exp(log_binom(deg, k) + k * std::log(c) +
                                             (deg - k) * std::log1p(-c));
                        acc += term;
                    }
                    // past 2k/c trials the binomial factor shrinks by roughly
                    // (1-c) per step, so the tail is geometric
                    if (base_max < 0 && deg > 8 + 2 * static_cast<int>(k / c) &&
                        term * (1.0 - c) < c * kSeriesTail * (acc + 1e-300))
                        break;
                }
                return acc;
            }
        },
        impl_);
}

double DegreeModel::mean() const {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) return m.d;
            else if constexpr (std::is_same_v<T, Poisson>) return m.lambda;
            else if constexpr (std::is_same_v<T, Table>) return m.mean;
            else if constexpr (std::is_same_v<T, PowerLaw>) return m.mean;
            else return m.c * m.base->mean();
        },
        impl_);
}

double DegreeModel::second_moment() const {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) return static_cast<double>(m.d) * m.d;
            else if constexpr (std::is_same_v<T, Poisson>) return m.lambda + m.lambda * m.lambda;
            else if constexpr (std::is_same_v<T, Table>) return m.second;
            else if constexpr (std::is_same_v<T, PowerLaw>) return m.second;
            else {
                const double b1 = m.base->mean();
                const double b2 = m.base->second_moment();
                // E[(Bin(m,c))^2] = c(1-c) m + c^2 m^2, mixed over m
                return m.c * (1.0 - m.c) * b1 + m.c * m.c * b2;
            }
        },
        impl_);
}

int DegreeModel::max_degree() const {
    return std::visit(
        [](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) return m.d;
            else if constexpr (std::is_same_v<T, Poisson>) return -1;
            else if constexpr (std::is_same_v<T, Table>) return m.ks.back();
            else if constexpr (std::is_same_v<T, PowerLaw>) return m.k_max;
            else return m.base->max_degree();
        },
        impl_);
}

double DegreeModel::size_biased_pmf(int k) const {
    if (k < 1) return 0.0;
    return k * pmf(k) / mean();
}

double DegreeModel::size_biased_excess_mean() const {
    const double m2 = second_moment();
    if (std::isinf(m2)) return kInf;
    return (m2 - mean()) / mean();
}

double DegreeModel::pgf(double x) const {
    x = clamp_unit(x, "pgf");
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return std::pow(x, m.d);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(-m.lambda * (1.0 - x));
            } else if constexpr (std::is_same_v<T, Table>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m.ks.size(); ++i) acc += m.ps[i] * std::pow(x, m.ks[i]);
                return acc;
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (x == 1.0) return 1.0;
                return power_series(m.exponent, m.k_min, m.k_max, 0, x) / m.norm;
            } else {
                return m.base->pgf(1.0 - m.c + m.c * x);
            }
        },
        impl_);
}

double DegreeModel::excess_pgf(double x) const {
    x = clamp_unit(x, "excess_pgf");
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return m.d == 1 ? 1.0 : std::pow(x, m.d - 1);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(-m.lambda * (1.0 - x));
            } else if constexpr (std::is_same_v<T, Table>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m.ks.size(); ++i) {
                    const int k = m.ks[i];
                    if (k == 0) continue;
                    acc += k * m.ps[i] * (k == 1 ? 1.0 : std::pow(x, k - 1));
                }
                return acc / m.mean;
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (x == 1.0) return 1.0;
                if (x == 0.0) return m.k_min == 1 ? 1.0 / (m.norm * m.mean) : 0.0;
                // E[D x^(D-1)] / E[D]
                return power_series(m.exponent, m.k_min, m.k_max, 1, x) / (x * m.norm * m.mean);
            } else {
                return m.base->excess_pgf(1.0 - m.c + m.c * x);
            }
        },
        impl_);
}

double DegreeModel::excess_derivative_weighted(double x) const {
    x = clamp_unit(x, "excess_derivative_weighted");
    if (x == 1.0) return size_biased_excess_mean();
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                if (m.d <= 1) return 0.0;
                return (m.d - 1) * (m.d == 2 ? 1.0 : std::pow(x, m.d - 2));
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return m.lambda * std::exp(-m.lambda * (1.0 - x));
            } else if constexpr (std::is_same_v<T, Table>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m.ks.size(); ++i) {
                    const int k = m.ks[i];
                    if (k < 2) continue;
                    acc += static_cast<double>(k) * (k - 1) * m.ps[i] *
                           (k == 2 ? 1.0 : std::pow(x, k - 2));
                }
                return acc / m.mean;
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (m.k_max >= 0 && m.k_max < 2) return 0.0;
                if (x == 0.0) {
                    // only the k = 2 term survives
                    return m.k_min <= 2 ? 2.0 * std::pow(2.0, -m.exponent) / (m.norm * m.mean) : 0.0;
                }
                // E[D(D-1) x^(D-2)] / E[D]; finite for x < 1 whatever the tail
                const double s2 = power_series(m.exponent, std::max(m.k_min, 2), m.k_max, 2, x);
                const double s1 = power_series(m.exponent, std::max(m.k_min, 2), m.k_max, 1, x);
                return (s2 - s1) / (x * x * m.norm * m.mean);
            } else {
                return m.c * m.base->excess_derivative_weighted(1.0 - m.c + m.c * x);
            }
        },
        impl_);
}

double DegreeModel::excess_derivative_weighted_complement(double eps) const {
    if (!(eps >= 0.0)) throw std::domain_error("excess derivative complement: eps must be >= 0");
    if (eps == 0.0) return size_biased_excess_mean();
    if (eps > 1e-6) return excess_derivative_weighted(1.0 - eps);
    const double logx = std::log1p(-eps);  // exact even when 1 - eps rounds to 1
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return m.d <= 1 ? 0.0 : (m.d - 1) * std::exp((m.d - 2) * logx);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return m.lambda * std::exp(-m.lambda * eps);
            } else if constexpr (std::is_same_v<T, Table>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m.ks.size(); ++i) {
                    const int k = m.ks[i];
                    if (k < 2) continue;
                    acc += static_cast<double>(k) * (k - 1) * m.ps[i] * std::exp((k - 2) * logx);
                }
                return acc / m.mean;
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (m.k_max >= 0) {
                    double acc = 0.0;
                    for (int k = std::max(m.k_min, 2); k <= m.k_max; ++k)
                        acc += std::pow(static_cast<double>(k), 2.0 - m.exponent) *
                               (1.0 - 1.0 / static_cast<double>(k)) * std::exp((k - 2) * logx);
                    return acc / (m.norm * m.mean);
                }
                // E[D(D-1)x^(D-2)]/E[D] through the w-form polylogs
                const double w = -logx;
                const int k0 = std::max(m.k_min, 2);
                double s2 = polylog_expansion_w(m.exponent - 2, w);
                double s1 = polylog_expansion_w(m.exponent - 1, w);
                for (int k = 1; k < k0; ++k) {
                    const double xk = std::exp(k * logx);
                    s2 -= std::pow(static_cast<double>(k), 2.0 - m.exponent) * xk;
                    s1 -= std::pow(static_cast<double>(k), 1.0 - m.exponent) * xk;
                }
                const double x2 = std::exp(2.0 * logx);
                return (s2 - s1) / (x2 * m.norm * m.mean);
            } else {
                return m.c * m.base->excess_derivative_weighted_complement(m.c * eps);
            }
        },
        impl_);
}

int DegreeModel::sample(Rng& rng) const {
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return m.d;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return static_cast<int>(rng.poisson(m.lambda));
            } else if constexpr (std::is_same_v<T, Table>) {
                double u = rng.uniform01();
                for (std::size_t i = 0; i + 1 < m.ks.size(); ++i) {
                    if (u < m.ps[i]) return m.ks[i];
                    u -= m.ps[i];
                }
                return m.ks.back();
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                double u = rng.uniform01() * m.norm;
                int k = m.k_min;
                for (;;) {
                    const double w = std::pow(static_cast<double>(k), -m.exponent);
                    if (u < w || (m.k_max >= 0 && k == m.k_max)) return k;
                    u -= w;
                    ++k;
                }
            } else {
                const int base_deg = m.base->sample(rng);
                return static_cast<int>(rng.binomial(base_deg, m.c));
            }
        },
        impl_);
}

DegreeModel DegreeModel::vaccinate(double c) const {
    if (!(c > 0.0) || c > 1.0)
        throw std::domain_error("vaccinate: escape probability c must lie in (0,1]");
    if (c == 1.0) return *this;
    if (const auto* p = std::get_if<Poisson>(&impl_)) return poisson(c * p->lambda);
    if (const auto* t = std::get_if<Thinned>(&impl_)) return DegreeModel(Thinned{t->base, t->c * c});
    return DegreeModel(Thinned{std::make_shared<const DegreeModel>(*this), c});
}

std::string DegreeModel::family() const {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) return "regular";
            else if constexpr (std::is_same_v<T, Poisson>) return "poisson";
            else if constexpr (std::is_same_v<T, Table>) return "table";
            else if constexpr (std::is_same_v<T, PowerLaw>) return "power_law";
            else return "thinned";
        },
        impl_);
}

nlohmann::json DegreeModel::descriptor() const {
    return std::visit(
        [](const auto& m) -> nlohmann::json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return {{"family", "regular"}, {"d", m.d}};
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return {{"family", "poisson"}, {"lambda", m.lambda}};
            } else if constexpr (std::is_same_v<T, Table>) {
                nlohmann::json pmf = nlohmann::json::object();
                for (std::size_t i = 0; i < m.ks.size(); ++i) pmf[std::to_string(m.ks[i])] = m.ps[i];
                return {{"family", "table"}, {"pmf", pmf}};
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                nlohmann::json j{{"family", "power_law"}, {"exponent", m.exponent}, {"k_min", m.k_min}};
                if (m.k_max >= 0) j["k_max"] = m.k_max;
                return j;
            } else {
                return {{"family", "thinned"}, {"base", m.base->descriptor()}, {"c", m.c}};
            }
        },
        impl_);
}

DegreeModel DegreeModel::from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "regular") return regular(j.at("d").get<int>());
    if (fam == "poisson") return poisson(j.at("lambda").get<double>());
    if (fam == "table") {
        std::map<int, double> pmf;
        for (const auto& [k, v] : j.at("pmf").items()) pmf[std::stoi(k)] = v.get<double>();
        return table(pmf);
    }
    if (fam == "power_law") {
        const int k_max = j.contains("k_max") && !j["k_max"].is_null() ? j["k_max"].get<int>() : -1;
        return power_law(j.at("exponent").get<double>(), j.value("k_min", 1), k_max);
    }
    if (fam == "thinned") return from_json(j.at("base")).vaccinate(j.at("c").get<double>());
    throw std::invalid_argument("unknown degree family: " + fam);
}

} // namespace epinet
