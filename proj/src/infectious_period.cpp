#include "epinet/infectious_period.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace epinet {

InfectiousPeriodModel InfectiousPeriodModel::exponential(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("exponential period requires mu > 0");
    return InfectiousPeriodModel(Exponential{mu});
}

InfectiousPeriodModel InfectiousPeriodModel::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("constant period requires a finite value >= 0");
    return InfectiousPeriodModel(Constant{value});
}

InfectiousPeriodModel InfectiousPeriodModel::exponential_cutoff(double mu, double t0) {
    if (!(mu > 0.0) || !(t0 > 0.0) || !std::isfinite(t0))
        throw std::invalid_argument("exponential_cutoff requires mu > 0 and finite t0 > 0");
    return InfectiousPeriodModel(Cutoff{mu, t0});
}

InfectiousPeriodModel InfectiousPeriodModel::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw std::invalid_argument("gamma period requires shape, rate > 0");
    return InfectiousPeriodModel(Gamma{shape, rate});
}

InfectiousPeriodModel InfectiousPeriodModel::infinite() { return InfectiousPeriodModel(Infinite{}); }

double InfectiousPeriodModel::survival(double t) const {
    if (t < 0.0) return 1.0;
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return std::exp(-m.mu * t);
            else if constexpr (std::is_same_v<T, Constant>) return t < m.value ? 1.0 : 0.0;
            else if constexpr (std::is_same_v<T, Cutoff>) return t < m.t0 ? std::exp(-m.mu * t) : 0.0;
            else if constexpr (std::is_same_v<T, Gamma>) return boost::math::gamma_q(m.shape, m.rate * t);
            else return 1.0;
        },
        impl_);
}

double InfectiousPeriodModel::sample(Rng& rng) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return rng.exponential(m.mu);
            else if constexpr (std::is_same_v<T, Constant>) return m.value;
            else if constexpr (std::is_same_v<T, Cutoff>) return std::min(rng.exponential(m.mu), m.t0);
            else if constexpr (std::is_same_v<T, Gamma>) return rng.gamma(m.shape, m.rate);
            else return kInf;
        },
        impl_);
}

double InfectiousPeriodModel::mean() const {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return 1.0 / m.mu;
            else if constexpr (std::is_same_v<T, Constant>) return m.value;
            else if constexpr (std::is_same_v<T, Cutoff>) return -std::expm1(-m.mu * m.t0) / m.mu;
            else if constexpr (std::is_same_v<T, Gamma>) return m.shape / m.rate;
            else return kInf;
        },
        impl_);
}

double InfectiousPeriodModel::tail_rate() const {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return m.mu;
            else if constexpr (std::is_same_v<T, Constant>) return kInf;
            else if constexpr (std::is_same_v<T, Cutoff>) return kInf;
            else if constexpr (std::is_same_v<T, Gamma>) return m.rate;
            else return 0.0;
        },
        impl_);
}

double InfectiousPeriodModel::laplace(double s) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return s > -m.mu ? m.mu / (m.mu + s) : kInf;
            } else if constexpr (std::is_same_v<T, Constant>) {
                return std::exp(-s * m.value);
            } else if constexpr (std::is_same_v<T, Cutoff>) {
                const double u = m.mu + s;
                const double atom = std::exp(-u * m.t0);  // survivor mass parked at t0
                if (u == 0.0) return m.mu * m.t0 + 1.0;
                return m.mu * -std::expm1(-u * m.t0) / u + atom;
            } else if constexpr (std::is_same_v<T, Gamma>) {
                return s > -m.rate ? std::pow(1.0 + s / m.rate, -m.shape) : kInf;
            } else {
                if (s > 0.0) return 0.0;
                if (s == 0.0) return 1.0;
                return kInf;
            }
        },
        impl_);
}

double InfectiousPeriodModel::laplace_complement(double s) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return s > -m.mu ? s / (m.mu + s) : -kInf;
            } else if constexpr (std::is_same_v<T, Constant>) {
                return -std::expm1(-s * m.value);
            } else if constexpr (std::is_same_v<T, Cutoff>) {
                const double u = m.mu + s;
                if (u == 0.0) return s * m.t0;
                return s * -std::expm1(-u * m.t0) / u;
            } else if constexpr (std::is_same_v<T, Gamma>) {
                return s > -m.rate ? -std::expm1(-m.shape * std::log1p(s / m.rate)) : -kInf;
            } else {
                if (s > 0.0) return 1.0;
                if (s == 0.0) return 0.0;
                return -kInf;
            }
        },
        impl_);
}

double InfectiousPeriodModel::support_bound() const {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Constant>) return m.value;
            else if constexpr (std::is_same_v<T, Cutoff>) return m.t0;
            else return kInf;
        },
        impl_);
}

std::string InfectiousPeriodModel::family() const {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, Constant>) return "constant";
            else if constexpr (std::is_same_v<T, Cutoff>) return "exponential_cutoff";
            else if constexpr (std::is_same_v<T, Gamma>) return "gamma";
            else return "infinite";
        },
        impl_);
}

nlohmann::json InfectiousPeriodModel::descriptor() const {
    return std::visit(
        [](const auto& m) -> nlohmann::json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Exponential>) return {{"family", "exponential"}, {"mu", m.mu}};
            else if constexpr (std::is_same_v<T, Constant>) return {{"family", "constant"}, {"value", m.value}};
            else if constexpr (std::is_same_v<T, Cutoff>)
                return {{"family", "exponential_cutoff"}, {"mu", m.mu}, {"t0", m.t0}};
            else if constexpr (std::is_same_v<T, Gamma>)
                return {{"family", "gamma"}, {"shape", m.shape}, {"rate", m.rate}};
            else return {{"family", "infinite"}};
        },
        impl_);
}

InfectiousPeriodModel InfectiousPeriodModel::from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "exponential") return exponential(j.at("mu").get<double>());
    if (fam == "constant") return constant(j.at("value").get<double>());
    if (fam == "exponential_cutoff") return exponential_cutoff(j.at("mu").get<double>(), j.at("t0").get<double>());
    if (fam == "gamma") return gamma(j.at("shape").get<double>(), j.at("rate").get<double>());
    if (fam == "infinite") return infinite();
    throw std::invalid_argument("unknown infectious period family: " + fam);
}

} // namespace epinet
