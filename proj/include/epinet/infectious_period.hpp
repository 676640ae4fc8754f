#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "epinet/rng.hpp"

namespace epinet {

/// Law of the infectious period L, a [0,inf]-valued random variable.
///
/// Families: exponential(mu), constant(value), exponential with a hard
/// cutoff at t0, gamma(shape, rate), and the degenerate infinite period
/// (SI dynamics).  Immutable after construction.
class InfectiousPeriodModel {
public:
    static InfectiousPeriodModel exponential(double mu);
    static InfectiousPeriodModel constant(double value);
    static InfectiousPeriodModel exponential_cutoff(double mu, double t0);
    static InfectiousPeriodModel gamma(double shape, double rate);
    static InfectiousPeriodModel infinite();

    // P(L > t); non-increasing, survival(0-) = 1
    double survival(double t) const;
    double sample(Rng& rng) const;
    double mean() const;  // may be +inf

    // Tail rate r(L) = sup{ x >= 0 : integral of e^{xt} P(L>t) dt < inf }:
    // +inf for bounded support, the exponential rate for exponential-type
    // tails, 0 when the mean itself is infinite.
    double tail_rate() const;

    // E[e^{-sL}] for real s; +inf when the exponential moment diverges.
    // Atoms at +inf contribute 0 for s > 0 and +inf for s < 0.
    double laplace(double s) const;

    // 1 - E[e^{-sL}], computed in a cancellation-free form per family;
    // -inf when E[e^{-sL}] diverges.
    double laplace_complement(double s) const;

    // Upper bound T with survival(T) = 0, or +inf for unbounded support.
    double support_bound() const;

    std::string family() const;
    nlohmann::json descriptor() const;
    static InfectiousPeriodModel from_json(const nlohmann::json& j);

private:
    struct Exponential {
        double mu;
    };
    struct Constant {
        double value;
    };
    struct Cutoff {
        double mu, t0;
    };
    struct Gamma {
        double shape, rate;
    };
    struct Infinite {};
    using Impl = std::variant<Exponential, Constant, Cutoff, Gamma, Infinite>;

    explicit InfectiousPeriodModel(Impl impl) : impl_(impl) {}
    Impl impl_;
};

} // namespace epinet
