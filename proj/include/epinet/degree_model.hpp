#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "epinet/rng.hpp"

namespace epinet {

/// Probability law on vertex degrees, with the generating-function and
/// size-biasing services the analytic layer consumes.
///
/// Families: regular(d), poisson(lambda), finite-support table, power_law
/// (kmax may be infinite), and binomially thinned versions of any of
/// these, as produced by vaccinate().  Immutable after construction.
class DegreeModel {
public:
    static DegreeModel regular(int d);
    static DegreeModel poisson(double lambda);
    static DegreeModel table(const std::map<int, double>& pmf);
    // k_max < 0 means unbounded support; exponent must exceed 2 in that case
    // so the mean degree stays finite.
    static DegreeModel power_law(double exponent, int k_min, int k_max);

    double pmf(int k) const;
    double mean() const;            // E[D] in (0, inf)
    double second_moment() const;   // E[D^2], may be +inf
    // -1 when the support is unbounded
    int max_degree() const;

    double size_biased_pmf(int k) const;     // k p_k / E[D]
    double size_biased_excess_mean() const;  // E[D~ - 1] = E[D(D-1)] / E[D], may be +inf

    // E[x^D] for x in [0,1]; throws std::domain_error outside.
    double pgf(double x) const;
    // E[x^(D~-1)]; same domain as pgf.
    double excess_pgf(double x) const;
    // E[(D~-1) x^(D~-2)] for x in [0,1); x = 1 returns E[D~-1] (may be +inf).
    double excess_derivative_weighted(double x) const;

    // E[(D~-1)(1-eps)^(D~-2)] evaluated stably for tiny eps: forming 1-eps
    // loses eps to rounding below ~1e-16, which matters for heavy-tailed
    // laws whose derivative diverges at 1.
    double excess_derivative_weighted_complement(double eps) const;

    int sample(Rng& rng) const;

    // All-or-nothing vaccination with escape probability c: returns the
    // degree law among initially susceptible vertices, a mixed binomial
    // with trials D and success probability c.  c = 1 is the identity;
    // a thinned poisson collapses to poisson(c*lambda).
    DegreeModel vaccinate(double c) const;

    std::string family() const;
    nlohmann::json descriptor() const;
    static DegreeModel from_json(const nlohmann::json& j);

private:
    struct Regular {
        int d;
    };
    struct Poisson {
        double lambda;
    };
    struct Table {
        std::vector<int> ks;      // ascending
        std::vector<double> ps;
        double mean, second;
    };
    struct PowerLaw {
        double exponent;
        int k_min;
        int k_max;  // -1 = unbounded
        double norm, mean, second;
    };
    struct Thinned {
        std::shared_ptr<const DegreeModel> base;
        double c;
    };
    using Impl = std::variant<Regular, Poisson, Table, PowerLaw, Thinned>;

    explicit DegreeModel(Impl impl) : impl_(std::move(impl)) {}
    Impl impl_;
};

} // namespace epinet
