#pragma once

#include <functional>

#include "epinet/infectious_period.hpp"

namespace epinet {

// S(a) = integral over t >= 0 of e^{-at} P(L>t) dt.
// Closed form (1 - E[e^{-aL}])/a via the stable complement; S(0) = E[L].
// Returns +inf when the integral diverges, i.e. when a <= -r(L).
double survival_transform(const InfectiousPeriodModel& period, double a);

// Phi(x) = integral of e^{-xt} beta e^{-beta t} P(L>t) dt = beta * S(x + beta).
// Strictly decreasing in x where finite; Phi(0) is the per-neighbor
// transmission probability psi; +inf for x <= -(beta + r(L)).
double contact_transform(const InfectiousPeriodModel& period, double beta, double x);

// Same integral evaluated by adaptive quadrature on a truncated domain.
// Generic fallback for survival functions without a closed-form transform
// and the independent cross-check for the closed forms above; relative
// error below 1e-10 on the finite domain.
double contact_transform_quadrature(const InfectiousPeriodModel& period, double beta, double x);

// Adaptive Simpson integration of f over [lo, hi] to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double tol);

} // namespace epinet
