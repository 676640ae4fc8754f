#include "epinet/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace epinet {

double survival_transform(const InfectiousPeriodModel& period, double a) {
    if (std::abs(a) < 1e-300) return period.mean();
    const double lc = period.laplace_complement(a);
    if (std::isinf(lc)) return kInf;
    return lc / a;
}

double contact_transform(const InfectiousPeriodModel& period, double beta, double x) {
    if (!(beta > 0.0)) throw std::invalid_argument("contact_transform requires beta > 0");
    return beta * survival_transform(period, x + beta);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
                        double fmid, double fhi, double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flm = f(lmid);
    const double frm = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(hi > lo)) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 52);
}

double contact_transform_quadrature(const InfectiousPeriodModel& period, double beta, double x) {
    if (!(beta > 0.0)) throw std::invalid_argument("contact_transform requires beta > 0");
    const double r = period.tail_rate();
    double t_max = period.support_bound();
    if (std::isinf(t_max)) {
        // integrand decays like e^{-(x + beta + r) t} up to polynomial factors
        const double decay = x + beta + (std::isinf(r) ? 0.0 : r);
        if (decay <= 0.0) return kInf;
        // e^{-decay * t_max} < 1e-14 with headroom for polynomial factors
        t_max = 45.0 / decay;
    }
    if (t_max <= 0.0) return 0.0;
    const auto integrand = [&](double t) { return beta * std::exp(-(x + beta) * t) * period.survival(t); };
    // coarse scale estimate so the absolute tolerance tracks the value
    double scale = 0.0;
    for (int i = 0; i <= 16; ++i) scale = std::max(scale, std::abs(integrand(t_max * i / 16.0)));
    const double tol = std::max(scale * t_max, 1e-30) * 1e-12;
    // split at the scale of the exponential factor to help the first refinement
    const double split = std::min(t_max, 1.0 / std::max(std::abs(x + beta), 1e-3));
    return integrate_adaptive(integrand, 0.0, split, tol * 0.5) +
           integrate_adaptive(integrand, split, t_max, tol * 0.5);
}

} // namespace epinet
