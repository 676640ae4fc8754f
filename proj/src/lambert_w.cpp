#include "epinet/lambert_w.hpp"

#include <cmath>
#include <stdexcept>

namespace epinet {

double lambert_w0(double z) {
    const double branch = -std::exp(-1.0);
    if (z < branch) {
        if (z > branch - 1e-12) {
            z = branch;  // rounding guard for arguments built as -x e^{-x}
        } else {
            throw std::domain_error("lambert_w0: argument below -1/e");
        }
    }
    if (z == 0.0) return 0.0;

    double w;
    if (z < -0.25) {
        // series around the branch point in p = sqrt(2(ez + 1))
        const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (z < 1.5) {
        w = z * (1.0 - z);
    } else {
        const double l1 = std::log(z);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int i = 0; i < 60; ++i) {
        if (std::abs(1.0 + w) < 1e-12) break;  // at the branch point the step degenerates
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
    }
    return w;
}

} // namespace epinet
