#pragma once

#include <cmath>
#include <stdexcept>

namespace chebvol {

/// Arithmetic of the base number field entering the Euler characteristic:
/// chi(m) = deg(m) - (N/2) log |disc| + r1 log V(N) + r2 log V(2N),
/// with V(N) the volume of the unit ball in R^N. Everything here runs over Q
/// (one real place, discriminant 1); the struct keeps the formula honest.
struct FieldParams {
    double log_abs_disc = 0.0;
    int r1 = 1;
    int r2 = 0;

    static FieldParams rationals() { return {}; }

    void validate() const {
        if (r1 < 0 || r2 < 0 || r1 + r2 < 1)
            throw std::invalid_argument("FieldParams: need r1 + r2 >= 1, both nonnegative");
        if (log_abs_disc < 0)
            throw std::invalid_argument("FieldParams: |disc| >= 1 always");
    }
};

/// log V(N) for the Euclidean unit ball in R^N: V(N) = pi^{N/2} / Gamma(N/2+1).
inline double log_ball_volume(double n) {
    if (n < 0) throw std::invalid_argument("log_ball_volume: negative dimension");
    return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0);
}

}  // namespace chebvol
