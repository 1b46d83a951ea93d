#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chebvol {

struct QuadratureError : std::runtime_error {
    double achieved;
    explicit QuadratureError(double got, double wanted)
        : std::runtime_error("quadrature did not converge: achieved relative error " +
                             std::to_string(got) + " > requested " + std::to_string(wanted)),
          achieved(got) {}
};

/// Adaptive Gauss–Kronrod over a semi-infinite radial axis. The integrand is
/// supplied in the squared-radius coordinate u, but the axis is walked in the
/// radius r = sqrt(u), compactified by r = scale * v/(1-v): piecewise-linear
/// radial weights are then smooth between their knots and the left endpoint
/// carries no root singularity. The scale moves the substitution's knee to
/// wherever the integrand concentrates, and interior breakpoints (knot radii)
/// split the domain so each panel stays smooth. Decay at infinity is the
/// caller's responsibility (the metric growth check guards it upstream).
template <class F>
double integrate_radial(F&& f, double rel_tol = 1e-11, int max_depth = 15, double scale = 1.0,
                        const std::vector<double>& breaks_r = {}) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (!(scale > 0) || !std::isfinite(scale))
        throw std::invalid_argument("integrate_radial: scale must be positive and finite");

    std::vector<double> seg{0.0};
    for (double rb : breaks_r) {
        if (!(rb > 0) || !std::isfinite(rb)) continue;
        double vb = rb / (scale + rb);
        if (vb > seg.back() + 1e-12 && vb < 1.0 - 1e-12) seg.push_back(vb);
    }
    seg.push_back(1.0);

    auto g = [&](double v) {
        if (v <= 0.0 || v >= 1.0) return 0.0;
        double r = scale * v / (1.0 - v);
        double jac = 2.0 * r * scale / ((1.0 - v) * (1.0 - v));  // du = 2 r dr
        double fu = f(r * r);
        return std::isfinite(fu) ? fu * jac : 0.0;
    };
    double val = 0, err = 0;
    for (size_t s = 0; s + 1 < seg.size(); ++s) {
        double e = 0;
        val += GK::integrate(g, seg[s], seg[s + 1], max_depth, rel_tol, &e);
        err += e;
    }
    double mag = std::abs(val) + 1e-300;
    if (err > 100 * rel_tol * mag && err > 1e-280) throw QuadratureError(err / mag, rel_tol);
    return val;
}

/// Nested radial integration over (0, inf)^d. Inner dimensions run at a
/// slightly tighter tolerance so the outer error estimate stays honest.
/// `coupled` marks integrands whose mass along axis k sits near
/// u = 1 + u_0 + ... + u_{k-1} (the simplex pairing): the inner substitutions
/// are then rescaled accordingly, so extreme outer samples stay resolvable.
/// Breakpoints are per-axis knot radii, applied on every level.
inline double integrate_radial_nd(int d, const std::function<double(const double*)>& f,
                                  double rel_tol = 1e-11, bool coupled = false,
                                  const std::vector<double>& breaks_r = {}) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("integrate_radial_nd: dimension must be 1..3");
    std::vector<double> u(static_cast<size_t>(d));
    std::function<double(int)> level = [&](int k) -> double {
        double tol = rel_tol * std::pow(0.1, k);  // inner levels run tighter
        double scale = 1.0;
        if (coupled)
            for (int j = 0; j < k; ++j) scale += u[static_cast<size_t>(j)];
        return integrate_radial(
            [&](double uk) {
                u[static_cast<size_t>(k)] = uk;
                return k + 1 == d ? f(u.data()) : level(k + 1);
            },
            tol, k == 0 ? 15 : 12, coupled ? std::sqrt(scale) : 1.0, breaks_r);
    };
    return level(0);
}

/// Deterministic pairwise (tree) summation: the reduction order is fixed by
/// the index structure, not by thread scheduling, so reports are reproducible.
inline double pairwise_sum(const std::vector<double>& xs, size_t lo, size_t hi) {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return xs[lo];
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& xs) { return pairwise_sum(xs, 0, xs.size()); }

}  // namespace chebvol
