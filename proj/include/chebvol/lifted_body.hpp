#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chebyshev.hpp"
#include "polytope.hpp"

namespace chebvol {

/// The arithmetic (lifted) body over the Okounkov body: the region between
/// the base polytope and the graph of -c. Carried as a grid sample — at desk
/// scale the body is a d+1 dimensional region known through its heights, and
/// every consumer here (volumes, inclusion tests) works pointwise.
struct LiftedBody {
    Polytope base;
    int grid_level;
    std::vector<RationalPoint> points;  // grid points of the base
    std::vector<double> heights;        // -c at those points (>= 0 up to tol)
    double volume;                      // Riemann estimate of integral of (-c)
};

/// Builds the lifted body from a transform table. Positivity of the roof is a
/// hypothesis, not a theorem, for arbitrary metrics: a point with c beyond
/// the tolerance is reported as the diagnostic of a non-nef configuration.
inline LiftedBody lifted_body(const ChebyshevTable& T, const Polytope& base,
                              double positivity_tol = 1e-3) {
    LiftedBody L{base, T.grid_level, {}, {}, 0.0};
    for (const auto& pt : T.points) {
        if (!base.contains(pt.alpha)) continue;
        if (pt.c_total > positivity_tol) {
            std::string coords;
            for (const auto& c : pt.alpha) coords += (coords.empty() ? "" : ",") + to_string(c);
            throw std::domain_error("lifted_body: c(" + coords + ") = " +
                                    std::to_string(pt.c_total) +
                                    " > 0 beyond tolerance — metric not effective here");
        }
        L.points.push_back(pt.alpha);
        L.heights.push_back(std::max(0.0, -pt.c_total));
    }
    L.volume = grid_integral(T, base, [](const ChebyshevPoint& p) { return std::max(0.0, -p.c_total); });
    return L;
}

}  // namespace chebvol
