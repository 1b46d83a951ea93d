#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "polytope.hpp"
#include "rational.hpp"

namespace chebvol {

/// An element (beta, m) of the graded value semigroup: the valuation beta
/// occurs at level m.
struct GradedPoint {
    Exponent beta;
    int level;
    bool operator==(const GradedPoint& o) const { return level == o.level && beta == o.beta; }
};

/// Finitely generated graded subsemigroup of N^d x N, with reachable sets
/// computed level by level up to a bound.
class Semigroup {
public:
    Semigroup(std::vector<GradedPoint> generators, int level_bound)
        : gens_(std::move(generators)), bound_(level_bound) {
        if (gens_.empty()) throw std::invalid_argument("Semigroup: no generators");
        if (bound_ < 1) throw std::invalid_argument("Semigroup: level bound must be >= 1");
        d_ = gens_[0].beta.dim();
        for (const auto& g : gens_) {
            if (g.beta.dim() != d_) throw std::invalid_argument("Semigroup: mixed dimensions");
            if (g.level < 1) throw std::invalid_argument("Semigroup: generator levels must be >= 1");
        }
        reach_.assign(static_cast<size_t>(bound_) + 1, {});
        reach_[0].insert(Exponent::zero(d_));
        for (int m = 1; m <= bound_; ++m)
            for (const auto& g : gens_)
                if (g.level <= m)
                    for (const auto& x : reach_[static_cast<size_t>(m - g.level)])
                        reach_[static_cast<size_t>(m)].insert(x + g.beta);
    }

    int dim() const { return d_; }
    int level_bound() const { return bound_; }
    const std::vector<GradedPoint>& generators() const { return gens_; }

    const std::set<Exponent, LexLess>& level_set(int m) const {
        if (m < 0 || m > bound_)
            throw std::invalid_argument("Semigroup: level outside computed range");
        return reach_[static_cast<size_t>(m)];
    }

    bool contains(const GradedPoint& z) const {
        return level_set(z.level).count(z.beta) > 0;
    }

    /// Delta(Gamma): the convex hull of beta/m over the generators. The cone
    /// over the semigroup is the cone over this body.
    Polytope delta() const {
        std::vector<RationalPoint> pts;
        for (const auto& g : gens_) pts.push_back(rational_point(g.beta, g.level));
        return Polytope(std::move(pts));
    }

    /// Whether the generators generate Z^{d+1} as a *group* — the hypothesis
    /// of the saturation theorem. Computed exactly: the lattice index is the
    /// determinant of the Hermite form of the generator matrix.
    bool generates_full_lattice() const {
        std::vector<std::vector<BigInt>> rows;
        for (const auto& g : gens_) {
            std::vector<BigInt> r;
            for (int i = 0; i < d_; ++i) r.emplace_back(g.beta[i]);
            r.emplace_back(g.level);
            rows.push_back(std::move(r));
        }
        int n = d_ + 1;
        BigInt index = 1;
        for (int col = 0; col < n; ++col) {
            size_t pivot = rows.size();
            for (size_t r = static_cast<size_t>(col); r < rows.size(); ++r)
                if (rows[r][static_cast<size_t>(col)] != 0) {
                    if (pivot == rows.size() ||
                        abs(rows[r][static_cast<size_t>(col)]) <
                            abs(rows[pivot][static_cast<size_t>(col)]))
                        pivot = r;
                }
            if (pivot == rows.size()) return false;  // rank deficient
            std::swap(rows[static_cast<size_t>(col)], rows[pivot]);
            // Euclidean elimination below the pivot.
            bool again = true;
            while (again) {
                again = false;
                for (size_t r = static_cast<size_t>(col) + 1; r < rows.size(); ++r) {
                    BigInt& p = rows[static_cast<size_t>(col)][static_cast<size_t>(col)];
                    BigInt& a = rows[r][static_cast<size_t>(col)];
                    if (a == 0) continue;
                    BigInt q = floor_div(a, p);
                    for (int c = col; c < n; ++c)
                        rows[r][static_cast<size_t>(c)] -= q * rows[static_cast<size_t>(col)][static_cast<size_t>(c)];
                    if (rows[r][static_cast<size_t>(col)] != 0) {
                        std::swap(rows[static_cast<size_t>(col)], rows[r]);
                        again = true;
                    }
                }
            }
            index *= abs(rows[static_cast<size_t>(col)][static_cast<size_t>(col)]);
        }
        return index == 1;
    }

private:
    std::vector<GradedPoint> gens_;
    int bound_;
    int d_;
    std::vector<std::set<Exponent, LexLess>> reach_;
};

enum class SaturationStatus {
    Saturated,              // threshold found, certificate verified up to the bound
    BoundExhausted,         // ran out of levels before stabilizing — inconclusive
    PreconditionViolation,  // generators do not generate Z^{d+1} as a group
};

struct SaturationReport {
    SaturationStatus status = SaturationStatus::BoundExhausted;
    int m0 = 0;                          // saturation threshold (valid when Saturated)
    std::optional<GradedPoint> gamma;    // verified translate certificate, if found
    std::vector<int> failing_levels;     // levels where D cap Lambda_m != D cap (1/m)Z^d
    std::string note;
};

/// Does (y, k) lie in the cone over Delta? Exact rational test.
inline bool in_cone(const Polytope& delta, const Exponent& y, int k) {
    if (k == 0) return y.total() == 0 && y == Exponent::zero(y.dim());
    return delta.contains(rational_point(y, k));
}

/// Saturation of the value semigroup against a target body D, following the
/// translate-of-the-cone criterion: some gamma in Gamma has
/// (gamma + cone(Gamma)) cap lattice contained in Gamma, which forces the
/// level-m slices to fill D from some threshold m0 on.
///
/// D must be contained in the interior of Delta(Gamma) (checked; vertices of D
/// must be strictly inside). The search is capped by the semigroup's level
/// bound; exhausting the cap is reported as inconclusive, never as failure.
inline SaturationReport khovanskii_saturation(const Semigroup& S, const Polytope& D,
                                              int gamma_candidates = 200) {
    SaturationReport rep;
    const Polytope delta = S.delta();
    for (const auto& v : D.vertices())
        if (!delta.strictly_contains(v))
            throw std::invalid_argument(
                "khovanskii_saturation: D must lie in the interior of Delta(Gamma)");

    if (!S.generates_full_lattice()) {
        rep.status = SaturationStatus::PreconditionViolation;
        rep.note = "generators do not generate Z^{d+1} as a group";
        return rep;
    }

    const int bound = S.level_bound();
    // Threshold scan: level m agrees when every lattice point of m*D is reachable.
    for (int m = 1; m <= bound; ++m) {
        for (const auto& beta : D.scaled(m).lattice_points())
            if (!S.level_set(m).count(beta)) {
                rep.failing_levels.push_back(m);
                break;
            }
    }
    if (!rep.failing_levels.empty() && rep.failing_levels.back() == bound) {
        rep.status = SaturationStatus::BoundExhausted;
        rep.note = "slices still short of D at the level bound";
        return rep;
    }
    rep.m0 = rep.failing_levels.empty() ? 1 : rep.failing_levels.back();

    // Certificate search: candidates gamma in Gamma by increasing level, each
    // verified against every lattice point of the translated cone up to the bound.
    int tried = 0;
    for (int gl = 0; gl <= bound / 2 && !rep.gamma; ++gl) {
        for (const auto& gb : S.level_set(gl)) {
            if (++tried > gamma_candidates) break;
            bool ok = true;
            for (int h = gl; h <= bound && ok; ++h) {
                // Points of (gamma + cone) at level h: gamma_beta + ((h-gl)*Delta cap Z^d).
                if (h == gl) {
                    if (!S.level_set(h).count(gb)) ok = false;
                    continue;
                }
                for (const auto& s : delta.scaled(h - gl).lattice_points()) {
                    if (!S.level_set(h).count(gb + s)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                rep.gamma = GradedPoint{gb, gl};
                break;
            }
        }
        if (tried > gamma_candidates) break;
    }

    if (rep.gamma) {
        rep.status = SaturationStatus::Saturated;
    } else {
        rep.status = SaturationStatus::BoundExhausted;
        rep.note = "no translate certificate found within the search cap";
    }
    return rep;
}

}  // namespace chebvol
