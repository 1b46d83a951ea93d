#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "exponent.hpp"
#include "rational.hpp"

namespace chebvol {

using RationalPoint = std::vector<Rational>;

inline RationalPoint rational_point(const Exponent& beta, long long level) {
    RationalPoint p(static_cast<size_t>(beta.dim()));
    for (int i = 0; i < beta.dim(); ++i) p[static_cast<size_t>(i)] = Rational(beta[i], level);
    return p;
}

/// Convex rational polytope in dimension 1 or 2, stored as the canonical
/// vertex list (sorted interval ends / counterclockwise hull starting at the
/// lexicographic minimum). Dimension 3 carries simplices only — enough for
/// projective 3-space — via barycentric coordinates; general 3-d hull
/// enumeration is out of scope here.
class Polytope {
public:
    /// Builds the convex hull of the given points.
    explicit Polytope(std::vector<RationalPoint> pts) {
        if (pts.empty()) throw std::invalid_argument("Polytope: empty point set");
        d_ = static_cast<int>(pts[0].size());
        for (const auto& p : pts)
            if (static_cast<int>(p.size()) != d_)
                throw std::invalid_argument("Polytope: mixed ambient dimensions");
        if (d_ == 1)
            hull_1d(std::move(pts));
        else if (d_ == 2)
            hull_2d(std::move(pts));
        else if (d_ == 3)
            simplex_3d(std::move(pts));
        else
            throw std::invalid_argument("Polytope: dimension must be 1, 2, or 3");
    }

    int ambient_dim() const { return d_; }
    const std::vector<RationalPoint>& vertices() const { return v_; }

    /// True if the hull is not full-dimensional (a point, or a segment in the plane).
    bool degenerate() const { return degenerate_; }

    /// Euclidean (Lebesgue) volume; 0 when degenerate. Computed exactly by a
    /// fan triangulation from the first vertex (determinant for the simplex).
    Rational volume() const {
        if (degenerate_) return 0;
        if (d_ == 1) return v_[1][0] - v_[0][0];
        if (d_ == 3) {
            Rational det = edge_det();
            return (det < 0 ? -det : det) / 6;
        }
        Rational two_area = 0;
        for (size_t i = 1; i + 1 < v_.size(); ++i)
            two_area += cross(v_[0], v_[i], v_[i + 1]);
        return two_area / 2;
    }

    bool contains(const RationalPoint& x) const {
        check_point(x);
        if (d_ == 1) {
            if (degenerate_) return x[0] == v_[0][0];
            return v_[0][0] <= x[0] && x[0] <= v_[1][0];
        }
        if (d_ == 3) {
            auto lam = barycentric(x);
            return lam[0] >= 0 && lam[1] >= 0 && lam[2] >= 0 && lam[0] + lam[1] + lam[2] <= 1;
        }
        if (degenerate_) {
            if (v_.size() == 1) return x == v_[0];
            // Segment: x on the line between the two hull ends.
            if (cross(v_[0], v_[1], x) != 0) return false;
            for (int k = 0; k < 2; ++k) {
                Rational lo = std::min(v_[0][static_cast<size_t>(k)], v_[1][static_cast<size_t>(k)]);
                Rational hi = std::max(v_[0][static_cast<size_t>(k)], v_[1][static_cast<size_t>(k)]);
                if (x[static_cast<size_t>(k)] < lo || x[static_cast<size_t>(k)] > hi) return false;
            }
            return true;
        }
        for (size_t i = 0; i < v_.size(); ++i)
            if (cross(v_[i], v_[(i + 1) % v_.size()], x) < 0) return false;
        return true;
    }

    bool strictly_contains(const RationalPoint& x) const {
        check_point(x);
        if (degenerate_) return false;
        if (d_ == 1) return v_[0][0] < x[0] && x[0] < v_[1][0];
        if (d_ == 3) {
            auto lam = barycentric(x);
            return lam[0] > 0 && lam[1] > 0 && lam[2] > 0 && lam[0] + lam[1] + lam[2] < 1;
        }
        for (size_t i = 0; i < v_.size(); ++i)
            if (cross(v_[i], v_[(i + 1) % v_.size()], x) <= 0) return false;
        return true;
    }

    /// Number of facets the point lies on (0 for interior points). Drives the
    /// boundary weights 2^-tight of the grid Riemann sums.
    int tight_facets(const RationalPoint& x) const {
        if (!contains(x)) throw std::invalid_argument("Polytope::tight_facets: point outside");
        if (degenerate_) return 1;  // everything is boundary
        int t = 0;
        if (d_ == 1) {
            if (x[0] == v_[0][0]) ++t;
            if (x[0] == v_[1][0]) ++t;
            return t;
        }
        if (d_ == 3) {
            auto lam = barycentric(x);
            for (int k = 0; k < 3; ++k)
                if (lam[static_cast<size_t>(k)] == 0) ++t;
            if (lam[0] + lam[1] + lam[2] == 1) ++t;
            return t;
        }
        for (size_t i = 0; i < v_.size(); ++i)
            if (cross(v_[i], v_[(i + 1) % v_.size()], x) == 0) ++t;
        return t;
    }

    Polytope scaled(const Rational& k) const {
        if (k < 0) throw std::invalid_argument("Polytope::scaled: negative factor");
        std::vector<RationalPoint> pts = v_;
        for (auto& p : pts)
            for (auto& c : p) c *= k;
        return Polytope(std::move(pts));
    }

    Polytope translated(const RationalPoint& t) const {
        check_point(t);
        std::vector<RationalPoint> pts = v_;
        for (auto& p : pts)
            for (size_t i = 0; i < p.size(); ++i) p[i] += t[i];
        return Polytope(std::move(pts));
    }

    /// Minkowski sum, via the hull of pairwise vertex sums.
    Polytope minkowski_sum(const Polytope& o) const {
        if (d_ != o.d_) throw std::invalid_argument("Polytope: Minkowski sum dimension mismatch");
        std::vector<RationalPoint> pts;
        pts.reserve(v_.size() * o.v_.size());
        for (const auto& a : v_)
            for (const auto& b : o.v_) {
                RationalPoint s(static_cast<size_t>(d_));
                for (size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i];
                pts.push_back(std::move(s));
            }
        return Polytope(std::move(pts));
    }

    /// All lattice points of the polytope, in increasing lex order.
    /// Only points with nonnegative entries qualify as exponents; callers keep
    /// their polytopes inside the positive orthant (checked by ToricSeries).
    std::vector<Exponent> lattice_points() const {
        std::vector<long long> lo(static_cast<size_t>(d_)), hi(static_cast<size_t>(d_));
        for (int k = 0; k < d_; ++k) {
            Rational mn = v_[0][static_cast<size_t>(k)], mx = mn;
            for (const auto& p : v_) {
                mn = std::min(mn, p[static_cast<size_t>(k)]);
                mx = std::max(mx, p[static_cast<size_t>(k)]);
            }
            lo[static_cast<size_t>(k)] = rational_ceil(mn);
            hi[static_cast<size_t>(k)] = rational_floor(mx);
        }
        std::vector<Exponent> out;
        std::vector<long long> cur(static_cast<size_t>(d_));
        enumerate(0, lo, hi, cur, out);
        return out;
    }

    bool operator==(const Polytope& o) const { return d_ == o.d_ && v_ == o.v_; }

private:
    static Rational cross(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    }

    void check_point(const RationalPoint& x) const {
        if (static_cast<int>(x.size()) != d_)
            throw std::invalid_argument("Polytope: point dimension mismatch");
    }

    void hull_1d(std::vector<RationalPoint> pts) {
        Rational mn = pts[0][0], mx = pts[0][0];
        for (const auto& p : pts) {
            mn = std::min(mn, p[0]);
            mx = std::max(mx, p[0]);
        }
        if (mn == mx) {
            v_ = {{mn}};
            degenerate_ = true;
        } else {
            v_ = {{mn}, {mx}};
            degenerate_ = false;
        }
    }

    // Monotone chain; collinear points dropped, so a segment canonicalizes to
    // its two ends and gets the degenerate flag.
    void hull_2d(std::vector<RationalPoint> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.size() <= 2) {
            v_ = std::move(pts);
            degenerate_ = true;
            return;
        }
        std::vector<RationalPoint> h;
        auto build = [&](auto begin, auto end) {
            size_t base = h.size();
            for (auto it = begin; it != end; ++it) {
                while (h.size() >= base + 2 && cross(h[h.size() - 2], h[h.size() - 1], *it) <= 0)
                    h.pop_back();
                h.push_back(*it);
            }
        };
        build(pts.begin(), pts.end());
        h.pop_back();
        build(pts.rbegin(), pts.rend());
        h.pop_back();
        if (h.size() <= 2) {
            // All input collinear.
            std::vector<RationalPoint> seg = {pts.front(), pts.back()};
            v_ = std::move(seg);
            degenerate_ = true;
            return;
        }
        // Rotate so the lex-min vertex leads; with the sort above it already does.
        v_ = std::move(h);
        degenerate_ = false;
    }

    // Dimension 3: simplices only, canonicalized as the lex-sorted vertex
    // list. Anything that is not a nondegenerate 4-point simplex is rejected
    // rather than approximated.
    void simplex_3d(std::vector<RationalPoint> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.size() != 4)
            throw std::invalid_argument(
                "Polytope: dimension 3 supports simplex vertex lists only (got " +
                std::to_string(pts.size()) + " distinct points)");
        v_ = std::move(pts);
        degenerate_ = false;
        if (edge_det() == 0)
            throw std::invalid_argument("Polytope: simplex vertices are affinely dependent");
    }

    static Rational det3(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
        return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
               a[2] * (b[0] * c[1] - b[1] * c[0]);
    }

    static RationalPoint diff(const RationalPoint& a, const RationalPoint& b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    }

    Rational edge_det() const {
        return det3(diff(v_[1], v_[0]), diff(v_[2], v_[0]), diff(v_[3], v_[0]));
    }

    /// Barycentric coordinates of x with respect to (v1-v0, v2-v0, v3-v0),
    /// by Cramer's rule; x is inside iff all are >= 0 and they sum to <= 1.
    std::array<Rational, 3> barycentric(const RationalPoint& x) const {
        RationalPoint e1 = diff(v_[1], v_[0]), e2 = diff(v_[2], v_[0]), e3 = diff(v_[3], v_[0]);
        RationalPoint r = diff(x, v_[0]);
        Rational det = det3(e1, e2, e3);
        return {det3(r, e2, e3) / det, det3(e1, r, e3) / det, det3(e1, e2, r) / det};
    }

    void enumerate(int k, const std::vector<long long>& lo, const std::vector<long long>& hi,
                   std::vector<long long>& cur, std::vector<Exponent>& out) const {
        if (k == d_) {
            RationalPoint p(cur.size());
            for (size_t i = 0; i < cur.size(); ++i) p[i] = cur[i];
            if (contains(p)) {
                std::vector<long long> c = cur;
                for (auto& e : c)
                    if (e < 0) return;  // exponents live in the positive orthant
                out.emplace_back(std::move(c));
            }
            return;
        }
        for (long long t = lo[static_cast<size_t>(k)]; t <= hi[static_cast<size_t>(k)]; ++t) {
            cur[static_cast<size_t>(k)] = t;
            enumerate(k + 1, lo, hi, cur, out);
        }
    }

    int d_ = 0;
    bool degenerate_ = false;
    std::vector<RationalPoint> v_;
};

}  // namespace chebvol
