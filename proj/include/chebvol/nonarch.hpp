#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polytope.hpp"
#include "rational.hpp"
#include "section.hpp"
#include "toric_series.hpp"

namespace chebvol {

/// One affine piece <a, x> + b of a concave roof function. Gradients stay
/// integral under every operation used here (scaling, sup-convolution);
/// offsets may pick up denominators.
struct WeightPiece {
    std::vector<long long> a;
    Rational b;

    Rational value(const RationalPoint& x) const {
        Rational v = b;
        for (size_t i = 0; i < a.size(); ++i) v += Rational(a[i]) * x[i];
        return v;
    }
};

/// Non-archimedean metric datum at a prime p: a concave piecewise-affine
/// weight w(x) = min_i (<a_i, x> + b_i) on the polytope. The level-m model
/// lattice is spanned by p^{w_m(beta)} t^beta with w_m(beta) = min_i
/// (<a_i, beta> + m b_i) — the homogenization of w, which is what makes the
/// finite-place transforms exactly homogeneous in m.
class NonArchWeight {
public:
    NonArchWeight(long long p, std::vector<WeightPiece> pieces)
        : p_(p), pieces_(std::move(pieces)) {
        if (!is_prime(p_)) throw std::invalid_argument("NonArchWeight: p must be prime");
        if (pieces_.empty()) throw std::invalid_argument("NonArchWeight: no pieces");
        d_ = static_cast<int>(pieces_[0].a.size());
        if (d_ < 1) throw std::invalid_argument("NonArchWeight: empty gradient");
        for (const auto& pc : pieces_)
            if (static_cast<int>(pc.a.size()) != d_)
                throw std::invalid_argument("NonArchWeight: mixed gradient dimensions");
    }

    static NonArchWeight trivial(long long p, int d) {
        return NonArchWeight(p, {WeightPiece{std::vector<long long>(static_cast<size_t>(d), 0), 0}});
    }

    long long prime() const { return p_; }
    int dim() const { return d_; }
    const std::vector<WeightPiece>& pieces() const { return pieces_; }

    bool is_trivial() const {
        return pieces_.size() == 1 && pieces_[0].b == 0 &&
               std::all_of(pieces_[0].a.begin(), pieces_[0].a.end(),
                           [](long long c) { return c == 0; });
    }

    Rational weight(const RationalPoint& x) const {
        Rational w = pieces_[0].value(x);
        for (size_t i = 1; i < pieces_.size(); ++i) w = std::min(w, pieces_[i].value(x));
        return w;
    }

    /// Homogenized weight at level m: w_m(beta) = m * w(beta / m).
    Rational level_weight(int m, const Exponent& beta) const {
        if (beta.dim() != d_) throw std::invalid_argument("NonArchWeight: dimension mismatch");
        Rational best;
        bool first = true;
        for (const auto& pc : pieces_) {
            Rational v = Rational(m) * pc.b;
            for (int i = 0; i < d_; ++i) v += Rational(pc.a[static_cast<size_t>(i)]) * beta[i];
            if (first || v < best) best = v, first = false;
        }
        return best;
    }

    /// Weight of the k-th tensor power: the roof of k copies sup-convolved
    /// with themselves, which for a single weight is exactly (a_i, k b_i).
    NonArchWeight scaled(int k) const {
        if (k < 1) throw std::invalid_argument("NonArchWeight::scaled: k must be >= 1");
        std::vector<WeightPiece> ps = pieces_;
        for (auto& pc : ps) pc.b *= k;
        return NonArchWeight(p_, std::move(ps));
    }

private:
    long long p_;
    int d_;
    std::vector<WeightPiece> pieces_;
};

/// Exact p-adic data: a norm is the power p^{-e}; we carry e (so log_p of the
/// reciprocal norm) as an exact rational and multiply by log p only at the
/// float boundary.
struct PadicNorm {
    bool zero = false;
    Rational neg_log_p;  // norm = p^{-neg_log_p}
};

/// Gauss norm of a section against the weighted model lattice:
/// |sum a_beta t^beta|_w = max_beta |a_beta|_p p^{-w_m(beta)}.
inline PadicNorm gauss_norm(const NonArchWeight& w, const Section& s) {
    if (s.is_zero()) return {true, 0};
    bool first = true;
    Rational best = 0;  // minimal exponent e with norm p^{-e}
    for (const auto& [beta, c] : s.terms()) {
        Rational e = Rational(padic_valuation(c, w.prime())) + w.level_weight(s.level(), beta);
        if (first || e < best) best = e, first = false;
    }
    return {false, best};
}

/// Subdivision vertices of the min-of-affine structure inside P: candidates
/// where a concave PL function can attain extrema of affine-shifted values.
/// P vertices + pairwise piece-equality loci clipped to P (+ triple points in
/// the plane). Everything exact over the rationals; dimensions 1 and 2.
inline std::vector<RationalPoint> subdivision_vertices(const NonArchWeight& w, const Polytope& P) {
    const int d = P.ambient_dim();
    if (d != w.dim()) throw std::invalid_argument("subdivision_vertices: dimension mismatch");
    std::vector<RationalPoint> out = P.vertices();
    const auto& ps = w.pieces();
    auto push_if_inside = [&](const RationalPoint& x) {
        if (P.contains(x)) out.push_back(x);
    };

    if (d == 1) {
        for (size_t i = 0; i < ps.size(); ++i)
            for (size_t j = i + 1; j < ps.size(); ++j) {
                long long da = ps[i].a[0] - ps[j].a[0];
                if (da == 0) continue;
                push_if_inside({(ps[j].b - ps[i].b) / da});
            }
        return out;
    }

    // d == 2: intersect equality lines with polygon edges, and with each other.
    auto edge_points = [&](long long a0, long long a1, const Rational& c) {
        // Line a0 x + a1 y = c against each polygon edge.
        const auto& V = P.vertices();
        size_t n = V.size();
        for (size_t i = 0; i < n; ++i) {
            const auto& p = V[i];
            const auto& q = V[(i + 1) % n];
            if (n <= 2 && i == 1) break;
            Rational fp = Rational(a0) * p[0] + Rational(a1) * p[1] - c;
            Rational fq = Rational(a0) * q[0] + Rational(a1) * q[1] - c;
            if (fp == fq) continue;
            Rational t = fp / (fp - fq);
            if (t < 0 || t > 1) continue;
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    };
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j) {
            long long a0 = ps[i].a[0] - ps[j].a[0];
            long long a1 = ps[i].a[1] - ps[j].a[1];
            Rational c = ps[j].b - ps[i].b;
            if (a0 == 0 && a1 == 0) continue;
            edge_points(a0, a1, c);
            for (size_t k = j + 1; k < ps.size(); ++k) {
                long long b0 = ps[i].a[0] - ps[k].a[0];
                long long b1 = ps[i].a[1] - ps[k].a[1];
                Rational e = ps[k].b - ps[i].b;
                Rational det = Rational(a0) * b1 - Rational(a1) * b0;
                if (det == 0) continue;
                RationalPoint x = {(c * b1 - Rational(a1) * e) / det,
                                   (Rational(a0) * e - c * b0) / det};
                push_if_inside(x);
            }
        }
    return out;
}

/// Legendre-type support value h_w(a) = max over P of (w(x) - <a, x>),
/// attained at a subdivision vertex since the objective is concave PL.
inline Rational support_value(const NonArchWeight& w, const Polytope& P,
                              const std::vector<long long>& a) {
    auto cand = subdivision_vertices(w, P);
    bool first = true;
    Rational best = 0;
    for (const auto& x : cand) {
        Rational v = w.weight(x);
        for (size_t i = 0; i < a.size(); ++i) v -= Rational(a[i]) * x[i];
        if (first || v > best) best = v, first = false;
    }
    return best;
}

/// Sup-convolution (w1 [] w2)(x) = sup { w1(x1) + w2(x2) : x1 + x2 = x } of
/// concave roofs over their polytopes — the weight of the tensor product.
/// The hypograph of the result is the Minkowski sum of the hypographs, so its
/// facet gradients come from the union of the summands' gradient sets; each
/// gradient a gets the tight offset h_{w1}(a) + h_{w2}(a).
inline NonArchWeight sup_convolution(const NonArchWeight& w1, const Polytope& P1,
                                     const NonArchWeight& w2, const Polytope& P2) {
    if (w1.prime() != w2.prime())
        throw std::invalid_argument("sup_convolution: mixed primes");
    std::vector<std::vector<long long>> grads;
    for (const auto& pc : w1.pieces()) grads.push_back(pc.a);
    for (const auto& pc : w2.pieces()) grads.push_back(pc.a);
    std::sort(grads.begin(), grads.end());
    grads.erase(std::unique(grads.begin(), grads.end()), grads.end());

    std::vector<WeightPiece> pieces;
    for (const auto& a : grads)
        pieces.push_back(WeightPiece{a, support_value(w1, P1, a) + support_value(w2, P2, a)});
    return NonArchWeight(w1.prime(), std::move(pieces));
}

}  // namespace chebvol
