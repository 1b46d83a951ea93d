#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polytope.hpp"
#include "section.hpp"

namespace chebvol {

/// The coset of sections with fixed valuation: leading exponent `leading` at
/// the given level, with coefficient normalized to 1, plus arbitrary
/// contributions from the lex-larger basis exponents `free`.
struct CosetSpec {
    int level;
    Exponent leading;
    std::vector<Exponent> free;  // increasing lex order
};

/// Graded linear series of a toric line bundle: level-m sections are spanned
/// by the monomials t^beta with beta a lattice point of m*P. Projective space
/// P^d corresponds to P = standard simplex (|beta| <= m).
class ToricSeries {
public:
    static ToricSeries projective_space(int d, std::optional<int> max_level = {}) {
        if (d < 1) throw std::invalid_argument("ToricSeries: dimension must be >= 1");
        std::vector<RationalPoint> verts;
        verts.push_back(RationalPoint(static_cast<size_t>(d), Rational(0)));
        for (int i = 0; i < d; ++i) {
            RationalPoint e(static_cast<size_t>(d), Rational(0));
            e[static_cast<size_t>(i)] = 1;
            verts.push_back(std::move(e));
        }
        return ToricSeries(Polytope(std::move(verts)), max_level);
    }

    static ToricSeries from_polytope(const std::vector<std::vector<long long>>& vertices,
                                     std::optional<int> max_level = {}) {
        if (vertices.empty()) throw std::invalid_argument("ToricSeries: no vertices");
        std::vector<RationalPoint> verts;
        for (const auto& v : vertices) {
            RationalPoint p(v.size());
            for (size_t i = 0; i < v.size(); ++i) {
                if (v[i] < 0)
                    throw std::invalid_argument("ToricSeries: vertices must lie in the positive orthant");
                p[i] = v[i];
            }
            verts.push_back(std::move(p));
        }
        return ToricSeries(Polytope(std::move(verts)), max_level);
    }

    int dimension() const { return poly_.ambient_dim(); }
    const Polytope& polytope() const { return poly_; }
    int max_level() const { return max_level_; }

    static int default_max_level(int d) { return d <= 1 ? 200 : 40; }

    /// dim H^0(mL) = #(mP cap Z^d).
    long long dim_h0(int m) const { return static_cast<long long>(level_basis(m).size()); }

    /// Monomial basis of level m in increasing lex order.
    const std::vector<Exponent>& level_basis(int m) const {
        check_level(m);
        auto it = basis_cache_.find(m);
        if (it != basis_cache_.end()) return it->second;
        std::vector<Exponent> b = poly_.scaled(m).lattice_points();
        return basis_cache_.emplace(m, std::move(b)).first->second;
    }

    bool in_basis(int m, const Exponent& beta) const { return index_of(m, beta).has_value(); }

    std::optional<size_t> index_of(int m, const Exponent& beta) const {
        const auto& b = level_basis(m);
        auto it = std::lower_bound(b.begin(), b.end(), beta, LexLess{});
        if (it == b.end() || !(*it == beta)) return std::nullopt;
        return static_cast<size_t>(it - b.begin());
    }

    /// Grid Lambda_m = (1/m)(mP cap Z^d) as exact rational points, aligned
    /// with level_basis(m).
    std::vector<RationalPoint> lambda(int m) const {
        const auto& b = level_basis(m);
        std::vector<RationalPoint> pts;
        pts.reserve(b.size());
        for (const auto& beta : b) pts.push_back(rational_point(beta, m));
        return pts;
    }

    /// Coset of sections with valuation exactly m*alpha (passed as the
    /// integral exponent). The free exponents are the lex-larger basis
    /// elements — in the sorted basis that is precisely the tail.
    CosetSpec coset(int m, const Exponent& m_alpha) const {
        auto idx = index_of(m, m_alpha);
        if (!idx)
            throw std::invalid_argument("ToricSeries::coset: " + m_alpha.str() +
                                        " is not a basis exponent at level " + std::to_string(m));
        const auto& b = level_basis(m);
        CosetSpec c{m, m_alpha, {}};
        c.free.assign(b.begin() + static_cast<std::ptrdiff_t>(*idx) + 1, b.end());
        return c;
    }

    /// Checks that every term of s lies in the level basis.
    void validate(const Section& s) const {
        if (s.dim() != dimension())
            throw std::invalid_argument("ToricSeries::validate: section dimension mismatch");
        for (const auto& [beta, c] : s.terms())
            if (!in_basis(s.level(), beta))
                throw std::invalid_argument("ToricSeries::validate: exponent " + beta.str() +
                                            " outside the level-" + std::to_string(s.level()) +
                                            " basis");
    }

    /// Multiplication inside the series; enforces the configured max level.
    Section multiply(const Section& a, const Section& b) const {
        validate(a);
        validate(b);
        if (a.level() + b.level() > max_level_)
            throw std::invalid_argument("ToricSeries::multiply: level " +
                                        std::to_string(a.level() + b.level()) +
                                        " exceeds max level " + std::to_string(max_level_));
        Section r = a * b;
        validate(r);  // mP + m'P subset (m+m')P, so this never fires for convex P
        return r;
    }

    /// Series of the k-th tensor power: polytope k*P.
    ToricSeries power(int k) const {
        if (k < 1) throw std::invalid_argument("ToricSeries::power: k must be >= 1");
        return ToricSeries(poly_.scaled(k), max_level_);
    }

    /// Series of the tensor product with another toric series (polytopes add).
    ToricSeries tensor(const ToricSeries& o) const {
        return ToricSeries(poly_.minkowski_sum(o.poly_), std::min(max_level_, o.max_level_));
    }

private:
    ToricSeries(Polytope p, std::optional<int> max_level) : poly_(std::move(p)) {
        if (poly_.degenerate())
            throw std::invalid_argument("ToricSeries: polytope must be full-dimensional");
        bool origin_vertex = false;
        for (const auto& v : poly_.vertices()) {
            bool zero = true;
            for (const auto& c : v) {
                if (den(c) != 1)
                    throw std::invalid_argument("ToricSeries: polytope vertices must be lattice points");
                if (c != 0) zero = false;
            }
            if (zero) origin_vertex = true;
        }
        if (!origin_vertex)
            throw std::invalid_argument(
                "ToricSeries: origin must be a vertex (normalize so nu(H^0(L)) starts at 0)");
        max_level_ = max_level.value_or(default_max_level(poly_.ambient_dim()));
        if (max_level_ < 1) throw std::invalid_argument("ToricSeries: max level must be >= 1");
    }

    void check_level(int m) const {
        if (m < 1) throw std::invalid_argument("ToricSeries: level must be >= 1");
        if (m > max_level_)
            throw std::invalid_argument("ToricSeries: level " + std::to_string(m) +
                                        " exceeds max level " + std::to_string(max_level_));
    }

    Polytope poly_;
    int max_level_ = 0;
    mutable std::map<int, std::vector<Exponent>> basis_cache_;
};

}  // namespace chebvol
