#pragma once

#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bundle.hpp"
#include "fit.hpp"

namespace chebvol {

/// Lazily computed Gram diagonals per level for a fixed (series, metric)
/// pair. Checks share one cache; bundles differing only in finite-place data
/// can share it too (the archimedean pairing does not see the finite places).
class GramCache {
public:
    GramCache(const ArchMetric& metric, const ToricSeries& series, double rel_tol = 1e-11)
        : metric_(metric), series_(series), rel_tol_(rel_tol) {}

    const GramData& at(int m) {
        auto it = store_.find(m);
        if (it != store_.end()) return it->second;
        return store_.emplace(m, gram_diagonal(metric_, series_, m, rel_tol_)).first->second;
    }

    const ToricSeries& series() const { return series_; }
    const ArchMetric& metric() const { return metric_; }

private:
    ArchMetric metric_;
    ToricSeries series_;
    double rel_tol_;
    std::map<int, GramData> store_;
};

/// All per-place transform values at one grid point (m, m alpha).
/// Finite-place parts are exact rationals multiplying log p; archimedean
/// parts are floats. The trivialization rescaling q enters place by place and
/// cancels in the total by the product formula.
struct FComponents {
    int level = 0;
    Exponent m_alpha;
    double arch_l2 = 0;                       // F'_inf = log L2 norm of the coset minimizer
    double arch_sup_lower = 0;                // certified: L2 <= sup for probability measures
    double arch_sup_upper = 0;                // sup estimate of the L2 minimizer + gap
    bool sup_exact = false;
    std::map<long long, Rational> finite_logp;  // F_p = coeff * log p

    double finite_total() const {
        double s = 0;
        for (const auto& [p, c] : finite_logp) s += to_double(c) * std::log(static_cast<double>(p));
        return s;
    }
    double total_l2() const { return arch_l2 + finite_total(); }
};

/// The places whose component at (m, m alpha) is nonzero (the archimedean
/// place always counts: a real-analytic weight has no reason to vanish).
inline std::vector<Place> support(const FComponents& f) {
    std::vector<Place> out{{0}};
    for (const auto& [p, c] : f.finite_logp)
        if (c != 0) out.push_back({p});
    return out;
}

inline FComponents f_components(const AdelicBundle& B, const GramData& gram,
                                const Exponent& m_alpha, bool want_sup = false) {
    const int m = gram.level;
    FComponents f;
    f.level = m;
    f.m_alpha = m_alpha;

    double arch_scale_shift = 0.0;
    const Rational& q = B.trivialization_scale();
    if (q != 1) arch_scale_shift = -m * std::log(std::abs(to_double(q)));

    GramMatrix G = gram_matrix_from(gram);
    CosetMinimizer mini = minimize_coset(G, m_alpha, m);
    f.arch_l2 = mini.log_l2 + arch_scale_shift;

    if (want_sup) {
        SupEstimate est = log_sup_norm(B.arch(), mini.section);
        f.arch_sup_lower = f.arch_l2;
        f.arch_sup_upper = est.log_value + est.gap + arch_scale_shift;
        f.sup_exact = est.exact_1d;
    } else {
        f.arch_sup_lower = f.arch_l2;
        f.arch_sup_upper = std::numeric_limits<double>::quiet_NaN();
    }

    for (const auto& w : B.finite()) {
        Rational coeff = -w.level_weight(m, m_alpha);
        if (q != 1) coeff += Rational(m) * padic_valuation(q, w.prime());
        if (coeff != 0) f.finite_logp[w.prime()] = coeff;
    }
    if (q != 1)
        for (long long p : B.scale_primes())
            if (!B.weight_at(p)) {
                Rational coeff = Rational(m) * padic_valuation(q, p);
                if (coeff != 0) f.finite_logp[p] = coeff;
            }
    return f;
}

/// The transform sequence and extrapolated limit at one rational point alpha
/// of the body. Finite places contribute exactly (their transforms are
/// homogeneous in m); the archimedean component is fitted from the level
/// sequence value(M) = c + b log M / M + c2 / M.
struct ChebyshevPoint {
    RationalPoint alpha;
    int base_level = 0;
    std::vector<std::pair<int, double>> arch_seq;  // (level, arch_l2 / level)
    double c_arch = 0;
    std::map<long long, double> c_finite;
    double c_total = 0;
    double fit_residual = 0;
    int fit_terms = 0;
    bool monotone_ok = true;   // non-increasing up to 2 log M / M slack
    double max_violation = 0;  // worst slack overshoot (<= 0 when monotone_ok)
    bool below_all_levels = true;  // c <= every per-level value + slack
};

inline int lcm_denominator(const RationalPoint& alpha) {
    BigInt l = 1;
    for (const auto& c : alpha) {
        BigInt d = den(c);
        l = l / boost::multiprecision::gcd(l, d) * d;
    }
    if (l > 1000000) throw std::invalid_argument("chebyshev point has an unreasonable denominator");
    return l.template convert_to<int>();
}

inline ChebyshevPoint chebyshev_point(const AdelicBundle& B, GramCache& cache,
                                      const RationalPoint& alpha,
                                      const std::vector<int>& schedule) {
    const ToricSeries& S = B.series();
    if (static_cast<int>(alpha.size()) != S.dimension())
        throw std::invalid_argument("chebyshev_point: dimension mismatch");
    if (!S.polytope().contains(alpha))
        throw std::invalid_argument("chebyshev_point: alpha outside the body");

    ChebyshevPoint out;
    out.alpha = alpha;
    out.base_level = lcm_denominator(alpha);

    for (int k : schedule) {
        int m = out.base_level * k;
        if (m > S.max_level()) continue;
        std::vector<long long> e(alpha.size());
        for (size_t i = 0; i < alpha.size(); ++i)
            e[i] = (num(alpha[i]) * m / den(alpha[i])).template convert_to<long long>();
        Exponent m_alpha{std::move(e)};
        FComponents f = f_components(B, cache.at(m), m_alpha);
        out.arch_seq.emplace_back(m, f.arch_l2 / m);
    }
    if (out.arch_seq.empty())
        throw std::invalid_argument("chebyshev_point: schedule left no usable level");

    auto fit = fit_limit(out.arch_seq);
    out.c_arch = fit.limit;
    out.fit_residual = fit.residual_rms;
    out.fit_terms = fit.terms_used;

    out.c_total = out.c_arch;
    // The per-level arch values already carry the -log|q| rescaling, so only
    // the finite places contribute q-corrections below.
    const Rational& q = B.trivialization_scale();
    for (const auto& w : B.finite()) {
        Rational coeff = -w.weight(alpha);
        if (q != 1) coeff += padic_valuation(q, w.prime());
        if (coeff != 0) {
            double v = to_double(coeff) * std::log(static_cast<double>(w.prime()));
            out.c_finite[w.prime()] = v;
            out.c_total += v;
        }
    }
    if (q != 1)
        for (long long p : B.scale_primes())
            if (!B.weight_at(p)) {
                double v = padic_valuation(q, p) * std::log(static_cast<double>(p));
                out.c_finite[p] = v;
                out.c_total += v;
            }

    // Monotonicity of the total per-level values, with the L2 slack.
    double finite_per_level = out.c_total - out.c_arch;  // exact, level-independent
    for (size_t j = 1; j < out.arch_seq.size(); ++j) {
        auto [m0, v0] = out.arch_seq[j - 1];
        auto [m1, v1] = out.arch_seq[j];
        double slack = 2.0 * std::log(static_cast<double>(m1)) / m1;
        double viol = (v1 + finite_per_level) - (v0 + finite_per_level) - slack;
        out.max_violation = std::max(out.max_violation, viol);
    }
    out.monotone_ok = out.max_violation <= 1e-12;

    for (auto [m, v] : out.arch_seq) {
        double slack = 2.0 * std::log(static_cast<double>(m) + 1.0) / m + 1e-9;
        if (out.c_arch > v + slack) out.below_all_levels = false;
    }
    return out;
}

/// Transforms at every grid point of one level, sharing Gram data across the
/// whole grid per schedule entry.
struct ChebyshevTable {
    int grid_level = 0;
    std::vector<ChebyshevPoint> points;  // aligned with level_basis(grid_level)
};

inline ChebyshevTable chebyshev_table(const AdelicBundle& B, GramCache& cache, int grid_level,
                                      const std::vector<int>& schedule) {
    const ToricSeries& S = B.series();
    if (grid_level < 1 || grid_level > S.max_level())
        throw std::invalid_argument("chebyshev_table: bad grid level");
    ChebyshevTable T;
    T.grid_level = grid_level;
    const auto& basis = S.level_basis(grid_level);

    std::vector<int> levels;
    for (int k : schedule)
        if (grid_level * k <= S.max_level()) levels.push_back(grid_level * k);
    if (levels.empty()) throw std::invalid_argument("chebyshev_table: schedule left no levels");

    // Arch sequences per point, gathered level-major so each Gram level is
    // computed once.
    std::vector<std::vector<std::pair<int, double>>> seqs(basis.size());
    for (int m : levels) {
        const GramData& g = cache.at(m);
        int k = m / grid_level;
        for (size_t i = 0; i < basis.size(); ++i) {
            std::vector<long long> e(static_cast<size_t>(S.dimension()));
            for (int t = 0; t < S.dimension(); ++t) e[static_cast<size_t>(t)] = basis[i][t] * k;
            FComponents f = f_components(B, g, Exponent{std::move(e)});
            seqs[i].emplace_back(m, f.arch_l2 / m);
        }
    }

    for (size_t i = 0; i < basis.size(); ++i) {
        RationalPoint alpha = rational_point(basis[i], grid_level);
        ChebyshevPoint pt;
        pt.alpha = alpha;
        pt.base_level = grid_level;
        pt.arch_seq = seqs[i];
        auto fit = fit_limit(pt.arch_seq);
        pt.c_arch = fit.limit;
        pt.fit_residual = fit.residual_rms;
        pt.fit_terms = fit.terms_used;
        pt.c_total = pt.c_arch;
        const Rational& q = B.trivialization_scale();
        for (const auto& w : B.finite()) {
            Rational coeff = -w.weight(alpha);
            if (q != 1) coeff += padic_valuation(q, w.prime());
            if (coeff != 0) {
                double v = to_double(coeff) * std::log(static_cast<double>(w.prime()));
                pt.c_finite[w.prime()] = v;
                pt.c_total += v;
            }
        }
        if (q != 1)
            for (long long p : B.scale_primes())
                if (!B.weight_at(p)) {
                    double v = padic_valuation(q, p) * std::log(static_cast<double>(p));
                    pt.c_finite[p] = v;
                    pt.c_total += v;
                }
        for (size_t j = 1; j < pt.arch_seq.size(); ++j) {
            double slack = 2.0 * std::log(static_cast<double>(pt.arch_seq[j].first)) /
                           pt.arch_seq[j].first;
            pt.max_violation =
                std::max(pt.max_violation, pt.arch_seq[j].second - pt.arch_seq[j - 1].second - slack);
        }
        pt.monotone_ok = pt.max_violation <= 1e-12;
        for (auto [m, v] : pt.arch_seq) {
            double slack = 2.0 * std::log(static_cast<double>(m) + 1.0) / m + 1e-9;
            if (pt.c_arch > v + slack) pt.below_all_levels = false;
        }
        T.points.push_back(std::move(pt));
    }
    return T;
}

/// Riemann sum of g over the body's grid at the table's level, boundary
/// points weighted 2^-(tight facets). Exact for piecewise-linear g with
/// on-grid breakpoints; the deterministic pairwise reduction keeps reports
/// byte-stable.
template <class G>
double grid_integral(const ChebyshevTable& T, const Polytope& body, G&& g) {
    std::vector<double> terms;
    terms.reserve(T.points.size());
    for (const auto& pt : T.points) {
        if (!body.contains(pt.alpha)) continue;
        double w = std::pow(0.5, body.tight_facets(pt.alpha));
        terms.push_back(w * g(pt));
    }
    double cell = std::pow(1.0 / T.grid_level, static_cast<double>(body.ambient_dim()));
    return pairwise_sum(terms) * cell;
}

inline double integrate_c(const ChebyshevTable& T, const Polytope& body) {
    return grid_integral(T, body, [](const ChebyshevPoint& p) { return p.c_total; });
}

}  // namespace chebvol
