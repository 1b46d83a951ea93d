#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fit.hpp"
#include "quadrature.hpp"
#include "section.hpp"
#include "toric_series.hpp"

namespace chebvol {

/// Piecewise-linear function of the radius with constant extrapolation beyond
/// the last knot; bounded by construction, so adding it to a base weight never
/// disturbs integrability.
struct RadialTable {
    std::vector<std::pair<double, double>> knots;  // (radius, value), radius increasing from 0

    double operator()(double r) const {
        if (knots.empty()) return 0.0;
        if (r <= knots.front().first) return knots.front().second;
        if (r >= knots.back().first) return knots.back().second;
        auto it = std::upper_bound(knots.begin(), knots.end(), r,
                                   [](double x, const auto& k) { return x < k.first; });
        auto [r1, v1] = *(it - 1);
        auto [r2, v2] = *it;
        return v1 + (v2 - v1) * (r - r1) / (r2 - r1);
    }

    void validate() const {
        for (size_t i = 0; i < knots.size(); ++i) {
            if (knots[i].first < 0) throw std::invalid_argument("RadialTable: negative radius");
            if (i && !(knots[i].first > knots[i - 1].first))
                throw std::invalid_argument("RadialTable: radii must be strictly increasing");
            if (!std::isfinite(knots[i].second))
                throw std::invalid_argument("RadialTable: non-finite value");
        }
    }

    RadialTable scaled(double c) const {
        RadialTable t = *this;
        for (auto& [r, v] : t.knots) v *= c;
        return t;
    }

    RadialTable plus(const RadialTable& o) const {
        if (knots.empty()) return o;
        if (o.knots.empty()) return *this;
        RadialTable t;
        std::vector<double> rs;
        for (auto& [r, v] : knots) rs.push_back(r);
        for (auto& [r, v] : o.knots) rs.push_back(r);
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        for (double r : rs) t.knots.emplace_back(r, (*this)(r) + o(r));
        return t;
    }
};

/// Which torus-invariant probability measure the L^2 pairing integrates
/// against (in squared-radius coordinates u_i = r_i^2):
///   Simplex:  d! (1 + sum u)^{-(d+1)} du      — Fubini–Study on P^d
///   Product:  prod (1 + u_i)^{-2} du          — product of FS measures on (P^1)^d
enum class MeasureKind { Simplex, Product };

/// Continuous torus-invariant archimedean metric, described by its weight
/// psi(r): the level-m norm of a section is sup_t |s(t)| e^{-m psi(|t|)}.
/// The weight is a Fubini–Study base (with coefficient, so tensor powers stay
/// in the family) plus an optional bounded radial perturbation and a constant
/// shift.
class ArchMetric {
public:
    static ArchMetric fubini_study(int d) { return ArchMetric(d, MeasureKind::Simplex, 1.0); }

    static ArchMetric product_fubini_study(int d) {
        return ArchMetric(d, MeasureKind::Product, 1.0);
    }

    static ArchMetric custom(int d, MeasureKind measure, double fs_coeff, RadialTable table,
                             double shift = 0.0) {
        table.validate();
        if (!(fs_coeff > 0))
            throw std::invalid_argument("ArchMetric: base coefficient must be positive");
        ArchMetric m(d, measure, fs_coeff);
        m.table_ = std::move(table);
        m.shift_ = shift;
        return m;
    }

    int dim() const { return d_; }
    MeasureKind measure() const { return measure_; }
    double fs_coeff() const { return fs_coeff_; }
    double shift() const { return shift_; }
    const std::optional<RadialTable>& table() const { return table_; }

    /// Weight in squared-radius coordinates.
    double psi_u(const double* u) const {
        double base = 0;
        if (measure_ == MeasureKind::Simplex) {
            double s = 0;
            for (int i = 0; i < d_; ++i) s += u[i];
            base = 0.5 * std::log1p(s);
        } else {
            for (int i = 0; i < d_; ++i) base += 0.5 * std::log1p(u[i]);
        }
        double v = fs_coeff_ * base + shift_;
        if (table_)
            for (int i = 0; i < d_; ++i) v += (*table_)(std::sqrt(u[i]));
        return v;
    }

    /// log of the measure density in u coordinates.
    double log_density_u(const double* u) const {
        if (measure_ == MeasureKind::Simplex) {
            double s = 0;
            for (int i = 0; i < d_; ++i) s += u[i];
            return lfact(d_) - (d_ + 1) * std::log1p(s);
        }
        double v = 0;
        for (int i = 0; i < d_; ++i) v += -2.0 * std::log1p(u[i]);
        return v;
    }

    /// Metric of the k-th tensor power: weight k*psi, same measure.
    ArchMetric scaled(int k) const {
        if (k < 1) throw std::invalid_argument("ArchMetric::scaled: k must be >= 1");
        ArchMetric m(d_, measure_, fs_coeff_ * k);
        if (table_) m.table_ = table_->scaled(static_cast<double>(k));
        m.shift_ = shift_ * k;
        return m;
    }

    /// Metric of a tensor product: weights add pointwise. Measures must agree
    /// — mixing the simplex and product pairings has no meaning here.
    ArchMetric plus(const ArchMetric& o) const {
        if (d_ != o.d_ || measure_ != o.measure_)
            throw std::invalid_argument("ArchMetric::plus: incompatible metrics");
        ArchMetric m(d_, measure_, fs_coeff_ + o.fs_coeff_);
        if (table_ && o.table_)
            m.table_ = table_->plus(*o.table_);
        else if (table_)
            m.table_ = table_;
        else if (o.table_)
            m.table_ = o.table_;
        m.shift_ = shift_ + o.shift_;
        return m;
    }

    ArchMetric with_extra_shift(double s) const {
        ArchMetric m = *this;
        m.shift_ += s;
        return m;
    }

    /// Growth condition against a polytope: beta . log r - psi(r) must stay
    /// bounded above for every vertex beta of P as any radius runs off to
    /// infinity. Checked numerically on a boundary grid; a clean failure here
    /// means the metric cannot metrize this series (all Gram integrals would
    /// diverge), so it throws.
    void check_growth(const Polytope& P) const {
        if (P.ambient_dim() != d_)
            throw std::invalid_argument("ArchMetric: polytope dimension mismatch");
        const std::vector<double> moderate = {0.2, 0.5, 0.8};
        const std::vector<double> extreme = {0.9, 0.99, 0.999, 0.9999, 0.99999};
        for (const auto& vert : P.vertices()) {
            std::vector<double> beta(static_cast<size_t>(d_));
            for (int i = 0; i < d_; ++i) beta[static_cast<size_t>(i)] = to_double(vert[static_cast<size_t>(i)]);
            double mod_max = grid_max(beta, moderate);
            double ext_max = grid_max(beta, extreme);
            if (ext_max > mod_max + 2.0)
                throw std::invalid_argument(
                    "ArchMetric: growth condition fails at polytope vertex " +
                    [&] {
                        std::string s = "(";
                        for (size_t i = 0; i < beta.size(); ++i)
                            s += (i ? "," : "") + std::to_string(beta[i]);
                        return s + ")";
                    }() +
                    " — the weight does not dominate the polytope");
        }
    }

    static double lfact(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

private:
    ArchMetric(int d, MeasureKind measure, double fs_coeff)
        : d_(d), measure_(measure), fs_coeff_(fs_coeff) {
        if (d < 1) throw std::invalid_argument("ArchMetric: dimension must be >= 1");
    }

    double grid_max(const std::vector<double>& beta, const std::vector<double>& vgrid) const {
        std::vector<size_t> idx(static_cast<size_t>(d_), 0);
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> u(static_cast<size_t>(d_));
        while (true) {
            for (int i = 0; i < d_; ++i) {
                double v = vgrid[idx[static_cast<size_t>(i)]];
                u[static_cast<size_t>(i)] = v / (1.0 - v);
            }
            double g = -psi_u(u.data());
            for (int i = 0; i < d_; ++i)
                g += beta[static_cast<size_t>(i)] * 0.5 * std::log(u[static_cast<size_t>(i)]);
            best = std::max(best, g);
            int k = 0;
            while (k < d_ && ++idx[static_cast<size_t>(k)] == vgrid.size()) {
                idx[static_cast<size_t>(k)] = 0;
                ++k;
            }
            if (k == d_) break;
        }
        return best;
    }

    int d_;
    MeasureKind measure_;
    double fs_coeff_;
    double shift_ = 0;
    std::optional<RadialTable> table_;
};

/// Diagonal of the level-m Gram matrix <t^beta, t^beta>_{L^2}, aligned with
/// the series' level basis, plus an off-diagonal audit: monomials are
/// orthogonal for torus-invariant metrics, and offdiag_max reports how far
/// the quadrature strays from that exact zero.
struct GramData {
    int level = 0;
    std::vector<Exponent> basis;
    std::vector<double> diag;      // raw inner products
    std::vector<double> log_diag;  // log of the same, computed in log space
    double offdiag_max = 0;
    double rel_tol = 0;

    size_t index_of(const Exponent& beta) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), beta, LexLess{});
        if (it == basis.end() || !(*it == beta))
            throw std::invalid_argument("GramData: exponent not in basis");
        return static_cast<size_t>(it - basis.begin());
    }
};

inline unsigned worker_count() {
    if (const char* env = std::getenv("CHEBVOL_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Deterministic parallel map: results land by index, so the output does not
/// depend on the worker count.
template <class F>
void parallel_for(size_t n, F&& f) {
    unsigned workers = static_cast<unsigned>(std::min<size_t>(worker_count(), n ? n : 1));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline GramData gram_diagonal(const ArchMetric& metric, const ToricSeries& series, int m,
                              double rel_tol = 1e-11, int audit_pairs = 6) {
    if (metric.dim() != series.dimension())
        throw std::invalid_argument("gram_diagonal: dimension mismatch");
    const int d = series.dimension();
    GramData g;
    g.level = m;
    g.basis = series.level_basis(m);
    g.rel_tol = rel_tol;
    g.diag.resize(g.basis.size());
    g.log_diag.resize(g.basis.size());

    // The simplex pairing couples the axes (mass along axis k sits near
    // u = 1 + sum of the outer coordinates); kinks of a radial table are
    // breakpoints at their knot radii on every axis.
    const bool coupled = metric.measure() == MeasureKind::Simplex;
    std::vector<double> breaks;
    if (metric.table())
        for (const auto& [r, v] : metric.table()->knots)
            if (r > 0) breaks.push_back(r);

    auto radial_integral = [&](const Exponent& beta, const Exponent& gamma) {
        // \int u^{(beta+gamma)/2} e^{-2m psi} dmu in u coordinates, log-space.
        return integrate_radial_nd(
            d,
            [&](const double* u) {
                double lg = metric.log_density_u(u) - 2.0 * m * metric.psi_u(u);
                for (int i = 0; i < d; ++i)
                    lg += 0.5 * (beta[i] + gamma[i]) * std::log(u[i]);
                return std::exp(lg);
            },
            rel_tol, coupled, breaks);
    };

    parallel_for(g.basis.size(), [&](size_t i) {
        double v = radial_integral(g.basis[i], g.basis[i]);
        if (!(v > 0) || !std::isfinite(v))
            throw std::runtime_error("gram_diagonal: non-positive diagonal entry at " +
                                     g.basis[i].str());
        g.diag[i] = v;
        g.log_diag[i] = std::log(v);
    });

    // Audit a few lex-adjacent pairs: the angular factor of <t^beta, t^gamma>
    // is (1/2pi) \int e^{i k theta} dtheta per coordinate, evaluated here by
    // the trapezoid rule on the full period (exactly zero analytically).
    int audited = 0;
    for (size_t i = 0; i + 1 < g.basis.size() && audited < audit_pairs; ++i, ++audited) {
        const auto& b = g.basis[i];
        const auto& c = g.basis[i + 1];
        double phase = 1.0;
        for (int k = 0; k < d; ++k) {
            long long diff = b[k] - c[k];
            if (diff == 0) continue;
            const int T = 64;
            double acc = 0;
            for (int t = 0; t < T; ++t) acc += std::cos(2.0 * M_PI * diff * t / T);
            phase *= acc / T;
        }
        double bound = std::abs(phase) * std::sqrt(g.diag[i] * g.diag[i + 1]);
        g.offdiag_max = std::max(g.offdiag_max, bound);
    }
    return g;
}

/// Full Gram matrix abstraction the coset minimizer works against. The
/// torus-invariant metrics here always produce the diagonal case; the dense
/// path exists so the minimizer's algebra is the general one.
struct GramMatrix {
    std::vector<Exponent> basis;  // increasing lex
    bool diagonal = true;
    std::vector<double> diag;
    std::vector<std::vector<double>> dense;  // used when !diagonal

    double at(size_t i, size_t j) const {
        if (diagonal) return i == j ? diag[i] : 0.0;
        return dense[i][j];
    }
};

inline GramMatrix gram_matrix_from(const GramData& g) {
    GramMatrix M;
    M.basis = g.basis;
    M.diagonal = true;
    M.diag = g.diag;
    return M;
}

struct CosetMinimizer {
    Section section;      // the distance-minimizing coset element
    double log_l2;        // log of its L^2 norm: the transform value F'(m, m alpha)
    bool solved_dense;    // false when the diagonal shortcut applied
};

/// Minimizes the L^2 norm over the coset t^{m alpha} + span(lex-larger basis
/// monomials): orthogonal projection, i.e. solve G_ff x = -g_f,lead and read
/// the norm off the Schur complement. For diagonal Gram matrices the coupling
/// vanishes and the monomial itself is the minimizer.
inline CosetMinimizer minimize_coset(const GramMatrix& G, const Exponent& leading, int level) {
    auto it = std::lower_bound(G.basis.begin(), G.basis.end(), leading, LexLess{});
    if (it == G.basis.end() || !(*it == leading))
        throw std::invalid_argument("minimize_coset: leading exponent not in basis");
    size_t lead = static_cast<size_t>(it - G.basis.begin());
    size_t nf = G.basis.size() - lead - 1;

    CosetMinimizer out{Section::monomial(level, leading), 0.0, false};
    if (G.diagonal || nf == 0) {
        double g00 = G.at(lead, lead);
        if (!(g00 > 0)) throw std::runtime_error("minimize_coset: Gram not positive definite");
        out.log_l2 = 0.5 * std::log(g00);
        return out;
    }

    std::vector<std::vector<long double>> A(nf, std::vector<long double>(nf));
    std::vector<long double> b(nf);
    for (size_t i = 0; i < nf; ++i) {
        b[i] = -static_cast<long double>(G.at(lead, lead + 1 + i));
        for (size_t j = 0; j < nf; ++j) A[i][j] = G.at(lead + 1 + i, lead + 1 + j);
    }
    std::vector<long double> x;
    if (!cholesky_solve(A, b, x))
        throw std::runtime_error(
            "minimize_coset: Gram matrix not positive definite — corrupted input");
    long double val = G.at(lead, lead);
    for (size_t i = 0; i < nf; ++i) val += static_cast<long double>(G.at(lead, lead + 1 + i)) * x[i];
    if (!(val > 0)) throw std::runtime_error("minimize_coset: nonpositive minimum");
    for (size_t i = 0; i < nf; ++i)
        out.section.set(G.basis[lead + 1 + i], Rational(static_cast<double>(x[i])));
    out.log_l2 = 0.5 * static_cast<double>(std::log(val));
    out.solved_dense = true;
    return out;
}

/// log of the L^2 norm of a section against precomputed Gram data (monomials
/// orthogonal, so the norm is a weighted l2 norm of the coefficients).
inline double log_l2_norm(const GramData& g, const Section& s) {
    if (s.is_zero()) throw ZeroSectionError();
    if (s.level() != g.level) throw std::invalid_argument("log_l2_norm: level mismatch");
    double maxlog = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    for (const auto& [beta, c] : s.terms()) {
        double lg = 2.0 * std::log(std::abs(to_double(c))) + g.log_diag[g.index_of(beta)];
        logs.push_back(lg);
        maxlog = std::max(maxlog, lg);
    }
    double acc = 0;
    for (double lg : logs) acc += std::exp(lg - maxlog);
    return 0.5 * (maxlog + std::log(acc));
}

inline double l2_norm(const GramData& g, const Section& s) { return std::exp(log_l2_norm(g, s)); }

struct SupEstimate {
    double log_value;  // best maximizer found
    double gap;        // heuristic uncertainty, from the refinement trajectory
    bool exact_1d;     // single-monomial closed-path case (1e-8 accurate)
};

/// Sup of log |s(t)| e^{-m psi(|t|)} over the torus orbit closure:
/// deterministic compactified grid plus coordinatewise golden-section
/// refinement. Single monomials need no angular search and get polished to
/// ~1e-8; general sections report an honesty gap alongside the value.
inline SupEstimate log_sup_norm(const ArchMetric& metric, const Section& s) {
    if (s.is_zero()) throw ZeroSectionError();
    const int d = s.dim();
    const int m = s.level();
    struct Term {
        std::vector<double> half_beta;
        std::vector<long long> beta;
        double log_abs;
        double sign;  // used only in the single-term path
    };
    std::vector<Term> terms;
    for (const auto& [beta, c] : s.terms()) {
        Term t;
        t.log_abs = std::log(std::abs(to_double(c)));
        for (int i = 0; i < d; ++i) {
            t.half_beta.push_back(0.5 * beta[i]);
            t.beta.push_back(beta[i]);
        }
        terms.push_back(std::move(t));
    }
    const bool single = terms.size() == 1;

    auto eval = [&](const std::vector<double>& v, const std::vector<double>& theta) {
        std::vector<double> logu(static_cast<size_t>(d)), u(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
            double vi = std::clamp(v[static_cast<size_t>(i)], 1e-14, 1.0 - 1e-14);
            u[static_cast<size_t>(i)] = vi / (1.0 - vi);
            logu[static_cast<size_t>(i)] = std::log(u[static_cast<size_t>(i)]);
        }
        double lead = -std::numeric_limits<double>::infinity();
        for (const auto& t : terms) {
            double lg = t.log_abs;
            for (int i = 0; i < d; ++i) lg += t.half_beta[static_cast<size_t>(i)] * logu[static_cast<size_t>(i)];
            lead = std::max(lead, lg);
        }
        double mag;
        if (single) {
            mag = lead;
        } else {
            std::complex<double> acc{0.0, 0.0};
            for (const auto& t : terms) {
                double lg = t.log_abs;
                double ang = 0;
                for (int i = 0; i < d; ++i) {
                    lg += t.half_beta[static_cast<size_t>(i)] * logu[static_cast<size_t>(i)];
                    ang += t.beta[static_cast<size_t>(i)] * theta[static_cast<size_t>(i)];
                }
                acc += std::exp(lg - lead) * std::polar(1.0, ang);
            }
            double a = std::abs(acc);
            if (a <= 0) return -std::numeric_limits<double>::infinity();
            mag = lead + std::log(a);
        }
        return mag - m * metric.psi_u(u.data());
    };

    // Coarse deterministic grid.
    const int R = single ? 128 : (d == 1 ? 48 : 20);
    const int T = single ? 1 : (d == 1 ? 32 : 12);
    std::vector<double> best_v(static_cast<size_t>(d), 0.5), best_t(static_cast<size_t>(d), 0.0);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> ridx(static_cast<size_t>(d), 0), tidx(static_cast<size_t>(d), 0);
    // Sign structure: for real coefficients the relevant angles are multiples
    // of pi/T'; the grid covers [0, 2pi).
    while (true) {
        std::vector<double> v(static_cast<size_t>(d)), th(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = (ridx[static_cast<size_t>(i)] + 0.5) / R;
        bool done_t = false;
        std::fill(tidx.begin(), tidx.end(), 0);
        while (!done_t) {
            for (int i = 0; i < d; ++i) th[static_cast<size_t>(i)] = 2.0 * M_PI * tidx[static_cast<size_t>(i)] / T;
            double val = eval(v, th);
            if (val > best) {
                best = val;
                best_v = v;
                best_t = th;
            }
            int k = 0;
            while (k < d && ++tidx[static_cast<size_t>(k)] == T) {
                tidx[static_cast<size_t>(k)] = 0;
                ++k;
            }
            done_t = (k == d) || single;
        }
        int k = 0;
        while (k < d && ++ridx[static_cast<size_t>(k)] == R) {
            ridx[static_cast<size_t>(k)] = 0;
            ++k;
        }
        if (k == d) break;
    }

    // Coordinatewise golden-section refinement around the winning cell.
    // Never moves to a point worse than the incumbent.
    auto golden = [&](auto get, auto set, double lo, double hi) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        const double x_in = get();
        const double f_in = eval(best_v, best_t);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        set(x1);
        double f1 = eval(best_v, best_t);
        set(x2);
        double f2 = eval(best_v, best_t);
        for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                set(x2);
                f2 = eval(best_v, best_t);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                set(x1);
                f1 = eval(best_v, best_t);
            }
        }
        set(0.5 * (a + b));
        if (eval(best_v, best_t) < f_in) set(x_in);
    };

    double last_round_gain = 0;
    for (int round = 0; round < 4; ++round) {
        double round_start = best;
        for (int i = 0; i < d; ++i) {
            double vr = 1.8 / R;
            golden([&] { return best_v[static_cast<size_t>(i)]; },
                   [&](double x) { best_v[static_cast<size_t>(i)] = x; },
                   std::max(1e-13, best_v[static_cast<size_t>(i)] - vr),
                   std::min(1.0 - 1e-13, best_v[static_cast<size_t>(i)] + vr));
            best = std::max(best, eval(best_v, best_t));
            if (!single) {
                double tr = 1.8 * 2.0 * M_PI / T;
                golden([&] { return best_t[static_cast<size_t>(i)]; },
                       [&](double x) { best_t[static_cast<size_t>(i)] = x; },
                       best_t[static_cast<size_t>(i)] - tr, best_t[static_cast<size_t>(i)] + tr);
                best = std::max(best, eval(best_v, best_t));
            }
        }
        last_round_gain = best - round_start;
    }

    SupEstimate est;
    est.log_value = best;
    est.exact_1d = single;
    est.gap = single ? 1e-8 : std::max(8.0 * last_round_gain, 1e-7);
    return est;
}

inline double sup_norm(const ArchMetric& metric, const Section& s) {
    return std::exp(log_sup_norm(metric, s).log_value);
}

}  // namespace chebvol
