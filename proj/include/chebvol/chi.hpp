#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "chebyshev.hpp"
#include "field_params.hpp"

namespace chebvol {

/// Arithmetic degree of H^0(mL) with its adelic lattice structure, split into
/// the archimedean covolume part (float) and the finite-place parts (exact
/// coefficients of log p). The orthogonality of the monomial basis makes the
/// covolume a product over basis vectors, which is why the fundamental
/// identity deg = -sum_v sum_alpha F'_v holds here term by term.
struct DegResult {
    int level = 0;
    long long n = 0;  // dim H^0
    double arch = 0;
    std::map<long long, Rational> finite_logp;

    double finite_total() const {
        double s = 0;
        for (const auto& [p, c] : finite_logp) s += to_double(c) * std::log(static_cast<double>(p));
        return s;
    }
    double total() const { return arch + finite_total(); }
};

inline DegResult deg_h0(const AdelicBundle& B, const GramData& gram) {
    const int m = gram.level;
    DegResult out;
    out.level = m;
    out.n = static_cast<long long>(gram.basis.size());

    std::vector<double> logs = gram.log_diag;
    out.arch = -0.5 * pairwise_sum(logs);

    const Rational& q = B.trivialization_scale();
    if (q != 1) out.arch += out.n * m * std::log(std::abs(to_double(q)));

    for (const auto& w : B.finite()) {
        Rational s = 0;
        for (const auto& beta : gram.basis) s += w.level_weight(m, beta);
        if (q != 1) s -= Rational(out.n) * m * padic_valuation(q, w.prime());
        if (s != 0) out.finite_logp[w.prime()] = s;
    }
    if (q != 1)
        for (long long p : B.scale_primes())
            if (!B.weight_at(p)) {
                Rational s = -Rational(out.n) * m * padic_valuation(q, p);
                if (s != 0) out.finite_logp[p] = s;
            }
    return out;
}

/// chi_{L^2}(m): the covolume-normalized Euler characteristic. Over Q this is
/// deg + log V(N_m), with V the Euclidean unit-ball volume.
inline double chi_l2(const DegResult& deg, const FieldParams& F = FieldParams::rationals()) {
    double n = static_cast<double>(deg.n);
    return deg.total() - 0.5 * n * F.log_abs_disc + F.r1 * log_ball_volume(n) +
           F.r2 * log_ball_volume(2.0 * n);
}

struct ChiLevel {
    int m = 0;
    long long n = 0;
    double deg = 0;
    double chi = 0;
    double r = 0;  // chi - deg: the ball-volume correction, exactly
};

struct ChiSeries {
    std::vector<ChiLevel> levels;
    FieldParams field;
};

inline ChiSeries chi_series(const AdelicBundle& B, GramCache& cache, const std::vector<int>& ms,
                            const FieldParams& F = FieldParams::rationals()) {
    ChiSeries S;
    S.field = F;
    for (int m : ms) {
        const GramData& g = cache.at(m);
        DegResult d = deg_h0(B, g);
        ChiLevel lv;
        lv.m = m;
        lv.n = d.n;
        lv.deg = d.total();
        lv.chi = chi_l2(d, F);
        lv.r = lv.chi - lv.deg;
        S.levels.push_back(lv);
    }
    return S;
}

/// Leading coefficient of chi: fit chi(m) = v m^{d+1}/(d+1)! + b m^d log m +
/// c m^d and read off v = vol_chi. The same fit evaluated per level feeds the
/// convergence tables.
struct VolChiFit {
    double vol_chi = 0;
    double coef_md_logm = 0;
    double coef_md = 0;
    double residual_rms = 0;
    double condition = 0;
    bool ill_conditioned = false;
    std::vector<std::pair<int, double>> ratio;  // (m, (d+1)! chi / m^{d+1})

    double model(int d, double m) const {
        double fact = std::tgamma(static_cast<double>(d) + 2.0);
        return vol_chi * std::pow(m, d + 1) / fact + coef_md_logm * std::pow(m, d) * std::log(m) +
               coef_md * std::pow(m, d);
    }
};

inline VolChiFit fit_vol_chi(const ChiSeries& S, int d) {
    if (S.levels.size() < 3)
        throw std::invalid_argument("fit_vol_chi: need at least three levels");
    double fact = std::tgamma(static_cast<double>(d) + 2.0);
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto& lv : S.levels) {
        double m = lv.m;
        X.push_back({std::pow(m, d + 1) / fact, std::pow(m, d) * std::log(m), std::pow(m, d)});
        y.push_back(lv.chi);
    }
    auto fit = fit_least_squares(X, y);
    VolChiFit out;
    out.vol_chi = fit.coeff[0];
    out.coef_md_logm = fit.coeff[1];
    out.coef_md = fit.coeff[2];
    out.residual_rms = fit.residual_rms;
    out.condition = fit.condition;
    out.ill_conditioned = fit.ill_conditioned;
    for (const auto& lv : S.levels)
        out.ratio.emplace_back(lv.m, fact * lv.chi / std::pow(static_cast<double>(lv.m), d + 1));
    return out;
}

}  // namespace chebvol
