#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "chi.hpp"
#include "lifted_body.hpp"
#include "report.hpp"
#include "semigroup.hpp"

namespace chebvol {

/// Pinned tolerances. Configs may override individual entries, but these are
/// the defaults the acceptance battery runs at.
struct Tolerances {
    double volume_identity = 1e-2;   // relative gap of the fitted leading term
    double identity_arch = 1e-8;     // archimedean float gap in the fundamental identity
    double euler_identity = 1e-9;    // chi - deg vs the ball-volume correction
    double chebyshev_slack = 1e-12;  // monotonicity slack overshoot allowed
    double main_theorem = 2e-2;      // | vol_chi/(d+1)! + integral c |
    double homogeneity = 5e-2;       // | vol(2L) - 2^{d+1} vol(L) | relative
    double brunn_minkowski = 5e-2;   // one-sided superadditivity slack, relative
    double bm_inclusion = 2e-2;      // pointwise roof superadditivity slack
    double product_formula = 1e-10;  // invariance of totals under rescaling
    double positivity = 1e-3;        // roof positivity slack for lifted bodies
    double a_k_stability = 0.15;     // relative wobble of the deg/chi gap ratios

    double get(const std::string& name) const;
    void set(const std::string& name, double v);
};

inline double Tolerances::get(const std::string& name) const {
    if (name == "volume_identity") return volume_identity;
    if (name == "identity_arch") return identity_arch;
    if (name == "euler_identity") return euler_identity;
    if (name == "chebyshev_slack") return chebyshev_slack;
    if (name == "main_theorem") return main_theorem;
    if (name == "homogeneity") return homogeneity;
    if (name == "brunn_minkowski") return brunn_minkowski;
    if (name == "bm_inclusion") return bm_inclusion;
    if (name == "product_formula") return product_formula;
    if (name == "positivity") return positivity;
    if (name == "a_k_stability") return a_k_stability;
    throw std::invalid_argument("unknown tolerance '" + name + "'");
}

inline void Tolerances::set(const std::string& name, double v) {
    if (!(v > 0)) throw std::invalid_argument("tolerance '" + name + "' must be positive");
    if (name == "volume_identity") volume_identity = v;
    else if (name == "identity_arch") identity_arch = v;
    else if (name == "euler_identity") euler_identity = v;
    else if (name == "chebyshev_slack") chebyshev_slack = v;
    else if (name == "main_theorem") main_theorem = v;
    else if (name == "homogeneity") homogeneity = v;
    else if (name == "brunn_minkowski") brunn_minkowski = v;
    else if (name == "bm_inclusion") bm_inclusion = v;
    else if (name == "product_formula") product_formula = v;
    else if (name == "positivity") positivity = v;
    else if (name == "a_k_stability") a_k_stability = v;
    else throw std::invalid_argument("unknown tolerance '" + name + "'");
}

inline Json json_tolerances(const Tolerances& t) {
    Json j;
    for (const char* n :
         {"volume_identity", "identity_arch", "euler_identity", "chebyshev_slack", "main_theorem",
          "homogeneity", "brunn_minkowski", "bm_inclusion", "product_formula", "positivity",
          "a_k_stability"})
        j[n] = t.get(n);
    return j;
}

inline std::string alpha_str(const RationalPoint& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_string(a[i]);
    return s + ")";
}

// ---------------------------------------------------------------------------
// volume_identity: d! N_m / m^d -> d! vol(P), fitted with 1/m corrections.
// ---------------------------------------------------------------------------
inline CheckReport check_volume_identity(const ToricSeries& S, const std::vector<int>& levels,
                                         const Tolerances& tol) {
    CheckReport rep;
    rep.name = "volume_identity";
    const int d = S.dimension();
    double vol = to_double(S.polytope().volume());

    std::vector<std::vector<double>> X;
    std::vector<double> y;
    CsvTable table{"levels", {}};
    for (int m : levels) {
        double v = static_cast<double>(S.dim_h0(m)) / std::pow(static_cast<double>(m), d);
        X.push_back({1.0, 1.0 / m, 1.0 / (static_cast<double>(m) * m)});
        y.push_back(v);
    }
    auto fit = fit_least_squares(X, y);
    for (size_t i = 0; i < levels.size(); ++i) {
        double m = levels[i];
        double model = fit.coeff[0] + fit.coeff[1] / m + fit.coeff[2] / (m * m);
        table.add(m, y[i], model);
    }
    rep.tables.push_back(std::move(table));

    double rel = std::abs(fit.coeff[0] - vol) / std::max(1e-300, vol);
    rep.inputs = {{"levels", levels}, {"dimension", d}};
    rep.details = {{"volume", vol},
                   {"fitted_leading", fit.coeff[0]},
                   {"relative_gap", rel},
                   {"fit_residual_rms", fit.residual_rms}};
    rep.verdict = rel <= tol.volume_identity ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// khovanskii: saturation threshold + translate certificate for a graded
// semigroup against a target body.
// ---------------------------------------------------------------------------
inline CheckReport check_khovanskii(const Semigroup& S, const Polytope& D) {
    CheckReport rep;
    rep.name = "khovanskii";
    Json gens = Json::array();
    for (const auto& g : S.generators()) {
        Json e = Json::array();
        for (int i = 0; i < g.beta.dim(); ++i) e.push_back(g.beta[i]);
        e.push_back(g.level);
        gens.push_back(e);
    }
    rep.inputs = {{"generators", gens}, {"bound", S.level_bound()}};

    SaturationReport sat = khovanskii_saturation(S, D);
    switch (sat.status) {
        case SaturationStatus::Saturated: {
            rep.verdict = "PASS";
            rep.details["m0"] = sat.m0;
            Json g = Json::array();
            for (int i = 0; i < sat.gamma->beta.dim(); ++i) g.push_back(sat.gamma->beta[i]);
            g.push_back(sat.gamma->level);
            rep.details["gamma"] = g;
            rep.details["failing_levels"] = sat.failing_levels;
            break;
        }
        case SaturationStatus::BoundExhausted:
            rep.verdict = "INCONCLUSIVE";
            rep.details["note"] = sat.note;
            rep.details["failing_levels"] = sat.failing_levels;
            break;
        case SaturationStatus::PreconditionViolation:
            rep.verdict = "FAIL";
            rep.details["note"] = sat.note;
            break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// fundamental_identity: deg H^0 = -sum_places sum_alpha F'. The finite parts
// must cancel exactly (rational arithmetic); the archimedean parts to 1e-8.
// ---------------------------------------------------------------------------
inline CheckReport check_fundamental_identity(const AdelicBundle& B, GramCache& cache,
                                              const std::vector<int>& levels,
                                              const Tolerances& tol) {
    CheckReport rep;
    rep.name = "fundamental_identity";
    rep.inputs = {{"levels", levels}};
    double worst_arch = 0;
    bool finite_exact = true;
    CsvTable table{"levels", {}};
    for (int m : levels) {
        const GramData& g = cache.at(m);
        DegResult deg = deg_h0(B, g);

        std::map<long long, Rational> sum_finite;
        std::vector<double> arch_terms;
        for (const auto& beta : g.basis) {
            FComponents f = f_components(B, g, beta);
            arch_terms.push_back(f.arch_l2);
            for (const auto& [p, c] : f.finite_logp) sum_finite[p] += c;
        }
        double sum_arch = pairwise_sum(arch_terms);

        worst_arch = std::max(worst_arch, std::abs(deg.arch + sum_arch));
        for (const auto& [p, c] : deg.finite_logp)
            if (!(sum_finite.count(p) && sum_finite[p] == -c)) finite_exact = false;
        for (const auto& [p, c] : sum_finite)
            if (c != 0 && !deg.finite_logp.count(p)) finite_exact = false;

        double sum_finite_f = 0;
        for (const auto& [p, c] : sum_finite)
            sum_finite_f += to_double(c) * std::log(static_cast<double>(p));
        table.add(m, deg.total(), -(sum_arch + sum_finite_f));
    }
    rep.tables.push_back(std::move(table));
    rep.details = {{"max_arch_gap", worst_arch}, {"finite_parts_exact", finite_exact}};
    rep.verdict = (worst_arch <= tol.identity_arch && finite_exact) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// riemann_roch: chi - deg is the exact ball-volume correction, and the gap
// obeys |chi - deg| <= a_K N log N with a stable fitted a_K.
// ---------------------------------------------------------------------------
inline CheckReport check_riemann_roch(const AdelicBundle& B, GramCache& cache,
                                      const std::vector<int>& levels, const FieldParams& F,
                                      const Tolerances& tol) {
    CheckReport rep;
    rep.name = "riemann_roch";
    rep.inputs = {{"levels", levels}};
    ChiSeries S = chi_series(B, cache, levels, F);

    double worst_identity = 0;
    std::vector<double> ratios;
    CsvTable table{"levels", {}};
    for (const auto& lv : S.levels) {
        double n = static_cast<double>(lv.n);
        double expected = -0.5 * n * F.log_abs_disc + F.r1 * log_ball_volume(n) +
                          F.r2 * log_ball_volume(2.0 * n);
        worst_identity = std::max(worst_identity, std::abs(lv.r - expected));
        if (n >= 2) ratios.push_back(std::abs(lv.r) / (n * std::log(n)));
        table.add(lv.m, lv.r, expected);
    }
    rep.tables.push_back(std::move(table));

    double a_k = ratios.empty() ? 0 : *std::max_element(ratios.begin(), ratios.end());
    bool stable = true;
    if (ratios.size() >= 4) {
        size_t q = ratios.size() - ratios.size() / 4;
        double lo = ratios[q], hi = ratios[q];
        for (size_t i = q; i < ratios.size(); ++i) {
            lo = std::min(lo, ratios[i]);
            hi = std::max(hi, ratios[i]);
        }
        stable = (hi - lo) <= tol.a_k_stability * std::max(1e-300, hi);
    }
    rep.details = {{"max_identity_gap", worst_identity}, {"a_K", a_k}, {"a_K_stable", stable}};
    rep.verdict = (worst_identity <= tol.euler_identity && stable) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// chebyshev: per-point transform sequences, slack-monotonicity, and limits.
// ---------------------------------------------------------------------------
inline CheckReport check_chebyshev(const AdelicBundle& B, GramCache& cache,
                                   const std::vector<RationalPoint>& points,
                                   const std::vector<int>& schedule, const Tolerances& tol) {
    CheckReport rep;
    rep.name = "chebyshev";
    Json pts = Json::array();
    bool all_monotone = true, all_below = true;
    Json results = Json::array();
    for (const auto& alpha : points) {
        ChebyshevPoint cp = chebyshev_point(B, cache, alpha, schedule);
        pts.push_back(alpha_str(alpha));
        Json r;
        r["alpha"] = alpha_str(alpha);
        r["c"] = cp.c_total;
        r["c_arch"] = cp.c_arch;
        Json fin = Json::object();
        for (auto [p, v] : cp.c_finite) fin[std::to_string(p)] = v;
        r["c_finite"] = fin;
        r["fit_residual"] = cp.fit_residual;
        r["monotone_ok"] = cp.monotone_ok;
        r["max_violation"] = cp.max_violation;
        results.push_back(r);
        all_monotone = all_monotone && cp.monotone_ok;
        all_below = all_below && cp.below_all_levels;

        CsvTable table{"alpha_" + std::to_string(rep.tables.size()), {}};
        for (auto [m, v] : cp.arch_seq) {
            double lm = std::log(static_cast<double>(m)) / m;
            double model = cp.c_arch;  // limit as the model; residual shows decay
            (void)lm;
            table.add(m, v + (cp.c_total - cp.c_arch), model + (cp.c_total - cp.c_arch));
        }
        rep.tables.push_back(std::move(table));
    }
    rep.inputs = {{"points", pts}, {"schedule", schedule}};
    rep.details = {{"results", results}};
    rep.verdict = (all_monotone && all_below) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// gromov: L2 <= sup on random sections, and the reverse bound with the m^-d
// factor; reports the fitted comparison constant.
// ---------------------------------------------------------------------------
inline CheckReport check_gromov(const AdelicBundle& B, GramCache& cache,
                                const std::vector<int>& levels, int samples_per_level,
                                std::uint64_t seed) {
    CheckReport rep;
    rep.name = "gromov";
    rep.inputs = {{"levels", levels}, {"samples_per_level", samples_per_level}, {"seed", seed}};
    std::mt19937_64 rng(seed);
    const int d = B.series().dimension();

    int violations = 0;
    double a_fit = std::numeric_limits<double>::infinity();
    CsvTable table{"levels", {}};
    Json worst = Json::array();
    for (int m : levels) {
        const GramData& g = cache.at(m);
        const auto& basis = B.series().level_basis(m);
        double level_min_ratio = std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples_per_level; ++s) {
            std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
            std::uniform_int_distribution<int> nterms(1, 4), coefpick(0, 5);
            static const Rational coef_pool[6] = {1, -1, 2, -2, Rational(1, 2), 3};
            Section sec(m, d);
            int nt = nterms(rng);
            for (int t = 0; t < nt; ++t)
                sec.set(basis[pick(rng)], coef_pool[coefpick(rng)]);
            if (sec.is_zero()) continue;
            double l2 = log_l2_norm(g, sec);
            SupEstimate sup = log_sup_norm(B.arch(), sec);
            if (l2 > sup.log_value + sup.gap + 1e-9) ++violations;
            double ratio = l2 - sup.log_value;  // log of L2/sup, <= 0 expected
            level_min_ratio = std::min(level_min_ratio, ratio);
        }
        double a_level = std::exp(level_min_ratio) * std::pow(static_cast<double>(m), d);
        a_fit = std::min(a_fit, a_level);
        table.add(m, std::exp(level_min_ratio), a_level / std::pow(static_cast<double>(m), d));
    }
    rep.tables.push_back(std::move(table));
    rep.details = {{"violations", violations}, {"fitted_a", a_fit}};
    rep.verdict = (violations == 0 && a_fit > 0) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// nonarch_exactness: finite-place transforms are exact and homogeneous;
// sums over the grid cancel the covolume exactly; ultrametric brute force
// confirms the monomial minimizer on sampled cosets.
// ---------------------------------------------------------------------------
inline CheckReport check_nonarch_exactness(const AdelicBundle& B, const std::vector<int>& levels,
                                           int audit_count) {
    CheckReport rep;
    rep.name = "nonarch_exactness";
    rep.inputs = {{"levels", levels}, {"audits", audit_count}};
    const ToricSeries& S = B.series();
    bool exact_ok = true, homogeneous_ok = true, audits_ok = true;

    for (const auto& w : B.finite()) {
        for (int m : levels) {
            if (m > S.max_level()) continue;
            // Covolume cancellation: sum_alpha F_p coeff == -sum_beta w_m(beta).
            Rational covol = 0, f_sum = 0;
            for (const auto& beta : S.level_basis(m)) {
                covol += w.level_weight(m, beta);
                f_sum += -w.level_weight(m, beta);
            }
            if (f_sum != -covol) exact_ok = false;
            // Homogeneity: w_{2m}(2 beta) = 2 w_m(beta).
            if (2 * m <= S.max_level())
                for (const auto& beta : S.level_basis(m)) {
                    if (w.level_weight(2 * m, beta + beta) != 2 * w.level_weight(m, beta))
                        homogeneous_ok = false;
                }
        }

        // Ultrametric audit: the Gauss norm of monomial + perturbation never
        // beats the monomial (the max always includes the leading term).
        std::mt19937_64 rng(99991);
        int m = levels.empty() ? 1 : levels.back();
        m = std::min(m, S.max_level());
        const auto& basis = S.level_basis(m);
        for (int a = 0; a < audit_count && basis.size() >= 2; ++a) {
            std::uniform_int_distribution<size_t> pick(0, basis.size() - 2);
            size_t lead = pick(rng);
            Rational f_lead = -w.level_weight(m, basis[lead]);
            std::uniform_int_distribution<int> vpick(-3, 3);
            for (size_t free = lead + 1; free < std::min(basis.size(), lead + 4); ++free) {
                Section s = Section::monomial(m, basis[lead]);
                Rational c = 1;
                int v = vpick(rng);
                for (int i = 0; i < std::abs(v); ++i) {
                    if (v > 0)
                        c *= w.prime();
                    else
                        c /= w.prime();
                }
                s.set(basis[free], c);
                PadicNorm norm = gauss_norm(w, s);
                // log_p ||s|| = -neg_log_p; F coeff of the monomial is f_lead.
                if (-norm.neg_log_p < f_lead) audits_ok = false;
            }
        }
    }
    rep.details = {{"covolume_cancellation_exact", exact_ok},
                   {"homogeneous", homogeneous_ok},
                   {"ultrametric_audits_ok", audits_ok},
                   {"weights", static_cast<int>(B.finite().size())}};
    rep.verdict = (exact_ok && homogeneous_ok && audits_ok) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// summation: r(m) = chi(m) + sum_alpha F'(m, alpha) is exactly the
// ball-volume correction, and r(m)/m^{d+1} -> 0 so the limit statement
// carries over.
// ---------------------------------------------------------------------------
inline CheckReport check_summation(const AdelicBundle& B, GramCache& cache,
                                   const std::vector<int>& levels, const FieldParams& F,
                                   const Tolerances& tol) {
    CheckReport rep;
    rep.name = "summation";
    rep.inputs = {{"levels", levels}};
    const int d = B.series().dimension();

    double worst_identity = 0;
    std::vector<double> decay;
    CsvTable table{"levels", {}};
    for (int m : levels) {
        const GramData& g = cache.at(m);
        DegResult deg = deg_h0(B, g);
        double chi = chi_l2(deg, F);

        std::vector<double> terms;
        for (const auto& beta : g.basis) {
            FComponents f = f_components(B, g, beta);
            terms.push_back(f.total_l2());
        }
        double full_sum = pairwise_sum(terms);

        double n = static_cast<double>(deg.n);
        double expected = -0.5 * n * F.log_abs_disc + F.r1 * log_ball_volume(n) +
                          F.r2 * log_ball_volume(2.0 * n);
        double r = chi + full_sum;
        worst_identity = std::max(worst_identity, std::abs(r - expected));
        double scaled = std::abs(r) / std::pow(static_cast<double>(m), d + 1);
        decay.push_back(scaled);
        table.add(m, r, expected);
    }
    rep.tables.push_back(std::move(table));

    bool decays = decay.size() < 2 || decay.back() <= decay.front();
    rep.details = {{"max_identity_gap", worst_identity},
                   {"r_scaled_first", decay.empty() ? 0.0 : decay.front()},
                   {"r_scaled_last", decay.empty() ? 0.0 : decay.back()},
                   {"r_over_m_d1_decays", decays}};
    rep.verdict = (worst_identity <= tol.euler_identity && decays) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// vol_chi: leading-coefficient fit of chi, positivity, and tensor-power
// homogeneity vol(2L) = 2^{d+1} vol(L).
// ---------------------------------------------------------------------------
inline CheckReport check_vol_chi(const AdelicBundle& B, GramCache& cache,
                                 const std::vector<int>& levels, const FieldParams& F,
                                 const Tolerances& tol, bool with_homogeneity = true) {
    CheckReport rep;
    rep.name = "vol_chi";
    rep.inputs = {{"levels", levels}, {"homogeneity", with_homogeneity}};
    const int d = B.series().dimension();

    ChiSeries S = chi_series(B, cache, levels, F);
    VolChiFit fit = fit_vol_chi(S, d);
    CsvTable table{"levels", {}};
    for (const auto& lv : S.levels) table.add(lv.m, lv.chi, fit.model(d, lv.m));
    rep.tables.push_back(std::move(table));

    rep.details = {{"vol_chi", fit.vol_chi},
                   {"coef_md_logm", fit.coef_md_logm},
                   {"coef_md", fit.coef_md},
                   {"residual_rms", fit.residual_rms},
                   {"condition", fit.condition},
                   {"ill_conditioned", fit.ill_conditioned}};

    bool ok = !fit.ill_conditioned && fit.vol_chi > 0;
    if (with_homogeneity) {
        AdelicBundle B2 = B.power(2);
        GramCache cache2(B2.arch(), B2.series(), 1e-11);
        std::vector<int> half;
        for (int m : levels)
            if (m % 2 == 0 && m / 2 >= 2) half.push_back(m / 2);
        if (half.size() >= 3) {
            ChiSeries S2 = chi_series(B2, cache2, half, F);
            VolChiFit fit2 = fit_vol_chi(S2, d);
            double target = std::pow(2.0, d + 1) * fit.vol_chi;
            double rel = std::abs(fit2.vol_chi - target) / std::max(1e-300, std::abs(target));
            rep.details["vol_chi_of_double"] = fit2.vol_chi;
            rep.details["homogeneity_target"] = target;
            rep.details["homogeneity_gap"] = rel;
            ok = ok && rel <= tol.homogeneity;
        } else {
            rep.details["homogeneity_gap"] = nullptr;
        }
    }
    rep.verdict = ok ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// main_theorem: lim chi/m^{d+1} = vol_chi/(d+1)! = -integral of c over the
// body. Both candidate normalizations are reported; the test is against
// (d+1)!.
// ---------------------------------------------------------------------------
inline CheckReport check_main_theorem(const AdelicBundle& B, GramCache& cache,
                                      const std::vector<int>& chi_levels, int grid_level,
                                      const std::vector<int>& schedule, const FieldParams& F,
                                      const Tolerances& tol) {
    CheckReport rep;
    rep.name = "main_theorem";
    rep.inputs = {{"chi_levels", chi_levels}, {"grid_level", grid_level}, {"schedule", schedule}};
    const int d = B.series().dimension();

    ChiSeries S = chi_series(B, cache, chi_levels, F);
    VolChiFit fit = fit_vol_chi(S, d);
    double lim_chi = fit.vol_chi / std::tgamma(static_cast<double>(d) + 2.0);

    ChebyshevTable T = chebyshev_table(B, cache, grid_level, schedule);
    double int_c = integrate_c(T, B.series().polytope());

    double gap = std::abs(lim_chi + int_c);
    CsvTable table{"chi_ratio", {}};
    for (auto [m, ratio] : fit.ratio)
        table.add(m, ratio / std::tgamma(static_cast<double>(d) + 2.0), -int_c);
    rep.tables.push_back(std::move(table));

    rep.details = {{"vol_chi", fit.vol_chi},
                   {"lim_chi_over_m_d1", lim_chi},
                   {"integral_c", int_c},
                   {"gap", gap},
                   {"candidate_constant_d_plus_1_fact", -lim_chi},
                   {"candidate_constant_d_fact",
                    -fit.vol_chi / std::tgamma(static_cast<double>(d) + 1.0)},
                   {"grid_points", static_cast<int>(T.points.size())}};
    rep.verdict = gap <= tol.main_theorem * std::max(1.0, std::abs(int_c)) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// uniform_bound: (1/m) F' is bounded uniformly by the best level-one
// monomial bound (the coordinate-section bound on projective space).
// ---------------------------------------------------------------------------
inline CheckReport check_uniform_bound(const AdelicBundle& B, GramCache& cache,
                                       const std::vector<int>& levels) {
    CheckReport rep;
    rep.name = "uniform_bound";
    rep.inputs = {{"levels", levels}};
    const ToricSeries& S = B.series();

    // Bound from level-one monomials: max over the level-1 basis of the sum
    // over places of log sup norms.
    double bound = -std::numeric_limits<double>::infinity();
    for (const auto& beta : S.level_basis(1)) {
        Section s = Section::monomial(1, beta);
        double b = log_sup_norm(B.arch(), s).log_value + 1e-8;
        for (const auto& w : B.finite())
            b += to_double(-w.level_weight(1, beta)) * std::log(static_cast<double>(w.prime()));
        const Rational& q = B.trivialization_scale();
        if (q != 1) {
            b += -std::log(std::abs(to_double(q)));
            for (long long p : B.scale_primes())
                b += padic_valuation(q, p) * std::log(static_cast<double>(p));
        }
        bound = std::max(bound, b);
    }

    double worst_excess = -std::numeric_limits<double>::infinity();
    double global_max = -std::numeric_limits<double>::infinity();
    CsvTable table{"levels", {}};
    for (int m : levels) {
        const GramData& g = cache.at(m);
        double level_max = -std::numeric_limits<double>::infinity();
        for (const auto& beta : g.basis) {
            FComponents f = f_components(B, g, beta);
            level_max = std::max(level_max, f.total_l2() / m);
        }
        global_max = std::max(global_max, level_max);
        worst_excess = std::max(worst_excess, level_max - bound);
        table.add(m, level_max, bound);
    }
    rep.tables.push_back(std::move(table));
    rep.details = {{"level_one_bound", bound},
                   {"max_scaled_transform", global_max},
                   {"worst_excess", worst_excess}};
    rep.verdict = worst_excess <= 1e-9 ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// product_formula: rescaling the trivializing section moves every place but
// not the totals.
// ---------------------------------------------------------------------------
inline CheckReport check_product_formula(const AdelicBundle& B, GramCache& cache,
                                         const std::vector<Rational>& scales, int level,
                                         const Tolerances& tol) {
    CheckReport rep;
    rep.name = "product_formula";
    Json qs = Json::array();
    for (const auto& q : scales) qs.push_back(to_string(q));
    rep.inputs = {{"scales", qs}, {"level", level}};

    const GramData& g = cache.at(level);
    double worst = 0;
    double min_place_shift = std::numeric_limits<double>::infinity();
    size_t idx0 = g.basis.size() / 2;
    const Exponent& probe = g.basis[idx0];

    FComponents base = f_components(B, g, probe);
    for (const auto& q : scales) {
        if (q == 1) continue;
        AdelicBundle Bq = B.with_trivialization_scale(q);
        FComponents fq = f_components(Bq, g, probe);
        worst = std::max(worst, std::abs(fq.total_l2() - base.total_l2()));
        // The arch place must move by exactly -m log |q|.
        double arch_shift = std::abs(fq.arch_l2 - base.arch_l2);
        min_place_shift = std::min(min_place_shift, arch_shift);
    }
    rep.details = {{"max_total_shift", worst}, {"min_arch_shift", min_place_shift}};
    rep.verdict =
        (worst <= tol.product_formula && min_place_shift > 1e-6) ? "PASS" : "FAIL";
    return rep;
}

// ---------------------------------------------------------------------------
// brunn_minkowski: under nonpositive roofs, vol_chi^{1/(d+1)} is
// superadditive under tensor product; the lifted bodies include the
// pointwise sums.
// ---------------------------------------------------------------------------
inline CheckReport check_brunn_minkowski(const AdelicBundle& L, const AdelicBundle& M,
                                         const std::vector<int>& levels, int grid_level,
                                         const std::vector<int>& schedule, const FieldParams& F,
                                         const Tolerances& tol) {
    CheckReport rep;
    rep.name = "brunn_minkowski";
    rep.inputs = {{"levels", levels}, {"grid_level", grid_level}, {"schedule", schedule}};
    const int d = L.series().dimension();
    AdelicBundle Sum = L.tensor(M);

    GramCache cl(L.arch(), L.series(), 1e-11), cm(M.arch(), M.series(), 1e-11),
        cs(Sum.arch(), Sum.series(), 1e-11);

    // Hypothesis: the roofs -c are nonnegative (checked by the lifted bodies).
    ChebyshevTable TL = chebyshev_table(L, cl, grid_level, schedule);
    ChebyshevTable TM = chebyshev_table(M, cm, grid_level, schedule);
    ChebyshevTable TS = chebyshev_table(Sum, cs, grid_level, schedule);
    LiftedBody BL = lifted_body(TL, L.series().polytope(), tol.positivity);
    LiftedBody BM = lifted_body(TM, M.series().polytope(), tol.positivity);
    LiftedBody BS = lifted_body(TS, Sum.series().polytope(), tol.positivity);

    auto vol_of = [&](const AdelicBundle& B, GramCache& c) {
        ChiSeries S = chi_series(B, c, levels, F);
        return fit_vol_chi(S, d).vol_chi;
    };
    double vl = vol_of(L, cl), vm = vol_of(M, cm), vs = vol_of(Sum, cs);

    double e = 1.0 / (d + 1);
    double lhs = std::pow(std::max(0.0, vs), e);
    double rhs = std::pow(std::max(0.0, vl), e) + std::pow(std::max(0.0, vm), e);
    bool super = lhs >= (1.0 - tol.brunn_minkowski) * rhs;

    // Pointwise inclusion: -c_S(a1 + a2) >= -c_L(a1) - c_M(a2) - slack on
    // shared grids (a1 + a2 is again a grid point of the sum polytope).
    int inclusion_violations = 0;
    std::map<std::vector<Rational>, double> sum_heights;
    for (size_t i = 0; i < BS.points.size(); ++i) sum_heights[BS.points[i]] = BS.heights[i];
    for (size_t i = 0; i < BL.points.size(); ++i)
        for (size_t j = 0; j < BM.points.size(); ++j) {
            RationalPoint x(BL.points[i].size());
            for (size_t k = 0; k < x.size(); ++k) x[k] = BL.points[i][k] + BM.points[j][k];
            auto it = sum_heights.find(x);
            if (it == sum_heights.end()) continue;
            if (it->second < BL.heights[i] + BM.heights[j] - tol.bm_inclusion)
                ++inclusion_violations;
        }

    rep.details = {{"vol_L", vl},
                   {"vol_M", vm},
                   {"vol_sum", vs},
                   {"lhs_root", lhs},
                   {"rhs_roots_sum", rhs},
                   {"superadditive", super},
                   {"inclusion_violations", inclusion_violations}};
    rep.verdict = (super && inclusion_violations == 0) ? "PASS" : "FAIL";
    return rep;
}

}  // namespace chebvol
