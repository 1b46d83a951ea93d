#pragma once

#include <iostream>
#include <string>

#include "checks.hpp"
#include "config.hpp"

namespace chebvol::detail_run {

inline std::vector<int> clamp_levels(const std::vector<int>& ms, int max_level) {
    std::vector<int> out;
    for (int m : ms)
        if (m <= max_level) out.push_back(m);
    return out;
}

/// Level lists per check, derived from the config. A handful of checks run on
/// thinner schedules than the chi fits to keep desk-scale runs quick.
inline std::vector<int> thin(const std::vector<int>& ms, size_t target) {
    if (ms.size() <= target) return ms;
    std::vector<int> out;
    double step = static_cast<double>(ms.size() - 1) / static_cast<double>(target - 1);
    for (size_t i = 0; i < target; ++i)
        out.push_back(ms[static_cast<size_t>(i * step + 0.5)]);
    out.back() = ms.back();
    return out;
}

inline CheckReport dispatch(const std::string& name, const RunConfig& cfg,
                            const AdelicBundle& bundle, GramCache& cache,
                            const FieldParams& field, std::ostream& log) {
    const Tolerances& tol = cfg.tolerances;
    const int max_level = bundle.series().max_level();
    std::vector<int> chi_levels = clamp_levels(cfg.chi_levels, max_level);

    if (name == "volume_identity")
        return check_volume_identity(bundle.series(), chi_levels, tol);

    if (name == "khovanskii") {
        if (!cfg.khovanskii) {
            CheckReport rep;
            rep.name = name;
            rep.verdict = "INCONCLUSIVE";
            rep.details["note"] = "no khovanskii block configured";
            return rep;
        }
        std::vector<GradedPoint> gens;
        for (const auto& row : cfg.khovanskii->generators) {
            std::vector<long long> beta(row.begin(), row.end() - 1);
            gens.push_back({Exponent(beta), static_cast<int>(row.back())});
        }
        Semigroup sem(gens, cfg.khovanskii->bound);
        Polytope target(std::vector<RationalPoint>(cfg.khovanskii->target.begin(),
                                                   cfg.khovanskii->target.end()));
        return check_khovanskii(sem, target);
    }

    if (name == "fundamental_identity")
        return check_fundamental_identity(bundle, cache, thin(chi_levels, 6), tol);

    if (name == "riemann_roch") return check_riemann_roch(bundle, cache, chi_levels, field, tol);

    if (name == "chebyshev")
        return check_chebyshev(bundle, cache, cfg.chebyshev_points, cfg.schedule, tol);

    if (name == "gromov") return check_gromov(bundle, cache, thin(chi_levels, 4), 6, 20240);

    if (name == "nonarch_exactness")
        return check_nonarch_exactness(bundle, thin(chi_levels, 6), 12);

    if (name == "summation") return check_summation(bundle, cache, thin(chi_levels, 6), field, tol);

    if (name == "vol_chi") return check_vol_chi(bundle, cache, chi_levels, field, tol);

    if (name == "main_theorem")
        return check_main_theorem(bundle, cache, chi_levels, cfg.grid_level, cfg.schedule, field,
                                  tol);

    if (name == "uniform_bound") return check_uniform_bound(bundle, cache, thin(chi_levels, 5));

    if (name == "product_formula")
        return check_product_formula(bundle, cache, cfg.product_scales,
                                     std::max(2, chi_levels.empty() ? 2 : chi_levels.front()), tol);

    if (name == "brunn_minkowski") {
        AdelicBundle second = build_second_bundle(cfg, bundle);
        int bm_grid = std::min(cfg.grid_level, bundle.series().dimension() == 1 ? 10 : 4);
        std::vector<int> bm_sched;
        for (int k : cfg.schedule)
            if (bm_grid * k <= max_level && bm_sched.size() < 3) bm_sched.push_back(k);
        return check_brunn_minkowski(bundle, second, thin(chi_levels, 8), bm_grid, bm_sched, field,
                                     tol);
    }

    (void)log;
    throw std::invalid_argument("unknown check '" + name + "'");
}

}  // namespace chebvol::detail_run
