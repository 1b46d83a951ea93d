#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "runner_detail.hpp"

namespace chebvol {

struct RunResult {
    int exit_code = 0;
    Json summary;
};

/// Executes the configured checks, writing one JSON + CSV bundle per check
/// and an overall summary.json. Deterministic: identical configs produce
/// byte-identical report trees. Exit code 1 iff some check FAILed; errors in
/// setup throw instead.
inline RunResult run_checks(const RunConfig& cfg, const Json& canonical,
                            const std::filesystem::path& out_dir, std::ostream& log) {
    const std::string hash = canonical_config_hash(canonical);
    AdelicBundle bundle = build_bundle(cfg);
    GramCache cache(bundle.arch(), bundle.series(), 1e-11);
    const FieldParams field = FieldParams::rationals();

    RunResult result;
    Json verdicts = Json::object();
    bool any_fail = false;

    for (const std::string& name : cfg.checks) {
        CheckReport rep = detail_run::dispatch(name, cfg, bundle, cache, field, log);
        write_report(out_dir, rep, hash);
        verdicts[name] = rep.verdict;
        any_fail = any_fail || rep.failed();
        log << "  [" << rep.verdict << "] " << name << "\n";
    }

    Json summary;
    summary["schema"] = 1;
    summary["config_hash"] = hash;
    summary["tolerances"] = json_tolerances(cfg.tolerances);
    summary["verdicts"] = verdicts;
    write_text(out_dir / "summary.json", summary.dump(2) + "\n");

    result.exit_code = any_fail ? 1 : 0;
    result.summary = summary;
    return result;
}

/// The `okounkov` subcommand: body data only (vertices, volume, lattice
/// counts, level-1 generation diagnostics).
inline Json okounkov_body_info(const RunConfig& cfg) {
    AdelicBundle bundle = build_bundle(cfg);
    const ToricSeries& S = bundle.series();
    Json j;
    j["schema"] = 1;
    j["dimension"] = S.dimension();
    Json verts = Json::array();
    for (const auto& v : S.polytope().vertices()) {
        Json vv = Json::array();
        for (const auto& c : v) vv.push_back(to_string(c));
        verts.push_back(vv);
    }
    j["vertices"] = verts;
    j["volume"] = to_string(S.polytope().volume());
    j["volume_float"] = to_double(S.polytope().volume());

    Json counts = Json::array();
    int top = std::min(S.max_level(), 12);
    for (int m = 1; m <= top; ++m) {
        Json row;
        row["m"] = m;
        row["dim_h0"] = S.dim_h0(m);
        counts.push_back(row);
    }
    j["dim_h0"] = counts;

    // Value semigroup of the level-1 basis: generation and saturation data.
    std::vector<GradedPoint> gens;
    for (const auto& beta : S.level_basis(1)) gens.push_back({beta, 1});
    Semigroup sem(gens, std::min(24, S.max_level()));
    j["level1_generates_lattice"] = sem.generates_full_lattice();
    return j;
}

}  // namespace chebvol
