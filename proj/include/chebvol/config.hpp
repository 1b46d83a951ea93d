#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "checks.hpp"
#include "report.hpp"

namespace chebvol {

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "volume_identity", "khovanskii",      "fundamental_identity", "riemann_roch",
        "chebyshev",       "gromov",          "nonarch_exactness",    "summation",
        "vol_chi",         "main_theorem",    "uniform_bound",        "product_formula",
        "brunn_minkowski",
    };
    return names;
}

struct ArchConfig {
    std::string kind = "fubini_study";  // or "custom_radial"
    double coeff = 1.0;
    double shift = 0.0;
    std::string measure;  // "simplex" | "product"; default chosen by the series
    std::vector<std::pair<double, double>> knots;
};

struct WeightConfig {
    long long prime = 0;
    std::vector<std::vector<Rational>> pieces;  // each [a_1..a_d, b]; a integral
};

struct KhovanskiiConfig {
    std::vector<std::vector<long long>> generators;  // [beta..., level]
    std::vector<std::vector<Rational>> target;       // vertices of D
    int bound = 64;
};

struct RunConfig {
    // series
    int projective_dim = 0;  // > 0 selects P^d
    std::vector<std::vector<long long>> polytope_vertices;
    int max_level = 0;  // 0 = dimension default

    ArchConfig arch;
    std::vector<WeightConfig> weights;
    Rational trivialization_scale = 1;

    int grid_level = 0;  // 0 = dimension default
    std::vector<int> schedule;
    std::vector<int> chi_levels;
    std::vector<RationalPoint> chebyshev_points;
    std::vector<Rational> product_scales;
    std::optional<KhovanskiiConfig> khovanskii;
    std::optional<ArchConfig> second_arch;             // Brunn-Minkowski partner
    std::optional<std::vector<WeightConfig>> second_weights;

    std::vector<std::string> checks;
    Tolerances tolerances;
    std::string out = "reports";

    int dimension() const {
        return projective_dim > 0 ? projective_dim
                                  : (polytope_vertices.empty()
                                         ? 0
                                         : static_cast<int>(polytope_vertices[0].size()));
    }
};

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                                const std::string& path, std::vector<std::string>& errors) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            errors.push_back(path + ": unknown key '" + it.key() + "'");
}

inline Rational parse_rational_json(const Json& v, const std::string& path,
                                    std::vector<std::string>& errors) {
    try {
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        errors.push_back(path + ": " + e.what());
        return 0;
    }
    errors.push_back(path + ": expected integer or rational string");
    return 0;
}

inline ArchConfig parse_arch(const Json& j, const std::string& path,
                             std::vector<std::string>& errors) {
    ArchConfig a;
    if (!j.is_object()) {
        errors.push_back(path + ": expected object");
        return a;
    }
    reject_unknown_keys(j, {"kind", "coeff", "shift", "measure", "knots"}, path, errors);
    a.kind = j.value("kind", "fubini_study");
    if (a.kind != "fubini_study" && a.kind != "custom_radial")
        errors.push_back(path + ".kind: expected 'fubini_study' or 'custom_radial'");
    a.coeff = j.value("coeff", 1.0);
    if (!(a.coeff > 0)) errors.push_back(path + ".coeff: must be positive");
    a.shift = j.value("shift", 0.0);
    a.measure = j.value("measure", "");
    if (!a.measure.empty() && a.measure != "simplex" && a.measure != "product")
        errors.push_back(path + ".measure: expected 'simplex' or 'product'");
    if (j.count("knots")) {
        if (a.kind != "custom_radial")
            errors.push_back(path + ".knots: only meaningful for custom_radial");
        if (!j["knots"].is_array())
            errors.push_back(path + ".knots: expected array of [radius, value]");
        else
            for (size_t i = 0; i < j["knots"].size(); ++i) {
                const Json& k = j["knots"][i];
                if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
                    errors.push_back(path + ".knots[" + std::to_string(i) +
                                     "]: expected [radius, value]");
                    continue;
                }
                a.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
    } else if (a.kind == "custom_radial") {
        errors.push_back(path + ": custom_radial requires knots");
    }
    return a;
}

inline std::vector<WeightConfig> parse_weights(const Json& j, int d, const std::string& path,
                                               std::vector<std::string>& errors) {
    std::vector<WeightConfig> out;
    if (!j.is_array()) {
        errors.push_back(path + ": expected array");
        return out;
    }
    std::set<long long> primes;
    for (size_t i = 0; i < j.size(); ++i) {
        const Json& w = j[i];
        std::string wpath = path + "[" + std::to_string(i) + "]";
        if (!w.is_object()) {
            errors.push_back(wpath + ": expected object");
            continue;
        }
        reject_unknown_keys(w, {"prime", "pieces"}, wpath, errors);
        WeightConfig wc;
        if (!w.count("prime") || !w["prime"].is_number_integer()) {
            errors.push_back(wpath + ".prime: required integer");
            continue;
        }
        wc.prime = w["prime"].get<long long>();
        if (!is_prime(wc.prime)) errors.push_back(wpath + ".prime: " + std::to_string(wc.prime) + " is not prime");
        if (!primes.insert(wc.prime).second)
            errors.push_back(wpath + ".prime: duplicate prime " + std::to_string(wc.prime));
        if (!w.count("pieces") || !w["pieces"].is_array() || w["pieces"].empty()) {
            errors.push_back(wpath + ".pieces: required non-empty array");
            continue;
        }
        for (size_t k = 0; k < w["pieces"].size(); ++k) {
            const Json& piece = w["pieces"][k];
            std::string ppath = wpath + ".pieces[" + std::to_string(k) + "]";
            if (!piece.is_array() || static_cast<int>(piece.size()) != d + 1) {
                errors.push_back(ppath + ": expected [a_1..a_" + std::to_string(d) + ", b]");
                continue;
            }
            std::vector<Rational> row;
            for (size_t c = 0; c < piece.size(); ++c) {
                Rational r = parse_rational_json(piece[c], ppath, errors);
                if (c + 1 < piece.size() && den(r) != 1)
                    errors.push_back(ppath + ": gradient entries must be integers");
                row.push_back(r);
            }
            wc.pieces.push_back(std::move(row));
        }
        out.push_back(std::move(wc));
    }
    return out;
}

}  // namespace detail

/// Parses and validates a run configuration, accumulating every problem
/// rather than bailing at the first.
inline RunConfig parse_config(const Json& j, std::vector<std::string>& errors) {
    RunConfig cfg;
    if (!j.is_object()) {
        errors.push_back("config: expected a JSON object");
        return cfg;
    }
    detail::reject_unknown_keys(
        j,
        {"series", "max_level", "arch", "weights", "trivialization_scale", "grid_level",
         "schedule", "chi_levels", "chebyshev_points", "product_scales", "khovanskii",
         "second_arch", "second_weights", "checks", "tolerances", "out"},
        "config", errors);

    // series
    if (!j.count("series") || !j["series"].is_object()) {
        errors.push_back("config.series: required object");
    } else {
        const Json& s = j["series"];
        detail::reject_unknown_keys(s, {"projective_dim", "polytope"}, "config.series", errors);
        if (s.count("projective_dim") == s.count("polytope"))
            errors.push_back("config.series: exactly one of projective_dim / polytope");
        if (s.count("projective_dim")) {
            if (!s["projective_dim"].is_number_integer() || s["projective_dim"].get<int>() < 1 ||
                s["projective_dim"].get<int>() > 3)
                errors.push_back("config.series.projective_dim: expected integer in 1..3");
            else
                cfg.projective_dim = s["projective_dim"].get<int>();
        }
        if (s.count("polytope")) {
            if (!s["polytope"].is_array() || s["polytope"].empty())
                errors.push_back("config.series.polytope: expected non-empty vertex array");
            else
                for (size_t i = 0; i < s["polytope"].size(); ++i) {
                    const Json& v = s["polytope"][i];
                    if (!v.is_array() || v.empty() || v.size() > 2) {
                        errors.push_back("config.series.polytope[" + std::to_string(i) +
                                         "]: expected [x] or [x, y] with integers");
                        continue;
                    }
                    std::vector<long long> vert;
                    for (const auto& c : v) {
                        if (!c.is_number_integer()) {
                            errors.push_back("config.series.polytope[" + std::to_string(i) +
                                             "]: vertices must be integers");
                            break;
                        }
                        vert.push_back(c.get<long long>());
                    }
                    if (vert.size() == v.size()) cfg.polytope_vertices.push_back(std::move(vert));
                }
        }
    }
    int d = cfg.dimension();
    if (d == 0 && errors.empty()) errors.push_back("config.series: could not determine dimension");

    if (j.count("max_level")) {
        if (!j["max_level"].is_number_integer() || j["max_level"].get<int>() < 1)
            errors.push_back("config.max_level: expected positive integer");
        else
            cfg.max_level = j["max_level"].get<int>();
    }

    if (j.count("arch")) cfg.arch = detail::parse_arch(j["arch"], "config.arch", errors);
    if (j.count("weights") && d > 0)
        cfg.weights = detail::parse_weights(j["weights"], d, "config.weights", errors);
    if (j.count("trivialization_scale"))
        cfg.trivialization_scale =
            detail::parse_rational_json(j["trivialization_scale"], "config.trivialization_scale", errors);
    if (cfg.trivialization_scale == 0)
        errors.push_back("config.trivialization_scale: must be nonzero");

    auto parse_int_list = [&](const char* key, std::vector<int>& dst) {
        if (!j.count(key)) return;
        if (!j[key].is_array()) {
            errors.push_back(std::string("config.") + key + ": expected array of integers");
            return;
        }
        for (const auto& v : j[key]) {
            if (!v.is_number_integer() || v.get<int>() < 1) {
                errors.push_back(std::string("config.") + key + ": entries must be positive integers");
                return;
            }
            dst.push_back(v.get<int>());
        }
    };
    if (j.count("grid_level")) {
        if (!j["grid_level"].is_number_integer() || j["grid_level"].get<int>() < 1)
            errors.push_back("config.grid_level: expected positive integer");
        else
            cfg.grid_level = j["grid_level"].get<int>();
    }
    parse_int_list("schedule", cfg.schedule);
    parse_int_list("chi_levels", cfg.chi_levels);
    for (size_t i = 1; i < cfg.schedule.size(); ++i)
        if (cfg.schedule[i] <= cfg.schedule[i - 1]) {
            errors.push_back("config.schedule: must be strictly increasing");
            break;
        }

    if (j.count("chebyshev_points")) {
        if (!j["chebyshev_points"].is_array())
            errors.push_back("config.chebyshev_points: expected array");
        else
            for (size_t i = 0; i < j["chebyshev_points"].size(); ++i) {
                const Json& p = j["chebyshev_points"][i];
                std::string path = "config.chebyshev_points[" + std::to_string(i) + "]";
                if (!p.is_array() || static_cast<int>(p.size()) != d) {
                    errors.push_back(path + ": expected point with " + std::to_string(d) +
                                     " coordinates");
                    continue;
                }
                RationalPoint pt;
                for (const auto& c : p) pt.push_back(detail::parse_rational_json(c, path, errors));
                cfg.chebyshev_points.push_back(std::move(pt));
            }
    }

    if (j.count("product_scales")) {
        if (!j["product_scales"].is_array())
            errors.push_back("config.product_scales: expected array");
        else
            for (const auto& v : j["product_scales"]) {
                Rational q = detail::parse_rational_json(v, "config.product_scales", errors);
                if (q == 0) errors.push_back("config.product_scales: zero is not a unit");
                cfg.product_scales.push_back(q);
            }
    }

    if (j.count("khovanskii")) {
        const Json& k = j["khovanskii"];
        if (!k.is_object()) {
            errors.push_back("config.khovanskii: expected object");
        } else {
            detail::reject_unknown_keys(k, {"generators", "target", "bound"}, "config.khovanskii",
                                        errors);
            KhovanskiiConfig kc;
            if (k.count("bound")) {
                if (!k["bound"].is_number_integer() || k["bound"].get<int>() < 2)
                    errors.push_back("config.khovanskii.bound: expected integer >= 2");
                else
                    kc.bound = k["bound"].get<int>();
            }
            if (!k.count("generators") || !k["generators"].is_array() || k["generators"].empty())
                errors.push_back("config.khovanskii.generators: required non-empty array");
            else
                for (size_t i = 0; i < k["generators"].size(); ++i) {
                    const Json& g = k["generators"][i];
                    if (!g.is_array() || static_cast<int>(g.size()) != d + 1) {
                        errors.push_back("config.khovanskii.generators[" + std::to_string(i) +
                                         "]: expected [beta_1..beta_" + std::to_string(d) +
                                         ", level]");
                        continue;
                    }
                    std::vector<long long> row;
                    bool ok = true;
                    for (const auto& c : g) {
                        if (!c.is_number_integer() || c.get<long long>() < 0) ok = false;
                        else row.push_back(c.get<long long>());
                    }
                    if (!ok || row.back() < 1)
                        errors.push_back("config.khovanskii.generators[" + std::to_string(i) +
                                         "]: entries must be nonnegative integers, level >= 1");
                    else
                        kc.generators.push_back(std::move(row));
                }
            if (!k.count("target") || !k["target"].is_array() || k["target"].empty())
                errors.push_back("config.khovanskii.target: required non-empty vertex array");
            else
                for (size_t i = 0; i < k["target"].size(); ++i) {
                    const Json& v = k["target"][i];
                    std::string path = "config.khovanskii.target[" + std::to_string(i) + "]";
                    if (!v.is_array() || static_cast<int>(v.size()) != d) {
                        errors.push_back(path + ": expected point with " + std::to_string(d) +
                                         " coordinates");
                        continue;
                    }
                    std::vector<Rational> pt;
                    for (const auto& c : v) pt.push_back(detail::parse_rational_json(c, path, errors));
                    kc.target.push_back(std::move(pt));
                }
            cfg.khovanskii = std::move(kc);
        }
    }

    if (j.count("second_arch"))
        cfg.second_arch = detail::parse_arch(j["second_arch"], "config.second_arch", errors);
    if (j.count("second_weights") && d > 0)
        cfg.second_weights =
            detail::parse_weights(j["second_weights"], d, "config.second_weights", errors);

    if (j.count("checks")) {
        if (!j["checks"].is_array())
            errors.push_back("config.checks: expected array of names");
        else
            for (const auto& c : j["checks"]) {
                if (!c.is_string()) {
                    errors.push_back("config.checks: entries must be strings");
                    continue;
                }
                std::string name = c.get<std::string>();
                if (std::find(known_checks().begin(), known_checks().end(), name) ==
                    known_checks().end())
                    errors.push_back("config.checks: unknown check '" + name + "'");
                else
                    cfg.checks.push_back(name);
            }
    }

    if (j.count("tolerances")) {
        if (!j["tolerances"].is_object())
            errors.push_back("config.tolerances: expected object");
        else
            for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
                if (!it.value().is_number()) {
                    errors.push_back("config.tolerances." + it.key() + ": expected number");
                    continue;
                }
                try {
                    cfg.tolerances.set(it.key(), it.value().get<double>());
                } catch (const std::exception& e) {
                    errors.push_back("config.tolerances." + it.key() + ": " + e.what());
                }
            }
    }

    if (j.count("out")) {
        if (!j["out"].is_string())
            errors.push_back("config.out: expected string");
        else
            cfg.out = j["out"].get<std::string>();
    }

    // Cross-field defaults and consistency.
    if (d > 0) {
        if (cfg.max_level == 0) cfg.max_level = ToricSeries::default_max_level(d);
        if (cfg.grid_level == 0) cfg.grid_level = d <= 1 ? 20 : 8;
        if (cfg.grid_level > cfg.max_level)
            errors.push_back("config.grid_level: exceeds max_level");
        if (cfg.schedule.empty()) cfg.schedule = {1, 2, 4, 8};
        if (cfg.chi_levels.empty()) {
            int step = std::max(1, cfg.max_level / 20);
            for (int m = std::max(2, step); m <= cfg.max_level; m += step) cfg.chi_levels.push_back(m);
        }
        for (int m : cfg.chi_levels)
            if (m > cfg.max_level) {
                errors.push_back("config.chi_levels: level exceeds max_level");
                break;
            }
        if (cfg.chebyshev_points.empty()) {
            RationalPoint center(static_cast<size_t>(d), Rational(1, d == 1 ? 2 : 3));
            cfg.chebyshev_points.push_back(center);
        }
        if (cfg.product_scales.empty()) cfg.product_scales = {Rational(2), Rational(3), Rational(1, 6)};
        if (cfg.checks.empty()) {
            cfg.checks = {"volume_identity", "fundamental_identity", "riemann_roch",
                          "chebyshev",       "gromov",               "nonarch_exactness",
                          "summation",       "vol_chi",              "main_theorem",
                          "uniform_bound",   "product_formula"};
            if (cfg.khovanskii) cfg.checks.push_back("khovanskii");
            if (cfg.second_arch || cfg.second_weights) cfg.checks.push_back("brunn_minkowski");
        }
    }
    return cfg;
}

inline ArchMetric build_arch(const ArchConfig& a, int d, bool simplex_default) {
    MeasureKind measure = a.measure == "product"
                              ? MeasureKind::Product
                              : (a.measure == "simplex" || simplex_default ? MeasureKind::Simplex
                                                                           : MeasureKind::Product);
    if (a.kind == "fubini_study" && a.coeff == 1.0 && a.shift == 0.0 && a.knots.empty())
        return measure == MeasureKind::Simplex ? ArchMetric::fubini_study(d)
                                               : ArchMetric::product_fubini_study(d);
    RadialTable table{a.knots};
    return ArchMetric::custom(d, measure, a.coeff, std::move(table), a.shift);
}

inline std::vector<NonArchWeight> build_weights(const std::vector<WeightConfig>& ws, int d) {
    std::vector<NonArchWeight> out;
    for (const auto& wc : ws) {
        std::vector<WeightPiece> pieces;
        for (const auto& row : wc.pieces) {
            WeightPiece p;
            for (int i = 0; i < d; ++i)
                p.a.push_back(num(row[static_cast<size_t>(i)]).template convert_to<long long>());
            p.b = row.back();
            pieces.push_back(std::move(p));
        }
        out.emplace_back(wc.prime, std::move(pieces));
    }
    return out;
}

inline AdelicBundle build_bundle(const RunConfig& cfg) {
    int d = cfg.dimension();
    ToricSeries series = cfg.projective_dim > 0
                             ? ToricSeries::projective_space(d, cfg.max_level)
                             : ToricSeries::from_polytope(cfg.polytope_vertices, cfg.max_level);
    bool simplex_default = cfg.projective_dim > 0;
    ArchMetric arch = build_arch(cfg.arch, d, simplex_default);
    return AdelicBundle(series, arch, build_weights(cfg.weights, d), cfg.trivialization_scale);
}

/// The partner bundle for Brunn-Minkowski runs: same series, its own metric
/// data; defaults to a copy of the primary when nothing is configured.
inline AdelicBundle build_second_bundle(const RunConfig& cfg, const AdelicBundle& primary) {
    ArchMetric arch = cfg.second_arch
                          ? build_arch(*cfg.second_arch, cfg.dimension(), cfg.projective_dim > 0)
                          : primary.arch();
    std::vector<NonArchWeight> ws = cfg.second_weights
                                        ? build_weights(*cfg.second_weights, cfg.dimension())
                                        : primary.finite();
    return AdelicBundle(primary.series(), arch, std::move(ws), primary.trivialization_scale());
}

inline std::string canonical_config_hash(const Json& j) { return hex64(fnv1a(j.dump())); }

}  // namespace chebvol
