// chebvol: checks and invariants for adelically metrized toric line bundles.
//
//   chebvol run <config.json>       run the configured check battery
//   chebvol validate <config.json>  parse + validate, print the canonical form
//   chebvol okounkov <config.json>  print the Okounkov body data only

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <chebvol/chebvol.hpp>

namespace {

chebvol::Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    chebvol::Json j;
    try {
        j = chebvol::Json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error in '" + path + "': " + e.what());
    }
    return j;
}

int load_and_validate(const std::string& path, chebvol::RunConfig& cfg, chebvol::Json& raw) {
    raw = load_json(path);
    std::vector<std::string> errors;
    cfg = chebvol::parse_config(raw, errors);
    if (!errors.empty()) {
        std::cerr << "config invalid (" << errors.size() << " problem"
                  << (errors.size() == 1 ? "" : "s") << "):\n";
        for (const auto& e : errors) std::cerr << "  - " << e << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic Okounkov bodies, Chebyshev transforms, chi-volumes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string checks_override;
    int max_level_override = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON run configuration")->required();
    };

    CLI::App* run = app.add_subcommand("run", "run the configured check battery");
    add_common(run);
    run->add_option("--out", out_override, "output directory (overrides config)");
    run->add_option("--max-level", max_level_override, "cap the maximum level (overrides config)");
    run->add_option("--checks", checks_override, "comma-separated subset of checks to run");

    CLI::App* validate = app.add_subcommand("validate", "validate a configuration");
    add_common(validate);

    CLI::App* okounkov = app.add_subcommand("okounkov", "print Okounkov body data");
    add_common(okounkov);

    CLI11_PARSE(app, argc, argv);

    try {
        chebvol::RunConfig cfg;
        chebvol::Json raw;
        if (int rc = load_and_validate(config_path, cfg, raw); rc != 0) return rc;

        if (validate->parsed()) {
            std::cout << "ok: " << chebvol::canonical_config_hash(raw) << "\n";
            std::cout << raw.dump(2) << "\n";
            return 0;
        }

        if (okounkov->parsed()) {
            std::cout << chebvol::okounkov_body_info(cfg).dump(2) << "\n";
            return 0;
        }

        // run
        if (max_level_override > 0) {
            cfg.max_level = max_level_override;
            std::vector<int> kept;
            for (int m : cfg.chi_levels)
                if (m <= cfg.max_level) kept.push_back(m);
            cfg.chi_levels = kept;
            if (cfg.grid_level > cfg.max_level) cfg.grid_level = cfg.max_level;
            raw["max_level"] = max_level_override;  // hash reflects the effective config
        }
        if (!out_override.empty()) cfg.out = out_override;
        if (!checks_override.empty()) {
            std::vector<std::string> subset;
            std::string cur;
            for (char c : checks_override + ",") {
                if (c == ',') {
                    if (!cur.empty()) subset.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            for (const auto& name : subset)
                if (std::find(chebvol::known_checks().begin(), chebvol::known_checks().end(),
                              name) == chebvol::known_checks().end()) {
                    std::cerr << "unknown check '" << name << "'\n";
                    return 2;
                }
            cfg.checks = subset;
        }

        std::filesystem::path out_dir = cfg.out;
        std::cout << "running " << cfg.checks.size() << " checks -> " << out_dir.string() << "\n";
        chebvol::RunResult res = chebvol::run_checks(cfg, raw, out_dir, std::cout);
        std::cout << (res.exit_code == 0 ? "all checks passed or inconclusive"
                                         : "FAILURES present")
                  << " (summary: " << (out_dir / "summary.json").string() << ")\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
