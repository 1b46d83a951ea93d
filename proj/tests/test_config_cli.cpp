#include <catch2/catch_amalgamated.hpp>

#include <chebvol/chebvol.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

using namespace chebvol;
namespace fs = std::filesystem;

namespace {

RunConfig parse_ok(const std::string& text) {
    std::vector<std::string> errors;
    RunConfig cfg = parse_config(Json::parse(text), errors);
    INFO("errors: " << [&] {
        std::string s;
        for (const auto& e : errors) s += e + "; ";
        return s;
    }());
    REQUIRE(errors.empty());
    return cfg;
}

std::vector<std::string> parse_errors(const std::string& text) {
    std::vector<std::string> errors;
    parse_config(Json::parse(text), errors);
    return errors;
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
    for (const auto& e : errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        out[entry.path().filename().string()] = buf.str();
    }
    return out;
}

fs::path scratch_dir() {
    fs::path p = CHEBVOL_TEST_SCRATCH;
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args, const fs::path& log) {
    std::string cmd = std::string(CHEBVOL_CLI_BIN) + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("minimal config fills defaults", "[config]") {
    RunConfig cfg = parse_ok(R"({"series": {"projective_dim": 1}})");
    CHECK(cfg.projective_dim == 1);
    CHECK(cfg.dimension() == 1);
    CHECK(cfg.max_level == 200);
    CHECK(cfg.grid_level == 20);
    CHECK(cfg.schedule == std::vector<int>{1, 2, 4, 8});
    REQUIRE_FALSE(cfg.chi_levels.empty());
    CHECK(cfg.chi_levels.front() == 10);
    CHECK(cfg.chi_levels.back() == 200);
    REQUIRE(cfg.chebyshev_points.size() == 1);
    CHECK(cfg.chebyshev_points[0] == RationalPoint{Rational(1, 2)});
    CHECK(cfg.product_scales == std::vector<Rational>{Rational(2), Rational(3), Rational(1, 6)});
    CHECK(cfg.checks.size() == 11);
    CHECK(cfg.out == "reports");
    CHECK(cfg.tolerances.get("identity_arch") == 1e-8);
}

TEST_CASE("polytope series config", "[config]") {
    RunConfig cfg =
        parse_ok(R"({"series": {"polytope": [[0, 0], [1, 0], [0, 1], [1, 1]]}})");
    CHECK(cfg.dimension() == 2);
    CHECK(cfg.max_level == 40);
    CHECK(cfg.grid_level == 8);
    CHECK(cfg.chebyshev_points[0] == RationalPoint{Rational(1, 3), Rational(1, 3)});
    AdelicBundle B = build_bundle(cfg);
    CHECK(B.series().dimension() == 2);
    CHECK(B.series().polytope().volume() == 1);
}

TEST_CASE("config with weights and options", "[config]") {
    RunConfig cfg = parse_ok(R"({
        "series": {"projective_dim": 1},
        "max_level": 80,
        "grid_level": 10,
        "schedule": [2, 4, 8],
        "chi_levels": [10, 20, 30],
        "weights": [{"prime": 2, "pieces": [[1, 0], [-1, 1]]}],
        "trivialization_scale": "2/3",
        "chebyshev_points": [["1/2"], ["1/4"]],
        "product_scales": [2, "1/6"],
        "tolerances": {"main_theorem": 0.05},
        "checks": ["fundamental_identity", "chebyshev"],
        "out": "elsewhere"
    })");
    CHECK(cfg.max_level == 80);
    CHECK(cfg.trivialization_scale == Rational(2, 3));
    CHECK(cfg.tolerances.get("main_theorem") == 0.05);
    CHECK(cfg.checks == std::vector<std::string>{"fundamental_identity", "chebyshev"});
    CHECK(cfg.out == "elsewhere");

    AdelicBundle B = build_bundle(cfg);
    REQUIRE(B.finite().size() == 1);
    CHECK(B.finite()[0].prime() == 2);
    CHECK(B.finite()[0].weight({Rational(1, 2)}) == Rational(1, 2));
    CHECK(B.trivialization_scale() == Rational(2, 3));
}

TEST_CASE("khovanskii and partner blocks extend the default battery", "[config]") {
    RunConfig cfg = parse_ok(R"({
        "series": {"projective_dim": 1},
        "khovanskii": {"generators": [[0, 1], [1, 1], [3, 1]], "target": [[1], [2]], "bound": 24},
        "second_weights": []
    })");
    REQUIRE(cfg.khovanskii.has_value());
    CHECK(cfg.khovanskii->bound == 24);
    CHECK(cfg.khovanskii->generators.size() == 3);
    CHECK(cfg.checks.size() == 13);
    CHECK(cfg.checks[cfg.checks.size() - 2] == "khovanskii");
    CHECK(cfg.checks.back() == "brunn_minkowski");

    // Empty partner weights: the second bundle is the bare metric.
    AdelicBundle B = build_bundle(cfg);
    AdelicBundle M = build_second_bundle(cfg, B);
    CHECK(M.finite().empty());
    CHECK(M.series().polytope() == B.series().polytope());
}

TEST_CASE("every problem is reported with its path", "[config]") {
    std::vector<std::string> errors = parse_errors(R"({
        "series": {"projective_dim": 1},
        "bogus": true,
        "weights": [
            {"prime": 4, "pieces": [[1, 0]]},
            {"prime": 3, "pieces": [[1, 0]]},
            {"prime": 3, "pieces": [["1/2", 0]]}
        ],
        "schedule": [4, 2],
        "chebyshev_points": [["1/2", "1/2"]],
        "checks": ["volume_identity", "nope"],
        "tolerances": {"no_such": 0.1},
        "grid_level": 500
    })");
    CHECK(errors.size() >= 7);
    CHECK(mentions(errors, "config: unknown key 'bogus'"));
    CHECK(mentions(errors, "config.weights[0].prime: 4 is not prime"));
    CHECK(mentions(errors, "config.weights[2].prime: duplicate prime 3"));
    CHECK(mentions(errors, "config.weights[2].pieces[0]: gradient entries must be integers"));
    CHECK(mentions(errors, "config.schedule: must be strictly increasing"));
    CHECK(mentions(errors, "config.chebyshev_points[0]: expected point with 1 coordinates"));
    CHECK(mentions(errors, "config.checks: unknown check 'nope'"));
    CHECK(mentions(errors, "config.tolerances.no_such"));
    CHECK(mentions(errors, "config.grid_level: exceeds max_level"));
}

TEST_CASE("series block is mandatory and exclusive", "[config]") {
    CHECK(mentions(parse_errors(R"({})"), "config.series: required object"));
    CHECK(mentions(parse_errors(R"({"series": {}})"),
                   "exactly one of projective_dim / polytope"));
    CHECK(mentions(
        parse_errors(R"({"series": {"projective_dim": 1, "polytope": [[0], [1]]}})"),
        "exactly one of projective_dim / polytope"));
    CHECK(mentions(parse_errors(R"({"series": {"projective_dim": 7}})"),
                   "expected integer in 1..3"));
}

TEST_CASE("metric growth is checked at build time", "[config]") {
    // The simplex-normalized metric decays too slowly for the square's corner
    // directions; the bundle constructor refuses it.
    RunConfig cfg = parse_ok(R"({
        "series": {"polytope": [[0, 0], [1, 0], [0, 1], [1, 1]]},
        "arch": {"kind": "fubini_study", "measure": "simplex"}
    })");
    CHECK_THROWS_AS(build_bundle(cfg), std::invalid_argument);

    RunConfig ok = parse_ok(R"({
        "series": {"polytope": [[0, 0], [1, 0], [0, 1], [1, 1]]},
        "arch": {"kind": "fubini_study", "measure": "simplex", "coeff": 2.0}
    })");
    CHECK_NOTHROW(build_bundle(ok));
}

TEST_CASE("custom radial metric from config", "[config]") {
    RunConfig cfg = parse_ok(R"({
        "series": {"projective_dim": 1},
        "arch": {"kind": "custom_radial", "coeff": 1.0, "shift": 0.1,
                 "knots": [[0.0, 0.0], [1.0, 0.2], [3.0, -0.1]]}
    })");
    AdelicBundle B = build_bundle(cfg);
    const double origin[1] = {0.0};
    double at_zero = B.arch().psi_u(origin);
    CHECK_THAT(at_zero, Catch::Matchers::WithinAbs(0.1, 1e-12));

    CHECK(mentions(parse_errors(R"({
        "series": {"projective_dim": 1},
        "arch": {"kind": "custom_radial"}
    })"),
                   "custom_radial requires knots"));
    CHECK(mentions(parse_errors(R"({
        "series": {"projective_dim": 1},
        "arch": {"kind": "fubini_study", "knots": [[0.0, 0.0]]}
    })"),
                   "only meaningful for custom_radial"));
}

TEST_CASE("canonical hash", "[config]") {
    Json a = Json::parse(R"({"series": {"projective_dim": 1}})");
    Json b = Json::parse(R"({"series": {"projective_dim": 2}})");
    std::string ha = canonical_config_hash(a);
    CHECK(ha == canonical_config_hash(a));
    CHECK(ha != canonical_config_hash(b));
    CHECK(ha.size() == 16);
    CHECK(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("okounkov body info", "[config]") {
    RunConfig cfg = parse_ok(R"({"series": {"projective_dim": 1}})");
    Json j = okounkov_body_info(cfg);
    CHECK(j["schema"] == 1);
    CHECK(j["dimension"] == 1);
    CHECK(j["volume"] == "1");
    CHECK(j["dim_h0"].size() == 12);
    CHECK(j["dim_h0"][3]["dim_h0"] == 5);
    CHECK(j["level1_generates_lattice"] == true);
}

TEST_CASE("report runs are byte-deterministic", "[config][slow]") {
    std::string text = R"({
        "series": {"projective_dim": 1},
        "max_level": 60,
        "grid_level": 4,
        "schedule": [2, 4],
        "chi_levels": [4, 8, 12, 16, 20, 24],
        "weights": [{"prime": 2, "pieces": [[1, 0], [-1, 1]]}],
        "checks": ["volume_identity", "fundamental_identity", "chebyshev",
                   "gromov", "vol_chi", "product_formula"]
    })";
    Json canonical = Json::parse(text);
    std::vector<std::string> errors;
    RunConfig cfg = parse_config(canonical, errors);
    REQUIRE(errors.empty());

    fs::path base = scratch_dir();
    fs::path dir_a = base / "run_a";
    fs::path dir_b = base / "run_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    std::ostringstream log_a, log_b;
    RunResult ra = run_checks(cfg, canonical, dir_a, log_a);
    RunResult rb = run_checks(cfg, canonical, dir_b, log_b);

    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    for (const auto& [name, verdict] : ra.summary["verdicts"].items()) {
        INFO(name);
        CHECK(verdict == "PASS");
    }
    CHECK(ra.summary["config_hash"] == canonical_config_hash(canonical));

    auto files_a = dir_bytes(dir_a);
    auto files_b = dir_bytes(dir_b);
    REQUIRE(files_a.size() == files_b.size());
    // summary.json + one json per check + at least one csv table.
    CHECK(files_a.size() >= 8);
    CHECK(files_a.count("summary.json") == 1);
    for (const auto& [name, bytes] : files_a) {
        INFO(name);
        REQUIRE(files_b.count(name) == 1);
        CHECK(bytes == files_b.at(name));
    }
}

TEST_CASE("command line round trip", "[config][cli]") {
    fs::path base = scratch_dir();
    fs::path config = base / "smoke.json";
    fs::path log = base / "cli.log";
    std::ofstream(config) << R"({
        "series": {"projective_dim": 1},
        "max_level": 60,
        "chi_levels": [10, 20, 30, 40, 50],
        "checks": ["volume_identity"]
    })";

    SECTION("validate") {
        REQUIRE(run_cli("validate " + config.string(), log) == 0);
        std::string out = slurp(log);
        CHECK(out.rfind("ok: ", 0) == 0);
        CHECK(out.find("projective_dim") != std::string::npos);
    }

    SECTION("okounkov") {
        REQUIRE(run_cli("okounkov " + config.string(), log) == 0);
        Json j = Json::parse(slurp(log));
        CHECK(j["dimension"] == 1);
        CHECK(j["volume_float"] == 1.0);
    }

    SECTION("run with overrides") {
        fs::path out_dir = base / "cli_out";
        fs::remove_all(out_dir);
        REQUIRE(run_cli("run " + config.string() + " --out " + out_dir.string() +
                            " --max-level 35 --checks volume_identity",
                        log) == 0);
        Json summary = Json::parse(slurp(out_dir / "summary.json"));
        CHECK(summary["schema"] == 1);
        CHECK(summary["verdicts"]["volume_identity"] == "PASS");
        CHECK(fs::exists(out_dir / "volume_identity.json"));
        CHECK(fs::exists(out_dir / "volume_identity_levels.csv"));
    }

    SECTION("invalid config exits with 2") {
        fs::path bad = base / "bad.json";
        std::ofstream(bad) << R"({"series": {"projective_dim": 1}, "bogus": 1})";
        CHECK(run_cli("validate " + bad.string(), log) == 2);
        CHECK(slurp(log).find("unknown key 'bogus'") != std::string::npos);
        CHECK(run_cli("run " + config.string() + " --checks not_a_check", log) == 2);
    }
}
