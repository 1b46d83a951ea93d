#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace chebvol {

using Json = nlohmann::ordered_json;

/// Convergence table in the uniform report shape: one row per level with the
/// measured value, the model evaluated there, and the residual.
struct CsvTable {
    std::string name;
    std::vector<std::array<double, 4>> rows;  // m, value, model_fit, residual

    void add(double m, double value, double fit) { rows.push_back({m, value, fit, value - fit}); }
};

struct CheckReport {
    std::string name;
    std::string verdict;  // PASS | FAIL | INCONCLUSIVE
    Json inputs = Json::object();
    Json details = Json::object();
    std::vector<CsvTable> tables;

    bool failed() const { return verdict == "FAIL"; }
};

/// FNV-1a over the canonical (ordered, whitespace-free) config dump; embedded
/// in every report so outputs can be traced to their exact configuration.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<size_t>(i)] = digits[v & 0xf];
    return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

/// Writes <name>.json plus one CSV per table; returns the JSON document.
inline Json write_report(const std::filesystem::path& dir, const CheckReport& rep,
                         const std::string& config_hash) {
    std::filesystem::create_directories(dir);
    Json j;
    j["schema"] = 1;
    j["check"] = rep.name;
    j["config_hash"] = config_hash;
    j["verdict"] = rep.verdict;
    j["inputs"] = rep.inputs;
    j["details"] = rep.details;
    Json tables = Json::array();
    for (const auto& t : rep.tables) {
        tables.push_back(rep.name + "_" + t.name + ".csv");
        std::ostringstream csv;
        csv << "m,value,model_fit,residual\n";
        csv.precision(17);
        for (const auto& r : t.rows)
            csv << r[0] << "," << r[1] << "," << r[2] << "," << r[3] << "\n";
        write_text(dir / (rep.name + "_" + t.name + ".csv"), csv.str());
    }
    j["tables"] = tables;
    write_text(dir / (rep.name + ".json"), j.dump(2) + "\n");
    return j;
}

}  // namespace chebvol
