#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpuq/errors.hpp"
#include "vpuq/grid.hpp"
#include "vpuq/norms.hpp"
#include "vpuq/uq.hpp"

namespace vpuq {

using json = nlohmann::json;

/* Study configuration. JSON file, nested keys, decimal reals parsed by
 * strtod (bit-exact round trip with the 17-digit writers). Command-line
 * overrides use dotted paths: --set solver.dt=0.01, --set eps_list=[0.5,0.25].
 */
enum class StudyKind { LandauBenchmark, WassersteinTrend, RegularityRate, ScalingVerify, ASetReport };

inline StudyKind study_kind_from_string(const std::string& s) {
    if (s == "landau-benchmark") return StudyKind::LandauBenchmark;
    if (s == "wasserstein-trend") return StudyKind::WassersteinTrend;
    if (s == "regularity-rate") return StudyKind::RegularityRate;
    if (s == "scaling-verify") return StudyKind::ScalingVerify;
    if (s == "aset-report") return StudyKind::ASetReport;
    throw ConfigParse("unknown study kind: " + s);
}

inline std::string to_string(StudyKind k) {
    switch (k) {
        case StudyKind::LandauBenchmark: return "landau-benchmark";
        case StudyKind::WassersteinTrend: return "wasserstein-trend";
        case StudyKind::RegularityRate: return "regularity-rate";
        case StudyKind::ScalingVerify: return "scaling-verify";
        case StudyKind::ASetReport: return "aset-report";
    }
    return "?";
}

struct StudyConfig {
    StudyKind kind = StudyKind::LandauBenchmark;
    std::filesystem::path output = "out";
    bool force = false;
    std::uint64_t seed = 0;

    json raw;  // full parsed config (echoed into the manifest)

    // knobs shared by the study implementations; each study reads what it needs
    PhaseGrid grid{64, 256, 4.0 * M_PI, 6.0};
    double dt = 0.05;
    double t_end = 30.0;
    std::vector<double> eps_list{0.2, 0.1, 0.05};

    RandomInput z_input;
    int z_nodes = 3;
    NodeRule z_rule = NodeRule::GaussLegendre;

    NormSpec norm;   // a, t0, k, m (epsilon filled per run)
    double slack_log = std::log(10.0);

    json section(const std::string& name) const {
        return raw.contains(name) ? raw.at(name) : json::object();
    }
    double get(const json& sec, const std::string& key, double def) const {
        return sec.contains(key) ? sec.at(key).get<double>() : def;
    }
    int geti(const json& sec, const std::string& key, int def) const {
        return sec.contains(key) ? sec.at(key).get<int>() : def;
    }
    std::string gets(const json& sec, const std::string& key, const std::string& def) const {
        return sec.contains(key) ? sec.at(key).get<std::string>() : def;
    }
};

namespace cfg_detail {

inline void apply_override(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigParse("--set expects key=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare strings allowed
    }
    json* node = &root;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigParse("bad --set path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            break;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

}  // namespace cfg_detail

inline StudyConfig parse_config(const json& raw) {
    StudyConfig c;
    c.raw = raw;
    try {
        if (raw.contains("study")) c.kind = study_kind_from_string(raw.at("study").get<std::string>());
        if (raw.contains("output")) c.output = raw.at("output").get<std::string>();
        if (raw.contains("force")) c.force = raw.at("force").get<bool>();
        if (raw.contains("seed")) c.seed = raw.at("seed").get<std::uint64_t>();
        if (raw.contains("grid")) {
            const auto& g = raw.at("grid");
            c.grid.nx = c.geti(g, "nx", c.grid.nx);
            c.grid.nv = c.geti(g, "nv", c.grid.nv);
            c.grid.length_L = c.get(g, "L", c.grid.length_L);
            c.grid.vmax = c.get(g, "vmax", c.grid.vmax);
        }
        if (raw.contains("solver")) {
            const auto& s = raw.at("solver");
            c.dt = c.get(s, "dt", c.dt);
            c.t_end = c.get(s, "t_end", c.t_end);
        }
        if (raw.contains("eps_list")) c.eps_list = raw.at("eps_list").get<std::vector<double>>();
        if (raw.contains("z")) {
            const auto& z = raw.at("z");
            const std::string kind = c.gets(z, "kind", "perturbation-amplitude");
            c.z_input.kind = (kind == "drift") ? RandomInput::Kind::DriftShift
                                               : RandomInput::Kind::PerturbationAmplitude;
            c.z_input.z_lo = c.get(z, "lo", -1.0);
            c.z_input.z_hi = c.get(z, "hi", 1.0);
            c.z_nodes = c.geti(z, "n_nodes", 3);
            c.z_rule = (c.gets(z, "rule", "gauss-legendre") == "chebyshev-gauss-lobatto")
                           ? NodeRule::ChebyshevGaussLobatto
                           : NodeRule::GaussLegendre;
        }
        if (raw.contains("norm")) {
            const auto& n = raw.at("norm");
            c.norm.a = c.get(n, "a", 1.0);
            c.norm.t0 = c.get(n, "t0", 2.0);
            c.norm.k = c.geti(n, "k", 1);
            c.norm.m = c.geti(n, "m", 1);
        }
        if (raw.contains("slack_log")) c.slack_log = raw.at("slack_log").get<double>();
    } catch (const json::exception& e) {
        throw ConfigParse(e.what());
    }
    // eps_list strictly decreasing, all in (0,1]
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
        if (!(c.eps_list[i] > 0 && c.eps_list[i] <= 1))
            throw ConfigParse("eps_list entries must be in (0,1]");
        if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
            throw ConfigParse("eps_list must be strictly decreasing");
    }
    return c;
}

inline StudyConfig load_config(const std::filesystem::path& file,
                               const std::vector<std::string>& overrides,
                               const std::string& output_flag = "", bool force_flag = false) {
    json raw = json::object();
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw validation_error("config file not found: " + file.string());
        try {
            raw = json::parse(in);
        } catch (const json::parse_error& e) {
            std::ostringstream os;
            os << file.string() << ": " << e.what() << " (byte " << e.byte << ")";
            throw ConfigParse(os.str());
        }
    }
    for (const auto& o : overrides) cfg_detail::apply_override(raw, o);
    if (!output_flag.empty()) raw["output"] = output_flag;
    if (force_flag) raw["force"] = true;
    return parse_config(raw);
}

}  // namespace vpuq
