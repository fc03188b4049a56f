#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpuq/errors.hpp"

namespace vpuq {

inline constexpr const char* kVersion = "0.1.0";

/* Run manifest: config echo, artifact index, and the provenance of every
 * number a report emits (operation name + the artifacts/parameters it was
 * computed from). Reports stay traceable without rerunning.
 */
class RunManifest {
  public:
    RunManifest(std::filesystem::path dir, const nlohmann::json& config_echo)
        : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
        doc_["version"] = kVersion;
        doc_["config"] = config_echo;
        doc_["artifacts"] = nlohmann::json::array();
        doc_["provenance"] = nlohmann::json::array();
    }

    const std::filesystem::path& dir() const { return dir_; }

    /// Register a file that lives under the run directory.
    void add_artifact(const std::string& name, const std::string& relative_path) {
        doc_["artifacts"].push_back({{"name", name}, {"path", relative_path}});
    }

    void add_provenance(const std::string& value_name, const std::string& operation,
                        const nlohmann::json& inputs) {
        doc_["provenance"].push_back(
            {{"value", value_name}, {"operation", operation}, {"inputs", inputs}});
    }

    void save() {
        using namespace std::chrono;
        doc_["wall_clock_ms"] =
            duration_cast<milliseconds>(steady_clock::now() - start_).count();
        std::ofstream out(dir_ / "manifest.json");
        if (!out) throw validation_error("cannot write manifest in " + dir_.string());
        out << doc_.dump(2) << "\n";
    }

  private:
    std::filesystem::path dir_;
    std::chrono::steady_clock::time_point start_;
    nlohmann::json doc_;
};

/// Completed runs are immutable: a fresh study refuses an occupied directory.
inline void prepare_run_dir(const std::filesystem::path& dir, bool force) {
    namespace fs = std::filesystem;
    if (fs::exists(dir / "manifest.json") && !force)
        throw validation_error("output dir already holds a run (use --force): " + dir.string());
    fs::create_directories(dir);
}

/// Every artifact referenced by a manifest must exist on disk.
inline void validate_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw validation_error("no manifest in " + dir.string());
    nlohmann::json doc;
    in >> doc;
    for (const auto& a : doc.at("artifacts")) {
        const auto p = dir / a.at("path").get<std::string>();
        if (!std::filesystem::exists(p))
            throw validation_error("manifest references missing artifact: " + p.string());
    }
}

}  // namespace vpuq
