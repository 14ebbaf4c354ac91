#pragma once

#include "dctc/scenario.hpp"

#include <filesystem>
#include <optional>

namespace dctc {

struct RunManifest {
    std::string scenario_name;
    std::string kind;
    std::string digest;
    std::string tool_version;
    std::uint64_t seed = 0;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> output_files;
    bool converged = true;
    std::string status = "ok"; // ok | not_converged | error
    std::string error;
};

struct RunOptions {
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> atom_cap_override;
};

// Executes the scenario pipeline and writes the requested artifacts plus
// manifest.json into out_dir. Reports carry no timestamps, so identical
// scenario + seed give byte-identical report files.
RunManifest run_scenario(const Scenario& scenario, const RunOptions& options);

} // namespace dctc
