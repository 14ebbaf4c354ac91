#include "dctc/errors.hpp"
#include "dctc/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

namespace {

// Exit codes, also documented in the README:
//   0 success (and converged, for solver scenarios)
//   2 scenario parse error
//   3 scenario validation error
//   4 solver did not converge
//   5 resource cap exceeded
//   6 runtime/I-O failure
enum ExitCode { kOk = 0, kParse = 2, kValidation = 3, kNotConverged = 4, kResource = 5, kRuntime = 6 };

std::filesystem::path output_root(const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (const char* env = std::getenv("DCTC_LAB_OUT")) return env;
    return "out";
}

int run_one(const dctc::Scenario& scenario, const dctc::RunOptions& options) {
    const dctc::RunManifest manifest = dctc::run_scenario(scenario, options);
    std::cout << scenario.name << ": " << manifest.status << " (outputs in "
              << options.out_dir.string() << ")\n";
    if (!manifest.converged && (scenario.kind == dctc::Scenario::Kind::quantum_fixpoint ||
                                scenario.kind == dctc::Scenario::Kind::classical_fixpoint))
        return kNotConverged;
    return kOk;
}

int dispatch(const std::function<int()>& body) {
    try {
        return body();
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const dctc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const dctc::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

// Built-in demonstration scenarios; they run through the same parser and
// pipeline as user files.
const char* demo_text(const std::string& which) {
    if (which == "case-i")
        return R"({
            "schema_version": 1, "name": "demo-case-i", "kind": "orbit_demo",
            "outputs": ["report", "atoms", "curve"],
            "orbit_demo": {"time": "1 T", "theta0": 0.3, "n": 8,
                           "params": {"alpha": 1.0, "m_b": 1.0, "radius": 1.0}}
        })";
    if (which == "case-ii")
        return R"({
            "schema_version": 1, "name": "demo-case-ii", "kind": "orbit_demo",
            "outputs": ["report", "atoms", "curve"],
            "orbit_demo": {"time": "1/4 T", "theta0": 0.3, "merge_radius": 1e-9,
                           "params": {"alpha": 1.0, "m_b": 1.0, "radius": 1.0}}
        })";
    if (which == "case-iii")
        return R"({
            "schema_version": 1, "name": "demo-case-iii", "kind": "orbit_demo",
            "outputs": ["report", "atoms", "curve"],
            "orbit_demo": {"time": "golden T", "theta0": 0.3, "n": 10000, "merge_radius": 1e-9,
                           "params": {"alpha": 1.0, "m_b": 1.0, "radius": 1.0}}
        })";
    if (which == "kepler-free")
        return R"({
            "schema_version": 1, "name": "demo-kepler-free", "kind": "tightness_probe",
            "outputs": ["report", "curve", "trajectory"],
            "tightness_probe": {
                "params": {"m_a": 10.0, "m_b": 1.0, "alpha": 10.0, "lambda": 0.0},
                "initial": {"q_a": [0, 0, 0], "p_a": [-3.0151134457776365, 0, 5.0],
                            "q_b": [0, 1, 0], "p_b": [3.0151134457776361, 0, 0.5]},
                "t": "1 T", "dt": 0.001894451650198966, "iterations": 120,
                "orbit_radius": 1.0,
                "radii": [2.0, 5.0, 10.0, 20.0]
            }
        })";
    if (which == "kepler-bound")
        return R"({
            "schema_version": 1, "name": "demo-kepler-bound", "kind": "tightness_probe",
            "outputs": ["report", "curve", "trajectory"],
            "tightness_probe": {
                "params": {"m_a": 100.0, "m_b": 1.0, "alpha": 100.0,
                            "beta_a": 100000000.0, "beta_b": 1000000.0, "lambda": 1.0},
                "initial": {"q_a": [10000.0, 0, 0], "p_a": [-9.9503719020998922, 1000.0, 0],
                            "q_b": [10000.0, 1.0, 0], "p_b": [9.9503719020998904, 10.0, 0]},
                "t": 0.62520030536246629, "dt": 0.0024421886928221339, "iterations": 1000,
                "radii": [15000.0, 20000.0, 40000.0]
            }
        })";
    return nullptr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "dctc-lab: fixed points of the Deutsch interaction map on bipartite quantum states and "
        "Cesaro-averaged invariant measures for classical bipartite systems"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string batch_dir;
    std::string demo_name;
    std::string out_flag;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t max_atoms = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_flag, "output root directory (default: $DCTC_LAB_OUT or ./out)");
        cmd->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--max-atoms", max_atoms, "override the atom cap");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    add_common(run_cmd);

    CLI::App* batch_cmd = app.add_subcommand("batch", "run every *.json scenario in a directory");
    batch_cmd->add_option("dir", batch_dir, "directory of scenario files")->required();
    add_common(batch_cmd);

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario file");
    validate_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* demo_cmd = app.add_subcommand(
        "demo", "run a built-in demo: case-i, case-ii, case-iii or kepler-tightness");
    demo_cmd->add_option("which", demo_name, "demo name")->required();
    add_common(demo_cmd);

    CLI11_PARSE(app, argc, argv);

    const auto options_for = [&](const std::string& name) {
        dctc::RunOptions opt;
        opt.out_dir = output_root(out_flag) / name;
        if (seed_set) opt.seed_override = seed;
        if (max_atoms > 0) opt.atom_cap_override = max_atoms;
        return opt;
    };

    if (run_cmd->parsed()) {
        return dispatch([&] {
            const dctc::Scenario sc = dctc::parse_scenario(scenario_path);
            return run_one(sc, options_for(sc.name));
        });
    }

    if (batch_cmd->parsed()) {
        return dispatch([&] {
            std::vector<std::filesystem::path> files;
            for (const auto& entry : std::filesystem::directory_iterator(batch_dir))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            if (files.empty()) {
                std::cerr << "no scenario files in " << batch_dir << "\n";
                return static_cast<int>(kRuntime);
            }
            int worst = kOk;
            for (const auto& f : files) {
                const int rc = dispatch([&] {
                    const dctc::Scenario sc = dctc::parse_scenario(f);
                    return run_one(sc, options_for(sc.name));
                });
                worst = std::max(worst, rc);
            }
            return worst;
        });
    }

    if (validate_cmd->parsed()) {
        return dispatch([&] {
            const dctc::Scenario sc = dctc::parse_scenario(scenario_path);
            std::cout << "ok: " << sc.name << " (" << dctc::Scenario::kind_name(sc.kind)
                      << "), digest " << sc.digest << "\n";
            return static_cast<int>(kOk);
        });
    }

    // demo
    return dispatch([&] {
        if (demo_name == "kepler-tightness") {
            int worst = kOk;
            for (const char* which : {"kepler-free", "kepler-bound"}) {
                const dctc::Scenario sc = dctc::parse_scenario_text(demo_text(which));
                worst = std::max(worst, run_one(sc, options_for(sc.name)));
            }
            return worst;
        }
        const char* text = demo_text(demo_name);
        if (!text) {
            std::cerr << "unknown demo '" << demo_name
                      << "'; expected case-i, case-ii, case-iii or kepler-tightness\n";
            return static_cast<int>(kRuntime);
        }
        const dctc::Scenario sc = dctc::parse_scenario_text(text);
        return run_one(sc, options_for(sc.name));
    });
}
