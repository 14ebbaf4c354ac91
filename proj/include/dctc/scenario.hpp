#pragma once

#include "dctc/classical.hpp"
#include "dctc/dynamics.hpp"
#include "dctc/quantum.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

namespace dctc {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

// How a matrix-valued input is produced at run time.
struct MatrixSource {
    enum class Kind {
        identity,
        swap_factors,
        cnot,
        maximally_mixed,
        diagonal,
        explicit_matrix,
        random // seeded from the scenario seed
    } kind = Kind::maximally_mixed;
    std::vector<double> diag;
    ComplexMatrix matrix;
};

struct QuantumScenario {
    BipartiteDims dims{2, 2};
    MatrixSource unitary;
    MatrixSource rho_a;
    MatrixSource rho_b0;
    std::size_t max_iter = 10000;
    double tol = 1e-10;
    double verify_tol = 1e-9;
    std::size_t dim_cap = kDefaultDimCap;
};

// Rotation angles: decimal radians, a rational multiple "k/l" of 2*pi, or
// the golden angle.
struct AngleSpec {
    enum class Kind { radians, rational_of_turn, golden } kind = Kind::radians;
    double radians = 0.0;
    std::int64_t k = 0, l = 1;

    double resolve() const;
};

// Times in orbit scenarios: symbolic multiples of the orbit period keep the
// case classification exact by construction; decimal values are classified
// numerically.
struct TimeSpec {
    enum class Kind { multiple_of_period, golden_of_period, absolute } kind = Kind::multiple_of_period;
    std::int64_t k = 1, l = 1;
    double value = 0.0;

    double resolve(double period) const;
};

struct MapSpec {
    enum class Kind { identity, circle_rotation, translation, two_body_flow } kind = Kind::identity;
    std::optional<Factor> factor; // lift into this factor of the product space
    AngleSpec angle;
    std::vector<double> offset;
    TwoBodyParams params;
    TimeSpec flow_time;
    double dt = 1e-3;
};

struct OperationSpecConfig {
    enum class Kind { pushforward, mix_with_fixed, compose } kind = Kind::pushforward;
    MapSpec map;
    double mix_weight = 0.5;
    std::vector<Atom> fixed_atoms; // atoms of w0 on the product space
    std::vector<OperationSpecConfig> sequence;
};

struct FunctionSpec {
    enum class Kind { clamp, gaussian, fourier } kind = Kind::clamp;
    Factor factor = Factor::full;
    std::size_t coord = 0;
    double lo = -1.0, hi = 1.0;
    std::vector<double> center;
    double width = 1.0;
    unsigned harmonics = 1;
};

struct ClassicalScenario {
    Space space = Space::product(1, 1);
    std::vector<Atom> w_a_atoms;
    std::vector<Atom> w_b0_atoms;
    OperationSpecConfig operation;
    std::size_t n_max = 1000;
    double tol = 1e-6;
    double merge_radius = 0.0;
    std::size_t record_every = 1;
    std::size_t atom_cap = kDefaultAtomCap;
    std::vector<FunctionSpec> dictionary; // empty: default dictionary
    std::vector<double> tightness_radii;
    std::vector<double> tightness_center;
};

struct OrbitScenario {
    TimeSpec time;
    double theta0 = 0.3;
    std::size_t n = 0; // 0: pick l for rational cases, 10^4 otherwise
    unsigned harmonics = 5;
    double merge_radius = 1e-9;
    double alpha = 1.0;
    double m_b = 1.0;
    double radius = 1.0;
    std::int64_t max_denominator = 1'000'000;
    double classify_tol = 1e-9;
};

struct TightnessScenario {
    TwoBodyParams params;
    PhaseState initial;
    TimeSpec t;
    double dt = 1e-3;
    std::size_t iterations = 100;
    std::vector<double> radii;
    std::vector<double> center_b; // empty: initial B phase point
    double orbit_radius = 0.0;    // annotation used when t is a period multiple
};

struct Scenario {
    std::string name;
    enum class Kind { quantum_fixpoint, classical_fixpoint, orbit_demo, tightness_probe } kind =
        Kind::quantum_fixpoint;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs{"report"};
    std::variant<QuantumScenario, ClassicalScenario, OrbitScenario, TightnessScenario> payload;

    std::string canonical_json; // key-sorted dump of the validated scenario
    std::string digest;         // content hash of canonical_json

    static const char* kind_name(Kind k);
};

// Parse + validate. Throws nlohmann::json::parse_error on malformed JSON
// and ValidationError on schema violations; no partial results.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text);

// FNV-1a over the canonical serialization; stable under key reordering.
std::string content_digest(const std::string& canonical);

} // namespace dctc
