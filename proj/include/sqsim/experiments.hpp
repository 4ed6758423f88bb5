// experiments.hpp — configuration-driven experiment runner with deterministic file outputs

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqsim/device.hpp"
#include "sqsim/twoqubit.hpp"

namespace sqsim::exp {

inline constexpr const char* kToolVersion = "sqsim 1.0.0";

// physical quantities in the config carry unit suffixes: _GHz, _MHz, _ns, _us, _K, _V
struct ExperimentConfig {
    nlohmann::json device;     // inline device tree (a string path is resolved by load_config)
    std::string experiment;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed{0};
    std::filesystem::path output{"out"};
};

struct Diagnostic {
    std::string path; // field path, e.g. "device.qubits[0].d"
    std::string message;
};

struct RunManifest {
    std::string config_hash; // sha256 of the canonical config
    std::string tool_version{kToolVersion};
    std::uint64_t seed{0};
    double wall_time_s{0.0};
    std::vector<std::string> files;
};

const std::vector<std::string>& experiment_names();

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& file);

// empty iff run() would pass its precondition checks; never computes physics
std::vector<Diagnostic> validate(const ExperimentConfig& c);

// in-memory artifacts of an experiment, file name -> content
using Artifacts = std::map<std::string, std::string>;
Artifacts compute(const ExperimentConfig& c);

// validates, computes, then writes every artifact and run_manifest.json atomically;
// nothing is written when validation or computation fails
RunManifest run(const ExperimentConfig& c);

nlohmann::json manifest_to_json(const RunManifest& m);

// device tree helpers
device::QubitCircuitParams qubit_from_json(const nlohmann::json& j);
gates::TransmonPair pair_from_device(const nlohmann::json& device, double g);

struct DragMetrics {
    double leakage{0.0};
    double phase_error{0.0}; // off-x-axis error rotation angle of X_pi^dag U on the qubit subspace
    double fidelity{0.0};
};
// three-level RWA pi pulse (Gaussian, total length 4 sigma) calibrated to a rotation of pi at lambda = 0
DragMetrics drag_metrics(double omega_q, double alpha, double sigma, double lambda);

} // namespace sqsim::exp
