#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dumbbell/asymptotics.hpp"
#include "dumbbell/estimator.hpp"
#include "dumbbell/sde.hpp"

namespace dumbbell {

inline constexpr const char* kVersion = "0.1.0";

// Fully resolved run configuration: the single flat JSON document shared by
// all CLI subcommands.
struct RunConfig {
    DumbbellParams params;
    Forcing forcing;
    SimConfig sim;
    QuadratureConfig quad;
    std::vector<double> lambda_grid;       // sweep
    std::vector<DumbbellParams> species;   // fanout
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parses the flat config document.  Unknown keys are rejected by name; the
// input may also be a run manifest, in which case its "config" object is used.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);
nlohmann::json prediction_to_json(const DriftPrediction& p);
nlohmann::json estimate_to_json(const DriftEstimate& e);

// Deterministic shortest-round-trip double formatting for CSV output.
std::string format_double(double v);

std::string sweep_to_csv(const SweepResult& r);
std::string fanout_to_csv(const FanoutTable& t);
std::string replicas_to_csv(std::span<const Trajectory> trajectories);
std::string samples_to_csv(const Trajectory& t);

struct RunManifest {
    RunConfig config;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> timing_seconds;
    std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& m);

void write_file(const std::string& path, const std::string& contents);

}  // namespace dumbbell
