#pragma once

// JSON run configurations, command dispatch, and the CSV/JSON artifact
// writers behind the command-line front end.  All floating-point output uses
// shortest round-trip formatting; row order is deterministic and files are
// written atomically (write-then-rename).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "horoflow/stability.hpp"

namespace horoflow {

enum class Command { catenoid, grim_reaper, flow, stability, verify };

const char* command_name(Command c);

struct GridConfig {
    int M = 800;
    double theta_max = 1.5551537813271529; // 0.495 * pi
};

struct RunConfig {
    Command command = Command::verify;
    Dimension n{2};
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
    bool quiet = false;

    // translator commands
    IntegratorControls controls;
    double r = 1.0;
    std::optional<std::vector<double>> radii;
    double h0 = 1.0;
    double lambda = 1.0;

    // flow / stability commands
    GridConfig grid;
    double t_end = 1.0;
    double cfl = 0.2;
    double record_every = 0.05;
    BoundaryMode boundary = BoundaryMode::pin_to_soliton;
    std::optional<Perturbation> perturbation;
    std::vector<double> eps_list = { 0.05, 0.02, 0.01 };

    // verify command
    int verify_tuples = 1000;
};

/// Parses and validates a JSON config document; unknown keys are rejected and
/// every violation names the offending key and constraint.
RunConfig parse_config(const std::string& json_text);

/// Executes the configured command and writes its artifacts into output_dir:
/// profile.csv (translator commands), family.csv (radius sweeps),
/// trajectory.csv (flow), report.json (stability), verify.json (verify).
void run(const RunConfig& config);

std::string report_to_json(const StabilityReport& report);
StabilityReport report_from_json(const std::string& json_text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace horoflow
