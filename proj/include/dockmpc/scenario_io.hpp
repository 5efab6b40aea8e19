// Scenario file parsing and result serialization: INI-style scenario
// configs, trajectory CSV, and JSON metrics/summary output.
#pragma once

#include <string>

#include "dockmpc/simulation.hpp"

namespace dockmpc {

// Parse an INI-style scenario file.  Sections: [orbit], [inertia], [target],
// [mpc.position], [mpc.attitude], [limits], [initial], [run].  Angle-valued
// keys carry a _deg suffix and are converted to radians on load.  Unknown
// sections or keys, missing required keys, and malformed numbers raise
// ParseError with the offending line; range problems raise ValidationError.
Scenario load_scenario(const std::string& path);

// Serialize/deserialize the trajectory as CSV in the fixed column order of
// TrajectoryLog::csv_columns().  write_trajectory_csv overwrites; the reader
// raises ParseError on any schema mismatch.
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);
TrajectoryLog read_trajectory_csv(const std::string& path);

// Trajectory as JSON: scenario name, Ts, and one object per step keyed by
// the CSV column names.  Values round-trip at full double precision
// (read(write(log)) reproduces the log bit-for-bit).
void write_trajectory_json(const TrajectoryLog& log, const std::string& path);
TrajectoryLog read_trajectory_json(const std::string& path);

// Metrics as a flat JSON object (stable key names, one per Metrics field).
std::string metrics_to_json(const Metrics& m);
void write_metrics_json(const Metrics& m, const std::string& path);

// Comparison report as JSON (per-channel overshoot / convergence / mean
// absolute error for both runs plus deltas).
std::string comparison_to_json(const ModeComparison& c);

// Line-by-line comparison of two trajectory CSV files.  Returns true when
// byte-identical; otherwise false, with a human-readable description of the
// first difference in *diff when provided.
bool compare_trajectory_files(const std::string& path_a, const std::string& path_b,
                              std::string* diff = nullptr);

}  // namespace dockmpc
