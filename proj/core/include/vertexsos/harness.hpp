#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vertexsos/tensor.hpp"

namespace vsos {

enum class Command { YbeCheck, Partition, Intertwine, QrCompose, Transfer, PlotData };

std::string command_name(Command c);
Command command_from_name(const std::string& name);

/// Validated config; `canonical` carries every applied default explicitly,
/// with sorted keys, so serializing and reparsing is the identity.
struct RunConfig {
  Command command = Command::YbeCheck;
  std::uint64_t seed = 0;
  nlohmann::json canonical;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

struct MatrixOutput {
  std::string name;
  SquareOperator matrix{1};
};

struct SweepOutput {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  std::string command;
  std::string digest;  // stable hash of the canonical config
  nlohmann::json config;
  nlohmann::json results;
  std::vector<MatrixOutput> matrices;
  std::vector<SweepOutput> sweeps;
  double wall_time_s = 0;
  std::string version = "0.1.0";
  int exit_code = 0;  // 0, or 5 with a partial solution attached
};

/// Deterministic given (config, seed). Non-convergence is reported in-band
/// (exit_code 5, partial solution in results); other errors propagate.
RunReport run_command(const RunConfig& cfg);

/// Writes report.json plus one CSV per matrix/sweep into out_dir.
/// All writes are atomic (temp file + rename).
void emit_outputs(const RunReport& rep, const std::string& out_dir);

/// The full report as JSON text; byte-identical across reruns except for
/// the wall_time_s field.
std::string report_json(const RunReport& rep);

/// Shortest round-trip decimal formatting.
std::string format_double(double v);

/// FNV-1a hash of the canonical config dump, as a hex string.
std::string config_digest(const nlohmann::json& canonical);

void write_matrix_csv(const std::string& path, const SquareOperator& m);
SquareOperator read_matrix_csv(const std::string& path);

/// Maps any vsos::Error to its exit code; unknown exceptions map to 1.
int exit_code_for(const std::exception& e);

}  // namespace vsos
