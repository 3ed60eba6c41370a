#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vertexsos/harness.hpp"

namespace {

enum class LogLevel { Error, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("VERTEXSOS_LOG");
  if (!env) return LogLevel::Error;
  std::string v(env);
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Error;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vertex / SOS lattice-model toolkit"};
  std::string command, config_path, out_dir = "out";
  long long seed = -1;
  app.add_option("command", command,
                 "YBE_CHECK | PARTITION | INTERTWINE | QR_COMPOSE | TRANSFER | PLOT_DATA")
      ->required();
  app.add_option("--config", config_path, "JSON config path")->required();
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--seed", seed, "override the config seed");
  CLI11_PARSE(app, argc, argv);

  LogLevel lvl = log_level();
  try {
    auto cfg = vsos::parse_config_file(config_path);
    if (command != vsos::command_name(cfg.command))
      throw vsos::SchemaError("CLI command '" + command + "' does not match config command '" +
                              vsos::command_name(cfg.command) + "'");
    if (seed >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed);
      cfg.canonical["seed"] = cfg.seed;
    }
    auto rep = vsos::run_command(cfg);
    vsos::emit_outputs(rep, out_dir);
    if (lvl >= LogLevel::Info)
      std::cerr << "[info] " << rep.command << " digest=" << rep.digest
                << " wall_time_s=" << rep.wall_time_s << " exit=" << rep.exit_code << "\n";
    if (lvl >= LogLevel::Debug) std::cerr << vsos::report_json(rep);
    return rep.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vsos::exit_code_for(e);
  }
}
