// agglab <command> --config <path> [--out <path>] [--threads N]
//
// Exit status: 0 pass, 1 check failure, 2 configuration error, 3 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "agglab/config.hpp"
#include "agglab/run.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ballistic aggregation laboratory"};
  std::string command, config_path, out_path;
  unsigned threads = 1;
  app.add_option("command", command, "simulate | ode | exact | lift | verify")
      ->required()
      ->check(CLI::IsMember({"simulate", "ode", "exact", "lift", "verify"}));
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_path, "CSV output; metadata goes next to it as .json");
  app.add_option("--threads", threads, "worker threads for ensembles")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  agglab::RunConfig cfg;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "agglab: cannot read config '" << config_path << "'\n";
      return kConfigError;
    }
    std::ostringstream text;
    text << in.rdbuf();
    cfg = agglab::parse_config(text.str());
  } catch (const agglab::ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
    return kConfigError;
  }
  if (agglab::to_string(cfg.command()) != command) {
    std::cerr << "config error: config is for '" << agglab::to_string(cfg.command())
              << "' but the command line asks for '" << command << "'\n";
    return kConfigError;
  }

  agglab::ResultTable table;
  try {
    table = agglab::run(cfg, threads);
  } catch (const std::exception& e) {
    std::cerr << "agglab " << command << ": " << e.what() << "\n";
    return kRuntimeError;
  }
  for (const auto& line : table.log) std::cerr << line << "\n";

  const std::string csv = agglab::to_csv(table);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::filesystem::path csv_path(out_path), json_path(out_path);
    json_path.replace_extension(".json");
    if (json_path == csv_path) json_path += ".meta.json";
    if (!write_file(csv_path, csv) || !write_file(json_path, agglab::to_json(table))) {
      std::cerr << "agglab: cannot write " << csv_path << "\n";
      return kRuntimeError;
    }
  }
  return table.status;
}
