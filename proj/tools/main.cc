// Copyright 2026 The Streamflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// streamflow command-line tool. Exit codes: 0 success, 1 usage or config
// error, 2 data error, 3 internal error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "config.h"
#include "streamflow/errors.h"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  namespace cli = streamflow::cli;

  CLI::App app{"Continual reinforcement-learning traffic flow forecasting on streaming graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> data_dir;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides run.seed)");
  app.add_option("--threads", threads, "Worker threads (overrides run.threads)")
      ->check(CLI::PositiveNumber);
  app.add_option("--data-dir", data_dir, "Period data directory (overrides run.data_dir)");
  app.add_option("--out-dir", out_dir, "Output directory (overrides run.out_dir)");

  auto* generate = app.add_subcommand("generate", "Write a synthetic period stream to --out-dir");
  auto* train = app.add_subcommand("train", "Train over every period in --data-dir");
  bool resume = false;
  train->add_flag("--resume", resume, "Continue after the latest checkpoint in --out-dir");
  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on every period");
  std::optional<std::string> checkpoint;
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file (default: latest)")
      ->check(CLI::ExistingFile);
  auto* detect = app.add_subcommand("detect", "Rank drift between consecutive periods");
  auto* figures = app.add_subcommand("export-figures", "Tabulate reports as CSV");
  std::optional<std::string> report_dir;
  figures->add_option("--report-dir", report_dir, "Directory with reports (default: --out-dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cli::RunConfig config = config_path ? cli::LoadRunConfig(*config_path) : cli::RunConfig{};
    if (seed) config.agent.seed = *seed;
    if (threads) config.agent.threads = *threads;
    if (data_dir) config.data_dir = *data_dir;
    if (out_dir) config.out_dir = *out_dir;
    config.Validate();

    if (generate->parsed()) {
      cli::CmdGenerate(config, std::cout);
    } else if (train->parsed()) {
      cli::CmdTrain(config, resume, std::cout);
    } else if (evaluate->parsed()) {
      std::optional<std::filesystem::path> path;
      if (checkpoint) path = *checkpoint;
      cli::CmdEvaluate(config, path, std::cout);
    } else if (detect->parsed()) {
      cli::CmdDetect(config, std::cout);
    } else if (figures->parsed()) {
      cli::CmdExportFigures(report_dir ? std::filesystem::path(*report_dir) : config.out_dir,
                            config.out_dir, std::cout);
    }
    return kOk;
  } catch (const streamflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const streamflow::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
