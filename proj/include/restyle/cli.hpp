/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "restyle/pipeline.hpp"

namespace restyle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPipelineError = 3;

/// Entry point shared by the binary and the tests.
/// `restyle analyze|index|transfer|review --config <path> [--set k=v]... [--seed n]`
inline int run(std::vector<std::string> args) {
  CLI::App app{"restyle: extract an edited video's style and re-apply it to "
               "raw footage"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;

  const char* names[] = {"analyze", "index", "transfer", "review"};
  const char* descs[] = {
      "detect shots and extract per-shot styles from the source video",
      "index the raw footage repository",
      "select footage per shot and render the output video",
      "emit the side-by-side render, timeline, and mosaic gallery"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "project config JSON")
        ->required();
    sub->add_option("--set", overrides,
                    "override a config parameter as key=value");
    sub->add_option("--seed", seed, "override the config seed");
  }

  // CLI11 wants argv in reverse order without the program name.
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    ProjectConfig cfg = ProjectConfig::load(config_path);
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    if (app.got_subcommand("analyze"))
      cmd_analyze(cfg);
    else if (app.got_subcommand("index"))
      cmd_index(cfg);
    else if (app.got_subcommand("transfer"))
      cmd_transfer(cfg);
    else
      cmd_review(cfg);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipelineError;
  }
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace restyle::cli
