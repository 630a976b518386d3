// Copyright 2026 The polybrud Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Links only against the C interface.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polybrud/polybrud.h"

namespace {

struct ConfigDeleter {
  void operator()(pb_config* c) const { pb_config_destroy(c); }
};
struct ManifestDeleter {
  void operator()(pb_manifest* m) const { pb_manifest_destroy(m); }
};
using ConfigPtr = std::unique_ptr<pb_config, ConfigDeleter>;
using ManifestPtr = std::unique_ptr<pb_manifest, ManifestDeleter>;

int Report(pb_status status) {
  std::cerr << "error: " << pb_last_error() << "\n";
  return static_cast<int>(status);
}

std::string TakeString(char* s) {
  std::string out(s == nullptr ? "" : s);
  pb_string_free(s);
  return out;
}

// Options shared by every subcommand: a config file plus one flag per key.
struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::Option*> options;

  void Register(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file");
    for (size_t i = 0; i < pb_config_key_count(); ++i) {
      const char* key = nullptr;
      const char* flag = nullptr;
      const char* help = nullptr;
      const char* def = nullptr;
      if (pb_config_key_info(i, &key, &flag, &help, &def) != PB_OK) continue;
      std::string description = help;
      if (def != nullptr && *def != '\0') description += " [default: " + std::string(def) + "]";
      options[key] = app->add_option(flag, overrides[key], description);
    }
  }

  // Loads the file (if any) and applies flags given on the command line.
  pb_status Build(ConfigPtr* out) const {
    pb_config* raw = nullptr;
    pb_status status = config_path.empty()
                           ? pb_config_create(&raw)
                           : pb_config_load(config_path.c_str(), &raw);
    if (status != PB_OK) return status;
    ConfigPtr config(raw);
    for (const auto& [key, option] : options) {
      if (option->count() == 0) continue;
      status = pb_config_set(config.get(), key.c_str(), overrides.at(key).c_str());
      if (status != PB_OK) return status;
    }
    *out = std::move(config);
    return PB_OK;
  }
};

int RunCommand(const ConfigOptions& opts, bool dry_run, int jobs) {
  ConfigPtr config;
  if (pb_status s = opts.Build(&config); s != PB_OK) return Report(s);
  pb_manifest* raw = nullptr;
  if (pb_status s = pb_experiment_run(config.get(), dry_run, jobs, &raw); s != PB_OK) {
    return Report(s);
  }
  ManifestPtr manifest(raw);
  const std::string dir = pb_manifest_output_dir(manifest.get());
  if (dry_run) {
    std::cout << "dry run; would write to " << dir << ":\n";
  } else {
    std::cout << "wrote " << pb_manifest_file_count(manifest.get())
              << " files to " << dir << "\n";
  }
  for (size_t i = 0; i < pb_manifest_file_count(manifest.get()); ++i) {
    std::cout << "  " << pb_manifest_file(manifest.get(), i) << "\n";
  }
  return 0;
}

int AnalyzeCommand(const ConfigOptions& opts, const std::string& grid_path) {
  ConfigPtr config;
  if (pb_status s = opts.Build(&config); s != PB_OK) return Report(s);
  char* report = nullptr;
  const pb_status s = pb_analyze(config.get(),
                                 grid_path.empty() ? nullptr : grid_path.c_str(),
                                 &report);
  if (s != PB_OK) return Report(s);
  std::cout << TakeString(report);
  return 0;
}

int GenDatasetCommand(const ConfigOptions& opts, const std::string& out_path) {
  ConfigPtr config;
  if (pb_status s = opts.Build(&config); s != PB_OK) return Report(s);
  if (pb_status s = pb_generate_dataset_csv(config.get(), out_path.c_str()); s != PB_OK) {
    return Report(s);
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int ShowConfigCommand(const ConfigOptions& opts) {
  ConfigPtr config;
  if (pb_status s = opts.Build(&config); s != PB_OK) return Report(s);
  if (pb_status s = pb_config_validate(config.get()); s != PB_OK) return Report(s);
  char* text = nullptr;
  if (pb_status s = pb_config_to_json(config.get(), &text); s != PB_OK) return Report(s);
  std::cout << TakeString(text) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-game BRUD experiments"};
  app.set_version_flag("--version", std::string(pb_version()));
  app.require_subcommand(1);

  ConfigOptions run_opts;
  bool dry_run = false;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run_opts.Register(run);
  run->add_flag("--dry-run", dry_run, "print planned outputs without writing");
  run->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  ConfigOptions analyze_opts;
  std::string grid_path;
  CLI::App* analyze = app.add_subcommand("analyze", "closed-form analysis report");
  analyze_opts.Register(analyze);
  analyze->add_option("--grid", grid_path, "also write the field grid CSV here");

  ConfigOptions gen_opts;
  std::string dataset_out;
  CLI::App* gen = app.add_subcommand("gen-dataset", "write the configured dataset");
  gen_opts.Register(gen);
  gen->add_option("-o,--out", dataset_out, "output CSV")->required();

  ConfigOptions show_opts;
  CLI::App* show = app.add_subcommand("show-config", "print the merged config");
  show_opts.Register(show);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return RunCommand(run_opts, dry_run, jobs);
  if (analyze->parsed()) return AnalyzeCommand(analyze_opts, grid_path);
  if (gen->parsed()) return GenDatasetCommand(gen_opts, dataset_out);
  if (show->parsed()) return ShowConfigCommand(show_opts);
  return 1;
}
