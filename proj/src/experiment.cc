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

#include "polybrud/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "polybrud/analysis.h"
#include "polybrud/error.h"
#include "text.h"

namespace polybrud {
namespace {

using internal::FormatDouble;
using json = nlohmann::json;

// One unit of work writing one or more files under the output directory.
struct Task {
  std::vector<std::string> paths;
  std::string label;
  std::function<void(const std::vector<std::filesystem::path>&)> run;
};

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return out;
}

void CloseOut(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) Fail(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string RunTag(std::uint64_t seed, std::size_t init) {
  return "seed" + std::to_string(seed) + "_init" + std::to_string(init);
}

JointPolicy PolicyAt(const std::pair<double, double>& p) {
  return JointPolicy{p.first, p.second, 0};
}

void AddOfflineRuns(std::vector<Task>& tasks, const ExperimentConfig& cfg,
                    const Polynomial2& poly,
                    std::shared_ptr<const std::vector<JointActionSample>> data,
                    const std::string& prefix,
                    const std::optional<PjapConfig>& pjap) {
  const std::string mode(GradientModeName(cfg.learn.gradient_mode));
  for (std::uint64_t seed : cfg.seeds) {
    for (std::size_t k = 0; k < cfg.initial_policies.size(); ++k) {
      const JointPolicy init = PolicyAt(cfg.initial_policies[k]);
      Task t;
      t.paths = {prefix + "_" + RunTag(seed, k) + "_" + mode + ".csv"};
      t.label = prefix + " " + RunTag(seed, k) + " " + mode;
      t.run = [&cfg, poly, data, init, seed, pjap](const auto& paths) {
        const RunRecord record =
            TrainOffline(poly, *data, init, cfg.learn, pjap, seed);
        std::ofstream out = OpenOut(paths[0]);
        WriteRunRecordCsv(out, record);
        CloseOut(out, paths[0]);
      };
      tasks.push_back(std::move(t));
    }
  }
}

Task DatasetTask(const std::string& path,
                 std::shared_ptr<const std::vector<JointActionSample>> data) {
  Task t;
  t.paths = {path};
  t.label = "dataset";
  t.run = [data](const auto& paths) { WriteDatasetCsv(paths[0], *data); };
  return t;
}

std::vector<Task> PlanTasks(const ExperimentConfig& cfg) {
  const Polynomial2 poly = BuildGame(cfg.game);
  std::vector<Task> tasks;
  auto load = [&cfg]() {
    return std::make_shared<const std::vector<JointActionSample>>(LoadDataset(cfg));
  };

  switch (cfg.experiment) {
    case ExperimentKind::kOnlineBufferSweep:
      for (const auto& cap : cfg.capacities) {
        const std::string cap_tag =
            cap ? "cap" + std::to_string(*cap) : std::string("capunbounded");
        for (std::uint64_t seed : cfg.seeds) {
          for (std::size_t k = 0; k < cfg.initial_policies.size(); ++k) {
            const JointPolicy init = PolicyAt(cfg.initial_policies[k]);
            Task t;
            const std::string tag = cap_tag + "_" + RunTag(seed, k);
            t.paths = {"online_" + tag + ".csv", "buffer_" + tag + ".csv"};
            t.label = "online " + tag;
            t.run = [&cfg, poly, init, cap, seed](const auto& paths) {
              const OnlineRun run = TrainOnline(poly, init, cfg.learn, cap, seed);
              std::ofstream out = OpenOut(paths[0]);
              WriteRunRecordCsv(out, run.record);
              CloseOut(out, paths[0]);
              std::ofstream buf = OpenOut(paths[1]);
              run.buffer.DumpCsv(buf);
              CloseOut(buf, paths[1]);
            };
            tasks.push_back(std::move(t));
          }
        }
      }
      break;
    case ExperimentKind::kOfflineUniform: {
      auto data = load();
      tasks.push_back(DatasetTask("dataset.csv", data));
      AddOfflineRuns(tasks, cfg, poly, data, "offline", std::nullopt);
      break;
    }
    case ExperimentKind::kTwinPeaksVarianceSweep:
      for (double sigma : cfg.sigmas) {
        DatasetSpec spec = *cfg.dataset;
        spec.sigma_x = sigma;
        spec.sigma_y = sigma;
        auto data = std::make_shared<const std::vector<JointActionSample>>(Generate(spec));
        const std::string tag = "sigma" + FormatDouble(sigma);
        tasks.push_back(DatasetTask("dataset_" + tag + ".csv", data));
        AddOfflineRuns(tasks, cfg, poly, data, "sweep_" + tag, std::nullopt);
      }
      break;
    case ExperimentKind::kPjapComparison: {
      auto data = load();
      tasks.push_back(DatasetTask("dataset.csv", data));
      AddOfflineRuns(tasks, cfg, poly, data, "pjap_comparison_uniform", std::nullopt);
      AddOfflineRuns(tasks, cfg, poly, data, "pjap_comparison_pjap", cfg.pjap);
      break;
    }
    case ExperimentKind::kAnalyze: {
      auto data = load();
      Task t;
      t.paths = {"report.txt", "field_grid.csv"};
      t.label = "analysis";
      t.run = [&cfg, poly, data](const auto& paths) {
        std::ofstream report = OpenOut(paths[0]);
        report << AnalyzeReport(cfg, *data);
        CloseOut(report, paths[0]);
        const int powers = std::max({2, poly.degree_x(), poly.degree_y()});
        std::ofstream grid = OpenOut(paths[1]);
        WriteFieldGrid(grid, poly, ComputeStats(*data, powers), cfg.grid);
        CloseOut(grid, paths[1]);
      };
      tasks.push_back(std::move(t));
      break;
    }
  }
  return tasks;
}

std::string FormatPoint(double x, double y) {
  return "(" + FormatDouble(x) + ", " + FormatDouble(y) + ")";
}

}  // namespace

std::vector<JointActionSample> LoadDataset(const ExperimentConfig& config) {
  if (config.dataset_path) {
    std::vector<JointActionSample> data = ReadDatasetCsv(*config.dataset_path);
    if (data.empty()) {
      Fail(ErrorCode::kEmptyDataset,
           "dataset file " + config.dataset_path->string() + " has no samples");
    }
    return data;
  }
  if (!config.dataset) Fail(ErrorCode::kConfigError, "dataset: required");
  return Generate(*config.dataset);
}

std::string ExperimentManifest::ToJson() const {
  json doc;
  doc["version"] = version;
  doc["output_dir"] = output_dir.string();
  json config = json::parse(config_json, nullptr, false);
  doc["config"] = config.is_discarded() ? json(config_json) : config;
  json terms = json::array();
  for (const PolyTerm& t : game_terms) terms.push_back({t.i, t.j, t.c});
  doc["game_terms"] = terms;
  json entries = json::array();
  for (const ManifestEntry& e : files) {
    entries.push_back({{"path", e.path}, {"label", e.label}, {"seconds", e.seconds}});
  }
  doc["files"] = entries;
  doc["total_seconds"] = total_seconds;
  return doc.dump(2) + "\n";
}

ExperimentManifest RunExperiment(const ExperimentConfig& config,
                                 const RunOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  std::vector<Task> tasks = PlanTasks(config);

  ExperimentManifest manifest;
  manifest.config_json = config.source_json;
  manifest.version = std::string(kVersion);
  manifest.output_dir = config.output_dir;
  manifest.game_terms = BuildGame(config.game).Terms();
  std::vector<std::size_t> first_entry;
  for (const Task& t : tasks) {
    first_entry.push_back(manifest.files.size());
    for (const std::string& p : t.paths) manifest.files.push_back({p, t.label, 0.0});
  }
  if (options.dry_run) return manifest;

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    Fail(ErrorCode::kIoError, "cannot create " + config.output_dir.string() +
                                  ": " + ec.message());
  }

  std::vector<std::exception_ptr> errors(tasks.size());
  std::vector<double> seconds(tasks.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto t0 = Clock::now();
      try {
        std::vector<std::filesystem::path> paths;
        for (const std::string& p : tasks[i].paths) paths.push_back(config.output_dir / p);
        tasks[i].run(paths);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(
            Error(e.code(), tasks[i].label + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
      seconds[i] = std::chrono::duration<double>(Clock::now() - t0).count();
    }
  };
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  for (const std::exception_ptr& e : errors) {
    if (!e) continue;
    for (const ManifestEntry& f : manifest.files) {
      std::filesystem::remove(config.output_dir / f.path, ec);
    }
    std::rethrow_exception(e);
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t k = 0; k < tasks[i].paths.size(); ++k) {
      manifest.files[first_entry[i] + k].seconds = seconds[i];
    }
  }
  manifest.total_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();

  const std::filesystem::path manifest_path = config.output_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  out << manifest.ToJson();
  out.close();
  if (!out) {
    for (const ManifestEntry& f : manifest.files) {
      std::filesystem::remove(config.output_dir / f.path, ec);
    }
    Fail(ErrorCode::kIoError, "cannot write " + manifest_path.string());
  }
  return manifest;
}

std::string AnalyzeReport(const ExperimentConfig& config,
                          std::span<const JointActionSample> dataset) {
  const Polynomial2 poly = BuildGame(config.game);
  const int powers = std::max({2, poly.degree_x(), poly.degree_y()});
  const DatasetStats stats = ComputeStats(dataset, powers);

  std::ostringstream out;
  out << "game=" << GameKindName(config.game.kind) << '\n';
  out << "game.terms=";
  bool first = true;
  for (const PolyTerm& t : poly.Terms()) {
    out << (first ? "" : ";") << t.i << ':' << t.j << ':' << FormatDouble(t.c);
    first = false;
  }
  out << '\n';
  out << "dataset.size=" << dataset.size() << '\n';
  out << "dataset.mean_x=" << FormatDouble(stats.mean_x) << '\n';
  out << "dataset.mean_y=" << FormatDouble(stats.mean_y) << '\n';
  out << "dataset.var_x=" << FormatDouble(stats.var_x) << '\n';
  out << "dataset.var_y=" << FormatDouble(stats.var_y) << '\n';
  const Gradient origin = BrudField(poly, stats, 0.0, 0.0);
  out << "field.grad_j_at_origin=" << FormatPoint(origin.x, origin.y) << '\n';

  try {
    const FixedPointReport fp = BrudFixedPoint(config.game, stats);
    out << "fixed_point.classification=" << FixedPointClassName(fp.classification) << '\n';
    out << "fixed_point.degenerate=" << (fp.degenerate ? "true" : "false") << '\n';
    if (fp.point) {
      const auto [x, y] = *fp.point;
      const Gradient g = fp.field_at(x, y);
      out << "fixed_point.x=" << FormatDouble(x) << '\n';
      out << "fixed_point.y=" << FormatDouble(y) << '\n';
      out << "fixed_point.residual=" << FormatDouble(std::max(std::abs(g.x), std::abs(g.y))) << '\n';
      out << "fixed_point.reward=" << FormatDouble(poly.Eval(x, y)) << '\n';
    }
  } catch (const Error& e) {
    out << "fixed_point.classification=unsupported\n";
    out << "fixed_point.error=" << e.what() << '\n';
  }

  if (config.game.kind == GameKind::kTwinPeaks) {
    const TwinPeaksParams& p = config.game.twin_peaks;
    const auto [plus, minus] = TrueOptimaTwinPeaks(p);
    out << "optimum.plus=" << FormatDouble(plus) << '\n';
    out << "optimum.minus=" << FormatDouble(minus) << '\n';
    out << "optimum.reward=" << FormatDouble(poly.Eval(plus, plus)) << '\n';
    // Requirement on the y data for agent x, and on the x data for agent y.
    const std::pair<const char*, double> sides[] = {{"y_data", stats.mean_y},
                                                    {"x_data", stats.mean_x}};
    for (const auto& [name, mean] : sides) {
      const auto roots = SigmaCondition(p, mean);
      const std::string key = std::string("sigma_condition.") + name;
      if (!roots) {
        out << key << "=none\n";
        continue;
      }
      out << key << ".plus=" << (roots->plus ? FormatDouble(*roots->plus) : "none") << '\n';
      out << key << ".minus=" << (roots->minus ? FormatDouble(*roots->minus) : "none") << '\n';
    }
  }
  return out.str();
}

void WriteFieldGrid(std::ostream& out, const Polynomial2& poly,
                    const DatasetStats& stats, const GridSpec& grid) {
  out << kFieldGridHeader << '\n';
  const int n = std::max(grid.n, 1);
  const double step = n > 1 ? (grid.max - grid.min) / (n - 1) : 0.0;
  for (int a = 0; a < n; ++a) {
    const double x = grid.min + step * a;
    for (int b = 0; b < n; ++b) {
      const double y = grid.min + step * b;
      const Gradient j = BrudField(poly, stats, x, y);
      const Gradient r = poly.TrueGradient(x, y);
      out << FormatDouble(x) << ',' << FormatDouble(y) << ',' << FormatDouble(j.x)
          << ',' << FormatDouble(j.y) << ',' << FormatDouble(r.x) << ','
          << FormatDouble(r.y) << '\n';
    }
  }
}

}  // namespace polybrud
