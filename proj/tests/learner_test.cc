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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "polybrud/analysis.h"
#include "polybrud/datasets.h"
#include "polybrud/error.h"
#include "polybrud/learner.h"
#include "test_util.h"

namespace polybrud {
namespace {

using testing::Close;
using testing::FromPairs;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

JointPolicy Policy(double x, double y) { return JointPolicy{x, y, 0}; }

std::vector<JointActionSample> Gaussian(double cx, double cy, double sigma,
                                        std::int64_t size, std::uint64_t seed) {
  DatasetSpec s;
  s.kind = DatasetKind::kGaussianCentered;
  s.center_x = cx;
  s.center_y = cy;
  s.sigma_x = s.sigma_y = sigma;
  s.size = size;
  s.seed = seed;
  return Generate(s);
}

int Degree(const Polynomial2& p) { return std::max({2, p.degree_x(), p.degree_y()}); }

TEST_SUITE("learner") {

TEST_CASE("minibatch gradient examples") {
  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  const auto biased = FromPairs({{-0.05, 0.09}, {0.01, -0.01}});  // means (-0.02, 0.04)
  const Gradient g = BrudGradientMinibatch(sign, Policy(0.7, -0.3), biased);
  CHECK(g.x == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(g.y == doctest::Approx(-0.02).epsilon(1e-12));

  const Polynomial2 dec = BuildGame(GameSpec::Decoupled());
  const Gradient d = BrudGradientMinibatch(dec, Policy(3, -2), FromPairs({{0.1, 5}, {9, 2}}));
  CHECK(d.x == 1.0);
  CHECK(d.y == 1.0);

  const Polynomial2 tp = BuildGame(GameSpec::TwinPeaks(1, 4, 5));
  const Gradient t = BrudGradientMinibatch(tp, Policy(0.5, 0.0), FromPairs({{0, 0.6}, {0, 0.7}}));
  CHECK(t.x == doctest::Approx(0.55).epsilon(1e-14));

  CHECK(CodeOf([&] { BrudGradientMinibatch(tp, Policy(0, 0), {}); }) ==
        ErrorCode::kEmptyBatch);
}

TEST_CASE("exact gradient examples") {
  const Polynomial2 tp = BuildGame(GameSpec::TwinPeaks(1, 4, 5));
  const DatasetStats two = ComputeStats(FromPairs({{0.5, 0.6}, {0.5, 0.7}}), 2);
  CHECK(BrudGradientExact(tp, Policy(0.5, 0.0), two).x ==
        doctest::Approx(0.55).epsilon(1e-14));

  const Polynomial2 act = BuildGame(GameSpec::ActionAgreement());
  const DatasetStats s = ComputeStats(FromPairs({{0.5, -0.3}, {0.1, 0.1}}), 2);
  for (auto [p, q] : {std::pair{0.0, 0.0}, {0.7, -0.2}, {-1.1, 0.4}}) {
    const Gradient g = BrudGradientExact(act, Policy(p, q), s);
    CHECK(g.x == doctest::Approx(2 * s.mean_y - 2 * p).epsilon(1e-14));
    CHECK(g.y == doctest::Approx(2 * s.mean_x - 2 * q).epsilon(1e-14));
  }

  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  const DatasetStats zero = ComputeStats(FromPairs({{1, -1}, {-1, 1}}), 2);
  const Gradient z = BrudGradientExact(sign, Policy(0.3, -0.9), zero);
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);

  const Polynomial2 quartic =
      Polynomial2::FromTerms(std::vector<PolyTerm>{{1, 4, 1.0}});
  CHECK(CodeOf([&] { BrudGradientExact(quartic, Policy(0, 0), two); }) ==
        ErrorCode::kInsufficientMoments);
}

TEST_CASE("exact and minibatch gradients agree on the full dataset") {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial2 p = testing::RandomPoly(gen);
    const auto data = testing::RandomSamples(gen, size(gen));
    const JointPolicy pol = Policy(u(gen), u(gen));
    const Gradient exact = BrudGradientExact(p, pol, ComputeStats(data, Degree(p)));
    const Gradient mini = BrudGradientMinibatch(p, pol, data);
    CHECK(Close(exact.x, mini.x, 1e-9, 1e-12));
    CHECK(Close(exact.y, mini.y, 1e-9, 1e-12));
  }
}

TEST_CASE("gradient matches finite differences of the batch-mean reward") {
  std::mt19937_64 gen(4321);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial2 p = testing::RandomPoly(gen);
    const auto data = testing::RandomSamples(gen, size(gen));
    const double tx = u(gen), ty = u(gen);
    auto jx = [&](double t) {
      double s = 0.0;
      for (const auto& b : data) s += p.Eval(t, b.a_y);
      return s / data.size();
    };
    auto jy = [&](double t) {
      double s = 0.0;
      for (const auto& b : data) s += p.Eval(b.a_x, t);
      return s / data.size();
    };
    const Gradient g = BrudGradientMinibatch(p, Policy(tx, ty), data);
    CHECK(Close(g.x, (jx(tx + h) - jx(tx - h)) / (2 * h), 1e-6, 1e-8));
    CHECK(Close(g.y, (jy(ty + h) - jy(ty - h)) / (2 * h), 1e-6, 1e-8));
  }
}

TEST_CASE("an agent's gradient ignores its own batch actions") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial2 p = testing::RandomPoly(gen);
    auto data = testing::RandomSamples(gen, 32);
    const JointPolicy pol = Policy(u(gen), u(gen));
    const Gradient before = BrudGradientExact(p, pol, ComputeStats(data, Degree(p)));
    for (auto& s : data) s.a_x = u(gen);
    const Gradient after = BrudGradientExact(p, pol, ComputeStats(data, Degree(p)));
    CHECK(before.x == after.x);
  }
}

TEST_CASE("gradient ascent step") {
  LearnConfig cfg;
  cfg.learning_rate = 0.1;
  JointPolicy p = GradientAscentStep(Policy(0, 0), {1, 1}, cfg);
  CHECK(p.theta_x == doctest::Approx(0.1));
  CHECK(p.theta_y == doctest::Approx(0.1));
  CHECK(p.update_count == 1);

  const JointPolicy same = GradientAscentStep(Policy(0.3, -0.2), {0, 0}, cfg);
  CHECK(same.theta_x == 0.3);
  CHECK(same.theta_y == -0.2);

  cfg.param_clamp = std::make_pair(-1.0, 1.0);
  p = GradientAscentStep(Policy(0.95, 0), {1, 0}, cfg);
  CHECK(p.theta_x == 1.0);
  CHECK(p.theta_y == 0.0);

  CHECK(CodeOf([&] { GradientAscentStep(Policy(0, 0), {NAN, 0}, cfg); }) ==
        ErrorCode::kNonFiniteGradient);
  CHECK(CodeOf([&] { GradientAscentStep(Policy(0, 0), {0, INFINITY}, cfg); }) ==
        ErrorCode::kNonFiniteGradient);
}

TEST_CASE("config validation") {
  LearnConfig cfg;
  CHECK_NOTHROW(ValidateLearnConfig(cfg));
  cfg.learning_rate = 0.0;
  CHECK(CodeOf([&] { ValidateLearnConfig(cfg); }) == ErrorCode::kInvalidParams);
  cfg = LearnConfig{};
  cfg.steps = 0;
  CHECK(CodeOf([&] { ValidateLearnConfig(cfg); }) == ErrorCode::kInvalidParams);
  cfg = LearnConfig{};
  cfg.batch_size = 0;
  CHECK(CodeOf([&] { ValidateLearnConfig(cfg); }) == ErrorCode::kInvalidParams);
  cfg = LearnConfig{};
  cfg.param_clamp = std::make_pair(1.0, -1.0);
  CHECK(CodeOf([&] { ValidateLearnConfig(cfg); }) == ErrorCode::kInvalidParams);
}

TEST_CASE("offline sign agreement drifts bottom-right from any start") {
  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  // Means (-0.02, 0.04).
  const auto data = FromPairs({{-0.05, 0.09}, {0.01, -0.01}});
  LearnConfig cfg;
  cfg.steps = 500;
  for (auto [x0, y0] : {std::pair{0.5, 0.5}, {-0.5, 0.5}, {0.0, -0.5}}) {
    const RunRecord r = TrainOffline(sign, data, Policy(x0, y0), cfg, std::nullopt, 1);
    REQUIRE(r.rows.size() == 501);
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
      CHECK(r.rows[k].theta_x > r.rows[k - 1].theta_x);
      CHECK(r.rows[k].theta_y < r.rows[k - 1].theta_y);
    }
  }
}

TEST_CASE("offline action agreement converges to the swapped means") {
  const Polynomial2 act = BuildGame(GameSpec::ActionAgreement());
  const auto data = Gaussian(0.3, -0.1, 0.2, 1000, 3);
  LearnConfig cfg;
  cfg.steps = 100000;
  const RunRecord r = TrainOffline(act, data, Policy(0.8, 0.8), cfg, std::nullopt, 1);
  CHECK(std::abs(r.rows.back().theta_x + 0.1) < 1e-4);
  CHECK(std::abs(r.rows.back().theta_y - 0.3) < 1e-4);
}

TEST_CASE("offline twin peaks on origin-centred data converges to the origin") {
  const Polynomial2 tp = BuildGame(GameSpec::TwinPeaks(1, 4, 5));
  LearnConfig cfg;
  cfg.steps = 5000;
  for (double sigma : {0.1, 0.5, 1.0}) {
    const auto data = Gaussian(0, 0, sigma, 1000, 5);
    const RunRecord r = TrainOffline(tp, data, Policy(0.9, -0.4), cfg, std::nullopt, 1);
    CHECK(std::hypot(r.rows.back().theta_x, r.rows.back().theta_y) < 1e-3);
  }
}

TEST_CASE("offline run has a fixed point exactly where the analysis says") {
  const auto data = Gaussian(0.3, -0.1, 0.4, 500, 6);
  for (const GameSpec& spec : {GameSpec::ActionAgreement(), GameSpec::TwinPeaks(1, 4, 5)}) {
    const Polynomial2 p = BuildGame(spec);
    const DatasetStats st = ComputeStats(data, Degree(p));
    const FixedPointReport rep = BrudFixedPoint(spec, st);
    REQUIRE(rep.point.has_value());
    LearnConfig cfg;
    cfg.steps = 100000;
    const RunRecord r = TrainOffline(p, data, Policy(0, 0), cfg, std::nullopt, 1);
    CHECK(std::abs(r.rows.back().theta_x - rep.point->first) < 1e-3);
    CHECK(std::abs(r.rows.back().theta_y - rep.point->second) < 1e-3);
  }
}

TEST_CASE("run records have steps + 1 rows and are deterministic") {
  const Polynomial2 tp = BuildGame(GameSpec::TwinPeaks(1, 4, 5));
  const auto data = Gaussian(0.6, 0.6, 0.5, 300, 9);
  LearnConfig cfg;
  cfg.steps = 200;
  cfg.gradient_mode = GradientMode::kMinibatch;
  const std::optional<PjapConfig> pjap = PjapConfig{};
  const RunRecord a = TrainOffline(tp, data, Policy(0, 0), cfg, pjap, 17);
  const RunRecord b = TrainOffline(tp, data, Policy(0, 0), cfg, pjap, 17);
  const RunRecord c = TrainOffline(tp, data, Policy(0, 0), cfg, pjap, 18);
  REQUIRE(a.rows.size() == 201);
  std::ostringstream sa, sb, sc;
  WriteRunRecordCsv(sa, a);
  WriteRunRecordCsv(sb, b);
  WriteRunRecordCsv(sc, c);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
  CHECK(sa.str().rfind(std::string(kRunRecordHeader) + "\n0,0,0,0,0,0,0,300\n", 0) == 0);
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].step == static_cast<std::int64_t>(k));
}

TEST_CASE("row k holds the policy after update k and the gradient that produced it") {
  const Polynomial2 act = BuildGame(GameSpec::ActionAgreement());
  const auto data = FromPairs({{0.3, -0.1}});
  LearnConfig cfg;
  cfg.steps = 3;
  const RunRecord r = TrainOffline(act, data, Policy(0, 0), cfg, std::nullopt, 0);
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    CHECK(r.rows[k].theta_x ==
          doctest::Approx(r.rows[k - 1].theta_x + 0.01 * r.rows[k].grad_x).epsilon(1e-15));
    CHECK(r.rows[k].reward == act.Eval(r.rows[k].theta_x, r.rows[k].theta_y));
    CHECK(r.rows[k].mean_distance ==
          doctest::Approx(std::abs(0.3 - r.rows[k - 1].theta_x) +
                          std::abs(-0.1 - r.rows[k - 1].theta_y)));
  }
}

TEST_CASE("offline argument errors") {
  const Polynomial2 tp = BuildGame(GameSpec::TwinPeaks(1, 4, 5));
  LearnConfig cfg;
  cfg.steps = 10;
  CHECK(CodeOf([&] { TrainOffline(tp, {}, Policy(0, 0), cfg, std::nullopt, 0); }) ==
        ErrorCode::kEmptyDataset);
  const auto data = FromPairs({{0, 0}});
  CHECK(CodeOf([&] { TrainOffline(tp, data, Policy(0, 0), cfg, PjapConfig{}, 0); }) ==
        ErrorCode::kInvalidParams);
}

TEST_CASE("on-policy sign agreement passes the saddle and reaches the corner") {
  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  LearnConfig cfg;
  cfg.steps = 1000;
  cfg.gradient_mode = GradientMode::kMinibatch;
  cfg.param_clamp = std::make_pair(-1.5, 1.5);
  const OnlineRun run = TrainOnline(sign, Policy(-0.5, 0.5), cfg, 64, 1);
  double best = -INFINITY;
  double nearest_origin = INFINITY;
  for (const RunRow& row : run.record.rows) {
    best = std::max(best, row.reward);
    nearest_origin = std::min(nearest_origin, std::hypot(row.theta_x, row.theta_y));
  }
  CHECK(run.record.rows.back().reward >= best - 0.05);
  CHECK(nearest_origin < 0.25);
  CHECK(run.buffer.size() == 64);
}

TEST_CASE("noiseless on-policy ascent increases reward strictly") {
  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  LearnConfig cfg;
  cfg.steps = 300;
  cfg.batch_size = 16;
  cfg.gradient_mode = GradientMode::kMinibatch;
  cfg.exploration_noise_sigma = 0.0;
  const OnlineRun run = TrainOnline(sign, Policy(0.5, 0.5), cfg, 16, 2);
  for (std::size_t k = 1; k < run.record.rows.size(); ++k) {
    CHECK(run.record.rows[k].reward > run.record.rows[k - 1].reward);
  }
}

TEST_CASE("online runs are deterministic and respect capacity") {
  const Polynomial2 sign = BuildGame(GameSpec::SignAgreement());
  LearnConfig cfg;
  cfg.steps = 400;
  cfg.gradient_mode = GradientMode::kMinibatch;
  const OnlineRun a = TrainOnline(sign, Policy(-0.5, 0.5), cfg, 100, 3);
  const OnlineRun b = TrainOnline(sign, Policy(-0.5, 0.5), cfg, 100, 3);
  std::ostringstream sa, sb, da, db;
  WriteRunRecordCsv(sa, a.record);
  WriteRunRecordCsv(sb, b.record);
  a.buffer.DumpCsv(da);
  b.buffer.DumpCsv(db);
  CHECK(sa.str() == sb.str());
  CHECK(da.str() == db.str());
  CHECK(a.buffer.size() == 100);
  CHECK(a.record.rows.size() == 401);
  const OnlineRun unbounded = TrainOnline(sign, Policy(-0.5, 0.5), cfg, std::nullopt, 3);
  CHECK(unbounded.buffer.size() == 400);
  CHECK(CodeOf([&] { TrainOnline(sign, Policy(0, 0), cfg, 10, 0); }) ==
        ErrorCode::kInvalidParams);
}

TEST_CASE("online exact mode uses the whole buffer") {
  const Polynomial2 act = BuildGame(GameSpec::ActionAgreement());
  LearnConfig cfg;
  cfg.steps = 50;
  cfg.exploration_noise_sigma = 0.0;
  cfg.gradient_mode = GradientMode::kExactMoments;
  const OnlineRun run = TrainOnline(act, Policy(0.2, 0.2), cfg, std::nullopt, 4);
  // Every stored action equals the policy, so the field is zero throughout.
  for (const RunRow& row : run.record.rows) {
    CHECK(row.theta_x == 0.2);
    CHECK(row.theta_y == 0.2);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace polybrud
