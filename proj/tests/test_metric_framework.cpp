// Copyright 2026 The scenefp Authors
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

#include "scenefp/metric_framework.hpp"
#include "scenefp/metrics.hpp"
#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace scenefp;
using synthetic::Motion;

namespace
{
MetricDescriptor dec(double alpha = 1.0)
{
  return {"m", MetricGroup::Universal, Direction::DecreasingCriticality, alpha, Aggregation::max};
}
MetricDescriptor inc() { return {"m", MetricGroup::TrafficQuality, Direction::IncreasingCriticality}; }
}  // namespace

TEST(Normalize, Examples)
{
  EXPECT_EQ(*normalize(0.0, dec()), 1.0);
  EXPECT_FALSE(normalize(std::nullopt, dec()));
  EXPECT_NEAR(*normalize(1.5, dec()), 0.22313016014842982, 1e-12);
  EXPECT_EQ(*normalize(1.4091, inc()), 1.0);
  EXPECT_EQ(*normalize(0.3, inc()), 0.3);
  EXPECT_NEAR(*normalize(1.0, dec(2.0)), std::exp(-2.0), 1e-15);
  EXPECT_THROW(normalize(-0.1, dec()), DomainError);
}

TEST(NormalizeProperty, MonotoneAndInRange)
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> raw(0.0, 30.0), alpha(0.05, 5.0);
  for (int i = 0; i < 1000; ++i) {
    double a = raw(rng), b = raw(rng);
    if (a == b) {
      continue;
    }
    if (a > b) {
      std::swap(a, b);
    }
    const auto d = dec(alpha(rng));
    const double na = *normalize(a, d), nb = *normalize(b, d);
    EXPECT_GT(na, nb);
    EXPECT_GE(nb, 0.0);
    EXPECT_LE(na, 1.0);
    const double ia = *normalize(a / 10.0, inc()), ib = *normalize(b / 10.0, inc());
    EXPECT_LE(ia, ib);
    EXPECT_GE(ia, 0.0);
    EXPECT_LE(ib, 1.0);
  }
  EXPECT_LT(*normalize(50.0, dec()), 1e-20);
}

TEST(Aggregate, Examples)
{
  const std::vector<double> v{0.2, 0.5};
  EXPECT_EQ(*aggregate(v, Aggregation::max), 0.5);
  EXPECT_NEAR(*aggregate(v, Aggregation::mean), 0.35, 1e-15);
  EXPECT_EQ(*aggregate(v, Aggregation::min), 0.2);
  EXPECT_FALSE(aggregate({}, Aggregation::max));
  EXPECT_FALSE(aggregate({}, Aggregation::mean));
  EXPECT_EQ(parse_aggregation("mean"), Aggregation::mean);
  EXPECT_THROW(parse_aggregation("median"), ConfigError);
}

TEST(AggregateProperty, PermutationInvariant)
{
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 200; ++c) {
    std::vector<double> v(1 + c % 17);
    for (auto & x : v) {
      x = u(rng);
    }
    for (auto fn : {Aggregation::max, Aggregation::mean, Aggregation::min}) {
      const auto ref = aggregate(v, fn);
      auto w = v;
      std::shuffle(w.begin(), w.end(), rng);
      EXPECT_EQ(aggregate(w, fn), ref);
    }
  }
}

TEST(ReduceToScene, MaxPicksMostCritical)
{
  const auto d = dec();
  std::vector<MetricValue> entries;
  for (double raw : {3.0, 0.5, 2.0}) {
    entries.push_back({d, Scope::pair("a", "b"), raw, normalize(raw, d)});
  }
  entries.push_back({d, Scope::pair("a", "c"), std::nullopt, std::nullopt});
  const auto v = reduce_to_scene(d, entries);
  EXPECT_EQ(*v.raw, 0.5);
  EXPECT_EQ(*v.normalized, std::exp(-0.5));
  auto m = d;
  m.aggregation = Aggregation::mean;
  EXPECT_NEAR(*reduce_to_scene(m, entries).raw, 5.5 / 3.0, 1e-15);
}

TEST(ReduceToScene, ClampedTiesPreferLargestRaw)
{
  const auto d = inc();
  std::vector<MetricValue> entries;
  for (double raw : {1.2, 1.7, 0.4}) {
    entries.push_back({d, Scope::agent("a"), raw, normalize(raw, d)});
  }
  const auto v = reduce_to_scene(d, entries);
  EXPECT_EQ(*v.normalized, 1.0);
  EXPECT_EQ(*v.raw, 1.7);
}

TEST(EvaluateScene, SingleStationaryVehicle)
{
  const auto sc = synthetic::scenario_of({Motion{"a", {0, 0}, 0.0, 0.0}}, 0.0, 1.0, 0.1);
  const auto ev = evaluate_scene(sc, 0.5, make_registry({}), {});
  for (const char * name : {"TJ", "GT", "ET", "PET", "WTTC", "Dist", "TTC"}) {
    ASSERT_NE(ev.find(name), nullptr);
    EXPECT_FALSE(ev.find(name)->raw) << name;
  }
  EXPECT_EQ(*ev.find("Macro")->raw, 0.0);
  EXPECT_EQ(*ev.find("SP")->raw, 0.0);
}

TEST(EvaluateScene, CollisionCourseHasTtc)
{
  // Follower at 15 m/s, leader at 5 m/s, 24 m between centers, both 4 m long.
  const auto sc = synthetic::scenario_of(
    {Motion{"f", {0, 0}, 0.0, 15.0, 0.0, 4.0, 1.8}, Motion{"l", {24, 0}, 0.0, 5.0, 0.0, 4.0, 1.8}},
    0.0, 1.0, 0.1);
  const auto ev = evaluate_scene(sc, 0.0, make_registry({}), {});
  const auto * ttc = ev.find("TTC");
  ASSERT_TRUE(ttc->raw);
  EXPECT_NEAR(*ttc->raw, 20.0 / 10.0, 1e-9);
  EXPECT_NEAR(*ttc->normalized, std::exp(-2.0), 1e-9);
  EXPECT_GT(*ttc->normalized, 0.0);
}

TEST(EvaluateScene, DeterministicAndParallelSafe)
{
  const auto sc = synthetic::random_traffic(41, 12, 30);
  const auto reg = make_registry({});
  const auto times = sc.frame_times();
  EXPECT_EQ(evaluate_scene(sc, 1.0, reg, {}), evaluate_scene(sc, 1.0, reg, {}));
  EvaluationConfig par;
  par.workers = 4;
  EXPECT_EQ(evaluate_scenes(sc, times, reg, {}), evaluate_scenes(sc, times, reg, par));
}

TEST(EvaluateScene, AlphaAndAggregationOverrides)
{
  const auto sc = synthetic::scenario_of(
    {Motion{"a", {0, 0}, 0.0, 0.0}, Motion{"b", {3, 4}, 0.0, 0.0}, Motion{"c", {0, 10}, 0.0, 0.0}},
    0.0, 1.0, 0.1);
  EvaluationConfig cfg;
  cfg.alpha["Dist"] = 0.5;
  cfg.aggregation["Dist"] = Aggregation::min;
  const auto ev = evaluate_scene(sc, 0.0, make_registry({}), cfg);
  const auto * d = ev.find("Dist");
  EXPECT_EQ(d->descriptor.alpha, 0.5);
  EXPECT_NEAR(*d->raw, 10.0, 1e-12);  // least critical pair
  EXPECT_NEAR(*d->normalized, std::exp(-5.0), 1e-12);
  EXPECT_EQ(ev.details.at("Dist").size(), 3u);
  cfg.alpha["Dist"] = 0.0;
  EXPECT_THROW(evaluate_scene(sc, 0.0, make_registry({}), cfg), ConfigError);
}

TEST(EvaluateScene, VulnerableUsersExcludedByDefault)
{
  Motion ped{"p", {5, 0}, 0.0, 1.0, 0.0, 0.5, 0.5, AgentClass::pedestrian};
  const auto sc = synthetic::scenario_of({Motion{"a", {0, 0}, 0.0, 10.0}, ped}, 0.0, 1.0, 0.1);
  auto ev = evaluate_scene(sc, 0.0, make_registry({}), {});
  EXPECT_EQ(ev.details.at("Macro").size(), 1u);
  EvaluationConfig cfg;
  cfg.include_vru = true;
  ev = evaluate_scene(sc, 0.0, make_registry({}), cfg);
  EXPECT_EQ(ev.details.at("Macro").size(), 2u);
}
