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

#include "scenefp/traffic_quality.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace scenefp;
using synthetic::Motion;

namespace
{
AgentState car(const std::string & id, Vec2 p, double speed, double heading = 0.0)
{
  return synthetic::state_of(Motion{id, p, heading, speed}, 0.0, 0.0);
}

std::vector<AgentState> random_scene(std::mt19937_64 & rng, int n)
{
  std::uniform_real_distribution<double> pos(-60, 60), v(0, 25), h(-3, 3);
  std::vector<AgentState> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(car("v" + std::to_string(i), {pos(rng), pos(rng)}, v(rng), h(rng)));
  }
  return out;
}
}  // namespace

TEST(BrakingDistance, Examples)
{
  const TqConfig cfg;
  EXPECT_EQ(braking_distance(0.0, cfg), 0.0);
  EXPECT_DOUBLE_EQ(braking_distance(10.0, cfg), 22.5);
  EXPECT_DOUBLE_EQ(braking_distance(20.0, cfg), 70.0);
}

TEST(TqMacro, Examples)
{
  std::vector<AgentState> s{car("a", {0, 0}, 12), car("b", {50, 0}, 12), car("c", {0, 80}, 12)};
  EXPECT_EQ(*tq_macro(s), 0.0);
  s = {car("a", {0, 0}, 10), car("b", {50, 0}, 20)};
  EXPECT_NEAR(*tq_macro(s), 5.0 / 15.0, 1e-12);
  s = {car("a", {0, 0}, 0), car("b", {50, 0}, 0)};
  EXPECT_EQ(*tq_macro(s), 0.0);
  EXPECT_FALSE(tq_macro(std::span<const AgentState>{}));
}

TEST(TqMicro, Examples)
{
  std::vector<AgentState> s{car("ego", {0, 0}, 10)};
  EXPECT_EQ(*tq_micro(s, "ego"), 1.0);
  // Radius 22.5 m: one other vehicle inside, six outside.
  s.push_back(car("in", {20, 0}, 10));
  for (int i = 0; i < 6; ++i) {
    s.push_back(car("out" + std::to_string(i), {30.0 + 10 * i, 5}, 10));
  }
  EXPECT_EQ(*tq_micro(s, "ego"), 0.25);
  s = {car("ego", {0, 0}, 0)};
  for (int i = 0; i < 4; ++i) {
    s.push_back(car("n" + std::to_string(i), {1.0 + i, 0}, 5));
  }
  EXPECT_EQ(*tq_micro(s, "ego"), 0.2);
  EXPECT_FALSE(tq_micro(s, "missing"));
}

TEST(TqMicro, RadiusBoundaryInclusive)
{
  std::vector<AgentState> s{car("ego", {0, 0}, 10), car("b", {22.5, 0}, 3)};
  EXPECT_EQ(*tq_micro(s, "ego"), 1.0);
}

TEST(TqNano, Examples)
{
  std::vector<AgentState> s{car("ego", {0, 0}, 10), car("far", {100, 0}, 30)};
  EXPECT_EQ(*tq_nano(s, "ego"), 0.0);
  s = {car("ego", {0, 0}, 10), car("b", {10, 0}, 20), car("far", {200, 0}, 3)};
  EXPECT_NEAR(*tq_nano(s, "ego"), 5.0 / 15.0, 1e-12);
  s = {car("ego", {0, 0}, 0), car("b", {0, 0}, 0)};
  EXPECT_EQ(*tq_nano(s, "ego"), 0.0);
}

TEST(TqIndi, Examples)
{
  const TqConfig cfg;
  auto cruise = synthetic::straight_track(Motion{"a", {0, 0}, 0.0, 13.89}, 0.0, 5.0, 0.1);
  EXPECT_NEAR(*tq_indi(cruise, 4.0, cfg), 0.5, 1e-12);
  auto parked = synthetic::straight_track(Motion{"a", {0, 0}, 0.0, 0.0}, 0.0, 5.0, 0.1);
  EXPECT_EQ(*tq_indi(parked, 4.0, cfg), 0.0);
  auto braking = synthetic::straight_track(Motion{"a", {0, 0}, 0.0, 13.89, -2.0}, 0.0, 3.0, 0.1);
  // Mean speed of the ramp by quadrature.
  const double mean_speed =
    oracle::simpson([](double t) { return 13.89 - 2.0 * t; }, 0.0, 3.0) / 3.0;
  EXPECT_NEAR(mean_speed, 10.89, 1e-12);
  EXPECT_NEAR(*tq_indi(braking, 3.0, cfg), 0.5 * (1.0 + mean_speed / 13.89), 1e-9);
  EXPECT_NEAR(*tq_indi(braking, 3.0, cfg), 0.892, 1e-3);
  EXPECT_FALSE(tq_indi(braking, -5.0, cfg));
}

TEST(TrafficQuality, Vector)
{
  const auto tr = synthetic::straight_track(Motion{"ego", {0, 0}, 0.0, 10.0}, 0.0, 1.0, 0.1);
  std::vector<AgentState> s{tr.states.back(), car("b", {10, 0}, 20)};
  const auto v = traffic_quality(s, tr, 1.0);
  ASSERT_TRUE(v);
  EXPECT_NEAR(v->macro, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(v->micro, 1.0);
}

TEST(TqProperty, RigidTransformInvariance)
{
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ang(-3.14, 3.14), off(-1000, 1000);
  for (int c = 0; c < 100; ++c) {
    const auto s = random_scene(rng, 12);
    const double rot = ang(rng);
    const Vec2 shift{off(rng), off(rng)};
    auto moved = s;
    for (auto & a : moved) {
      const Vec2 p = a.position;
      a.position = Vec2{p.x * std::cos(rot) - p.y * std::sin(rot), p.x * std::sin(rot) + p.y * std::cos(rot)} + shift;
      a.heading = wrap_angle(a.heading + rot);
    }
    EXPECT_EQ(*tq_macro(s), *tq_macro(moved));
    for (const auto & ego : s) {
      EXPECT_NEAR(*tq_nano(s, ego.agent_id), *tq_nano(moved, ego.agent_id), 1e-12);
    }
  }
}

TEST(TqProperty, MicroMonotoneInEgoSpeed)
{
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> dv(0, 5);
  for (int c = 0; c < 100; ++c) {
    auto s = random_scene(rng, 10);
    double prev = *tq_micro(s, "v0");
    for (int k = 0; k < 10; ++k) {
      s[0].speed += dv(rng);
      const double cur = *tq_micro(s, "v0");
      EXPECT_GE(cur, prev);
      prev = cur;
    }
  }
}

TEST(TqProperty, EnumerationOrderInvariance)
{
  std::mt19937_64 rng(63);
  for (int c = 0; c < 100; ++c) {
    const auto s = random_scene(rng, 9);
    auto shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(*tq_macro(s), *tq_macro(shuffled));
    for (const auto & ego : s) {
      EXPECT_EQ(*tq_micro(s, ego.agent_id), *tq_micro(shuffled, ego.agent_id));
      EXPECT_EQ(*tq_nano(s, ego.agent_id), *tq_nano(shuffled, ego.agent_id));
    }
  }
}

TEST(TqProperty, UniformTrafficIsUncritical)
{
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> v(0, 40);
  for (int c = 0; c < 100; ++c) {
    auto s = random_scene(rng, 8);
    const double speed = v(rng);
    for (auto & a : s) {
      a.speed = speed;
    }
    EXPECT_EQ(*tq_macro(s), 0.0);
    for (const auto & ego : s) {
      EXPECT_EQ(*tq_nano(s, ego.agent_id), 0.0);
    }
  }
}
