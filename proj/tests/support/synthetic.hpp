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

#ifndef SCENEFP_TESTS__SYNTHETIC_HPP_
#define SCENEFP_TESTS__SYNTHETIC_HPP_

#include "scenefp.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

// Scenario builders shared by the unit tests and the acceptance binary.

namespace scenefp::synthetic
{

struct Motion
{
  AgentId id;
  Vec2 start{};
  double heading{0.0};
  double speed{0.0};
  double accel{0.0};  ///< along the heading; motion stops at standstill
  double length{4.5};
  double width{1.8};
  AgentClass cls{AgentClass::car};
};

inline AgentState state_of(const Motion & m, double t_rel, double t_abs)
{
  double tau = t_rel;
  if (m.accel < 0.0) {
    tau = std::min(t_rel, m.speed / -m.accel);
  }
  const double v = std::max(0.0, m.speed + m.accel * tau);
  const double s = m.speed * tau + 0.5 * m.accel * tau * tau;
  const Vec2 dir = unit_from_angle(m.heading);
  AgentState st;
  st.agent_id = m.id;
  st.t = t_abs;
  st.position = m.start + dir * s;
  st.heading = wrap_angle(m.heading);
  st.velocity = dir * v;
  st.speed = v;
  st.acceleration = (m.accel < 0.0 && v == 0.0) ? 0.0 : m.accel;
  st.length = m.length;
  st.width = m.width;
  st.classification = m.cls;
  return st;
}

/// States at t0, t0 + dt, ..., t1 with `start` at time t0.
inline Track straight_track(const Motion & m, double t0, double t1, double dt)
{
  Track tr;
  tr.agent_id = m.id;
  tr.dt = dt;
  const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    tr.states.push_back(state_of(m, t - t0, t));
  }
  return tr;
}

inline Scenario scenario_of(const std::vector<Motion> & motions, double t0, double t1, double dt)
{
  std::vector<Track> tracks;
  for (const auto & m : motions) {
    tracks.push_back(straight_track(m, t0, t1, dt));
  }
  return make_scenario(std::move(tracks));
}

/// Track through the given positions, one per sample, kinematics derived.
inline Track polyline_track(
  const AgentId & id, const std::vector<Vec2> & points, double t0, double dt, double length = 4.5,
  double width = 1.8)
{
  Track tr;
  tr.agent_id = id;
  tr.dt = dt;
  for (std::size_t k = 0; k < points.size(); ++k) {
    AgentState s;
    s.agent_id = id;
    s.t = t0 + static_cast<double>(k) * dt;
    s.position = points[k];
    s.length = length;
    s.width = width;
    tr.states.push_back(s);
  }
  return derive_kinematics(std::move(tr));
}

/// Straight-line agents at random positions, headings and speeds in a
/// square of side `extent`.
inline Scenario random_traffic(
  std::uint64_t seed, std::size_t agents, std::size_t frames, double dt = 0.1,
  double extent = 200.0)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.5 * extent, 0.5 * extent);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> spd(0.0, 20.0);
  std::uniform_real_distribution<double> acc(-1.5, 1.0);
  std::uniform_real_distribution<double> len(3.8, 5.2);
  std::uniform_real_distribution<double> wid(1.6, 2.1);
  std::vector<Motion> motions;
  for (std::size_t i = 0; i < agents; ++i) {
    motions.push_back(
      {"v" + std::to_string(i), {pos(rng), pos(rng)}, ang(rng), spd(rng), acc(rng), len(rng),
       wid(rng)});
  }
  return scenario_of(motions, 0.0, static_cast<double>(frames - 1) * dt, dt);
}

}  // namespace scenefp::synthetic

#endif  // SCENEFP_TESTS__SYNTHETIC_HPP_
