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

#ifndef SCENEFP__TRAFFIC_QUALITY_HPP_
#define SCENEFP__TRAFFIC_QUALITY_HPP_

#include "scenefp/metric_framework.hpp"
#include "scenefp/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

// Inverse traffic quality at four scopes: the whole scene (macro), the
// ego's braking neighborhood by count (micro) and by speed spread (nano),
// and the ego's own recent history (indi). All values rise with
// criticality.

namespace scenefp
{

struct TqConfig
{
  double a_brake{4.0};   ///< m/s^2, braking deceleration magnitude
  double t_react{1.0};   ///< s
  double nu_ref{13.89};  ///< m/s, about 50 km/h
  double a_ref{2.0};     ///< m/s^2
  double window{3.0};    ///< s, history for the individual metric
  double eps_speed{0.1}; ///< m/s, floor for mean speeds in denominators
};

struct TqVector
{
  double macro{0.0};
  double micro{0.0};
  double nano{0.0};
  double indi{0.0};
};

inline double braking_distance(double speed, const TqConfig & cfg)
{
  return speed * cfg.t_react + speed * speed / (2.0 * cfg.a_brake);
}

/// Coefficient of variation with a floored mean; population deviation.
inline double speed_variation(std::span<const double> speeds, double eps_speed)
{
  const auto [lo, hi] = std::minmax_element(speeds.begin(), speeds.end());
  if (speeds.empty() || *lo == *hi) {
    return 0.0;  // uniform speeds, exactly
  }
  const double n = static_cast<double>(speeds.size());
  double mean = 0.0;
  for (double v : speeds) {
    mean += v;
  }
  mean /= n;
  double var = 0.0;
  for (double v : speeds) {
    var += (v - mean) * (v - mean);
  }
  const double sigma = std::sqrt(var / n);
  if (sigma == 0.0) {
    return 0.0;
  }
  return sigma / std::max(mean, eps_speed);
}

namespace detail
{
inline std::vector<double> sorted_speeds(std::span<const AgentState> states)
{
  std::vector<double> v;
  v.reserve(states.size());
  for (const auto & s : states) {
    v.push_back(s.speed);
  }
  // Fixed summation order keeps results independent of agent enumeration.
  std::sort(v.begin(), v.end());
  return v;
}

inline const AgentState * find_state(std::span<const AgentState> states, const AgentId & id)
{
  for (const auto & s : states) {
    if (s.agent_id == id) {
      return &s;
    }
  }
  return nullptr;
}

inline std::vector<AgentState> in_braking_range(
  std::span<const AgentState> states, const AgentState & ego, const TqConfig & cfg)
{
  const double radius = braking_distance(ego.speed, cfg);
  std::vector<AgentState> out;
  for (const auto & s : states) {
    if (distance(s.position, ego.position) <= radius || s.agent_id == ego.agent_id) {
      out.push_back(s);
    }
  }
  return out;
}
}  // namespace detail

/// Undefined for an empty scene.
inline MaybeReal tq_macro(std::span<const AgentState> vehicles, const TqConfig & cfg = {})
{
  if (vehicles.empty()) {
    return std::nullopt;
  }
  return speed_variation(detail::sorted_speeds(vehicles), cfg.eps_speed);
}

/// Share of scene vehicles (ego included) within the ego's braking distance.
inline MaybeReal tq_micro(
  std::span<const AgentState> vehicles, const AgentId & ego, const TqConfig & cfg = {})
{
  const AgentState * e = detail::find_state(vehicles, ego);
  if (e == nullptr) {
    return std::nullopt;
  }
  const auto near = detail::in_braking_range(vehicles, *e, cfg);
  return static_cast<double>(near.size()) / static_cast<double>(vehicles.size());
}

inline MaybeReal tq_nano(
  std::span<const AgentState> vehicles, const AgentId & ego, const TqConfig & cfg = {})
{
  const AgentState * e = detail::find_state(vehicles, ego);
  if (e == nullptr) {
    return std::nullopt;
  }
  const auto near = detail::in_braking_range(vehicles, *e, cfg);
  return speed_variation(detail::sorted_speeds(near), cfg.eps_speed);
}

/// Mean |acceleration| and mean speed over the trailing window, each
/// relative to its reference, averaged.
inline MaybeReal tq_indi(const Track & track, double t, const TqConfig & cfg = {})
{
  double sum_acc = 0.0;
  double sum_speed = 0.0;
  std::size_t n = 0;
  for (const auto & s : track.states) {
    if (s.t > t + 1e-9) {
      break;
    }
    if (s.t >= t - cfg.window - 1e-9) {
      sum_acc += std::abs(s.acceleration);
      sum_speed += s.speed;
      ++n;
    }
  }
  if (n == 0) {
    return std::nullopt;
  }
  const double count = static_cast<double>(n);
  return 0.5 * ((sum_acc / count) / cfg.a_ref + (sum_speed / count) / cfg.nu_ref);
}

inline MaybeReal tq_macro(const Scene & scene, const TqConfig & cfg = {})
{
  return tq_macro(std::span<const AgentState>(scene.states), cfg);
}

inline MaybeReal tq_micro(const Scene & scene, const AgentId & ego, const TqConfig & cfg = {})
{
  return tq_micro(std::span<const AgentState>(scene.states), ego, cfg);
}

inline MaybeReal tq_nano(const Scene & scene, const AgentId & ego, const TqConfig & cfg = {})
{
  return tq_nano(std::span<const AgentState>(scene.states), ego, cfg);
}

/// All four sub-metrics for one ego.
inline std::optional<TqVector> traffic_quality(
  std::span<const AgentState> vehicles, const Track & ego_track, double t, const TqConfig & cfg = {})
{
  const auto macro = tq_macro(vehicles, cfg);
  const auto micro = tq_micro(vehicles, ego_track.agent_id, cfg);
  const auto nano = tq_nano(vehicles, ego_track.agent_id, cfg);
  const auto indi = tq_indi(ego_track, t, cfg);
  if (!macro || !micro || !nano || !indi) {
    return std::nullopt;
  }
  return TqVector{*macro, *micro, *nano, *indi};
}

}  // namespace scenefp

#endif  // SCENEFP__TRAFFIC_QUALITY_HPP_
