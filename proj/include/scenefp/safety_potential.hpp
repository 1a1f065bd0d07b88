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

#ifndef SCENEFP__SAFETY_POTENTIAL_HPP_
#define SCENEFP__SAFETY_POTENTIAL_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/geometry.hpp"
#include "scenefp/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace scenefp
{

/// Braking safety procedures and the occupied-set construction.
struct SafetyProcedureParams
{
  double a_min{-8.0};     ///< m/s^2, hardest braking
  double a_slow{-4.0};    ///< m/s^2, realistic braking after the reaction time
  double t_react{0.5};    ///< s
  double horizon{4.0};    ///< s
  double dt_proc{0.1};    ///< s
  double margin{0.5};     ///< m, added around the footprint
  double rho_scale{10.0}; ///< m^2 s, tanh scale

  void validate() const
  {
    if (!(a_min <= a_slow && a_slow < 0.0)) {
      throw ConfigError("safety procedure requires a_min <= a_slow < 0");
    }
    if (!(horizon > 0.0 && dt_proc > 0.0 && rho_scale > 0.0)) {
      throw ConfigError("safety procedure requires positive horizon, dt_proc and rho_scale");
    }
    if (!(margin >= 0.0 && t_react >= 0.0)) {
      throw ConfigError("safety procedure requires non-negative margin and t_react");
    }
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(horizon / dt_proc)); }
};

/// Distance travelled and speed at procedure time t.
struct ProcedureState
{
  double arc{0.0};
  double speed{0.0};
};

namespace detail
{
/// Constant deceleration from speed0 over duration tau, frozen at standstill.
inline ProcedureState brake(double speed0, double decel, double tau)
{
  if (speed0 <= 0.0 || tau <= 0.0) {
    return {0.0, std::max(speed0, 0.0)};
  }
  const double t_halt = speed0 / -decel;
  const double te = std::min(tau, t_halt);
  return {speed0 * te + 0.5 * decel * te * te, std::max(speed0 + decel * tau, 0.0)};
}
}  // namespace detail

/// Immediate braking at a_min.
inline ProcedureState fast_procedure(double speed0, const SafetyProcedureParams & p, double t)
{
  return detail::brake(speed0, p.a_min, t);
}

/// Constant speed during the reaction time, then braking at a_slow.
inline ProcedureState slow_procedure(double speed0, const SafetyProcedureParams & p, double t)
{
  const double reaction = std::min(t, p.t_react);
  const auto braking = detail::brake(speed0, p.a_slow, t - p.t_react);
  return {speed0 * reaction + braking.arc, t <= p.t_react ? speed0 : braking.speed};
}

/// Remaining time to standstill given the slow-procedure speed at t.
inline double stop_time(double slow_speed, const SafetyProcedureParams & p, double t)
{
  return std::max(0.0, slow_speed / -p.a_slow - std::max(p.t_react - t, 0.0));
}

inline double stop_time_from_initial(double speed0, const SafetyProcedureParams & p, double t)
{
  return stop_time(slow_procedure(speed0, p, t).speed, p, t);
}

/// The recorded future path of a track from t0 onward, walkable by arc
/// length. Beyond the recording it continues straight.
class RecordedPath
{
public:
  struct Pose
  {
    Vec2 position;
    Vec2 direction;
  };

  RecordedPath(const Track & track, double t0)
  {
    const auto i0 = track.index_at(t0);
    if (!i0) {
      throw RangeError("track '" + track.agent_id + "' has no state at t0");
    }
    start_dir_ = track.states[*i0].direction();
    points_.push_back(track.states[*i0].position);
    arcs_.push_back(0.0);
    for (std::size_t i = *i0 + 1; i < track.states.size(); ++i) {
      const Vec2 p = track.states[i].position;
      const double len = distance(points_.back(), p);
      if (len > 1e-6) {
        points_.push_back(p);
        arcs_.push_back(arcs_.back() + len);
      }
    }
  }

  double length() const { return arcs_.back(); }

  Pose at(double arc) const
  {
    if (arc <= 0.0) {
      return {points_.front(), start_dir_};
    }
    if (points_.size() == 1) {
      return {points_.front() + start_dir_ * arc, start_dir_};
    }
    if (arc >= arcs_.back()) {
      const std::size_t n = points_.size();
      const Vec2 dir = (points_[n - 1] - points_[n - 2]) / (arcs_[n - 1] - arcs_[n - 2]);
      return {points_.back() + dir * (arc - arcs_.back()), dir};
    }
    const auto it = std::upper_bound(arcs_.begin(), arcs_.end(), arc);
    const auto k = static_cast<std::size_t>(it - arcs_.begin()) - 1;
    const double seg = arcs_[k + 1] - arcs_[k];
    const Vec2 dir = (points_[k + 1] - points_[k]) / seg;
    return {points_[k] + dir * (arc - arcs_[k]), dir};
  }

private:
  std::vector<Vec2> points_;
  std::vector<double> arcs_;
  Vec2 start_dir_{};
};

inline RecordedPath::Pose path_position(const Track & track, double t0, double arc)
{
  return RecordedPath(track, t0).at(arc);
}

/// Area an agent may occupy at procedure time t: from the hard-braking
/// position (rear bound) to the reaction-delayed braking position (front
/// bound), inflated by the footprint plus margin. Convex by construction.
inline Polygon occupied_set(
  const AgentState & state, const RecordedPath & path, const SafetyProcedureParams & p, double t)
{
  const double half_len = 0.5 * state.length + p.margin;
  const double half_wid = 0.5 * state.width + p.margin;
  const auto rear = path.at(fast_procedure(state.speed, p, t).arc);
  const auto front = path.at(slow_procedure(state.speed, p, t).arc);
  auto corners = oriented_rect(rear.position, rear.direction, half_len, half_wid);
  const auto front_rect = oriented_rect(front.position, front.direction, half_len, half_wid);
  corners.insert(corners.end(), front_rect.begin(), front_rect.end());
  return convex_hull(std::move(corners));
}

inline Polygon occupied_set(
  const AgentState & state, const Track & track, const SafetyProcedureParams & p, double t)
{
  return occupied_set(state, RecordedPath(track, state.t), p, t);
}

struct ClaimedSet
{
  struct Entry
  {
    double t;
    Polygon polygon;
    double t_stop;
  };

  AgentId agent_id;
  std::vector<Entry> entries;
  Bbox bounds{};
};

/// Occupied sets at t = 0, dt_proc, ..., horizon.
inline ClaimedSet claimed_set(
  const AgentState & state, const Track & track, const SafetyProcedureParams & p)
{
  const RecordedPath path(track, state.t);
  ClaimedSet set{state.agent_id, {}, {}};
  const std::size_t n = p.steps();
  set.entries.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * p.dt_proc;
    set.entries.push_back({t, occupied_set(state, path, p, t), stop_time_from_initial(state.speed, p, t)});
    const Bbox b = bounding_box(set.entries.back().polygon);
    if (k == 0) {
      set.bounds = b;
    } else {
      set.bounds.lo.x = std::min(set.bounds.lo.x, b.lo.x);
      set.bounds.lo.y = std::min(set.bounds.lo.y, b.lo.y);
      set.bounds.hi.x = std::max(set.bounds.hi.x, b.hi.x);
      set.bounds.hi.y = std::max(set.bounds.hi.y, b.hi.y);
    }
  }
  return set;
}

/// Stop-time weighted overlap of A's and B's claimed sets, weighted by A.
inline double rho(const ClaimedSet & a, const ClaimedSet & b)
{
  if (!a.bounds.overlaps(b.bounds)) {
    return 0.0;
  }
  double sum = 0.0;
  const std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto & ea = a.entries[k];
    if (ea.t_stop == 0.0) {
      continue;
    }
    sum += detail::convex_overlap_area(ea.polygon, b.entries[k].polygon) * ea.t_stop;
  }
  return sum;
}

inline double rho(
  const AgentId & a, const AgentId & b, const Scenario & scenario, double t0,
  const SafetyProcedureParams & p)
{
  const Track & ta = scenario.tracks.at(a);
  const Track & tb = scenario.tracks.at(b);
  const AgentState * sa = ta.state_at(t0);
  const AgentState * sb = tb.state_at(t0);
  if (sa == nullptr || sb == nullptr) {
    throw RangeError("both agents must be present at t0");
  }
  return rho(claimed_set(*sa, ta, p), claimed_set(*sb, tb, p));
}

inline double rho_norm(double rho_raw, const SafetyProcedureParams & p)
{
  return std::tanh(rho_raw / p.rho_scale);
}

struct SafetyPotentialResult
{
  /// Max over B != A of rho_norm(rho_AB).
  std::map<AgentId, double> per_agent;
  /// Raw rho_AB for every ordered pair.
  std::map<std::pair<AgentId, AgentId>, double> pairs;
};

/// Safety potential of every agent in `agents` against every other.
inline SafetyPotentialResult scene_safety_potential(
  std::span<const AgentState> agents, const Scenario & scenario, const SafetyProcedureParams & p)
{
  std::vector<ClaimedSet> sets;
  sets.reserve(agents.size());
  for (const auto & s : agents) {
    sets.push_back(claimed_set(s, scenario.tracks.at(s.agent_id), p));
  }
  SafetyPotentialResult out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j) {
        continue;
      }
      const double r = rho(sets[i], sets[j]);
      out.pairs.emplace(std::pair{sets[i].agent_id, sets[j].agent_id}, r);
      best = std::max(best, rho_norm(r, p));
    }
    out.per_agent.emplace(sets[i].agent_id, best);
  }
  return out;
}

inline SafetyPotentialResult scene_safety_potential(
  const Scene & scene, const Scenario & scenario, const SafetyProcedureParams & p)
{
  return scene_safety_potential(std::span<const AgentState>(scene.states), scenario, p);
}

}  // namespace scenefp

#endif  // SCENEFP__SAFETY_POTENTIAL_HPP_
