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

#ifndef SCENEFP__PAIRWISE_METRICS_HPP_
#define SCENEFP__PAIRWISE_METRICS_HPP_

#include "scenefp/geometry.hpp"
#include "scenefp/metric_framework.hpp"
#include "scenefp/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace scenefp
{

struct PairwiseConfig
{
  double lateral_gate{2.0};                           ///< m
  double heading_gate{30.0 * std::numbers::pi / 180.0};  ///< rad
  double zone_horizon{5.0};                           ///< s, future path length for zones
  double zone_min_angle{15.0 * std::numbers::pi / 180.0};  ///< rad, shallower crossings ignored
  double min_speed{0.1};                              ///< m/s, below this an agent is stationary
};

inline double euclidean_distance(const AgentState & a, const AgentState & b)
{
  return distance(a.position, b.position);
}

// ---------------------------------------------------------------------------
// Car following

struct FollowingPair
{
  const AgentState * follower;
  const AgentState * leader;
};

/// Orders two agents driving in the same lane, using `a`'s heading ray.
inline std::optional<FollowingPair> leader_follower(
  const AgentState & a, const AgentState & b, double lateral_gate, double heading_gate)
{
  if (std::abs(wrap_angle(a.heading - b.heading)) > heading_gate) {
    return std::nullopt;
  }
  const Vec2 dir = a.direction();
  const Vec2 rel = b.position - a.position;
  if (std::abs(cross(dir, rel)) >= lateral_gate) {
    return std::nullopt;
  }
  const double ahead = dot(dir, rel);
  if (ahead > 0.0) {
    return FollowingPair{&a, &b};
  }
  if (ahead < 0.0) {
    return FollowingPair{&b, &a};
  }
  return std::nullopt;
}

/// Bumper gap over closing speed; 0 once the footprints touch, undefined
/// while the gap opens.
inline MaybeReal ttc(const AgentState & follower, const AgentState & leader)
{
  const double gap =
    euclidean_distance(follower, leader) - 0.5 * (follower.length + leader.length);
  if (gap <= 0.0) {
    return 0.0;
  }
  const double closing = follower.speed - leader.speed;
  if (closing <= 0.0) {
    return std::nullopt;
  }
  return gap / closing;
}

/// Worst-case TTC: both agents head straight at each other at their current
/// speeds, footprints bounded by circles of half the diagonal.
inline MaybeReal wttc(const AgentState & a, const AgentState & b)
{
  const double ra = 0.5 * std::hypot(a.length, a.width);
  const double rb = 0.5 * std::hypot(b.length, b.width);
  const double gap = std::max(0.0, euclidean_distance(a, b) - (ra + rb));
  if (gap == 0.0) {
    return 0.0;
  }
  const double closing = a.speed + b.speed;
  if (closing <= 0.0) {
    return std::nullopt;
  }
  return gap / closing;
}

// ---------------------------------------------------------------------------
// Conflict zones

/// Where two future paths cross. Arc lengths are measured along each agent's
/// path from its current center position.
struct ConflictZone
{
  AgentId agent_a;
  AgentId agent_b;
  double t{0.0};  ///< scene time the zone was detected at
  Vec2 point{};
  Polygon area;   ///< convex, counterclockwise
  double arc_a{0.0};   ///< to zone entry, 0 when inside
  double arc_b{0.0};
  double exit_a{0.0};  ///< to zone exit
  double exit_b{0.0};
};

struct ZonePassage
{
  double t_enter{0.0};
  double t_exit{0.0};
};

/// Polyline of recorded positions over [t, t + horizon]. When the recording
/// ends early the path continues straight at the last speed.
inline std::vector<Vec2> future_path(const Track & track, double t, double horizon)
{
  std::vector<Vec2> path;
  const auto i0 = track.index_at(t);
  if (!i0) {
    return path;
  }
  const double t_end = track.states[*i0].t + horizon;
  std::size_t i = *i0;
  for (; i < track.states.size() && track.states[i].t <= t_end + 1e-9; ++i) {
    const Vec2 p = track.states[i].position;
    if (path.empty() || distance(path.back(), p) > 1e-9) {
      path.push_back(p);
    }
  }
  const AgentState & last = track.states[i - 1];
  const double remaining = t_end - last.t;
  if (i == track.states.size() && remaining > 1e-9 && last.speed > 0.0) {
    const Vec2 dir = last.speed > 1e-9 ? last.velocity / last.speed : last.direction();
    path.push_back(last.position + dir * (last.speed * remaining));
  }
  return path;
}

namespace detail
{

struct PathCrossing
{
  Vec2 point;
  double arc_a;
  double arc_b;
  Vec2 dir_a;
  Vec2 dir_b;
};

inline std::optional<PathCrossing> first_crossing(
  const std::vector<Vec2> & pa, const std::vector<Vec2> & pb, double min_sin)
{
  if (pa.size() < 2 || pb.size() < 2 || !bounding_box(pa).overlaps(bounding_box(pb))) {
    return std::nullopt;
  }
  std::vector<Bbox> boxes_b;
  boxes_b.reserve(pb.size() - 1);
  for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
    boxes_b.push_back(bounding_box(std::span(&pb[j], 2)));
  }
  std::optional<PathCrossing> best;
  double arc_a = 0.0;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    const double len_a = distance(pa[i], pa[i + 1]);
    if (best && arc_a > best->arc_a) {
      break;
    }
    const Bbox box_a = bounding_box(std::span(&pa[i], 2));
    double arc_b = 0.0;
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      const double len_b = distance(pb[j], pb[j + 1]);
      if (box_a.overlaps(boxes_b[j])) {
        if (const auto hit = segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1])) {
          const Vec2 da = (pa[i + 1] - pa[i]) / len_a;
          const Vec2 db = (pb[j + 1] - pb[j]) / len_b;
          const double ca = arc_a + hit->s * len_a;
          const double cb = arc_b + hit->u * len_b;
          if (
            std::abs(cross(da, db)) >= min_sin &&
            (!best || ca < best->arc_a || (ca == best->arc_a && cb < best->arc_b))) {
            best = PathCrossing{hit->point, ca, cb, da, db};
          }
        }
      }
      arc_b += len_b;
    }
    arc_a += len_a;
  }
  return best;
}

}  // namespace detail

/// First crossing of the two future paths over the horizon, with the zone
/// area taken as the overlap of both agents' width strips at that point.
inline std::optional<ConflictZone> conflict_zone(
  const Track & track_a, const Track & track_b, double t, const PairwiseConfig & cfg = {})
{
  const AgentState * sa = track_a.state_at(t);
  const AgentState * sb = track_b.state_at(t);
  if (sa == nullptr || sb == nullptr) {
    return std::nullopt;
  }
  const auto pa = future_path(track_a, t, cfg.zone_horizon);
  const auto pb = future_path(track_b, t, cfg.zone_horizon);
  const auto hit = detail::first_crossing(pa, pb, std::sin(cfg.zone_min_angle));
  if (!hit) {
    return std::nullopt;
  }
  const double sin_angle = std::abs(cross(hit->dir_a, hit->dir_b));
  const double half_len = (sa->width + sb->width) / sin_angle;
  const Polygon strip_a = oriented_rect(hit->point, hit->dir_a, half_len, 0.5 * sa->width);
  const Polygon strip_b = oriented_rect(hit->point, hit->dir_b, half_len, 0.5 * sb->width);

  ConflictZone zone;
  zone.agent_a = track_a.agent_id;
  zone.agent_b = track_b.agent_id;
  zone.t = sa->t;
  zone.point = hit->point;
  zone.area = clip_convex(strip_a, strip_b);
  double lo_a = 0.0, hi_a = 0.0, lo_b = 0.0, hi_b = 0.0;
  for (const auto & v : zone.area) {
    const double pa_proj = dot(v - hit->point, hit->dir_a);
    const double pb_proj = dot(v - hit->point, hit->dir_b);
    lo_a = std::min(lo_a, pa_proj);
    hi_a = std::max(hi_a, pa_proj);
    lo_b = std::min(lo_b, pb_proj);
    hi_b = std::max(hi_b, pb_proj);
  }
  zone.arc_a = std::max(0.0, hit->arc_a + lo_a);
  zone.exit_a = std::max(0.0, hit->arc_a + hi_a);
  zone.arc_b = std::max(0.0, hit->arc_b + lo_b);
  zone.exit_b = std::max(0.0, hit->arc_b + hi_b);
  return zone;
}

/// Whether the agent's footprint overlaps the zone.
inline bool occupies(const AgentState & s, const ConflictZone & zone, double zone_radius)
{
  const double reach = 0.5 * std::hypot(s.length, s.width) + zone_radius;
  if (distance(s.position, zone.point) > reach) {
    return false;
  }
  return detail::convex_overlap_area(s.footprint(), zone.area) > 1e-9;
}

namespace detail
{

inline AgentState lerp_state(const AgentState & a, const AgentState & b, double u)
{
  AgentState s = a;
  s.t = a.t + (b.t - a.t) * u;
  s.position = a.position + (b.position - a.position) * u;
  s.heading = wrap_angle(a.heading + wrap_angle(b.heading - a.heading) * u);
  return s;
}

/// Time of the occupancy change between two samples; `b_inside` says which
/// side occupies the zone. Positions are interpolated linearly.
inline double refine_boundary(
  const AgentState & a, const AgentState & b, bool b_inside, const ConflictZone & zone,
  double zone_radius)
{
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (occupies(lerp_state(a, b, mid), zone, zone_radius) == b_inside) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return a.t + (b.t - a.t) * (b_inside ? hi : lo);
}

}  // namespace detail

/// The agent's occupancy interval of the zone that is current at, or comes
/// next after, the detection time. Boundaries between two samples are
/// located by bisection on the interpolated motion.
inline std::optional<ZonePassage> zone_passage(const Track & track, const ConflictZone & zone)
{
  const auto i0 = track.index_at(zone.t);
  if (!i0 || zone.area.size() < 3) {
    return std::nullopt;
  }
  double radius = 0.0;
  for (const auto & v : zone.area) {
    radius = std::max(radius, distance(v, zone.point));
  }
  const auto & st = track.states;
  std::size_t first = *i0;
  while (first < st.size() && !occupies(st[first], zone, radius)) {
    ++first;
  }
  if (first == st.size()) {
    return std::nullopt;
  }
  if (first == *i0) {
    while (first > 0 && occupies(st[first - 1], zone, radius)) {
      --first;
    }
  }
  std::size_t last = std::max(first, *i0);
  while (last + 1 < st.size() && occupies(st[last + 1], zone, radius)) {
    ++last;
  }
  ZonePassage passage{st[first].t, st[last].t};
  if (first > 0) {
    passage.t_enter = detail::refine_boundary(st[first - 1], st[first], true, zone, radius);
  }
  if (last + 1 < st.size()) {
    passage.t_exit = detail::refine_boundary(st[last], st[last + 1], false, zone, radius);
  }
  return passage;
}

namespace detail
{

struct OrderedPassages
{
  ZonePassage first;
  ZonePassage second;
};

/// "First" is the agent that leaves the zone earlier; ties go to the
/// smaller agent id.
inline std::optional<OrderedPassages> ordered_passages(
  const Track & track_a, const Track & track_b, const ConflictZone & zone)
{
  const auto pa = zone_passage(track_a, zone);
  const auto pb = zone_passage(track_b, zone);
  if (!pa || !pb) {
    return std::nullopt;
  }
  const bool a_first =
    pa->t_exit < pb->t_exit || (pa->t_exit == pb->t_exit && track_a.agent_id <= track_b.agent_id);
  return a_first ? OrderedPassages{*pa, *pb} : OrderedPassages{*pb, *pa};
}

}  // namespace detail

/// Post-encroachment time, floored at 0 for simultaneous occupancy.
inline MaybeReal pet(const Track & track_a, const Track & track_b, const ConflictZone & zone)
{
  const auto p = detail::ordered_passages(track_a, track_b, zone);
  if (!p) {
    return std::nullopt;
  }
  return std::max(0.0, p->second.t_enter - p->first.t_exit);
}

/// Time the track spends in the zone.
inline MaybeReal et(const Track & track, const ConflictZone & zone)
{
  const auto p = zone_passage(track, zone);
  if (!p) {
    return std::nullopt;
  }
  return p->t_exit - p->t_enter;
}

/// Encroachment time of the pair: occupancy duration of the first agent.
inline MaybeReal et_pair(const Track & track_a, const Track & track_b, const ConflictZone & zone)
{
  const auto p = detail::ordered_passages(track_a, track_b, zone);
  if (!p) {
    return std::nullopt;
  }
  return p->first.t_exit - p->first.t_enter;
}

/// Constant-speed prediction of one agent's zone occupancy, in seconds from
/// now.
struct PredictedPassage
{
  double t_enter{0.0};
  double t_exit{0.0};
};

/// Gap between the first predicted exit and the other agent's predicted
/// entry; ties in exit time order by argument position.
inline double gap_time(const PredictedPassage & a, const PredictedPassage & b)
{
  const bool a_first = a.t_exit <= b.t_exit;
  const auto & first = a_first ? a : b;
  const auto & second = a_first ? b : a;
  return std::max(0.0, second.t_enter - first.t_exit);
}

/// Predicted zone occupancy from arc lengths to zone entry and exit of the
/// center, extended by half the vehicle length on both sides.
inline PredictedPassage predict_passage(double arc_in, double arc_out, double length, double speed)
{
  return {std::max(0.0, arc_in - 0.5 * length) / speed, (arc_out + 0.5 * length) / speed};
}

/// Gap time: PET predicted from the current scene at constant speeds.
inline MaybeReal gt(const Scene & scene, const ConflictZone & zone, double min_speed = 0.1)
{
  const AgentState * a = scene.find(zone.agent_a);
  const AgentState * b = scene.find(zone.agent_b);
  if (a == nullptr || b == nullptr || a->speed <= min_speed || b->speed <= min_speed) {
    return std::nullopt;
  }
  const auto pa = predict_passage(zone.arc_a, zone.exit_a, a->length, a->speed);
  const auto pb = predict_passage(zone.arc_b, zone.exit_b, b->length, b->speed);
  return zone.agent_a <= zone.agent_b ? gap_time(pa, pb) : gap_time(pb, pa);
}

enum class ZoneSide { a, b };

/// Path distance to the zone entry.
inline double trajectory_distance(const ConflictZone & zone, ZoneSide which)
{
  return which == ZoneSide::a ? zone.arc_a : zone.arc_b;
}

}  // namespace scenefp

#endif  // SCENEFP__PAIRWISE_METRICS_HPP_
