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

#ifndef SCENEFP__METRICS_HPP_
#define SCENEFP__METRICS_HPP_

#include "scenefp/fingerprint.hpp"
#include "scenefp/metric_framework.hpp"
#include "scenefp/pairwise_metrics.hpp"
#include "scenefp/safety_potential.hpp"
#include "scenefp/traffic_quality.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

// Adapters exposing the metric modules through the framework's Metric
// interface.

namespace scenefp
{

namespace detail
{

template <typename Fn>
void for_each_pair(const Scene & scene, Fn && fn)
{
  const auto & st = scene.states;
  for (std::size_t i = 0; i < st.size(); ++i) {
    for (std::size_t j = i + 1; j < st.size(); ++j) {
      fn(st[i], st[j]);
    }
  }
}

class LambdaMetric : public Metric
{
public:
  using Fn = std::function<std::vector<ScopedRaw>(const SceneContext &)>;

  LambdaMetric(MetricDescriptor d, Fn fn) : Metric(std::move(d)), fn_(std::move(fn)) {}

  std::vector<ScopedRaw> evaluate(const SceneContext & ctx) const override { return fn_(ctx); }

private:
  Fn fn_;
};

/// Conflict zones of every agent pair in the scene, shared by the
/// intersection metrics.
struct ZoneTable
{
  struct Entry
  {
    AgentId a;
    AgentId b;
    std::optional<ConflictZone> zone;
  };
  std::vector<Entry> entries;
};

inline const ZoneTable & zones(const SceneContext & ctx, const PairwiseConfig & cfg)
{
  return ctx.cached<ZoneTable>([&] {
    ZoneTable table;
    const auto & tracks = ctx.scenario().tracks;
    for_each_pair(ctx.scene(), [&](const AgentState & a, const AgentState & b) {
      table.entries.push_back(
        {a.agent_id, b.agent_id,
         conflict_zone(tracks.at(a.agent_id), tracks.at(b.agent_id), ctx.scene().t, cfg)});
    });
    return table;
  });
}

inline std::vector<ScopedRaw> over_zones(
  const SceneContext & ctx, const PairwiseConfig & cfg,
  const std::function<MaybeReal(const Track &, const Track &, const ConflictZone &)> & fn)
{
  std::vector<ScopedRaw> out;
  const auto & tracks = ctx.scenario().tracks;
  for (const auto & e : zones(ctx, cfg).entries) {
    if (e.zone) {
      out.push_back({Scope::pair(e.a, e.b), fn(tracks.at(e.a), tracks.at(e.b), *e.zone)});
    }
  }
  return out;
}

}  // namespace detail

struct MetricSettings
{
  PairwiseConfig pairwise;
  TqConfig tq;
  SafetyProcedureParams safety;
};

inline MetricDescriptor make_descriptor(const std::string & name)
{
  namespace m = metric_names;
  using G = MetricGroup;
  constexpr auto dec = Direction::DecreasingCriticality;
  constexpr auto inc = Direction::IncreasingCriticality;
  static const std::map<std::string, std::pair<G, Direction>> table = {
    {m::tq_macro, {G::TrafficQuality, inc}}, {m::tq_micro, {G::TrafficQuality, inc}},
    {m::tq_nano, {G::TrafficQuality, inc}},  {m::tq_indi, {G::TrafficQuality, inc}},
    {m::tj, {G::Intersection, dec}},         {m::gt, {G::Intersection, dec}},
    {m::et, {G::Intersection, dec}},         {m::pet, {G::Intersection, dec}},
    {m::sp, {G::Universal, inc}},            {m::wttc, {G::Universal, dec}},
    {m::dist, {G::Universal, dec}},          {m::ttc, {G::Following, dec}},
  };
  const auto it = table.find(name);
  if (it == table.end()) {
    throw ConfigError("unknown metric '" + name + "'");
  }
  return {name, it->second.first, it->second.second, 1.0, Aggregation::max};
}

/// Builds a metric by name.
inline std::shared_ptr<const Metric> make_metric(const std::string & name, const MetricSettings & s)
{
  namespace m = metric_names;
  using detail::LambdaMetric;
  auto d = make_descriptor(name);
  const PairwiseConfig pw = s.pairwise;
  const TqConfig tq = s.tq;
  const SafetyProcedureParams sp = s.safety;

  if (name == m::dist) {
    return std::make_shared<LambdaMetric>(d, [](const SceneContext & ctx) {
      std::vector<ScopedRaw> out;
      detail::for_each_pair(ctx.scene(), [&](const AgentState & a, const AgentState & b) {
        out.push_back({Scope::pair(a.agent_id, b.agent_id), euclidean_distance(a, b)});
      });
      return out;
    });
  }
  if (name == m::ttc) {
    return std::make_shared<LambdaMetric>(d, [pw](const SceneContext & ctx) {
      std::vector<ScopedRaw> out;
      detail::for_each_pair(ctx.scene(), [&](const AgentState & a, const AgentState & b) {
        if (const auto lf = leader_follower(a, b, pw.lateral_gate, pw.heading_gate)) {
          out.push_back(
            {Scope::pair(lf->follower->agent_id, lf->leader->agent_id),
             ttc(*lf->follower, *lf->leader)});
        }
      });
      return out;
    });
  }
  if (name == m::wttc) {
    return std::make_shared<LambdaMetric>(d, [](const SceneContext & ctx) {
      std::vector<ScopedRaw> out;
      detail::for_each_pair(ctx.scene(), [&](const AgentState & a, const AgentState & b) {
        out.push_back({Scope::pair(a.agent_id, b.agent_id), wttc(a, b)});
      });
      return out;
    });
  }
  if (name == m::tj) {
    return std::make_shared<LambdaMetric>(d, [pw](const SceneContext & ctx) {
      return detail::over_zones(ctx, pw, [](const Track &, const Track &, const ConflictZone & z) {
        return MaybeReal(std::max(
          trajectory_distance(z, ZoneSide::a), trajectory_distance(z, ZoneSide::b)));
      });
    });
  }
  if (name == m::gt) {
    return std::make_shared<LambdaMetric>(d, [pw](const SceneContext & ctx) {
      return detail::over_zones(
        ctx, pw, [&](const Track &, const Track &, const ConflictZone & z) {
          return gt(ctx.scene(), z, pw.min_speed);
        });
    });
  }
  if (name == m::et) {
    return std::make_shared<LambdaMetric>(d, [pw](const SceneContext & ctx) {
      return detail::over_zones(ctx, pw, [](const Track & a, const Track & b, const ConflictZone & z) {
        return et_pair(a, b, z);
      });
    });
  }
  if (name == m::pet) {
    return std::make_shared<LambdaMetric>(d, [pw](const SceneContext & ctx) {
      return detail::over_zones(ctx, pw, [](const Track & a, const Track & b, const ConflictZone & z) {
        return pet(a, b, z);
      });
    });
  }
  if (name == m::tq_macro || name == m::tq_micro || name == m::tq_nano) {
    return std::make_shared<LambdaMetric>(d, [tq, name](const SceneContext & ctx) {
      std::vector<ScopedRaw> out;
      const auto vehicles = ctx.vehicles();
      const MaybeReal macro = tq_macro(std::span<const AgentState>(vehicles), tq);
      for (const auto & ego : vehicles) {
        MaybeReal v = macro;
        if (name == metric_names::tq_micro) {
          v = tq_micro(vehicles, ego.agent_id, tq);
        } else if (name == metric_names::tq_nano) {
          v = tq_nano(vehicles, ego.agent_id, tq);
        }
        out.push_back({Scope::agent(ego.agent_id), v});
      }
      return out;
    });
  }
  if (name == m::tq_indi) {
    return std::make_shared<LambdaMetric>(d, [tq](const SceneContext & ctx) {
      std::vector<ScopedRaw> out;
      for (const auto & ego : ctx.vehicles()) {
        out.push_back(
          {Scope::agent(ego.agent_id),
           tq_indi(ctx.scenario().tracks.at(ego.agent_id), ctx.scene().t, tq)});
      }
      return out;
    });
  }
  // SP
  sp.validate();
  return std::make_shared<LambdaMetric>(d, [sp](const SceneContext & ctx) {
    const auto vehicles = ctx.vehicles();
    const auto result = scene_safety_potential(vehicles, ctx.scenario(), sp);
    std::vector<ScopedRaw> out;
    for (const auto & [id, value] : result.per_agent) {
      out.push_back({Scope::agent(id), value});
    }
    return out;
  });
}

/// Registry in default axis order, skipping disabled metrics.
inline Registry make_registry(
  const MetricSettings & s, const std::set<std::string> & disabled = {},
  const std::vector<std::string> & order = default_axis_order())
{
  Registry r;
  for (const auto & name : order) {
    if (disabled.count(name) == 0) {
      r.push_back(make_metric(name, s));
    }
  }
  return r;
}

}  // namespace scenefp

#endif  // SCENEFP__METRICS_HPP_
