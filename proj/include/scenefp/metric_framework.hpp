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

#ifndef SCENEFP__METRIC_FRAMEWORK_HPP_
#define SCENEFP__METRIC_FRAMEWORK_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/scene_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <typeindex>
#include <unordered_map>
#include <vector>

namespace scenefp
{

/// A real value that may be undefined ("metric not applicable").
using MaybeReal = std::optional<double>;

enum class MetricGroup { TrafficQuality, Intersection, Universal, Following };

enum class Direction {
  DecreasingCriticality,  ///< small raw value is critical (TTC, distances)
  IncreasingCriticality,  ///< large raw value is critical (TQ, SP)
};

enum class Aggregation { max, mean, min };

inline std::string_view to_string(MetricGroup g)
{
  switch (g) {
    case MetricGroup::TrafficQuality:
      return "TrafficQuality";
    case MetricGroup::Intersection:
      return "Intersection";
    case MetricGroup::Universal:
      return "Universal";
    case MetricGroup::Following:
      break;
  }
  return "Following";
}

inline constexpr MetricGroup all_groups[] = {
  MetricGroup::TrafficQuality, MetricGroup::Intersection, MetricGroup::Universal,
  MetricGroup::Following};

inline std::string_view to_string(Aggregation a)
{
  switch (a) {
    case Aggregation::max:
      return "max";
    case Aggregation::mean:
      return "mean";
    case Aggregation::min:
      break;
  }
  return "min";
}

inline Aggregation parse_aggregation(std::string_view s)
{
  if (s == "max") {
    return Aggregation::max;
  }
  if (s == "mean") {
    return Aggregation::mean;
  }
  if (s == "min") {
    return Aggregation::min;
  }
  throw ConfigError("unknown aggregation '" + std::string(s) + "'");
}

struct MetricDescriptor
{
  std::string name;
  MetricGroup group{MetricGroup::Universal};
  Direction direction{Direction::DecreasingCriticality};
  double alpha{1.0};
  Aggregation aggregation{Aggregation::max};

  bool operator==(const MetricDescriptor &) const = default;
};

/// Maps a raw value onto [0, 1], 1 being critical. Decreasing metrics go
/// through exp(-alpha * raw); increasing metrics are already oriented and
/// only clamped.
inline MaybeReal normalize(MaybeReal raw, const MetricDescriptor & d)
{
  if (!raw) {
    return std::nullopt;
  }
  if (*raw < 0.0 || std::isnan(*raw)) {
    throw DomainError("metric '" + d.name + "': negative raw value");
  }
  if (d.direction == Direction::DecreasingCriticality) {
    return std::exp(-d.alpha * *raw);
  }
  return std::clamp(*raw, 0.0, 1.0);
}

/// Permutation-invariant reduction. The mean sums in sorted order so that
/// reordering the input cannot change the last bit.
inline MaybeReal aggregate(std::span<const double> values, Aggregation fn)
{
  if (values.empty()) {
    return std::nullopt;
  }
  switch (fn) {
    case Aggregation::max:
      return *std::max_element(values.begin(), values.end());
    case Aggregation::min:
      return *std::min_element(values.begin(), values.end());
    case Aggregation::mean:
      break;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

struct Scope
{
  enum class Kind { scene, pair, agent };
  Kind kind{Kind::scene};
  AgentId first;
  AgentId second;

  static Scope whole_scene() { return {}; }
  static Scope pair(AgentId a, AgentId b) { return {Kind::pair, std::move(a), std::move(b)}; }
  static Scope agent(AgentId a) { return {Kind::agent, std::move(a), {}}; }

  bool operator==(const Scope &) const = default;
};

struct MetricValue
{
  MetricDescriptor descriptor;
  Scope scope;
  MaybeReal raw;
  MaybeReal normalized;

  bool operator==(const MetricValue &) const = default;
};

struct SceneEvaluation
{
  double t{0.0};
  /// Registry order, for reporting.
  std::vector<std::string> order;
  /// Scene-level value of every registered metric.
  std::map<std::string, MetricValue> values;
  /// Per-pair and per-agent values behind each scene value.
  std::map<std::string, std::vector<MetricValue>> details;

  const MetricValue * find(const std::string & name) const
  {
    const auto it = values.find(name);
    return it == values.end() ? nullptr : &it->second;
  }

  bool operator==(const SceneEvaluation &) const = default;
};

struct EvaluationConfig
{
  /// Pedestrians and bicycles take part in vehicle-only metrics.
  bool include_vru{false};
  std::map<std::string, double> alpha;
  std::map<std::string, Aggregation> aggregation;
  std::size_t workers{1};
};

/// Everything a metric may look at for one scene. Derived data shared
/// between metrics (conflict zones, claimed sets) goes through `cached`.
class SceneContext
{
public:
  SceneContext(const Scenario & scenario, Scene scene, const EvaluationConfig & config)
  : scenario_(scenario), scene_(std::move(scene)), config_(config)
  {
  }

  const Scenario & scenario() const { return scenario_; }
  const Scene & scene() const { return scene_; }
  const EvaluationConfig & config() const { return config_; }

  /// Agents that count as vehicles under the current configuration.
  std::vector<AgentState> vehicles() const
  {
    std::vector<AgentState> out;
    for (const auto & s : scene_.states) {
      if (config_.include_vru || !is_vulnerable(s.classification)) {
        out.push_back(s);
      }
    }
    return out;
  }

  template <typename T, typename Make>
  const T & cached(Make && make) const
  {
    std::lock_guard lock(mutex_);
    auto & slot = cache_[std::type_index(typeid(T))];
    if (!slot) {
      slot = std::make_shared<T>(make());
    }
    return *std::static_pointer_cast<const T>(slot);
  }

private:
  const Scenario & scenario_;
  Scene scene_;
  const EvaluationConfig & config_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::type_index, std::shared_ptr<const void>> cache_;
};

struct ScopedRaw
{
  Scope scope;
  MaybeReal raw;
};

/// A criticality metric. Implementations are pure: the same context always
/// yields the same values.
class Metric
{
public:
  explicit Metric(MetricDescriptor descriptor) : descriptor_(std::move(descriptor)) {}
  virtual ~Metric() = default;

  const MetricDescriptor & descriptor() const { return descriptor_; }

  /// Raw values, one per pair, agent or the whole scene. Preconditions that
  /// do not hold yield undefined values or no entries.
  virtual std::vector<ScopedRaw> evaluate(const SceneContext & ctx) const = 0;

private:
  MetricDescriptor descriptor_;
};

using Registry = std::vector<std::shared_ptr<const Metric>>;

/// Reduces scoped values to the scene value. The scene raw value is the raw
/// value of the selected entry for max/min and the mean of raw values for
/// mean.
inline MetricValue reduce_to_scene(
  const MetricDescriptor & d, const std::vector<MetricValue> & entries)
{
  MetricValue out{d, Scope::whole_scene(), std::nullopt, std::nullopt};
  std::vector<double> normalized;
  std::vector<double> raws;
  for (const auto & e : entries) {
    if (e.normalized) {
      normalized.push_back(*e.normalized);
      raws.push_back(*e.raw);
    }
  }
  out.normalized = aggregate(normalized, d.aggregation);
  if (!out.normalized) {
    return out;
  }
  if (d.aggregation == Aggregation::mean) {
    out.raw = aggregate(raws, Aggregation::mean);
    return out;
  }
  // Among entries matching the selected normalized value prefer the most
  // critical raw value (clamping can map several raws onto 1.0).
  const bool decreasing = d.direction == Direction::DecreasingCriticality;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (normalized[i] != *out.normalized) {
      continue;
    }
    if (!out.raw || (decreasing ? raws[i] < *out.raw : raws[i] > *out.raw)) {
      out.raw = raws[i];
    }
  }
  return out;
}

/// Evaluates every registered metric on the scene at `t`.
inline SceneEvaluation evaluate_scene(
  const Scenario & scenario, double t, const Registry & registry, const EvaluationConfig & config)
{
  const SceneContext ctx(scenario, scene_at(scenario, t), config);
  SceneEvaluation ev;
  ev.t = ctx.scene().t;
  for (const auto & metric : registry) {
    MetricDescriptor d = metric->descriptor();
    if (const auto it = config.alpha.find(d.name); it != config.alpha.end()) {
      d.alpha = it->second;
    }
    if (const auto it = config.aggregation.find(d.name); it != config.aggregation.end()) {
      d.aggregation = it->second;
    }
    if (d.alpha <= 0.0) {
      throw ConfigError("metric '" + d.name + "': alpha must be positive");
    }
    std::vector<MetricValue> entries;
    for (auto & [scope, raw] : metric->evaluate(ctx)) {
      entries.push_back({d, std::move(scope), raw, normalize(raw, d)});
    }
    ev.order.push_back(d.name);
    ev.values.insert_or_assign(d.name, reduce_to_scene(d, entries));
    ev.details.insert_or_assign(d.name, std::move(entries));
  }
  return ev;
}

/// Evaluates many scenes on a pool of `config.workers` threads. Results are
/// returned in the order of `times` regardless of scheduling.
inline std::vector<SceneEvaluation> evaluate_scenes(
  const Scenario & scenario, std::span<const double> times, const Registry & registry,
  const EvaluationConfig & config)
{
  std::vector<SceneEvaluation> out(times.size());
  const std::size_t workers =
    std::max<std::size_t>(1, std::min<std::size_t>(config.workers, times.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      out[i] = evaluate_scene(scenario, times[i], registry, config);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < times.size(); i = next++) {
        try {
          out[i] = evaluate_scene(scenario, times[i], registry, config);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace scenefp

#endif  // SCENEFP__METRIC_FRAMEWORK_HPP_
