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

#ifndef SCENEFP__FINGERPRINT_HPP_
#define SCENEFP__FINGERPRINT_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/metric_framework.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scenefp
{

/// Metric names as used in the registry and on the chart axes.
namespace metric_names
{
inline constexpr const char * tq_macro = "Macro";
inline constexpr const char * tq_micro = "Micro";
inline constexpr const char * tq_nano = "Nano";
inline constexpr const char * tq_indi = "Indi";
inline constexpr const char * tj = "TJ";
inline constexpr const char * gt = "GT";
inline constexpr const char * et = "ET";
inline constexpr const char * pet = "PET";
inline constexpr const char * sp = "SP";
inline constexpr const char * wttc = "WTTC";
inline constexpr const char * dist = "Dist";
inline constexpr const char * ttc = "TTC";
}  // namespace metric_names

/// Groups are contiguous so that group areas are well defined.
inline std::vector<std::string> default_axis_order()
{
  namespace m = metric_names;
  return {m::tq_macro, m::tq_micro, m::tq_nano, m::tq_indi, m::tj,   m::gt,
          m::et,       m::pet,      m::sp,      m::wttc,    m::dist, m::ttc};
}

struct Axis
{
  std::string name;
  MetricGroup group{MetricGroup::Universal};
  double radius{0.0};
  bool defined{false};

  bool operator==(const Axis &) const = default;
};

struct Fingerprint
{
  double t{0.0};
  std::vector<Axis> axes;
  double area_total{0.0};
  std::map<MetricGroup, double> area_by_group;

  std::vector<double> radii() const
  {
    std::vector<double> r;
    for (const auto & a : axes) {
      r.push_back(a.radius);
    }
    return r;
  }
};

/// Area of the radar polygon relative to the all-ones polygon:
/// (sum_i r_i r_{i+1}) / n.
inline double kiviat_area(std::span<const double> radii)
{
  const std::size_t n = radii.size();
  if (n < 3) {
    throw DomainError("kiviat_area needs at least 3 axes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += radii[i] * radii[(i + 1) % n];
  }
  return sum / static_cast<double>(n);
}

/// Triangles between consecutive axes of the same group, relative to the
/// full all-ones polygon.
inline double group_area(const Fingerprint & fp, MetricGroup group)
{
  const std::size_t n = fp.axes.size();
  if (n < 3) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto & a = fp.axes[i];
    const auto & b = fp.axes[(i + 1) % n];
    if (a.group == group && b.group == group) {
      sum += a.radius * b.radius;
    }
  }
  return sum / static_cast<double>(n);
}

/// One axis per evaluated metric: first the configured order, then any
/// remaining metrics in registry order. Undefined metrics get radius 0.
inline Fingerprint build_fingerprint(
  const SceneEvaluation & ev, const std::vector<std::string> & axis_order = default_axis_order())
{
  Fingerprint fp;
  fp.t = ev.t;
  std::vector<std::string> names;
  for (const auto & n : axis_order) {
    if (ev.values.count(n) != 0 && std::find(names.begin(), names.end(), n) == names.end()) {
      names.push_back(n);
    }
  }
  for (const auto & n : ev.order) {
    if (std::find(names.begin(), names.end(), n) == names.end()) {
      names.push_back(n);
    }
  }
  for (const auto & n : names) {
    const auto & v = ev.values.at(n);
    fp.axes.push_back({n, v.descriptor.group, v.normalized.value_or(0.0), v.normalized.has_value()});
  }
  fp.area_total = kiviat_area(fp.radii());
  for (auto g : all_groups) {
    fp.area_by_group[g] = group_area(fp, g);
  }
  return fp;
}

struct ThresholdCircle
{
  std::vector<double> radii;
  double area{0.0};
};

inline constexpr double default_threshold_raw = 1.5;

/// Reference polygon marking the critical boundary. Decreasing metrics map
/// their raw threshold through normalize(); increasing metrics use
/// `increasing_radius` directly.
inline ThresholdCircle threshold_circle(
  const std::vector<MetricDescriptor> & axes, const std::map<std::string, double> & thresholds,
  double default_threshold = default_threshold_raw,
  std::optional<double> increasing_radius = std::nullopt)
{
  const double inc = increasing_radius.value_or(std::exp(-default_threshold_raw));
  ThresholdCircle tc;
  for (const auto & d : axes) {
    if (d.direction == Direction::DecreasingCriticality) {
      const auto it = thresholds.find(d.name);
      const double raw = it == thresholds.end() ? default_threshold : it->second;
      tc.radii.push_back(*normalize(raw, d));
    } else {
      tc.radii.push_back(std::clamp(inc, 0.0, 1.0));
    }
  }
  tc.area = kiviat_area(tc.radii);
  return tc;
}

/// Ground truth: critical when any selected metric is defined with a raw
/// value at or below the threshold.
inline bool classify_scene(
  const SceneEvaluation & ev, const std::vector<std::string> & ground_truth,
  double threshold_raw = default_threshold_raw)
{
  for (const auto & name : ground_truth) {
    const auto * v = ev.find(name);
    if (v != nullptr && v->raw && *v->raw <= threshold_raw) {
      return true;
    }
  }
  return false;
}

/// Critical when the metric's normalized value reaches the radius threshold.
inline bool predict_from_metric(
  const SceneEvaluation & ev, const std::string & metric,
  double radius_threshold = std::exp(-default_threshold_raw))
{
  const auto * v = ev.find(metric);
  return v != nullptr && v->normalized && *v->normalized >= radius_threshold;
}

struct ConfusionCounts
{
  double tp{0.0};
  double tn{0.0};
  double fp{0.0};
  double fn{0.0};
};

struct ConfusionReport
{
  ConfusionCounts counts;
  MaybeReal sensitivity;
  MaybeReal specificity;
};

/// Rescales fractions so they sum to 1, then derives the rates.
inline ConfusionReport confusion_from_fractions(ConfusionCounts c)
{
  const double total = c.tp + c.tn + c.fp + c.fn;
  if (!(total > 0.0) || c.tp < 0.0 || c.tn < 0.0 || c.fp < 0.0 || c.fn < 0.0) {
    throw DomainError("confusion fractions must be non-negative with a positive sum");
  }
  c = {c.tp / total, c.tn / total, c.fp / total, c.fn / total};
  ConfusionReport r{c, std::nullopt, std::nullopt};
  if (c.tp + c.fn > 0.0) {
    r.sensitivity = c.tp / (c.tp + c.fn);
  }
  if (c.tn + c.fp > 0.0) {
    r.specificity = c.tn / (c.tn + c.fp);
  }
  return r;
}

inline ConfusionReport confusion(const std::vector<bool> & predicted, const std::vector<bool> & actual)
{
  if (predicted.size() != actual.size()) {
    throw DomainError("confusion: predicted and actual differ in length");
  }
  if (predicted.empty()) {
    throw DomainError("confusion: no scenes");
  }
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      actual[i] ? ++tp : ++fp;
    } else {
      actual[i] ? ++fn : ++tn;
    }
  }
  const double n = static_cast<double>(predicted.size());
  return confusion_from_fractions({tp / n, tn / n, fp / n, fn / n});
}

}  // namespace scenefp

#endif  // SCENEFP__FINGERPRINT_HPP_
