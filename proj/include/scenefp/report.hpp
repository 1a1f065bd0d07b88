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

#ifndef SCENEFP__REPORT_HPP_
#define SCENEFP__REPORT_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/fingerprint.hpp"
#include "scenefp/metric_framework.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace scenefp
{

/// Everything reported for one scene.
struct SceneReport
{
  SceneEvaluation evaluation;
  Fingerprint fingerprint;
  double threshold_area{0.0};
  bool critical_prediction{false};
  bool ground_truth{false};
};

namespace detail
{

inline std::string shortest(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string fixed(double v, int precision = 3)
{
  if (v == 0.0) {
    v = 0.0;  // drop negative zero
  }
  char buf[64];
  const auto [ptr, ec] =
    std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  std::string s(buf, ptr);
  if (s.find_first_not_of("-0.") == std::string::npos) {
    return std::string(precision > 0 ? "0." + std::string(precision, '0') : "0");
  }
  return s;
}

inline nlohmann::json maybe(const MaybeReal & v)
{
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const SceneReport & r)
{
  nlohmann::json j;
  j["t"] = r.evaluation.t;
  auto & axes = j["axes"] = nlohmann::json::array();
  for (const auto & a : r.fingerprint.axes) {
    const auto & v = r.evaluation.values.at(a.name);
    axes.push_back({
      {"name", a.name},
      {"group", std::string(to_string(a.group))},
      {"raw", detail::maybe(v.raw)},
      {"normalized", detail::maybe(v.normalized)},
    });
  }
  j["area_total"] = r.fingerprint.area_total;
  auto & groups = j["area_by_group"] = nlohmann::json::object();
  for (const auto & [g, area] : r.fingerprint.area_by_group) {
    groups[std::string(to_string(g))] = area;
  }
  j["threshold_area"] = r.threshold_area;
  j["critical_prediction"] = r.critical_prediction;
  j["ground_truth"] = r.ground_truth;
  return j;
}

/// Header row for the summary CSV; metric columns follow the axis order.
inline void write_summary_header(std::ostream & out, const Fingerprint & layout)
{
  out << "t";
  for (const auto & a : layout.axes) {
    out << ',' << a.name << "_raw," << a.name << "_norm";
  }
  out << ",area_total";
  for (auto g : all_groups) {
    out << ",area_" << to_string(g);
  }
  out << ",critical_prediction,ground_truth\n";
}

/// One summary row; undefined values are written as NA.
inline void write_summary_row(std::ostream & out, const SceneReport & r)
{
  auto cell = [&](const MaybeReal & v) { out << ',' << (v ? detail::shortest(*v) : "NA"); };
  out << detail::shortest(r.evaluation.t);
  for (const auto & a : r.fingerprint.axes) {
    const auto & v = r.evaluation.values.at(a.name);
    cell(v.raw);
    cell(v.normalized);
  }
  out << ',' << detail::shortest(r.fingerprint.area_total);
  for (auto g : all_groups) {
    out << ',' << detail::shortest(r.fingerprint.area_by_group.at(g));
  }
  out << ',' << (r.critical_prediction ? 1 : 0) << ',' << (r.ground_truth ? 1 : 0) << '\n';
}

/// Radar chart of up to three fingerprints sharing one axis layout, with
/// group shading and an optional threshold polygon. Output depends only on
/// the inputs.
inline void write_svg(
  std::ostream & out, std::span<const Fingerprint> fingerprints,
  const ThresholdCircle * threshold = nullptr)
{
  if (fingerprints.empty() || fingerprints.size() > 3) {
    throw DomainError("a chart holds between one and three fingerprints");
  }
  using detail::fixed;
  const auto & layout = fingerprints.front().axes;
  const std::size_t n = layout.size();
  for (const auto & fp : fingerprints) {
    if (fp.axes.size() != n) {
      throw DomainError("overlaid fingerprints must share the axis layout");
    }
  }
  constexpr double size = 640.0;
  constexpr double c = size / 2.0;
  constexpr double radius = 230.0;
  auto point = [&](std::size_t i, double r) {
    const double angle =
      -std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    return Vec2{c + radius * r * std::cos(angle), c + radius * r * std::sin(angle)};
  };
  auto points_attr = [&](std::span<const double> radii) {
    std::string s;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const Vec2 p = point(i, radii[i]);
      s += (i ? " " : "") + fixed(p.x) + "," + fixed(p.y);
    }
    return s;
  };
  static const char * scene_colors[] = {"#2ca02c", "#9467bd", "#ff7f0e"};
  auto group_color = [](MetricGroup g) {
    switch (g) {
      case MetricGroup::TrafficQuality:
        return "#1f77b4";
      case MetricGroup::Intersection:
        return "#d62728";
      case MetricGroup::Universal:
        return "#17becf";
      case MetricGroup::Following:
        break;
    }
    return "#bcbd22";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(size, 0) << "\" height=\""
      << fixed(size, 0) << "\" viewBox=\"0 0 " << fixed(size, 0) << ' ' << fixed(size, 0) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (double r : {0.25, 0.5, 0.75, 1.0}) {
    out << "<circle cx=\"" << fixed(c) << "\" cy=\"" << fixed(c) << "\" r=\"" << fixed(radius * r)
        << "\"/>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = point(i, 1.0);
    out << "<line x1=\"" << fixed(c) << "\" y1=\"" << fixed(c) << "\" x2=\"" << fixed(p.x)
        << "\" y2=\"" << fixed(p.y) << "\"/>\n";
  }
  out << "</g>\n";

  // Group shading: fan of the group's own axes.
  for (const auto & fp : fingerprints) {
    for (auto g : all_groups) {
      std::string pts;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (fp.axes[i].group == g) {
          const Vec2 p = point(i, fp.axes[i].radius);
          pts += " " + fixed(p.x) + "," + fixed(p.y);
          ++count;
        }
      }
      if (count >= 2 && group_area(fp, g) > 0.0) {
        out << "<polygon class=\"group\" data-group=\"" << to_string(g) << "\" points=\""
            << fixed(c) << "," << fixed(c) << pts << "\" fill=\"" << group_color(g)
            << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
      }
    }
  }
  if (threshold != nullptr && threshold->radii.size() == n) {
    out << "<polygon class=\"threshold\" points=\"" << points_attr(threshold->radii)
        << "\" fill=\"none\" stroke=\"#8c564b\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (std::size_t k = 0; k < fingerprints.size(); ++k) {
    const auto radii = fingerprints[k].radii();
    out << "<polygon class=\"fingerprint\" data-t=\"" << detail::shortest(fingerprints[k].t)
        << "\" points=\"" << points_attr(radii) << "\" fill=\"" << scene_colors[k]
        << "\" fill-opacity=\"0.25\" stroke=\"" << scene_colors[k] << "\" stroke-width=\"2\"/>\n";
  }
  out << "<g font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = point(i, 1.12);
    out << "<text x=\"" << fixed(p.x) << "\" y=\"" << fixed(p.y + 5.0) << "\">" << layout[i].name
        << "</text>\n";
  }
  for (std::size_t k = 0; k < fingerprints.size(); ++k) {
    out << "<text x=\"" << fixed(20.0) << "\" y=\"" << fixed(24.0 + 18.0 * static_cast<double>(k))
        << "\" text-anchor=\"start\" fill=\"" << scene_colors[k] << "\">t="
        << detail::shortest(fingerprints[k].t) << " s, area=" << fixed(fingerprints[k].area_total, 4)
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace scenefp

#endif  // SCENEFP__REPORT_HPP_
