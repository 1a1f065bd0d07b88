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

#ifndef SCENEFP__CONFIG_HPP_
#define SCENEFP__CONFIG_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/fingerprint.hpp"
#include "scenefp/metric_framework.hpp"
#include "scenefp/metrics.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace scenefp
{

/// Every tunable of an evaluation run. Loaded from an INI file with one
/// section per module; `to_ini` writes the complete effective set.
struct Settings
{
  std::string schema{"interaction"};
  EvaluationConfig evaluation;
  MetricSettings metrics;
  std::set<std::string> disabled;
  std::vector<std::string> axis_order{default_axis_order()};
  double threshold{default_threshold_raw};
  std::map<std::string, double> thresholds;
  double increasing_radius{std::exp(-default_threshold_raw)};
  std::vector<std::string> ground_truth{metric_names::ttc, metric_names::pet};
  double ground_truth_threshold{default_threshold_raw};
  double prediction_radius{std::exp(-default_threshold_raw)};

  /// Enabled metrics, configured axis order first.
  Registry registry() const
  {
    std::vector<std::string> order = axis_order;
    for (const auto & n : default_axis_order()) {
      if (std::find(order.begin(), order.end(), n) == order.end()) {
        order.push_back(n);
      }
    }
    return make_registry(metrics, disabled, order);
  }

  std::vector<MetricDescriptor> descriptors() const
  {
    std::vector<MetricDescriptor> out;
    for (const auto & m : registry()) {
      MetricDescriptor d = m->descriptor();
      if (auto it = evaluation.alpha.find(d.name); it != evaluation.alpha.end()) {
        d.alpha = it->second;
      }
      out.push_back(d);
    }
    return out;
  }

  ThresholdCircle circle() const
  {
    return threshold_circle(descriptors(), thresholds, threshold, increasing_radius);
  }
};

namespace detail
{

inline std::string format_real(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double to_real(const std::string & key, const std::string & text)
{
  double v = 0.0;
  const auto * b = text.data();
  const auto * e = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
    throw ConfigError("'" + key + "': not a number: '" + text + "'");
  }
  return v;
}

inline bool to_bool(const std::string & key, const std::string & text)
{
  if (text == "true" || text == "on" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "off" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError("'" + key + "': not a boolean: '" + text + "'");
}

inline std::vector<std::string> split_list(const std::string & text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) {
      out.emplace_back(t);
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string> & items)
{
  std::string out;
  for (const auto & s : items) {
    if (!out.empty()) {
      out += ',';
    }
    out += s;
  }
  return out;
}

constexpr double deg = std::numbers::pi / 180.0;

}  // namespace detail

/// Applies the keys present in `tree` on top of `s`. Unknown sections or
/// keys are errors.
inline void apply_settings(Settings & s, const boost::property_tree::ptree & tree)
{
  using detail::to_bool;
  using detail::to_real;
  auto & pw = s.metrics.pairwise;
  auto & tq = s.metrics.tq;
  auto & sp = s.metrics.safety;
  const std::map<std::string, std::map<std::string, double *>> reals = {
    {"pairwise",
     {{"lateral_gate", &pw.lateral_gate},
      {"heading_gate", &pw.heading_gate},
      {"zone_horizon", &pw.zone_horizon},
      {"zone_min_angle", &pw.zone_min_angle},
      {"min_speed", &pw.min_speed}}},
    {"traffic_quality",
     {{"a_brake", &tq.a_brake},
      {"t_react", &tq.t_react},
      {"nu_ref", &tq.nu_ref},
      {"a_ref", &tq.a_ref},
      {"window", &tq.window},
      {"eps_speed", &tq.eps_speed}}},
    {"safety_potential",
     {{"a_min", &sp.a_min},
      {"a_slow", &sp.a_slow},
      {"t_react", &sp.t_react},
      {"horizon", &sp.horizon},
      {"dt_proc", &sp.dt_proc},
      {"margin", &sp.margin},
      {"rho_scale", &sp.rho_scale}}},
    {"fingerprint", {{"threshold", &s.threshold}, {"increasing_radius", &s.increasing_radius}}},
    {"classification",
     {{"threshold", &s.ground_truth_threshold}, {"prediction_radius", &s.prediction_radius}}},
  };

  for (const auto & [section, body] : tree) {
    for (const auto & [key, node] : body) {
      const std::string value = node.get_value<std::string>();
      const std::string where = section + "." + key;
      if (const auto sec = reals.find(section); sec != reals.end()) {
        if (const auto k = sec->second.find(key); k != sec->second.end()) {
          *k->second = to_real(where, value);
          continue;
        }
      }
      if (section == "scene" && key == "schema") {
        s.schema = value;
      } else if (section == "scene" && key == "include_vru") {
        s.evaluation.include_vru = to_bool(where, value);
      } else if (section == "run" && key == "workers") {
        const double w = to_real(where, value);
        if (w < 1.0 || w != std::floor(w)) {
          throw ConfigError("run.workers must be a positive integer");
        }
        s.evaluation.workers = static_cast<std::size_t>(w);
      } else if (section == "pairwise" && key == "heading_gate_deg") {
        pw.heading_gate = to_real(where, value) * detail::deg;
      } else if (section == "pairwise" && key == "zone_min_angle_deg") {
        pw.zone_min_angle = to_real(where, value) * detail::deg;
      } else if (section == "metrics") {
        make_descriptor(key);
        if (to_bool(where, value)) {
          s.disabled.erase(key);
        } else {
          s.disabled.insert(key);
        }
      } else if (section == "alpha") {
        make_descriptor(key);
        const double a = to_real(where, value);
        if (!(a > 0.0)) {
          throw ConfigError(where + ": alpha must be positive");
        }
        s.evaluation.alpha[key] = a;
      } else if (section == "aggregation") {
        make_descriptor(key);
        s.evaluation.aggregation[key] = parse_aggregation(value);
      } else if (section == "thresholds") {
        make_descriptor(key);
        s.thresholds[key] = to_real(where, value);
      } else if (section == "fingerprint" && key == "axis_order") {
        auto order = detail::split_list(value);
        for (const auto & n : order) {
          make_descriptor(n);
        }
        s.axis_order = std::move(order);
      } else if (section == "classification" && key == "ground_truth") {
        auto gt = detail::split_list(value);
        for (const auto & n : gt) {
          make_descriptor(n);
        }
        s.ground_truth = std::move(gt);
      } else {
        throw ConfigError("unknown config key '" + where + "'");
      }
    }
  }
  s.metrics.safety.validate();
  const auto & t = s.metrics.tq;
  if (!(t.a_brake > 0 && t.t_react > 0 && t.nu_ref > 0 && t.a_ref > 0 && t.window > 0 && t.eps_speed > 0)) {
    throw ConfigError("traffic_quality parameters must be positive");
  }
  if (!(pw.zone_min_angle > 0.0 && pw.zone_horizon > 0.0)) {
    throw ConfigError("pairwise zone parameters must be positive");
  }
}

inline Settings load_settings(std::istream & in, Settings base = {})
{
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error & e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  apply_settings(base, tree);
  return base;
}

/// The complete effective configuration, every numeric parameter included.
inline std::string to_ini(const Settings & s)
{
  using detail::format_real;
  std::ostringstream out;
  const auto & pw = s.metrics.pairwise;
  const auto & tq = s.metrics.tq;
  const auto & sp = s.metrics.safety;
  out << "[scene]\n"
      << "schema=" << s.schema << "\n"
      << "include_vru=" << (s.evaluation.include_vru ? "true" : "false") << "\n\n"
      << "[run]\n"
      << "workers=" << s.evaluation.workers << "\n\n"
      << "[pairwise]\n"
      << "lateral_gate=" << format_real(pw.lateral_gate) << "\n"
      << "heading_gate=" << format_real(pw.heading_gate) << "\n"
      << "zone_horizon=" << format_real(pw.zone_horizon) << "\n"
      << "zone_min_angle=" << format_real(pw.zone_min_angle) << "\n"
      << "min_speed=" << format_real(pw.min_speed) << "\n\n"
      << "[traffic_quality]\n"
      << "a_brake=" << format_real(tq.a_brake) << "\n"
      << "t_react=" << format_real(tq.t_react) << "\n"
      << "nu_ref=" << format_real(tq.nu_ref) << "\n"
      << "a_ref=" << format_real(tq.a_ref) << "\n"
      << "window=" << format_real(tq.window) << "\n"
      << "eps_speed=" << format_real(tq.eps_speed) << "\n\n"
      << "[safety_potential]\n"
      << "a_min=" << format_real(sp.a_min) << "\n"
      << "a_slow=" << format_real(sp.a_slow) << "\n"
      << "t_react=" << format_real(sp.t_react) << "\n"
      << "horizon=" << format_real(sp.horizon) << "\n"
      << "dt_proc=" << format_real(sp.dt_proc) << "\n"
      << "margin=" << format_real(sp.margin) << "\n"
      << "rho_scale=" << format_real(sp.rho_scale) << "\n\n";
  const auto all = default_axis_order();
  out << "[metrics]\n";
  for (const auto & n : all) {
    out << n << "=" << (s.disabled.count(n) ? "off" : "on") << "\n";
  }
  out << "\n[alpha]\n";
  for (const auto & n : all) {
    const auto it = s.evaluation.alpha.find(n);
    out << n << "=" << format_real(it == s.evaluation.alpha.end() ? 1.0 : it->second) << "\n";
  }
  out << "\n[aggregation]\n";
  for (const auto & n : all) {
    const auto it = s.evaluation.aggregation.find(n);
    out << n << "="
        << to_string(it == s.evaluation.aggregation.end() ? Aggregation::max : it->second) << "\n";
  }
  out << "\n[thresholds]\n";
  for (const auto & n : all) {
    if (make_descriptor(n).direction == Direction::DecreasingCriticality) {
      const auto it = s.thresholds.find(n);
      out << n << "=" << format_real(it == s.thresholds.end() ? s.threshold : it->second) << "\n";
    }
  }
  out << "\n[fingerprint]\n"
      << "axis_order=" << detail::join(s.axis_order) << "\n"
      << "threshold=" << format_real(s.threshold) << "\n"
      << "increasing_radius=" << format_real(s.increasing_radius) << "\n\n"
      << "[classification]\n"
      << "ground_truth=" << detail::join(s.ground_truth) << "\n"
      << "threshold=" << format_real(s.ground_truth_threshold) << "\n"
      << "prediction_radius=" << format_real(s.prediction_radius) << "\n";
  return out.str();
}

}  // namespace scenefp

#endif  // SCENEFP__CONFIG_HPP_
