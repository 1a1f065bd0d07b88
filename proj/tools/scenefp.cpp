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

// scenefp: evaluate, fingerprint and classify scenes of a recording.

#include "scenefp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace scenefp;

namespace
{

enum Exit : int { ok = 0, input_error = 1, config_error = 2, internal_error = 3 };

struct Options
{
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::string> schema;
  std::optional<double> time;
  std::optional<double> from;
  std::optional<double> to;
  bool all{false};
  std::optional<std::string> config;
  std::string out{"scenefp_out"};
  std::vector<std::string> formats;
  std::vector<double> overlay;
  std::vector<std::string> ground_truth;
  std::optional<double> threshold;
};

/// Files written so far; removed again if the run fails.
class OutputSet
{
public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string & name)
  {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
    const fs::path p = dir_ / name;
    files_.push_back(p);
    std::ofstream f(p, std::ios::binary);
    if (!f) {
      throw InputError("cannot write '" + p.string() + "'");
    }
    return f;
  }

  void rollback() noexcept
  {
    std::error_code ec;
    for (const auto & p : files_) {
      fs::remove(p, ec);
    }
    if (created_dir_ && fs::is_empty(dir_, ec)) {
      fs::remove(dir_, ec);
    }
    files_.clear();
  }

private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool created_dir_{false};
};

std::string time_label(double t) { return "t" + detail::fixed(t, 3); }

Settings effective_settings(const Options & o)
{
  Settings s;
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) {
      throw ConfigError("cannot read config '" + *o.config + "'");
    }
    s = load_settings(in);
  }
  if (o.schema) {
    s.schema = *o.schema;
  }
  if (!o.ground_truth.empty()) {
    for (const auto & n : o.ground_truth) {
      make_descriptor(n);
    }
    s.ground_truth = o.ground_truth;
  }
  if (o.threshold) {
    s.ground_truth_threshold = *o.threshold;
  }
  try {
    schema_by_name(s.schema);
  } catch (const SchemaError & e) {
    throw ConfigError(e.what());
  }
  return s;
}

Scenario load_input(const std::string & path, const Settings & s)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read input '" + path + "'");
  }
  try {
    return parse_tracks(in, schema_by_name(s.schema));
  } catch (const InputError & e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<double> select_times(const Scenario & sc, const Options & o)
{
  if (!o.overlay.empty()) {
    std::vector<double> out;
    for (double t : o.overlay) {
      out.push_back(scene_at(sc, t).t);
    }
    return out;
  }
  if (o.time) {
    return {scene_at(sc, *o.time).t};
  }
  std::vector<double> out;
  for (double t : sc.frame_times()) {
    if ((!o.from || t >= *o.from - 1e-9) && (!o.to || t <= *o.to + 1e-9)) {
      out.push_back(t);
    }
  }
  return out;
}

std::string rate(const MaybeReal & v)
{
  return v ? detail::fixed(*v, 3) : std::string("n/a");
}

struct Loaded
{
  std::string prefix;
  Scenario scenario;
  std::vector<double> times;
};

int run(const Options & o)
{
  const Settings settings = effective_settings(o);
  std::set<std::string> formats(o.formats.begin(), o.formats.end());
  if (formats.empty()) {
    if (o.command == "evaluate") {
      formats = {"json", "csv"};
    } else if (o.command == "fingerprint") {
      formats = {"svg"};
    }
  }
  for (const auto & f : formats) {
    if (f != "json" && f != "csv" && f != "svg") {
      throw ConfigError("unknown output format '" + f + "'");
    }
  }
  if (o.overlay.size() > 3) {
    throw ConfigError("--overlay takes at most three scene times");
  }

  std::vector<Loaded> inputs;
  std::size_t selected = 0;
  for (const auto & path : o.inputs) {
    Loaded l;
    l.prefix = o.inputs.size() > 1 ? fs::path(path).stem().string() + "_" : "";
    l.scenario = load_input(path, settings);
    l.times = select_times(l.scenario, o);
    selected += l.times.size();
    inputs.push_back(std::move(l));
  }
  if (selected == 0) {
    std::cerr << "warning: no scenes selected, nothing written\n";
    return ok;
  }

  const Registry registry = settings.registry();
  const ThresholdCircle circle = settings.circle();
  OutputSet out(o.out);
  try {
    out.open("effective_config.ini") << to_ini(settings);
    std::vector<bool> gt_all, sp_all, tq_all;
    for (const auto & in : inputs) {
      const auto evals =
        evaluate_scenes(in.scenario, in.times, registry, settings.evaluation);
      if (in.times.empty()) {
        continue;
      }
      std::vector<SceneReport> reports;
      for (const auto & ev : evals) {
        SceneReport r{ev, build_fingerprint(ev, settings.axis_order), circle.area, false, false};
        r.critical_prediction = r.fingerprint.area_total >= circle.area;
        r.ground_truth =
          classify_scene(ev, settings.ground_truth, settings.ground_truth_threshold);
        reports.push_back(std::move(r));
      }
      const std::string base = in.prefix + "scene_";
      if (o.command == "evaluate" && formats.count("json")) {
        for (const auto & r : reports) {
          out.open(base + time_label(r.evaluation.t) + ".json") << to_json(r).dump(2) << '\n';
        }
      }
      if (o.command != "report" && formats.count("csv")) {
        auto f = out.open(in.prefix + "summary.csv");
        write_summary_header(f, reports.front().fingerprint);
        for (const auto & r : reports) {
          write_summary_row(f, r);
        }
      }
      if (o.command != "report" && formats.count("svg")) {
        if (!o.overlay.empty()) {
          std::vector<Fingerprint> fps;
          for (const auto & r : reports) {
            fps.push_back(r.fingerprint);
          }
          auto f = out.open(in.prefix + "overlay.svg");
          write_svg(f, fps, &circle);
        } else {
          for (const auto & r : reports) {
            auto f = out.open(base + time_label(r.evaluation.t) + ".svg");
            write_svg(f, std::span<const Fingerprint>(&r.fingerprint, 1), &circle);
          }
        }
      }
      if (o.command == "report") {
        // Threshold for the TQ group area: the circle's own TQ group area.
        Fingerprint circle_fp = reports.front().fingerprint;
        for (std::size_t i = 0; i < circle_fp.axes.size(); ++i) {
          circle_fp.axes[i].radius = circle.radii.at(i);
        }
        const double tq_threshold = group_area(circle_fp, MetricGroup::TrafficQuality);
        for (const auto & r : reports) {
          gt_all.push_back(r.ground_truth);
          sp_all.push_back(
            predict_from_metric(r.evaluation, metric_names::sp, settings.prediction_radius));
          tq_all.push_back(
            r.fingerprint.area_by_group.at(MetricGroup::TrafficQuality) >= tq_threshold);
        }
      }
    }
    if (o.command == "report") {
      std::ostringstream text;
      text << "metric   tp     tn     fp     fn     sens   spec\n";
      auto row = [&](const char * name, const std::vector<bool> & pred) {
        const auto c = confusion(pred, gt_all);
        char line[128];
        std::snprintf(
          line, sizeof(line), "%-8s %.3f  %.3f  %.3f  %.3f  ", name, c.counts.tp, c.counts.tn,
          c.counts.fp, c.counts.fn);
        text << line << rate(c.sensitivity) << "  " << rate(c.specificity) << '\n';
      };
      row("SP", sp_all);
      row("TQ-area", tq_all);
      const auto critical = static_cast<double>(std::count(gt_all.begin(), gt_all.end(), true));
      const double n = static_cast<double>(gt_all.size());
      text << "scenes " << gt_all.size() << "  critical " << detail::fixed(critical / n, 3)
           << "  non-critical " << detail::fixed((n - critical) / n, 3) << '\n';
      out.open("report.txt") << text.str();
      std::cout << text.str();
    }
  } catch (...) {
    out.rollback();
    throw;
  }
  return ok;
}

}  // namespace

int main(int argc, char ** argv)
{
  Options o;
  CLI::App app{"Scene criticality fingerprints from recorded trajectories"};
  app.require_subcommand(1, 1);
  for (const char * name : {"evaluate", "fingerprint", "report"}) {
    auto * sub = app.add_subcommand(
      name, name == std::string("evaluate")      ? "per-scene metric reports (json, csv)"
            : name == std::string("fingerprint") ? "radar charts (svg)"
                                                 : "confusion report against ground truth");
    sub->add_option("--input,-i", o.inputs, "trajectory CSV file(s)")->required();
    sub->add_option("--schema", o.schema, "column mapping: interaction, ind, canonical");
    auto * t = sub->add_option("--time", o.time, "single scene time [s]");
    auto * from = sub->add_option("--from", o.from, "first scene time [s]");
    auto * to = sub->add_option("--to", o.to, "last scene time [s]");
    auto * all = sub->add_flag("--all", o.all, "every frame (default)");
    t->excludes(from)->excludes(to)->excludes(all);
    all->excludes(from)->excludes(to);
    sub->add_option("--config,-c", o.config, "INI config file");
    sub->add_option("--out,-o", o.out, "output directory");
    sub->add_option("--formats", o.formats, "json, csv, svg")->delimiter(',');
    sub->add_option("--overlay", o.overlay, "up to three scene times in one chart")
      ->delimiter(',')
      ->excludes(t);
    sub->add_option("--ground-truth", o.ground_truth, "ground-truth metrics, e.g. TTC,PET")
      ->delimiter(',');
    sub->add_option("--threshold", o.threshold, "ground-truth threshold [s]");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    return run(o);
  } catch (const RangeError & e) {
    std::cerr << "range error: " << e.what() << '\n';
    return input_error;
  } catch (const InputError & e) {
    std::cerr << "input error: " << e.what() << '\n';
    return input_error;
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception & e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return internal_error;
  }
}
