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

#ifndef SCENEFP__SCENE_MODEL_HPP_
#define SCENEFP__SCENE_MODEL_HPP_

#include "scenefp/errors.hpp"
#include "scenefp/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scenefp
{

using AgentId = std::string;

enum class AgentClass { car, truck_bus, pedestrian, bicycle, other };

inline std::string_view to_string(AgentClass c)
{
  switch (c) {
    case AgentClass::car:
      return "car";
    case AgentClass::truck_bus:
      return "truck_bus";
    case AgentClass::pedestrian:
      return "pedestrian";
    case AgentClass::bicycle:
      return "bicycle";
    case AgentClass::other:
      break;
  }
  return "other";
}

/// Accepts the labels used by INTERACTION and inD style recordings.
inline AgentClass parse_agent_class(std::string_view label)
{
  std::string s(label);
  for (auto & ch : s) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (s == "car" || s == "van") {
    return AgentClass::car;
  }
  if (s == "truck_bus" || s == "truck" || s == "bus" || s == "truck/bus") {
    return AgentClass::truck_bus;
  }
  if (s == "pedestrian" || s == "pedestrian/bicycle") {
    return AgentClass::pedestrian;
  }
  if (s == "bicycle" || s == "cyclist") {
    return AgentClass::bicycle;
  }
  return AgentClass::other;
}

inline bool is_vulnerable(AgentClass c)
{
  return c == AgentClass::pedestrian || c == AgentClass::bicycle;
}

/// Kinematic snapshot of one traffic participant.
struct AgentState
{
  AgentId agent_id;
  double t{0.0};
  Vec2 position{};
  double heading{0.0};  ///< radians, counterclockwise, in [-pi, pi)
  Vec2 velocity{};
  double speed{0.0};
  double acceleration{0.0};  ///< signed, along the direction of motion
  double length{0.0};
  double width{0.0};
  AgentClass classification{AgentClass::car};

  Vec2 direction() const { return unit_from_angle(heading); }
  Polygon footprint() const { return oriented_rect(position, direction(), 0.5 * length, 0.5 * width); }

  bool operator==(const AgentState &) const = default;
};

struct Track
{
  AgentId agent_id;
  std::vector<AgentState> states;
  double dt{0.0};

  double t_begin() const { return states.front().t; }
  double t_end() const { return states.back().t; }

  /// Index of the state nearest to `t`, if one lies within dt/2.
  std::optional<std::size_t> index_at(double t) const
  {
    if (states.empty()) {
      return std::nullopt;
    }
    if (dt <= 0.0) {
      for (std::size_t i = 0; i < states.size(); ++i) {
        if (std::abs(states[i].t - t) <= 1e-9) {
          return i;
        }
      }
      return std::nullopt;
    }
    const double k = std::round((t - t_begin()) / dt);
    if (k < 0.0 || k >= static_cast<double>(states.size())) {
      return std::nullopt;
    }
    const auto i = static_cast<std::size_t>(k);
    if (std::abs(states[i].t - t) >= 0.5 * dt) {
      return std::nullopt;
    }
    return i;
  }

  const AgentState * state_at(double t) const
  {
    const auto i = index_at(t);
    return i ? &states[*i] : nullptr;
  }
};

/// Snapshot of every agent present at one timestamp.
struct Scene
{
  double t{0.0};
  std::vector<AgentState> states;

  const AgentState * find(const AgentId & id) const
  {
    for (const auto & s : states) {
      if (s.agent_id == id) {
        return &s;
      }
    }
    return nullptr;
  }
};

struct Scenario
{
  std::map<AgentId, Track> tracks;
  double dt{0.0};
  double t_min{0.0};
  double t_max{0.0};

  /// Every grid time between t_min and t_max.
  std::vector<double> frame_times() const
  {
    std::vector<double> times;
    if (tracks.empty()) {
      return times;
    }
    if (dt <= 0.0) {
      for (const auto & [id, track] : tracks) {
        for (const auto & s : track.states) {
          times.push_back(s.t);
        }
      }
      std::sort(times.begin(), times.end());
      times.erase(std::unique(times.begin(), times.end()), times.end());
      return times;
    }
    const auto steps = static_cast<std::size_t>(std::llround((t_max - t_min) / dt));
    times.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
      times.push_back(t_min + static_cast<double>(k) * dt);
    }
    return times;
  }
};

// ---------------------------------------------------------------------------
// CSV schema

enum class TimeUnit { milliseconds, seconds, frames };
enum class AngleUnit { radians, degrees };

/// Column mapping from a dataset's track CSV to AgentState fields. An empty
/// column name marks the field as absent.
struct CsvSchema
{
  std::string name;
  std::string track_id;
  std::string time;
  TimeUnit time_unit{TimeUnit::milliseconds};
  double frame_rate{25.0};
  std::string x;
  std::string y;
  std::string vx;
  std::string vy;
  std::string heading;
  AngleUnit heading_unit{AngleUnit::radians};
  std::string length;
  std::string width;
  std::string agent_type;
  AgentClass default_class{AgentClass::car};
};

inline CsvSchema interaction_schema()
{
  return {
    "interaction", "track_id", "timestamp_ms", TimeUnit::milliseconds, 10.0, "x", "y", "vx", "vy",
    "psi_rad", AngleUnit::radians, "length", "width", "agent_type", AgentClass::car};
}

/// inD tracks.csv; the class lives in tracksMeta.csv, so every agent is a car.
inline CsvSchema ind_schema()
{
  return {
    "ind",      "trackId",    "frame",   TimeUnit::frames, 25.0, "xCenter", "yCenter", "xVelocity",
    "yVelocity", "heading", AngleUnit::degrees, "length", "width", "", AgentClass::car};
}

/// Lossless layout written by write_tracks.
inline CsvSchema canonical_schema()
{
  return {
    "canonical", "track_id", "timestamp_s", TimeUnit::seconds, 10.0, "x", "y", "vx", "vy",
    "psi_rad", AngleUnit::radians, "length", "width", "agent_type", AgentClass::car};
}

inline CsvSchema schema_by_name(std::string_view name)
{
  for (auto s : {interaction_schema(), ind_schema(), canonical_schema()}) {
    if (s.name == name) {
      return s;
    }
  }
  throw SchemaError("unknown schema '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Kinematics

namespace detail
{

/// First derivative of a uniformly sampled series: central differences in the
/// interior, second-order one-sided stencils at the ends (first-order with
/// only two samples).
template <typename T, typename Get>
std::vector<T> differentiate(std::size_t n, double dt, Get get)
{
  std::vector<T> out(n);
  if (n < 2) {
    return out;
  }
  if (n == 2) {
    out[0] = out[1] = (get(1) - get(0)) / dt;
    return out;
  }
  out[0] = (get(0) * -3.0 + get(1) * 4.0 - get(2)) / (2.0 * dt);
  out[n - 1] = (get(n - 1) * 3.0 - get(n - 2) * 4.0 + get(n - 3)) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (get(i + 1) - get(i - 1)) / (2.0 * dt);
  }
  return out;
}

inline void fill_acceleration(Track & track)
{
  auto & st = track.states;
  if (st.size() < 2 || track.dt <= 0.0) {
    for (auto & s : st) {
      s.acceleration = 0.0;
    }
    return;
  }
  const auto acc =
    differentiate<double>(st.size(), track.dt, [&](std::size_t i) { return st[i].speed; });
  for (std::size_t i = 0; i < st.size(); ++i) {
    st[i].acceleration = acc[i];
  }
}

/// Heading from velocity where the agent moves; carried forward otherwise.
inline void fill_heading_from_velocity(Track & track, double min_speed = 0.1)
{
  std::optional<double> last;
  std::optional<double> first_valid;
  for (const auto & s : track.states) {
    if (s.speed > min_speed) {
      first_valid = std::atan2(s.velocity.y, s.velocity.x);
      break;
    }
  }
  for (auto & s : track.states) {
    if (s.speed > min_speed) {
      last = std::atan2(s.velocity.y, s.velocity.x);
    }
    s.heading = wrap_angle(last.value_or(first_valid.value_or(0.0)));
  }
}

}  // namespace detail

/// Fills velocity, speed and signed acceleration from positions. Positions
/// and headings are left untouched.
inline Track derive_kinematics(Track track)
{
  auto & st = track.states;
  if (st.size() < 2) {
    throw InputError("insufficient states to derive kinematics for track '" + track.agent_id + "'");
  }
  const auto vel =
    detail::differentiate<Vec2>(st.size(), track.dt, [&](std::size_t i) { return st[i].position; });
  for (std::size_t i = 0; i < st.size(); ++i) {
    st[i].velocity = vel[i];
    st[i].speed = norm(vel[i]);
  }
  detail::fill_acceleration(track);
  return track;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail
{

inline std::vector<std::string_view> split_csv_line(std::string_view line, std::string & scratch)
{
  std::vector<std::string_view> fields;
  if (line.find('"') == std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string_view::npos) {
        break;
      }
      start = pos + 1;
    }
    return fields;
  }
  // Quoted fields: unescape into scratch, then slice.
  scratch.clear();
  scratch.reserve(line.size());
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t begin = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        scratch.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        scratch.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      spans.emplace_back(begin, scratch.size() - begin);
      begin = scratch.size();
    } else {
      scratch.push_back(c);
    }
  }
  spans.emplace_back(begin, scratch.size() - begin);
  const std::string_view all(scratch);
  for (auto [b, len] : spans) {
    fields.push_back(all.substr(b, len));
  }
  return fields;
}

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_real(std::string_view field, std::size_t line, std::string_view column)
{
  field = trim(field);
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(
      line, "column '" + std::string(column) + "': not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace detail

namespace detail
{
/// Sampling period shared by every track; irregular sampling is an error.
inline double common_dt(const std::map<AgentId, Track> & tracks)
{
  std::optional<double> dt;
  for (const auto & [id, track] : tracks) {
    const auto & st = track.states;
    for (std::size_t i = 1; i < st.size(); ++i) {
      const double step = st[i].t - st[i - 1].t;
      if (!dt) {
        dt = step;
      } else if (std::abs(step - *dt) > 1e-6) {
        throw InputError("irregular sampling in track '" + id + "'");
      }
    }
  }
  return dt.value_or(0.0);
}
}  // namespace detail

/// Reads a track CSV into a Scenario. Rows of one track must appear in
/// strictly increasing time order with constant spacing.
inline Scenario parse_tracks(std::istream & in, const CsvSchema & schema)
{
  std::string line;
  std::string scratch;
  std::size_t line_no = 0;

  // Header, tolerating a UTF-8 byte order mark.
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (!detail::trim(line).empty()) {
      break;
    }
  }
  if (detail::trim(line).empty()) {
    throw SchemaError("missing header row");
  }
  std::map<std::string, std::size_t, std::less<>> columns;
  {
    const auto header = detail::split_csv_line(line, scratch);
    for (std::size_t i = 0; i < header.size(); ++i) {
      columns.emplace(std::string(detail::trim(header[i])), i);
    }
  }
  auto column = [&](const std::string & name, bool required) -> std::optional<std::size_t> {
    if (name.empty()) {
      if (required) {
        throw SchemaError("schema '" + schema.name + "' maps no column for a required field");
      }
      return std::nullopt;
    }
    const auto it = columns.find(name);
    if (it == columns.end()) {
      if (required) {
        throw SchemaError("missing required column '" + name + "'");
      }
      return std::nullopt;
    }
    return it->second;
  };
  const auto c_id = column(schema.track_id, true);
  const auto c_time = column(schema.time, true);
  const auto c_x = column(schema.x, true);
  const auto c_y = column(schema.y, true);
  const auto c_len = column(schema.length, true);
  const auto c_wid = column(schema.width, true);
  const auto c_type = column(schema.agent_type, !schema.agent_type.empty());
  const auto c_head = column(schema.heading, false);
  auto c_vx = column(schema.vx, false);
  auto c_vy = column(schema.vy, false);
  if (!c_vx || !c_vy) {
    c_vx.reset();
    c_vy.reset();
  }
  if (!c_head && !c_vx) {
    throw SchemaError("schema '" + schema.name + "' needs a heading column or vx/vy columns");
  }
  const bool have_velocity = c_vx.has_value();

  std::map<AgentId, Track> tracks;
  std::size_t max_col = 0;
  for (auto c : {c_id, c_time, c_x, c_y, c_len, c_wid, c_type, c_head, c_vx, c_vy}) {
    if (c) {
      max_col = std::max(max_col, *c);
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto f = detail::split_csv_line(line, scratch);
    if (f.size() <= max_col) {
      throw ParseError(
        line_no, "expected at least " + std::to_string(max_col + 1) + " fields, got " +
                   std::to_string(f.size()));
    }
    auto real = [&](std::optional<std::size_t> c, const std::string & name) {
      return detail::parse_real(f[*c], line_no, name);
    };
    AgentState s;
    s.agent_id = std::string(detail::trim(f[*c_id]));
    if (s.agent_id.empty()) {
      throw ParseError(line_no, "empty track id");
    }
    const double raw_t = real(c_time, schema.time);
    switch (schema.time_unit) {
      case TimeUnit::milliseconds:
        s.t = raw_t / 1000.0;
        break;
      case TimeUnit::seconds:
        s.t = raw_t;
        break;
      case TimeUnit::frames:
        s.t = raw_t / schema.frame_rate;
        break;
    }
    s.position = {real(c_x, schema.x), real(c_y, schema.y)};
    s.length = real(c_len, schema.length);
    s.width = real(c_wid, schema.width);
    s.classification =
      c_type ? parse_agent_class(detail::trim(f[*c_type])) : schema.default_class;
    if (!is_vulnerable(s.classification) && (s.length <= 0.0 || s.width <= 0.0)) {
      throw ParseError(line_no, "vehicle dimensions must be positive");
    }
    if (c_head) {
      const double h = real(c_head, schema.heading);
      s.heading = wrap_angle(
        schema.heading_unit == AngleUnit::degrees ? h * std::numbers::pi / 180.0 : h);
    }
    if (have_velocity) {
      s.velocity = {real(c_vx, schema.vx), real(c_vy, schema.vy)};
      s.speed = norm(s.velocity);
    }

    auto & track = tracks[s.agent_id];
    if (track.states.empty()) {
      track.agent_id = s.agent_id;
    } else if (s.t <= track.states.back().t) {
      throw MonotonicityError(s.agent_id);
    }
    track.states.push_back(std::move(s));
  }

  Scenario scenario;
  if (tracks.empty()) {
    return scenario;
  }

  scenario.dt = detail::common_dt(tracks);
  scenario.t_min = std::numeric_limits<double>::infinity();
  scenario.t_max = -std::numeric_limits<double>::infinity();

  for (auto & [id, track] : tracks) {
    track.dt = scenario.dt;
    if (!have_velocity) {
      if (track.states.size() >= 2) {
        track = derive_kinematics(std::move(track));
      }
    } else {
      detail::fill_acceleration(track);
    }
    if (!c_head) {
      detail::fill_heading_from_velocity(track);
    }
    scenario.t_min = std::min(scenario.t_min, track.t_begin());
    scenario.t_max = std::max(scenario.t_max, track.t_end());
  }
  scenario.tracks = std::move(tracks);
  return scenario;
}

/// Scenario from tracks whose states are already complete (programmatic
/// construction, simulation output).
inline Scenario make_scenario(std::vector<Track> tracks)
{
  Scenario scenario;
  for (auto & track : tracks) {
    if (track.states.empty()) {
      throw InputError("track '" + track.agent_id + "' has no states");
    }
    for (std::size_t i = 1; i < track.states.size(); ++i) {
      if (track.states[i].t <= track.states[i - 1].t) {
        throw MonotonicityError(track.agent_id);
      }
    }
    const AgentId id = track.agent_id;
    if (!scenario.tracks.emplace(id, std::move(track)).second) {
      throw InputError("duplicate track '" + id + "'");
    }
  }
  if (scenario.tracks.empty()) {
    return scenario;
  }
  scenario.dt = detail::common_dt(scenario.tracks);
  scenario.t_min = std::numeric_limits<double>::infinity();
  scenario.t_max = -std::numeric_limits<double>::infinity();
  for (auto & [id, track] : scenario.tracks) {
    track.dt = scenario.dt;
    scenario.t_min = std::min(scenario.t_min, track.t_begin());
    scenario.t_max = std::max(scenario.t_max, track.t_end());
  }
  return scenario;
}

namespace detail
{
inline void write_shortest(std::ostream & out, double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}
}  // namespace detail

/// Writes the scenario in the canonical schema; shortest round-trip number
/// formatting keeps parse(write(s)) field-identical.
inline void write_tracks(const Scenario & scenario, std::ostream & out)
{
  out << "track_id,timestamp_s,agent_type,x,y,vx,vy,psi_rad,length,width\n";
  for (const auto & [id, track] : scenario.tracks) {
    for (const auto & s : track.states) {
      out << id << ',';
      detail::write_shortest(out, s.t);
      out << ',' << to_string(s.classification);
      for (double v : {s.position.x, s.position.y, s.velocity.x, s.velocity.y, s.heading,
                       s.length, s.width}) {
        out << ',';
        detail::write_shortest(out, v);
      }
      out << '\n';
    }
  }
}

/// Snapshot at the grid time nearest to `t`.
inline Scene scene_at(const Scenario & scenario, double t)
{
  constexpr double tol = 1e-9;
  if (scenario.tracks.empty() || t < scenario.t_min - tol || t > scenario.t_max + tol) {
    throw RangeError(
      "time " + std::to_string(t) + " s outside recording [" + std::to_string(scenario.t_min) +
      ", " + std::to_string(scenario.t_max) + "]");
  }
  double grid = t;
  if (scenario.dt > 0.0) {
    grid = scenario.t_min + std::round((t - scenario.t_min) / scenario.dt) * scenario.dt;
  }
  Scene scene;
  scene.t = grid;
  bool first = true;
  for (const auto & [id, track] : scenario.tracks) {
    if (const auto * s = track.state_at(grid)) {
      if (first) {
        scene.t = s->t;
        first = false;
      }
      scene.states.push_back(*s);
      scene.states.back().t = scene.t;
    }
  }
  return scene;
}

}  // namespace scenefp

#endif  // SCENEFP__SCENE_MODEL_HPP_
