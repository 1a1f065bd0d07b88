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

#ifndef SCENEFP__GEOMETRY_HPP_
#define SCENEFP__GEOMETRY_HPP_

#include "scenefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace scenefp
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 & operator+=(Vec2 o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Counterclockwise perpendicular.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a < 0.0) {
    a += two_pi;
  }
  a -= std::numbers::pi;
  return a >= std::numbers::pi ? -std::numbers::pi : a;
}

using Polygon = std::vector<Vec2>;

/// Shoelace area, positive for counterclockwise vertex order.
inline double signed_area(std::span<const Vec2> poly)
{
  const std::size_t n = poly.size();
  if (n < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * twice;
}

inline double area(std::span<const Vec2> poly) { return std::abs(signed_area(poly)); }

struct Bbox
{
  Vec2 lo{};
  Vec2 hi{};

  bool overlaps(const Bbox & o) const
  {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};

inline Bbox bounding_box(std::span<const Vec2> pts)
{
  Bbox b{pts.front(), pts.front()};
  for (const auto & p : pts) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  return b;
}

/// True when the polygon turns consistently in one direction and encloses
/// positive area. Collinear vertices are tolerated.
inline bool is_convex(std::span<const Vec2> poly)
{
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  const double scale = std::max(1.0, [&] {
    const auto b = bounding_box(poly);
    return std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
  }());
  const double eps = 1e-12 * scale * scale;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = poly[(i + 1) % n] - poly[i];
    const Vec2 e1 = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double c = cross(e0, e1);
    if (std::abs(c) <= eps) {
      continue;
    }
    const int s = c > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  // Consistent turning alone admits star-shaped self-intersections; the
  // winding total rules them out.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = poly[(i + 1) % n] - poly[i];
    const Vec2 e1 = poly[(i + 2) % n] - poly[(i + 1) % n];
    if (norm(e0) == 0.0 || norm(e1) == 0.0) {
      continue;
    }
    turning += std::atan2(cross(e0, e1), dot(e0, e1));
  }
  return sign != 0 && std::abs(std::abs(turning) - 2.0 * std::numbers::pi) < 1e-6;
}

inline Polygon counterclockwise(Polygon poly)
{
  if (signed_area(poly) < 0.0) {
    std::reverse(poly.begin(), poly.end());
  }
  return poly;
}

/// Sutherland-Hodgman clip of `subject` against the convex polygon `clip`.
/// Both polygons must be counterclockwise.
inline Polygon clip_convex(const Polygon & subject, const Polygon & clip)
{
  Polygon output = subject;
  const std::size_t m = clip.size();
  for (std::size_t j = 0; j < m && !output.empty(); ++j) {
    const Vec2 a = clip[j];
    const Vec2 edge = clip[(j + 1) % m] - a;
    const Polygon input = std::move(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + n - 1) % n];
      const double dc = cross(edge, cur - a);
      const double dp = cross(edge, prev - a);
      if (dc >= 0.0) {
        if (dp < 0.0) {
          output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        }
        output.push_back(cur);
      } else if (dp >= 0.0) {
        output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  return output;
}

namespace detail
{
/// Overlap of two polygons already known to be convex and counterclockwise.
inline double convex_overlap_area(const Polygon & p, const Polygon & q)
{
  if (p.size() < 3 || q.size() < 3 || !bounding_box(p).overlaps(bounding_box(q))) {
    return 0.0;
  }
  return area(clip_convex(p, q));
}
}  // namespace detail

/// Area of the intersection of two convex polygons. Throws GeometryError on
/// non-convex input; degenerate (zero-area) polygons overlap nothing.
inline double overlap_area(const Polygon & p, const Polygon & q)
{
  if (area(p) == 0.0 || area(q) == 0.0) {
    return 0.0;
  }
  if (!is_convex(p) || !is_convex(q)) {
    throw GeometryError("overlap_area requires convex polygons");
  }
  return detail::convex_overlap_area(counterclockwise(p), counterclockwise(q));
}

/// Rectangle centered at `center` with unit axis `dir`, counterclockwise.
inline Polygon oriented_rect(Vec2 center, Vec2 dir, double half_length, double half_width)
{
  const Vec2 along = dir * half_length;
  const Vec2 across = perp(dir) * half_width;
  return {
    center - along - across, center + along - across, center + along + across,
    center - along + across};
}

/// Andrew's monotone chain; returns the hull counterclockwise without
/// collinear points.
inline Polygon convex_hull(std::vector<Vec2> pts)
{
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto & p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

struct SegmentHit
{
  double s{0.0};  ///< parameter along the first segment, in [0, 1]
  double u{0.0};  ///< parameter along the second segment, in [0, 1]
  Vec2 point{};
};

/// Proper or touching intersection of two segments. Parallel segments never
/// report a hit.
inline std::optional<SegmentHit> segment_intersection(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1)
{
  const Vec2 r = a1 - a0;
  const Vec2 q = b1 - b0;
  const double denom = cross(r, q);
  if (std::abs(denom) <= 1e-12 * norm(r) * norm(q)) {
    return std::nullopt;
  }
  const Vec2 w = b0 - a0;
  const double s = cross(w, q) / denom;
  const double u = cross(w, r) / denom;
  constexpr double tol = 1e-12;
  if (s < -tol || s > 1.0 + tol || u < -tol || u > 1.0 + tol) {
    return std::nullopt;
  }
  const double sc = std::clamp(s, 0.0, 1.0);
  return SegmentHit{sc, std::clamp(u, 0.0, 1.0), a0 + r * sc};
}

inline bool contains(std::span<const Vec2> convex_ccw, Vec2 p)
{
  const std::size_t n = convex_ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(convex_ccw[(i + 1) % n] - convex_ccw[i], p - convex_ccw[i]) < 0.0) {
      return false;
    }
  }
  return n >= 3;
}

}  // namespace scenefp

#endif  // SCENEFP__GEOMETRY_HPP_
