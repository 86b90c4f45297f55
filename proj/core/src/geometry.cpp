#include "tampforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tampforge {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }

void from_json(const json& j, Vec2& v) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be [x, y]");
  v.x = j[0].get<double>();
  v.y = j[1].get<double>();
}

Polygon PolygonObstacle::world_vertices() const {
  if (orientation == 0.0) return vertices;
  Vec2 centroid{0, 0};
  for (const Vec2& v : vertices) centroid = centroid + v;
  centroid = (1.0 / static_cast<double>(vertices.size())) * centroid;
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  Polygon out;
  out.reserve(vertices.size());
  for (const Vec2& v : vertices) {
    const Vec2 r = v - centroid;
    out.push_back({centroid.x + c * r.x - s * r.y, centroid.y + s * r.x + c * r.y});
  }
  return out;
}

void to_json(json& j, const PolygonObstacle& p) {
  j = json{{"name", p.name}, {"vertices", p.vertices}, {"orientation", p.orientation}};
}

void from_json(const json& j, PolygonObstacle& p) {
  p.name = j.value("name", "");
  p.vertices = j.at("vertices").get<std::vector<Vec2>>();
  p.orientation = j.value("orientation", 0.0);
  if (p.vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
}

namespace {

int orientation_sign(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  return orientation_sign(a, b, p) == 0 &&
         std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  // Disjoint segments attain their minimum at an endpoint of one of them.
  return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                  std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

bool polygon_is_simple(const Polygon& poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    if (a == b) return false;
    for (size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex with edge i.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const Vec2 c = poly[j];
      const Vec2 d = poly[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  }
  // Crossing number over edges, robust to vertices on the ray via the
  // half-open rule on y.
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool point_strictly_inside(Vec2 p, const Polygon& poly) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return false;
  }
  return point_in_polygon(p, poly);
}

double point_polygon_distance(Vec2 p, const Polygon& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

double segment_polygon_clearance(Vec2 a, Vec2 b, const Polygon& poly) {
  if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const double d = segment_segment_distance(a, b, poly[i], poly[(i + 1) % n]);
    if (d == 0.0) return 0.0;
    best = std::min(best, d);
  }
  return best;
}

bool segment_enters_polygon_interior(Vec2 a, Vec2 b, const Polygon& poly) {
  // Collect parameters where the segment meets the boundary, then test the
  // midpoint of every sub-interval. Handles grazing along edges correctly.
  std::vector<double> params{0.0, 1.0};
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 c = poly[i];
    const Vec2 d = poly[(i + 1) % n];
    if (!segments_intersect(a, b, c, d)) continue;
    const double denom = cross(ab, d - c);
    if (denom != 0.0) {
      params.push_back(std::clamp(cross(c - a, d - c) / denom, 0.0, 1.0));
    } else if (len2 > 0.0) {
      // Collinear overlap: project the edge endpoints onto the segment.
      params.push_back(std::clamp(dot(c - a, ab) / len2, 0.0, 1.0));
      params.push_back(std::clamp(dot(d - a, ab) / len2, 0.0, 1.0));
    }
  }
  std::sort(params.begin(), params.end());
  for (size_t i = 0; i + 1 < params.size(); ++i) {
    const double mid = 0.5 * (params[i] + params[i + 1]);
    if (point_strictly_inside(a + mid * ab, poly)) return true;
  }
  return false;
}

double min_distance_moving_points(Vec2 p, Vec2 vp, Vec2 q, Vec2 vq, double dt) {
  const Vec2 dp = p - q;
  const Vec2 dv = vp - vq;
  const double a = dot(dv, dv);
  double t_star = 0.0;
  if (a > 0.0) t_star = std::clamp(-dot(dp, dv) / a, 0.0, dt);
  return norm(dp + t_star * dv);
}

Vec2 interpolate(std::span<const Waypoint> trajectory, double t) {
  if (trajectory.empty()) throw std::out_of_range("empty trajectory");
  if (t < trajectory.front().t || t > trajectory.back().t) {
    throw std::out_of_range("t outside trajectory time range");
  }
  // Exactness at waypoints: return the stored coordinates, not a lerp result.
  auto it = std::lower_bound(trajectory.begin(), trajectory.end(), t,
                             [](const Waypoint& w, double value) { return w.t < value; });
  if (it != trajectory.end() && it->t == t) return {it->x, it->y};
  const Waypoint& hi = *it;
  const Waypoint& lo = *(it - 1);
  const double u = (t - lo.t) / (hi.t - lo.t);
  return {lo.x + u * (hi.x - lo.x), lo.y + u * (hi.y - lo.y)};
}

Vec2 position_at(std::span<const Waypoint> trajectory, double t) {
  if (trajectory.empty()) throw std::out_of_range("empty trajectory");
  if (t <= trajectory.front().t) return {trajectory.front().x, trajectory.front().y};
  if (t >= trajectory.back().t) return {trajectory.back().x, trajectory.back().y};
  return interpolate(trajectory, t);
}

}  // namespace tampforge
