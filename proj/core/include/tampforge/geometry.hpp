#pragma once

#include <span>
#include <string>
#include <vector>

#include "tampforge/types.hpp"

namespace tampforge {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

void to_json(json& j, const Vec2& v);
void from_json(const json& j, Vec2& v);

// Vertex loop of a simple polygon, in world coordinates.
using Polygon = std::vector<Vec2>;

struct PolygonObstacle {
  std::string name;
  std::vector<Vec2> vertices;  // as authored, before rotation
  double orientation = 0.0;    // radians, applied about the vertex centroid

  // Vertices with the orientation applied.
  Polygon world_vertices() const;

  friend bool operator==(const PolygonObstacle&, const PolygonObstacle&) = default;
};

void to_json(json& j, const PolygonObstacle& p);
void from_json(const json& j, PolygonObstacle& p);

bool polygon_is_simple(const Polygon& poly);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);  // touching counts

// Boundary counts as inside.
bool point_in_polygon(Vec2 p, const Polygon& poly);
bool point_strictly_inside(Vec2 p, const Polygon& poly);

// Distance to the polygon treated as a solid region: 0 for points inside.
double point_polygon_distance(Vec2 p, const Polygon& poly);

// Minimum distance between the segment [a, b] and the solid polygon;
// 0 when the segment touches, crosses, or lies inside it.
double segment_polygon_clearance(Vec2 a, Vec2 b, const Polygon& poly);

// True when some point of [a, b] lies strictly inside the polygon
// (grazing the boundary does not count).
bool segment_enters_polygon_interior(Vec2 a, Vec2 b, const Polygon& poly);

// Minimum distance between two points moving at constant velocity over
// a time window of length dt, starting at p and q.
double min_distance_moving_points(Vec2 p, Vec2 vp, Vec2 q, Vec2 vq, double dt);

// Piecewise-linear position at time t. Requires a nonempty trajectory with
// strictly increasing times and t within [front.t, back.t]; exact at
// waypoint times. Throws std::out_of_range otherwise.
Vec2 interpolate(std::span<const Waypoint> trajectory, double t);

// interpolate with the hold-position convention: before the first waypoint
// the robot sits at its first position, after the last it keeps the final one.
Vec2 position_at(std::span<const Waypoint> trajectory, double t);

}  // namespace tampforge
