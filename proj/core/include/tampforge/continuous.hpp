#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tampforge/geometry.hpp"
#include "tampforge/rng.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

void to_json(json& j, const Rect& r);
void from_json(const json& j, Rect& r);

struct RobotSpec {
  Vec2 start;
  std::optional<Rect> goal_region;
  std::optional<double> v_max;  // overrides the scene-wide limit

  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

void to_json(json& j, const RobotSpec& r);
void from_json(const json& j, RobotSpec& r);

// Wall slab with a gap the drones must pass through, one at a time.
// The wall occupies x in [x0, x1] except for the opening y in [y0, y1].
struct HoleSpec {
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  std::string target_side = "right";  // side of the wall where drones must end

  friend bool operator==(const HoleSpec&, const HoleSpec&) = default;
};

void to_json(json& j, const HoleSpec& h);
void from_json(const json& j, HoleSpec& h);

struct ContinuousScene {
  Rect bounds;
  std::vector<PolygonObstacle> obstacles;
  std::map<std::string, RobotSpec> robots;
  double v_max = 1.0;
  double safe_distance = 0.0;
  double time_limit = 60.0;
  std::optional<HoleSpec> hole;  // Path-Drones only

  double robot_v_max(const std::string& id) const;

  friend bool operator==(const ContinuousScene&, const ContinuousScene&) = default;
};

void to_json(json& j, const ContinuousScene& s);
void from_json(const json& j, ContinuousScene& s);

struct ShapeSlot {
  Vec2 center;
  double tolerance = 0.25;

  friend bool operator==(const ShapeSlot&, const ShapeSlot&) = default;
};

struct Bowl {
  Vec2 center;
  double radius = 0.5;

  friend bool operator==(const Bowl&, const Bowl&) = default;
};

struct ShapeSpec {
  std::string shape;  // "circle", "triangle", or "line"
  std::vector<ShapeSlot> slots;
  std::vector<Bowl> bowls;

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

void to_json(json& j, const ShapeSlot& s);
void from_json(const json& j, ShapeSlot& s);
void to_json(json& j, const Bowl& b);
void from_json(const json& j, Bowl& b);
void to_json(json& j, const ShapeSpec& s);
void from_json(const json& j, ShapeSpec& s);

// Full initial state of a continuous instance. For Shape Formation the
// "robots" of the scene are the movable boxes and `shape` is set.
struct ContinuousState {
  ContinuousScene scene;
  std::optional<ShapeSpec> shape;

  friend bool operator==(const ContinuousState&, const ContinuousState&) = default;
};

void to_json(json& j, const ContinuousState& s);
void from_json(const json& j, ContinuousState& s);

// Relative tolerance admitting exact-boundary plans under floating point.
inline constexpr double kSpeedEpsilon = 1e-9;

// Checks (in order): per-segment speed <= v_max, makespan <= time_limit,
// robot-obstacle clearance >= safe_distance for all time, pairwise robot
// clearance >= safe_distance for all time. The first violated class is
// reported. Interior penetration of an obstacle is a CollisionViolation
// even when safe_distance is 0.
Verdict check_motion_constraints(const ContinuousScene& scene, const Plan& plan,
                                 double speed_epsilon = kSpeedEpsilon);

// Goal predicate per env kind: Racecars end inside their goal regions,
// Drones complete disjoint-in-time hole crossings and end on the target
// side, Shape Formation boxes land in distinct slots and outside all bowls.
Verdict check_task_goal(EnvKind kind, const ContinuousState& state, const Plan& plan);

// Time intervals during which a trajectory occupies the wall slab,
// evaluated over [0, horizon] with the hold-position convention.
std::vector<std::pair<double, double>> slab_occupancy_intervals(
    const std::vector<Waypoint>& trajectory, const HoleSpec& hole, double horizon);

// Number of complete wall crossings and the sign of the final side
// (-1 left of the slab, 0 inside, +1 right).
struct CrossingSummary {
  int complete_crossings = 0;
  int final_side = 0;
};
CrossingSummary summarize_crossings(const std::vector<Waypoint>& trajectory,
                                    const HoleSpec& hole, double horizon);

// --- Generation -------------------------------------------------------------

ContinuousState generate_racecars(const DifficultyParams& d, Rng& rng);
ContinuousState generate_drones(const DifficultyParams& d, Rng& rng);
ContinuousState generate_shape_formation(const DifficultyParams& d, Rng& rng);

// Coarse-grid reachability certificate used by the racecar generator.
bool racecars_solvable(const ContinuousScene& scene);

}  // namespace tampforge
