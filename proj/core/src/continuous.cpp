#include "tampforge/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace tampforge {

namespace {

constexpr double kDistanceSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double ContinuousScene::robot_v_max(const std::string& id) const {
  const auto it = robots.find(id);
  if (it != robots.end() && it->second.v_max) return *it->second.v_max;
  return v_max;
}

// --- JSON --------------------------------------------------------------------

void to_json(json& j, const Rect& r) { j = json::array({r.xmin, r.ymin, r.xmax, r.ymax}); }

void from_json(const json& j, Rect& r) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("rect must be [xmin, ymin, xmax, ymax]");
  }
  r.xmin = j[0].get<double>();
  r.ymin = j[1].get<double>();
  r.xmax = j[2].get<double>();
  r.ymax = j[3].get<double>();
}

void to_json(json& j, const RobotSpec& r) {
  j = json{{"start", Vec2{r.start.x, r.start.y}}};
  if (r.goal_region) j["goal_region"] = *r.goal_region;
  if (r.v_max) j["v_max"] = *r.v_max;
}

void from_json(const json& j, RobotSpec& r) {
  r.start = j.at("start").get<Vec2>();
  if (j.contains("goal_region")) r.goal_region = j["goal_region"].get<Rect>();
  if (j.contains("v_max")) r.v_max = j["v_max"].get<double>();
}

void to_json(json& j, const HoleSpec& h) {
  j = json{{"x0", h.x0}, {"x1", h.x1}, {"y0", h.y0}, {"y1", h.y1},
           {"target_side", h.target_side}};
}

void from_json(const json& j, HoleSpec& h) {
  h.x0 = j.at("x0").get<double>();
  h.x1 = j.at("x1").get<double>();
  h.y0 = j.at("y0").get<double>();
  h.y1 = j.at("y1").get<double>();
  h.target_side = j.value("target_side", "right");
}

void to_json(json& j, const ContinuousScene& s) {
  j = json{{"bounds", s.bounds},   {"obstacles", s.obstacles},
           {"robots", s.robots},   {"v_max", s.v_max},
           {"safe_distance", s.safe_distance}, {"time_limit", s.time_limit}};
  if (s.hole) j["hole"] = *s.hole;
}

void from_json(const json& j, ContinuousScene& s) {
  s.bounds = j.at("bounds").get<Rect>();
  s.obstacles = j.value("obstacles", std::vector<PolygonObstacle>{});
  s.robots = j.at("robots").get<std::map<std::string, RobotSpec>>();
  s.v_max = j.at("v_max").get<double>();
  s.safe_distance = j.value("safe_distance", 0.0);
  s.time_limit = j.at("time_limit").get<double>();
  if (j.contains("hole")) s.hole = j["hole"].get<HoleSpec>();
}

void to_json(json& j, const ShapeSlot& s) {
  j = json{{"center", s.center}, {"tolerance", s.tolerance}};
}

void from_json(const json& j, ShapeSlot& s) {
  s.center = j.at("center").get<Vec2>();
  s.tolerance = j.at("tolerance").get<double>();
}

void to_json(json& j, const Bowl& b) {
  j = json{{"center", b.center}, {"radius", b.radius}};
}

void from_json(const json& j, Bowl& b) {
  b.center = j.at("center").get<Vec2>();
  b.radius = j.at("radius").get<double>();
}

void to_json(json& j, const ShapeSpec& s) {
  j = json{{"shape", s.shape}, {"slots", s.slots}, {"bowls", s.bowls}};
}

void from_json(const json& j, ShapeSpec& s) {
  s.shape = j.at("shape").get<std::string>();
  s.slots = j.at("slots").get<std::vector<ShapeSlot>>();
  s.bowls = j.value("bowls", std::vector<Bowl>{});
}

void to_json(json& j, const ContinuousState& s) {
  j = json{{"scene", s.scene}};
  if (s.shape) j["shape"] = *s.shape;
}

void from_json(const json& j, ContinuousState& s) {
  s.scene = j.at("scene").get<ContinuousScene>();
  if (j.contains("shape")) s.shape = j["shape"].get<ShapeSpec>();
}

// --- Motion constraints --------------------------------------------------------

namespace {

// Trajectory with the hold convention applied: covers [0, horizon] and is
// never empty (a missing plan entry holds the robot at its start).
std::vector<Waypoint> effective_trajectory(const ContinuousScene& scene,
                                           const std::string& robot, const Plan& plan,
                                           double horizon) {
  std::vector<Waypoint> out;
  const auto it = plan.trajectories.find(robot);
  if (it != plan.trajectories.end() && !it->second.empty()) {
    out = it->second;
  } else {
    const Vec2 start = scene.robots.at(robot).start;
    out.push_back({start.x, start.y, 0.0});
  }
  if (out.front().t > 0.0) out.insert(out.begin(), {out.front().x, out.front().y, 0.0});
  if (out.back().t < horizon) out.push_back({out.back().x, out.back().y, horizon});
  return out;
}

struct PairwiseViolation {
  std::string a, b;
  double dist;
  double at;
};

std::optional<PairwiseViolation> closest_pair_breach(
    const std::map<std::string, std::vector<Waypoint>>& motions, double safe_distance,
    double horizon) {
  std::vector<const std::string*> ids;
  for (const auto& [id, traj] : motions) ids.push_back(&id);
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t k = i + 1; k < ids.size(); ++k) {
      const auto& ta = motions.at(*ids[i]);
      const auto& tb = motions.at(*ids[k]);
      std::vector<double> breaks{0.0, horizon};
      for (const Waypoint& w : ta) breaks.push_back(std::clamp(w.t, 0.0, horizon));
      for (const Waypoint& w : tb) breaks.push_back(std::clamp(w.t, 0.0, horizon));
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
      for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double t0 = breaks[s];
        const double t1 = breaks[s + 1];
        const double dt = t1 - t0;
        if (dt <= 0.0) continue;
        const Vec2 pa0 = position_at(ta, t0);
        const Vec2 pa1 = position_at(ta, t1);
        const Vec2 pb0 = position_at(tb, t0);
        const Vec2 pb1 = position_at(tb, t1);
        const Vec2 va = (1.0 / dt) * (pa1 - pa0);
        const Vec2 vb = (1.0 / dt) * (pb1 - pb0);
        const double d = min_distance_moving_points(pa0, va, pb0, vb, dt);
        if (d < safe_distance - kDistanceSlack) {
          return PairwiseViolation{*ids[i], *ids[k], d, t0};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Verdict check_motion_constraints(const ContinuousScene& scene, const Plan& plan,
                                 double speed_epsilon) {
  const double horizon = std::max(scene.time_limit, 0.0);
  const auto fail = [](FailureReason reason, const std::string& detail) {
    return Verdict::fail(reason, detail, /*syntax_ok=*/true, /*goal_reached=*/false,
                         /*constraints_ok=*/false);
  };

  // (a) segment speeds
  for (const auto& [robot, traj] : plan.trajectories) {
    const double limit = scene.robot_v_max(robot) * (1.0 + speed_epsilon);
    for (size_t i = 0; i + 1 < traj.size(); ++i) {
      const double dt = traj[i + 1].t - traj[i].t;
      const double dist = distance({traj[i].x, traj[i].y}, {traj[i + 1].x, traj[i + 1].y});
      if (dist > limit * dt) {
        return fail(FailureReason::VelocityViolation,
                    robot + " exceeds v_max on segment " + std::to_string(i) +
                        " (speed " + fmt(dist / dt) + ")");
      }
    }
  }

  // (b) makespan
  for (const auto& [robot, traj] : plan.trajectories) {
    if (!traj.empty() && traj.back().t > scene.time_limit * (1.0 + speed_epsilon)) {
      return fail(FailureReason::TimeLimitViolation,
                  robot + " finishes at t=" + fmt(traj.back().t) + " > time limit " +
                      fmt(scene.time_limit));
    }
  }

  std::map<std::string, std::vector<Waypoint>> motions;
  for (const auto& [robot, spec] : scene.robots) {
    motions[robot] = effective_trajectory(scene, robot, plan, horizon);
  }

  // (c) obstacle clearance, exact per swept segment
  std::vector<std::pair<std::string, Polygon>> world;
  for (const PolygonObstacle& obs : scene.obstacles) {
    world.emplace_back(obs.name, obs.world_vertices());
  }
  for (const auto& [robot, traj] : motions) {
    for (size_t i = 0; i + 1 < traj.size(); ++i) {
      const Vec2 a{traj[i].x, traj[i].y};
      const Vec2 b{traj[i + 1].x, traj[i + 1].y};
      if (!scene.bounds.contains(a) || !scene.bounds.contains(b)) {
        return fail(FailureReason::CollisionViolation, robot + " leaves the workspace bounds");
      }
      for (const auto& [name, poly] : world) {
        if (segment_enters_polygon_interior(a, b, poly)) {
          return fail(FailureReason::CollisionViolation,
                      robot + " passes through obstacle " + name);
        }
        const double clearance = segment_polygon_clearance(a, b, poly);
        if (clearance < scene.safe_distance - kDistanceSlack) {
          return fail(FailureReason::SafeDistanceViolation,
                      robot + " comes within " + fmt(clearance) + " m of " + name +
                          " (required " + fmt(scene.safe_distance) + ")");
        }
      }
    }
  }

  // (d) pairwise robot clearance, time-synchronized
  if (scene.safe_distance > 0.0 && motions.size() > 1) {
    if (const auto breach = closest_pair_breach(motions, scene.safe_distance, horizon)) {
      return fail(FailureReason::SafeDistanceViolation,
                  breach->a + " and " + breach->b + " close to " + fmt(breach->dist) +
                      " m near t=" + fmt(breach->at));
    }
  }

  return Verdict::pass();
}

// --- Hole crossings ------------------------------------------------------------

namespace {

int slab_side(double x, const HoleSpec& hole) {
  if (x < hole.x0) return -1;
  if (x > hole.x1) return 1;
  return 0;
}

struct SidePiece {
  int side;
  double t0, t1;
};

// Piecewise side function of x(t) over [0, horizon].
std::vector<SidePiece> side_pieces(const std::vector<Waypoint>& traj, const HoleSpec& hole,
                                   double horizon) {
  std::vector<Waypoint> ext = traj;
  if (ext.front().t > 0.0) ext.insert(ext.begin(), {ext.front().x, ext.front().y, 0.0});
  if (ext.back().t < horizon) ext.push_back({ext.back().x, ext.back().y, horizon});

  std::vector<SidePiece> pieces;
  const auto emit = [&](int side, double t0, double t1) {
    if (t1 < t0) return;
    if (!pieces.empty() && pieces.back().side == side) {
      pieces.back().t1 = t1;
    } else if (t1 > t0 || pieces.empty() || side == 0) {
      // Zero-length piece kept only when it records slab contact.
      if (t1 > t0 || side == 0) pieces.push_back({side, t0, t1});
    }
  };

  for (size_t i = 0; i + 1 < ext.size(); ++i) {
    const double ta = ext[i].t;
    const double tb = ext[i + 1].t;
    if (tb <= ta) continue;
    const double xa = ext[i].x;
    const double xb = ext[i + 1].x;
    if (xa == xb) {
      emit(slab_side(xa, hole), ta, tb);
      continue;
    }
    const auto time_at = [&](double x) { return ta + (x - xa) / (xb - xa) * (tb - ta); };
    // Threshold crossing times inside this segment, in time order.
    std::vector<double> cuts{ta, tb};
    for (const double threshold : {hole.x0, hole.x1}) {
      if ((xa < threshold && xb > threshold) || (xa > threshold && xb < threshold)) {
        cuts.push_back(time_at(threshold));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
      const double x_mid = xa + (mid - ta) / (tb - ta) * (xb - xa);
      emit(slab_side(x_mid, hole), cuts[c], cuts[c + 1]);
    }
  }
  return pieces;
}

}  // namespace

std::vector<std::pair<double, double>> slab_occupancy_intervals(
    const std::vector<Waypoint>& trajectory, const HoleSpec& hole, double horizon) {
  std::vector<std::pair<double, double>> out;
  if (trajectory.empty()) return out;
  const auto pieces = side_pieces(trajectory, hole, horizon);
  for (const SidePiece& piece : pieces) {
    if (piece.side == 0) out.emplace_back(piece.t0, piece.t1);
  }
  // A direct -1 -> +1 jump (degenerate slab) contributes a point interval.
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i].side * pieces[i + 1].side == -1) {
      out.emplace_back(pieces[i + 1].t0, pieces[i + 1].t0);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CrossingSummary summarize_crossings(const std::vector<Waypoint>& trajectory,
                                    const HoleSpec& hole, double horizon) {
  CrossingSummary summary;
  if (trajectory.empty()) return summary;
  const auto pieces = side_pieces(trajectory, hole, horizon);
  int last_solid_side = 0;  // last side strictly outside the slab
  for (const SidePiece& piece : pieces) {
    if (piece.side == 0) continue;
    if (last_solid_side != 0 && piece.side == -last_solid_side) {
      ++summary.complete_crossings;
    }
    last_solid_side = piece.side;
  }
  summary.final_side = pieces.empty() ? 0 : pieces.back().side;
  return summary;
}

// --- Task goals ------------------------------------------------------------------

namespace {

Verdict racecars_goal(const ContinuousScene& scene, const Plan& plan) {
  for (const auto& [robot, spec] : scene.robots) {
    if (!spec.goal_region) continue;
    const auto it = plan.trajectories.find(robot);
    const Vec2 final_pos = (it != plan.trajectories.end() && !it->second.empty())
                               ? position_at(it->second, scene.time_limit)
                               : spec.start;
    if (!spec.goal_region->contains(final_pos)) {
      return Verdict::fail(FailureReason::GoalNotReached,
                           robot + " ends outside its goal region", true, false, true);
    }
  }
  return Verdict::pass();
}

Verdict drones_goal(const ContinuousScene& scene, const Plan& plan) {
  const HoleSpec& hole = *scene.hole;
  const int target = hole.target_side == "left" ? -1 : 1;
  const double horizon = scene.time_limit;

  std::vector<std::pair<double, double>> all_intervals;
  std::vector<std::string> interval_owner;
  bool all_crossed = true;
  std::string uncrossed;
  for (const auto& [robot, spec] : scene.robots) {
    const auto it = plan.trajectories.find(robot);
    if (it == plan.trajectories.end() || it->second.empty()) {
      all_crossed = false;
      uncrossed = robot;
      continue;
    }
    const auto summary = summarize_crossings(it->second, hole, horizon);
    if (summary.complete_crossings < 1 || summary.final_side != target) {
      all_crossed = false;
      uncrossed = robot;
    }
    for (const auto& interval : slab_occupancy_intervals(it->second, hole, horizon)) {
      all_intervals.push_back(interval);
      interval_owner.push_back(robot);
    }
  }

  // "One by one": no two drones inside the wall slab at overlapping times.
  // A drone's own intervals are disjoint by construction, so the running-max
  // sweep only ever misses same-owner pairs.
  std::vector<size_t> order(all_intervals.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return all_intervals[a] < all_intervals[b]; });
  double max_end = -1.0;
  std::string max_owner;
  for (const size_t idx : order) {
    const auto& cur = all_intervals[idx];
    if (cur.first < max_end - kDistanceSlack && interval_owner[idx] != max_owner) {
      return Verdict::fail(FailureReason::OrderViolation,
                           max_owner + " and " + interval_owner[idx] +
                               " occupy the hole simultaneously",
                           true, all_crossed, false);
    }
    if (cur.second > max_end) {
      max_end = cur.second;
      max_owner = interval_owner[idx];
    }
  }

  if (!all_crossed) {
    return Verdict::fail(FailureReason::GoalNotReached,
                         uncrossed + " does not pass through the hole to the " +
                             hole.target_side + " side",
                         true, false, true);
  }
  return Verdict::pass();
}

// Bipartite matching of boxes to slots via augmenting paths.
bool perfect_slot_matching(const std::vector<std::vector<size_t>>& candidates,
                           size_t num_slots) {
  std::vector<int> slot_owner(num_slots, -1);
  std::vector<char> visited;

  std::function<bool(size_t)> augment = [&](size_t box) -> bool {
    for (const size_t slot : candidates[box]) {
      if (visited[slot]) continue;
      visited[slot] = 1;
      if (slot_owner[slot] < 0 || augment(static_cast<size_t>(slot_owner[slot]))) {
        slot_owner[slot] = static_cast<int>(box);
        return true;
      }
    }
    return false;
  };

  for (size_t box = 0; box < candidates.size(); ++box) {
    visited.assign(num_slots, 0);
    if (!augment(box)) return false;
  }
  return true;
}

Verdict shape_goal(const ContinuousState& state, const Plan& plan) {
  const ShapeSpec& shape = *state.shape;
  const ContinuousScene& scene = state.scene;

  std::vector<Vec2> finals;
  std::vector<std::string> ids;
  for (const auto& [box, spec] : scene.robots) {
    const auto it = plan.trajectories.find(box);
    finals.push_back((it != plan.trajectories.end() && !it->second.empty())
                         ? position_at(it->second, scene.time_limit)
                         : spec.start);
    ids.push_back(box);
  }

  for (size_t i = 0; i < finals.size(); ++i) {
    for (const Bowl& bowl : shape.bowls) {
      if (distance(finals[i], bowl.center) < bowl.radius - kDistanceSlack) {
        return Verdict::fail(FailureReason::CollisionViolation,
                             ids[i] + " is placed inside a bowl", true, false, false);
      }
    }
  }

  std::vector<std::vector<size_t>> candidates(finals.size());
  for (size_t i = 0; i < finals.size(); ++i) {
    for (size_t s = 0; s < shape.slots.size(); ++s) {
      if (distance(finals[i], shape.slots[s].center) <=
          shape.slots[s].tolerance + kDistanceSlack) {
        candidates[i].push_back(s);
      }
    }
  }
  if (!perfect_slot_matching(candidates, shape.slots.size())) {
    return Verdict::fail(FailureReason::GoalNotReached,
                         "boxes do not cover distinct shape slots", true, false, true);
  }
  return Verdict::pass();
}

}  // namespace

Verdict check_task_goal(EnvKind kind, const ContinuousState& state, const Plan& plan) {
  switch (kind) {
    case EnvKind::PathRacecars:
      return racecars_goal(state.scene, plan);
    case EnvKind::PathDrones:
      return drones_goal(state.scene, plan);
    case EnvKind::ShapeFormation:
      return shape_goal(state, plan);
    default:
      throw std::invalid_argument("check_task_goal: not a continuous env");
  }
}

// --- Generation ------------------------------------------------------------------

namespace {

PolygonObstacle make_rect_obstacle(const std::string& name, double x0, double y0,
                                   double x1, double y1) {
  PolygonObstacle obs;
  obs.name = name;
  obs.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return obs;
}

PolygonObstacle make_convex_obstacle(const std::string& name, Vec2 center, double radius,
                                     int sides, double phase) {
  PolygonObstacle obs;
  obs.name = name;
  for (int k = 0; k < sides; ++k) {
    const double angle = phase + 2.0 * M_PI * k / sides;
    obs.vertices.push_back({center.x + radius * std::cos(angle),
                            center.y + radius * std::sin(angle)});
  }
  return obs;
}

// BFS over a coarse occupancy grid; returns path length in meters, or
// nullopt when no inflated-obstacle-free path exists.
std::optional<double> coarse_path_length(const ContinuousScene& scene, Vec2 start,
                                         const Rect& goal, double inflation) {
  constexpr double kCellSize = 0.25;
  const int w = static_cast<int>((scene.bounds.xmax - scene.bounds.xmin) / kCellSize);
  const int h = static_cast<int>((scene.bounds.ymax - scene.bounds.ymin) / kCellSize);
  if (w <= 0 || h <= 0) return std::nullopt;

  std::vector<Polygon> world;
  for (const auto& obs : scene.obstacles) world.push_back(obs.world_vertices());

  const auto center = [&](int cx, int cy) {
    return Vec2{scene.bounds.xmin + (cx + 0.5) * kCellSize,
                scene.bounds.ymin + (cy + 0.5) * kCellSize};
  };
  const auto blocked = [&](int cx, int cy) {
    const Vec2 p = center(cx, cy);
    for (const Polygon& poly : world) {
      if (point_polygon_distance(p, poly) < inflation) return true;
    }
    return false;
  };
  const auto cell_of = [&](Vec2 p) {
    return std::pair<int, int>{
        std::clamp(static_cast<int>((p.x - scene.bounds.xmin) / kCellSize), 0, w - 1),
        std::clamp(static_cast<int>((p.y - scene.bounds.ymin) / kCellSize), 0, h - 1)};
  };

  const auto [sx, sy] = cell_of(start);
  if (blocked(sx, sy)) return std::nullopt;
  std::vector<int> dist(static_cast<size_t>(w) * h, -1);
  const auto index = [&](int cx, int cy) { return static_cast<size_t>(cy) * w + cx; };
  std::deque<std::pair<int, int>> frontier{{sx, sy}};
  dist[index(sx, sy)] = 0;
  while (!frontier.empty()) {
    const auto [cx, cy] = frontier.front();
    frontier.pop_front();
    if (goal.contains(center(cx, cy))) {
      return (dist[index(cx, cy)] + 1) * kCellSize;
    }
    constexpr int dx[] = {1, -1, 0, 0};
    constexpr int dy[] = {0, 0, 1, -1};
    for (int dir = 0; dir < 4; ++dir) {
      const int nx = cx + dx[dir];
      const int ny = cy + dy[dir];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      if (dist[index(nx, ny)] >= 0 || blocked(nx, ny)) continue;
      dist[index(nx, ny)] = dist[index(cx, cy)] + 1;
      frontier.emplace_back(nx, ny);
    }
  }
  return std::nullopt;
}

}  // namespace

bool racecars_solvable(const ContinuousScene& scene) {
  for (const auto& [robot, spec] : scene.robots) {
    if (!spec.goal_region) continue;
    const auto len = coarse_path_length(scene, spec.start, *spec.goal_region,
                                        scene.safe_distance + 0.15);
    if (!len) return false;
    if (*len / scene.robot_v_max(robot) > scene.time_limit) return false;
  }
  return true;
}

ContinuousState generate_racecars(const DifficultyParams& d, Rng& rng) {
  for (int attempt = 0; attempt < kGenerationResampleLimit; ++attempt) {
    ContinuousScene scene;
    scene.bounds = {0.0, 0.0, 20.0, 12.0};
    scene.v_max = 2.0;
    scene.safe_distance = 0.0;
    scene.time_limit = 40.0;

    const double lane = 12.0 / (d.num_robots + 1);
    for (int i = 0; i < d.num_robots; ++i) {
      RobotSpec spec;
      const double y = lane * (i + 1);
      spec.start = {1.0, y + rng.uniform_real(-0.3, 0.3)};
      spec.goal_region = Rect{18.0, std::max(0.5, y - 1.2), 19.5, std::min(11.5, y + 1.2)};
      scene.robots["car" + std::to_string(i + 1)] = spec;
    }
    for (int i = 0; i < d.num_obstacles; ++i) {
      const Vec2 center{rng.uniform_real(5.0, 15.0), rng.uniform_real(1.5, 10.5)};
      const double radius = rng.uniform_real(0.8, 1.6);
      const int sides = static_cast<int>(rng.uniform_int(3, 6));
      const double phase = rng.uniform_real(0.0, 2.0 * M_PI);
      scene.obstacles.push_back(
          make_convex_obstacle("obstacle" + std::to_string(i + 1), center, radius, sides, phase));
    }

    // Starts must sit clear of the sampled obstacles.
    bool starts_clear = true;
    for (const auto& [robot, spec] : scene.robots) {
      for (const auto& obs : scene.obstacles) {
        if (point_polygon_distance(spec.start, obs.world_vertices()) < 0.4) {
          starts_clear = false;
        }
      }
    }
    if (starts_clear && racecars_solvable(scene)) return ContinuousState{scene, std::nullopt};
  }
  throw UnsatisfiableError("racecars: no reachable layout after re-sampling");
}

ContinuousState generate_drones(const DifficultyParams& d, Rng& rng) {
  ContinuousScene scene;
  scene.bounds = {0.0, 0.0, 20.0, 12.0};
  scene.v_max = 2.0;
  scene.safe_distance = 0.25;
  scene.time_limit = 10.0 + 6.0 * d.num_robots;

  HoleSpec hole;
  hole.x0 = 9.6;
  hole.x1 = 10.4;
  const double half_width = scene.safe_distance + 0.3;
  const double center_y = rng.uniform_real(3.0, 9.0);
  hole.y0 = center_y - half_width;
  hole.y1 = center_y + half_width;
  hole.target_side = "right";
  scene.hole = hole;

  scene.obstacles.push_back(make_rect_obstacle("wall_bottom", hole.x0, 0.0, hole.x1, hole.y0));
  scene.obstacles.push_back(make_rect_obstacle("wall_top", hole.x0, hole.y1, hole.x1, 12.0));

  const double lane = 12.0 / (d.num_robots + 1);
  for (int i = 0; i < d.num_robots; ++i) {
    RobotSpec spec;
    spec.start = {2.0 + rng.uniform_real(-0.5, 0.5), lane * (i + 1)};
    scene.robots["drone" + std::to_string(i + 1)] = spec;
  }
  // Solvable by construction: drones fit through the hole one at a time and
  // the time limit covers serialized crossings with slack.
  return ContinuousState{scene, std::nullopt};
}

ContinuousState generate_shape_formation(const DifficultyParams& d, Rng& rng) {
  ContinuousScene scene;
  scene.bounds = {0.0, 0.0, 10.0, 10.0};
  scene.v_max = 1.5;
  scene.safe_distance = 0.0;
  scene.time_limit = 60.0;

  ShapeSpec shape;
  const char* shapes[] = {"circle", "triangle", "line"};
  shape.shape = shapes[rng.uniform_int(0, 2)];
  const Vec2 center{5.0, 5.5};
  const int n = d.num_boxes;
  for (int i = 0; i < n; ++i) {
    ShapeSlot slot;
    slot.tolerance = 0.3;
    if (shape.shape == "circle") {
      const double angle = M_PI / 2.0 + 2.0 * M_PI * i / n;
      slot.center = {center.x + 2.5 * std::cos(angle), center.y + 2.5 * std::sin(angle)};
    } else if (shape.shape == "triangle") {
      const Vec2 corners[3] = {{center.x, center.y + 2.8},
                               {center.x - 2.4, center.y - 1.6},
                               {center.x + 2.4, center.y - 1.6}};
      const double along = static_cast<double>(i) / n * 3.0;
      const int edge = std::min(2, static_cast<int>(along));
      const double u = along - edge;
      const Vec2 a = corners[edge];
      const Vec2 b = corners[(edge + 1) % 3];
      slot.center = a + u * (b - a);
    } else {
      slot.center = {2.0 + 6.0 * i / std::max(1, n - 1), 5.5};
    }
    shape.slots.push_back(slot);
  }

  for (int i = 0; i < d.num_obstacles; ++i) {
    Bowl bowl;
    bowl.radius = 0.6;
    bool placed = false;
    for (int attempt = 0; attempt < kGenerationResampleLimit && !placed; ++attempt) {
      bowl.center = {rng.uniform_real(1.0, 9.0), rng.uniform_real(1.0, 9.0)};
      placed = std::all_of(shape.slots.begin(), shape.slots.end(), [&](const ShapeSlot& s) {
        return distance(bowl.center, s.center) > bowl.radius + s.tolerance + 0.2;
      });
    }
    if (placed) shape.bowls.push_back(bowl);
  }

  for (int i = 0; i < n; ++i) {
    RobotSpec spec;
    bool placed = false;
    for (int attempt = 0; attempt < kGenerationResampleLimit && !placed; ++attempt) {
      spec.start = {rng.uniform_real(0.5, 9.5), rng.uniform_real(0.5, 9.5)};
      placed = std::all_of(shape.bowls.begin(), shape.bowls.end(), [&](const Bowl& b) {
        return distance(spec.start, b.center) > b.radius + 0.1;
      });
    }
    scene.robots["box" + std::to_string(i + 1)] = spec;
  }
  return ContinuousState{scene, shape};
}

}  // namespace tampforge
