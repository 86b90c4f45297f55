#include "test_support.hpp"

#include <algorithm>
#include <limits>

#include "tampforge/geometry.hpp"

namespace tampforge::testing {

namespace {

std::vector<Waypoint> padded_trajectory(const ContinuousScene& scene,
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

}  // namespace

SampledMotion sampled_motion_verdict(const ContinuousScene& scene, const Plan& plan,
                                     double dt_fraction) {
  SampledMotion result;
  const double horizon = scene.time_limit;
  const double dt = dt_fraction * scene.time_limit;

  // Speed and makespan checks are exact either way; reuse the plan segments.
  for (const auto& [robot, traj] : plan.trajectories) {
    const double limit = scene.robot_v_max(robot) * (1.0 + kSpeedEpsilon);
    for (size_t i = 0; i + 1 < traj.size(); ++i) {
      const double seg_dt = traj[i + 1].t - traj[i].t;
      const double dist = distance({traj[i].x, traj[i].y}, {traj[i + 1].x, traj[i + 1].y});
      if (dist > limit * seg_dt) {
        result.verdict = Verdict::fail(FailureReason::VelocityViolation,
                                       "sampled: speed", true, false, false);
        return result;
      }
    }
    if (!traj.empty() && traj.back().t > scene.time_limit * (1.0 + kSpeedEpsilon)) {
      result.verdict = Verdict::fail(FailureReason::TimeLimitViolation,
                                     "sampled: makespan", true, false, false);
      return result;
    }
  }

  std::map<std::string, std::vector<Waypoint>> motions;
  for (const auto& [robot, spec] : scene.robots) {
    motions[robot] = padded_trajectory(scene, robot, plan, horizon);
  }
  std::vector<Polygon> world;
  for (const auto& obs : scene.obstacles) world.push_back(obs.world_vertices());

  result.min_obstacle_clearance = std::numeric_limits<double>::infinity();
  result.min_pairwise_clearance = std::numeric_limits<double>::infinity();
  if (world.empty()) result.min_obstacle_clearance = 1e9;
  if (motions.size() < 2) result.min_pairwise_clearance = 1e9;

  const int steps = static_cast<int>(horizon / dt) + 1;
  std::vector<std::vector<Vec2>> positions;
  std::vector<std::string> ids;
  for (const auto& [robot, traj] : motions) {
    ids.push_back(robot);
    std::vector<Vec2> row;
    row.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
      row.push_back(position_at(traj, std::min(horizon, k * dt)));
    }
    positions.push_back(std::move(row));
  }

  for (size_t r = 0; r < positions.size(); ++r) {
    for (const Vec2& p : positions[r]) {
      for (const Polygon& poly : world) {
        const double d = point_polygon_distance(p, poly);
        result.min_obstacle_clearance = std::min(result.min_obstacle_clearance, d);
        if (d == 0.0 && point_strictly_inside(p, poly)) result.obstacle_penetration = true;
      }
    }
  }
  for (size_t a = 0; a < positions.size(); ++a) {
    for (size_t b = a + 1; b < positions.size(); ++b) {
      for (int k = 0; k <= steps; ++k) {
        result.min_pairwise_clearance =
            std::min(result.min_pairwise_clearance, distance(positions[a][k], positions[b][k]));
      }
    }
  }

  if (result.obstacle_penetration) {
    result.verdict = Verdict::fail(FailureReason::CollisionViolation,
                                   "sampled: obstacle penetration", true, false, false);
  } else if (result.min_obstacle_clearance < scene.safe_distance - 1e-12) {
    result.verdict = Verdict::fail(FailureReason::SafeDistanceViolation,
                                   "sampled: obstacle clearance", true, false, false);
  } else if (scene.safe_distance > 0.0 &&
             result.min_pairwise_clearance < scene.safe_distance - 1e-12) {
    result.verdict = Verdict::fail(FailureReason::SafeDistanceViolation,
                                   "sampled: pairwise clearance", true, false, false);
  } else {
    result.verdict = Verdict::pass();
  }
  return result;
}

AnalyticClearances analytic_clearances(const ContinuousScene& scene, const Plan& plan) {
  AnalyticClearances result;
  const double horizon = scene.time_limit;
  std::map<std::string, std::vector<Waypoint>> motions;
  for (const auto& [robot, spec] : scene.robots) {
    motions[robot] = padded_trajectory(scene, robot, plan, horizon);
  }
  std::vector<Polygon> world;
  for (const auto& obs : scene.obstacles) world.push_back(obs.world_vertices());

  result.min_obstacle_clearance = world.empty() ? 1e9 : std::numeric_limits<double>::infinity();
  for (const auto& [robot, traj] : motions) {
    for (size_t i = 0; i + 1 < traj.size(); ++i) {
      const Vec2 a{traj[i].x, traj[i].y};
      const Vec2 b{traj[i + 1].x, traj[i + 1].y};
      for (const Polygon& poly : world) {
        result.min_obstacle_clearance =
            std::min(result.min_obstacle_clearance, segment_polygon_clearance(a, b, poly));
      }
    }
  }

  result.min_pairwise_clearance = motions.size() < 2 ? 1e9 : std::numeric_limits<double>::infinity();
  std::vector<const std::vector<Waypoint>*> trajs;
  for (const auto& [robot, traj] : motions) trajs.push_back(&traj);
  for (size_t a = 0; a < trajs.size(); ++a) {
    for (size_t b = a + 1; b < trajs.size(); ++b) {
      std::vector<double> breaks{0.0, horizon};
      for (const Waypoint& w : *trajs[a]) breaks.push_back(std::clamp(w.t, 0.0, horizon));
      for (const Waypoint& w : *trajs[b]) breaks.push_back(std::clamp(w.t, 0.0, horizon));
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
      for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double t0 = breaks[s];
        const double t1 = breaks[s + 1];
        const double dt = t1 - t0;
        if (dt <= 0.0) continue;
        const Vec2 pa0 = position_at(*trajs[a], t0);
        const Vec2 pa1 = position_at(*trajs[a], t1);
        const Vec2 pb0 = position_at(*trajs[b], t0);
        const Vec2 pb1 = position_at(*trajs[b], t1);
        const Vec2 va = (1.0 / dt) * (pa1 - pa0);
        const Vec2 vb = (1.0 / dt) * (pb1 - pb0);
        result.min_pairwise_clearance = std::min(
            result.min_pairwise_clearance, min_distance_moving_points(pa0, va, pb0, vb, dt));
      }
    }
  }
  return result;
}

double sampled_segment_clearance(Vec2 a, Vec2 b, const Polygon& poly, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    best = std::min(best, point_polygon_distance(a + u * (b - a), poly));
  }
  return best;
}

Plan random_waypoint_plan(const ContinuousScene& scene, Rng& rng, double wildness) {
  std::map<std::string, std::vector<Waypoint>> trajectories;
  for (const auto& [robot, spec] : scene.robots) {
    std::vector<Waypoint> traj{{spec.start.x, spec.start.y, 0.0}};
    const int hops = static_cast<int>(rng.uniform_int(1, 6));
    for (int k = 0; k < hops; ++k) {
      const Waypoint& prev = traj.back();
      // Mostly in-bounds targets; wild plans may leave the margins tight.
      const double margin = rng.chance(wildness) ? 0.0 : 0.5;
      const Vec2 target{
          rng.uniform_real(scene.bounds.xmin + margin, scene.bounds.xmax - margin),
          rng.uniform_real(scene.bounds.ymin + margin, scene.bounds.ymax - margin)};
      const double dist = distance({prev.x, prev.y}, target);
      // Speed factor straddles the limit when wild.
      const double factor = rng.chance(wildness) ? rng.uniform_real(0.85, 1.3)
                                                 : rng.uniform_real(0.3, 0.95);
      const double dt = std::max(dist / (scene.v_max * factor), 1e-3);
      traj.push_back({target.x, target.y, prev.t + dt});
    }
    trajectories[robot] = std::move(traj);
  }
  return Plan::waypoints(std::move(trajectories));
}

}  // namespace tampforge::testing
