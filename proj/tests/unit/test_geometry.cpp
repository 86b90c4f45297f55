#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tampforge/geometry.hpp"
#include "tampforge/rng.hpp"
#include "test_support.hpp"

using namespace tampforge;
using tampforge::testing::sampled_segment_clearance;

namespace {

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

Polygon random_polygon(Rng& rng) {
  // Star-convex around a random center: always simple.
  const Vec2 center{rng.uniform_real(-3, 3), rng.uniform_real(-3, 3)};
  const int n = static_cast<int>(rng.uniform_int(3, 9));
  Polygon poly;
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * M_PI * k / n + rng.uniform_real(0.0, 0.4);
    const double r = rng.uniform_real(0.4, 2.5);
    poly.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
  }
  return poly;
}

}  // namespace

TEST_CASE("interpolate hits segment midpoints") {
  const std::vector<Waypoint> traj{{0, 0, 0}, {2, 0, 2}};
  const Vec2 mid = interpolate(traj, 1.0);
  CHECK(mid.x == doctest::Approx(1.0));
  CHECK(mid.y == doctest::Approx(0.0));
}

TEST_CASE("interpolate is exact at waypoints, zero slack") {
  const std::vector<Waypoint> traj{{0.1, 0.7, 0.0}, {2.3, -1.9, 1.7}, {5.5, 3.3, 2.9}};
  for (const Waypoint& w : traj) {
    const Vec2 p = interpolate(traj, w.t);
    CHECK(p.x == w.x);  // bitwise: stored coordinates are returned as-is
    CHECK(p.y == w.y);
  }
}

TEST_CASE("interpolate piecewise value matches hand computation and dense sampling") {
  const std::vector<Waypoint> traj{{0, 0, 0}, {1, 1, 1}, {1, 3, 2}};
  const Vec2 p = interpolate(traj, 1.5);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(2.0));

  // Dense-sampling cross-check: walking tiny steps from the previous waypoint
  // lands at the same place.
  Vec2 probe{1, 1};
  const int n = 1000;
  for (int i = 1; i <= n; ++i) {
    probe = interpolate(traj, 1.0 + 0.5 * i / n);
  }
  CHECK(probe.x == doctest::Approx(p.x).epsilon(1e-9));
  CHECK(probe.y == doctest::Approx(p.y).epsilon(1e-9));
}

TEST_CASE("interpolate rejects out-of-range queries") {
  const std::vector<Waypoint> traj{{0, 0, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(interpolate(traj, 0.5), std::out_of_range);
  CHECK_THROWS_AS(interpolate(traj, 2.5), std::out_of_range);
  CHECK_THROWS_AS(interpolate({}, 0.0), std::out_of_range);
  CHECK(position_at(traj, 0.0) == Vec2{0, 0});
  CHECK(position_at(traj, 9.0) == Vec2{1, 0});
}

TEST_CASE("interpolate is Lipschitz within a segment") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Waypoint> traj;
    double t = 0.0;
    for (int k = 0; k < 4; ++k) {
      traj.push_back({rng.uniform_real(-5, 5), rng.uniform_real(-5, 5), t});
      t += rng.uniform_real(0.2, 1.5);
    }
    const double t0 = rng.uniform_real(traj.front().t, traj.back().t);
    const double delta = rng.uniform_real(0.0, 0.05);
    const double t1 = std::min(t0 + delta, traj.back().t);
    // Segment speed bound over the whole trajectory.
    double v_max_seg = 0.0;
    for (size_t i = 0; i + 1 < traj.size(); ++i) {
      const double v = distance({traj[i].x, traj[i].y}, {traj[i + 1].x, traj[i + 1].y}) /
                       (traj[i + 1].t - traj[i].t);
      v_max_seg = std::max(v_max_seg, v);
    }
    const double moved = distance(interpolate(traj, t0), interpolate(traj, t1));
    CHECK(moved <= v_max_seg * (t1 - t0) + 1e-9);
  }
}

TEST_CASE("segment clearance handles the documented cases") {
  const Polygon square = unit_square();

  // Fully inside.
  CHECK(segment_polygon_clearance({0.3, 0.3}, {0.7, 0.7}, square) == 0.0);
  // Crossing.
  CHECK(segment_polygon_clearance({-1, 0.5}, {2, 0.5}, square) == 0.0);
  // Horizontal segment one meter above.
  CHECK(segment_polygon_clearance({-1, 2}, {2, 2}, square) == doctest::Approx(1.0));
  // Touching the boundary is contact.
  CHECK(segment_polygon_clearance({1, 1}, {2, 2}, square) == 0.0);
}

TEST_CASE("segment clearance matches the dense-sampling oracle on random pairs") {
  Rng rng(8675309);
  for (int trial = 0; trial < 300; ++trial) {
    const Polygon poly = random_polygon(rng);
    const Vec2 a{rng.uniform_real(-6, 6), rng.uniform_real(-6, 6)};
    const Vec2 b{rng.uniform_real(-6, 6), rng.uniform_real(-6, 6)};
    const double exact = segment_polygon_clearance(a, b, poly);
    const double sampled = sampled_segment_clearance(a, b, poly);
    // The sampled value can only overestimate, by at most the sample spacing.
    const double spacing = distance(a, b) / 10000.0;
    CHECK(exact <= sampled + 1e-9);
    CHECK(sampled - exact <= spacing + 1e-6);
  }
}

TEST_CASE("interior entry detection distinguishes grazing from crossing") {
  const Polygon square = unit_square();
  CHECK(segment_enters_polygon_interior({-1, 0.5}, {2, 0.5}, square));
  CHECK(segment_enters_polygon_interior({0.2, 0.2}, {0.8, 0.8}, square));
  // Sliding along an edge touches but never enters.
  CHECK_FALSE(segment_enters_polygon_interior({-1, 0}, {2, 0}, square));
  CHECK_FALSE(segment_enters_polygon_interior({-1, 1}, {2, 1}, square));
  // Ending exactly on a corner point only.
  CHECK_FALSE(segment_enters_polygon_interior({-1, 2}, {0, 1}, square));
  CHECK_FALSE(segment_enters_polygon_interior({2, 2}, {3, 3}, square));
  // The corner-to-corner chord does run through the interior.
  CHECK(segment_enters_polygon_interior({-1, 2}, {2, -1}, square));
}

TEST_CASE("point in polygon counts the boundary as inside") {
  const Polygon square = unit_square();
  CHECK(point_in_polygon({0.5, 0.5}, square));
  CHECK(point_in_polygon({0, 0.5}, square));
  CHECK(point_in_polygon({0, 0}, square));
  CHECK_FALSE(point_in_polygon({1.001, 0.5}, square));
  CHECK_FALSE(point_strictly_inside({0, 0.5}, square));
  CHECK(point_strictly_inside({0.5, 0.5}, square));
}

TEST_CASE("moving point minimum distance matches dense sampling") {
  Rng rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 p{rng.uniform_real(-5, 5), rng.uniform_real(-5, 5)};
    const Vec2 q{rng.uniform_real(-5, 5), rng.uniform_real(-5, 5)};
    const Vec2 vp{rng.uniform_real(-2, 2), rng.uniform_real(-2, 2)};
    const Vec2 vq{rng.uniform_real(-2, 2), rng.uniform_real(-2, 2)};
    const double dt = rng.uniform_real(0.1, 4.0);

    const double exact = min_distance_moving_points(p, vp, q, vq, dt);
    double sampled = 1e18;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const double t = dt * i / n;
      sampled = std::min(sampled, distance(p + t * vp, q + t * vq));
    }
    CHECK(exact <= sampled + 1e-9);
    CHECK(sampled - exact <= 4.0 * dt / n + 1e-9);
  }
}

TEST_CASE("polygon helpers") {
  CHECK(polygon_is_simple(unit_square()));
  const Polygon bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(polygon_is_simple(bowtie));

  PolygonObstacle obs;
  obs.name = "sq";
  obs.vertices = unit_square();
  obs.orientation = M_PI / 2.0;
  const Polygon rotated = obs.world_vertices();
  // Rotation about the centroid maps the square onto itself (up to roundoff).
  for (const Vec2& v : rotated) {
    CHECK(point_polygon_distance(v, unit_square()) < 1e-12);
  }
}
