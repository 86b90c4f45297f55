#include <benchmark/benchmark.h>

#include "tampforge/continuous.hpp"
#include "tampforge/geometry.hpp"
#include "tampforge/rng.hpp"

using namespace tampforge;

namespace {

Polygon random_polygon(Rng& rng) {
  Polygon poly;
  const Vec2 center{rng.uniform_real(2.0, 18.0), rng.uniform_real(2.0, 10.0)};
  const int sides = static_cast<int>(rng.uniform_int(3, 8));
  for (int k = 0; k < sides; ++k) {
    const double angle = 2.0 * 3.141592653589793 * k / sides;
    const double r = rng.uniform_real(0.5, 1.5);
    poly.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
  }
  return poly;
}

}  // namespace

static void BM_SegmentPolygonClearance(benchmark::State& state) {
  Rng rng(7);
  std::vector<Polygon> polys;
  for (int i = 0; i < 64; ++i) polys.push_back(random_polygon(rng));
  size_t i = 0;
  for (auto _ : state) {
    const Vec2 a{rng.uniform_real(0.0, 20.0), rng.uniform_real(0.0, 12.0)};
    const Vec2 b{rng.uniform_real(0.0, 20.0), rng.uniform_real(0.0, 12.0)};
    benchmark::DoNotOptimize(segment_polygon_clearance(a, b, polys[i++ % polys.size()]));
  }
}
BENCHMARK(BM_SegmentPolygonClearance);

static void BM_MotionConstraintCheck(benchmark::State& state) {
  Rng rng(11);
  DifficultyParams d = default_difficulty(EnvKind::PathDrones, 3);
  const ContinuousState scene_state = generate_drones(d, rng);
  std::map<std::string, std::vector<Waypoint>> trajectories;
  for (const auto& [id, spec] : scene_state.scene.robots) {
    trajectories[id] = {{spec.start.x, spec.start.y, 0.0},
                        {spec.start.x + 3.0, spec.start.y, 4.0},
                        {spec.start.x + 6.0, spec.start.y, 9.0}};
  }
  const Plan plan = Plan::waypoints(trajectories);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_motion_constraints(scene_state.scene, plan));
  }
}
BENCHMARK(BM_MotionConstraintCheck);
