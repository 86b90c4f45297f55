#pragma once

#include <string>

#include "tampforge/continuous.hpp"
#include "tampforge/rng.hpp"
#include "tampforge/types.hpp"

namespace tampforge::testing {

inline std::string test_data_dir() {
#ifdef TAMPFORGE_TEST_DATA_DIR
  return TAMPFORGE_TEST_DATA_DIR;
#else
  return "tests/data";
#endif
}

// Dense-sampling counterpart of the closed-form motion checker. Positions
// are sampled at dt = dt_fraction * time_limit; clearances are minima over
// the samples. Used as the independent route for randomized agreement tests.
struct SampledMotion {
  Verdict verdict = Verdict::pass();
  double min_obstacle_clearance = 0.0;
  double min_pairwise_clearance = 0.0;
  bool obstacle_penetration = false;
};

SampledMotion sampled_motion_verdict(const ContinuousScene& scene, const Plan& plan,
                                     double dt_fraction = 1e-3);

// Exact minimum clearances along the plan, via the same segment analysis the
// production checker uses; exposed for boundary-band comparisons.
struct AnalyticClearances {
  double min_obstacle_clearance = 0.0;
  double min_pairwise_clearance = 0.0;
};

AnalyticClearances analytic_clearances(const ContinuousScene& scene, const Plan& plan);

// Brute-force minimum distance between a segment and a polygon: n sample
// points along the segment, point-to-polygon distance at each.
double sampled_segment_clearance(Vec2 a, Vec2 b, const Polygon& poly, int samples = 10000);

// Random waypoint plan over a scene; `wildness` in [0,1] scales how often
// speeds, clearances, and the time limit are pushed past their bounds.
Plan random_waypoint_plan(const ContinuousScene& scene, Rng& rng, double wildness);

}  // namespace tampforge::testing
