#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>

#include "tampforge/discrete.hpp"
#include "tampforge/instance.hpp"

using namespace tampforge;

namespace {

Step one(const std::string& robot, const std::string& action, std::vector<json> args = {}) {
  return {Action{robot, action, std::move(args)}};
}

GridworldState small_grid() {
  GridworldState s;
  s.width = 3;
  s.height = 3;
  s.obstacles = {{1, 1}};
  s.goals = {{2, 2}};
  s.visited = {false};
  s.robot = {0, 0};
  return s;
}

}  // namespace

TEST_CASE("gridworld moves respect obstacles and bounds") {
  GridworldState s = small_grid();
  s.robot = {1, 0};

  const auto into_obstacle = apply_step(s, one("robot", "move_up"));
  REQUIRE(std::holds_alternative<IllegalAction>(into_obstacle));

  s.robot = {0, 0};
  const auto off_grid = apply_step(s, one("robot", "move_down"));
  REQUIRE(std::holds_alternative<IllegalAction>(off_grid));

  const auto ok = apply_step(s, one("robot", "move_right"));
  REQUIRE(std::holds_alternative<GridworldState>(ok));
  CHECK(std::get<GridworldState>(ok).robot == Cell{1, 0});
  CHECK(s.robot == Cell{0, 0});  // input untouched
}

TEST_CASE("gridworld visit_goal needs an unvisited goal underfoot") {
  GridworldState s = small_grid();
  CHECK(std::holds_alternative<IllegalAction>(apply_step(s, one("robot", "visit_goal"))));

  s.robot = {2, 2};
  auto visited = apply_step(s, one("robot", "visit_goal"));
  REQUIRE(std::holds_alternative<GridworldState>(visited));
  const GridworldState next = std::get<GridworldState>(visited);
  CHECK(is_goal(next));
  CHECK_FALSE(is_goal(s));
  CHECK(std::holds_alternative<IllegalAction>(apply_step(next, one("robot", "visit_goal"))));
}

TEST_CASE("gridworld reachability agrees with direct grid BFS on random instances") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const GridworldState s = generate_gridworld(default_difficulty(EnvKind::Gridworld, 1), rng);

    // Route A: flood fill over apply_step successors.
    std::set<Cell> via_apply{s.robot};
    std::deque<GridworldState> frontier{s};
    while (!frontier.empty()) {
      const GridworldState cur = frontier.front();
      frontier.pop_front();
      for (const char* move : {"move_up", "move_down", "move_left", "move_right"}) {
        const auto next = apply_step(cur, one("robot", move));
        if (const auto* state = std::get_if<GridworldState>(&next)) {
          if (via_apply.insert(state->robot).second) frontier.push_back(*state);
        }
      }
    }

    // Route B: plain grid BFS on the occupancy map.
    std::set<Cell> direct{s.robot};
    std::deque<Cell> cells{s.robot};
    while (!cells.empty()) {
      const Cell cur = cells.front();
      cells.pop_front();
      for (const Cell d : {Cell{0, 1}, Cell{0, -1}, Cell{1, 0}, Cell{-1, 0}}) {
        const Cell nxt{cur.x + d.x, cur.y + d.y};
        if (!s.in_bounds(nxt) || s.is_obstacle(nxt) || direct.count(nxt)) continue;
        direct.insert(nxt);
        cells.push_back(nxt);
      }
    }
    REQUIRE(via_apply == direct);
  }
}

TEST_CASE("blocksworld action schemas") {
  BlocksworldState s;
  s.towers = {{"A", "B"}, {"C"}};

  SUBCASE("pickup requires a lone block") {
    CHECK(std::holds_alternative<IllegalAction>(
        apply_step(s, one("arm", "pickup", {json("A")}))));
    const auto ok = apply_step(s, one("arm", "pickup", {json("C")}));
    REQUIRE(std::holds_alternative<BlocksworldState>(ok));
    CHECK(std::get<BlocksworldState>(ok).holding == "C");
  }

  SUBCASE("unstack takes the clear top block") {
    const auto ok = apply_step(s, one("arm", "unstack", {json("B"), json("A")}));
    REQUIRE(std::holds_alternative<BlocksworldState>(ok));
    CHECK(std::get<BlocksworldState>(ok).holding == "B");
    CHECK(std::holds_alternative<IllegalAction>(
        apply_step(s, one("arm", "unstack", {json("A"), json("B")}))));
  }

  SUBCASE("putdown empties the hand onto the table") {
    auto lifted = apply_step(s, one("arm", "pickup", {json("C")}));
    const BlocksworldState held = std::get<BlocksworldState>(lifted);
    const auto dropped = apply_step(held, one("arm", "putdown", {json("C")}));
    REQUIRE(std::holds_alternative<BlocksworldState>(dropped));
    const BlocksworldState after = std::get<BlocksworldState>(dropped);
    CHECK_FALSE(after.holding.has_value());
    CHECK(after.canonical() == s.canonical());
  }

  SUBCASE("stack needs a clear target") {
    auto lifted = apply_step(s, one("arm", "unstack", {json("B"), json("A")}));
    const BlocksworldState held = std::get<BlocksworldState>(lifted);
    const auto stacked = apply_step(held, one("arm", "stack", {json("B"), json("C")}));
    REQUIRE(std::holds_alternative<BlocksworldState>(stacked));
    GoalSpec goal;
    goal.towers = {{"A"}, {"C", "B"}};
    CHECK(is_goal(std::get<BlocksworldState>(stacked), goal));
  }
}

TEST_CASE("blocksworld conserves the block multiset under random legal walks") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto [state, goal] = generate_blocksworld(default_difficulty(EnvKind::Blocksworld, 1), rng);
    const auto reference = state.all_blocks();
    for (int step = 0; step < 60; ++step) {
      const auto candidates = enumerate_candidate_steps(state);
      REQUIRE(!candidates.empty());
      const auto& pick = candidates[rng.uniform_int(0, candidates.size() - 1)];
      const auto next = apply_step(state, pick);
      REQUIRE(std::holds_alternative<BlocksworldState>(next));
      state = std::get<BlocksworldState>(next);
      CHECK(state.all_blocks() == reference);
    }
  }
}

TEST_CASE("boxlift combined capacity must exceed the weight") {
  BoxLiftState s;
  s.robots = {{"r1", 50}, {"r2", 40}};
  s.boxes = {{"b1", {85, false}}, {"b2", {95, false}}};

  const Step joint_85 = {Action{"r1", "lift", {json("b1")}},
                         Action{"r2", "lift", {json("b1")}}};
  const auto lifted = apply_step(s, joint_85);
  REQUIRE(std::holds_alternative<BoxLiftState>(lifted));
  CHECK(std::get<BoxLiftState>(lifted).boxes.at("b1").lifted);
  CHECK_FALSE(std::get<BoxLiftState>(lifted).boxes.at("b2").lifted);

  const Step joint_95 = {Action{"r1", "lift", {json("b2")}},
                         Action{"r2", "lift", {json("b2")}}};
  CHECK(std::holds_alternative<IllegalAction>(apply_step(s, joint_95)));

  // Exactly equal capacity does not lift ("exceeds" is strict).
  BoxLiftState equal = s;
  equal.boxes["b3"] = {90, false};
  const Step joint_90 = {Action{"r1", "lift", {json("b3")}},
                         Action{"r2", "lift", {json("b3")}}};
  CHECK(std::holds_alternative<IllegalAction>(apply_step(equal, joint_90)));
}

TEST_CASE("boxlift rejects double duty and unknown names") {
  BoxLiftState s;
  s.robots = {{"r1", 100}};
  s.boxes = {{"b1", {30, false}}};
  const Step twice = {Action{"r1", "lift", {json("b1")}},
                      Action{"r1", "lift", {json("b1")}}};
  CHECK(std::holds_alternative<IllegalAction>(apply_step(s, twice)));
  CHECK(std::holds_alternative<IllegalAction>(apply_step(s, one("rX", "lift", {json("b1")}))));
  CHECK(std::holds_alternative<IllegalAction>(apply_step(s, one("r1", "lift", {json("bX")}))));

  auto done = apply_step(s, one("r1", "lift", {json("b1")}));
  const BoxLiftState lifted = std::get<BoxLiftState>(done);
  CHECK(is_goal(lifted));
  CHECK(std::holds_alternative<IllegalAction>(apply_step(lifted, one("r1", "lift", {json("b1")}))));
}

TEST_CASE("boxlift generation honors documented ranges or reports unsatisfiable") {
  DifficultyParams impossible;
  impossible.num_robots = 1;
  impossible.num_boxes = 1;
  impossible.cap_min = 10;
  impossible.cap_max = 10;
  impossible.weight_min = 250;
  impossible.weight_max = 250;
  Rng rng(5);
  CHECK_THROWS_AS(generate_boxlift(impossible, rng), UnsatisfiableError);

  Rng ok_rng(5);
  const BoxLiftState s = generate_boxlift(default_difficulty(EnvKind::BoxLift, 2), ok_rng);
  CHECK(boxlift_solvable(s));
}

TEST_CASE("boxnet arms act only in their own cell and never share a box") {
  BoxNetState s;
  s.width = 2;
  s.height = 1;
  s.arms = {{"arm1", {0, 0}}, {"arm2", {1, 0}}};
  s.boxes = {{"box_red", {{0, 0}, false}}};
  s.goals = {{"red", {1, 0}}};

  // Move right, then place at the goal cell by the co-located arm.
  auto moved = apply_step(s, one("arm1", "move_box", {json("box_red"), json("right")}));
  REQUIRE(std::holds_alternative<BoxNetState>(moved));
  const BoxNetState mid = std::get<BoxNetState>(moved);
  CHECK(mid.boxes.at("box_red").cell == Cell{1, 0});

  CHECK(std::holds_alternative<IllegalAction>(
      apply_step(mid, one("arm1", "place_box", {json("box_red")}))));
  auto placed = apply_step(mid, one("arm2", "place_box", {json("box_red")}));
  REQUIRE(std::holds_alternative<BoxNetState>(placed));
  CHECK(is_goal(std::get<BoxNetState>(placed)));

  // Two arms on the same box in one step is a conflict.
  BoxNetState shared = s;
  shared.arms["arm2"] = {0, 0};
  const Step conflict = {Action{"arm1", "move_box", {json("box_red"), json("right")}},
                         Action{"arm2", "move_box", {json("box_red"), json("right")}}};
  CHECK(std::holds_alternative<IllegalAction>(apply_step(shared, conflict)));

  // Out of the grid fails.
  CHECK(std::holds_alternative<IllegalAction>(
      apply_step(s, one("arm1", "move_box", {json("box_red"), json("left")}))));
}

TEST_CASE("generators certify solvability constructively") {
  SUBCASE("gridworld with a goal adjacent to the start") {
    GridworldState s;
    s.width = 2;
    s.height = 2;
    s.goals = {{0, 1}};
    s.visited = {false};
    s.robot = {0, 0};
    CHECK(gridworld_solvable(s));
  }
  SUBCASE("generated instances pass their own certificates") {
    for (int level = 0; level < kDifficultyLevels; ++level) {
      Rng rng(1000 + level);
      CHECK(gridworld_solvable(
          generate_gridworld(default_difficulty(EnvKind::Gridworld, level), rng)));
      CHECK(boxnet_solvable(
          generate_boxnet(default_difficulty(EnvKind::BoxNet, level), rng)));
      CHECK(boxlift_solvable(
          generate_boxlift(default_difficulty(EnvKind::BoxLift, level), rng)));
    }
  }
  SUBCASE("unsolvable gridworld layouts are rejected") {
    GridworldState walled;
    walled.width = 3;
    walled.height = 1;
    walled.obstacles = {{1, 0}};
    walled.goals = {{2, 0}};
    walled.visited = {false};
    walled.robot = {0, 0};
    CHECK_FALSE(gridworld_solvable(walled));
  }
}

TEST_CASE("step tokens round-trip") {
  const Step step = {Action{"r1", "lift", {json("b2")}},
                     Action{"r2", "lift", {json("b2")}}};
  const auto back = step_from_token(step_to_token(step));
  REQUIRE(back.has_value());
  CHECK(*back == step);
  CHECK_FALSE(step_from_token("not json").has_value());
}

TEST_CASE("step limit formula dominates constructive bounds") {
  for (const EnvKind kind :
       {EnvKind::Gridworld, EnvKind::Blocksworld, EnvKind::BoxLift, EnvKind::BoxNet}) {
    for (int level = 0; level < kDifficultyLevels; ++level) {
      const DifficultyParams d = default_difficulty(kind, level);
      CHECK(step_limit_formula(kind, d) > 0);
    }
  }
  // Blocksworld: 4 moves per block suffice constructively.
  const DifficultyParams d = default_difficulty(EnvKind::Blocksworld, 4);
  CHECK(step_limit_formula(EnvKind::Blocksworld, d) >= 4 * d.num_blocks);
}
