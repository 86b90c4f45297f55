#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tampforge/rng.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

void to_json(json& j, const Cell& c);
void from_json(const json& j, Cell& c);

// --- States ---------------------------------------------------------------

struct GridworldState {
  int width = 0;
  int height = 0;
  std::vector<Cell> obstacles;      // sorted, unique
  std::vector<Cell> goals;          // sorted, unique
  std::vector<bool> visited;        // parallel to goals
  Cell robot;

  bool in_bounds(Cell c) const;
  bool is_obstacle(Cell c) const;
  std::optional<size_t> goal_index(Cell c) const;

  friend bool operator==(const GridworldState&, const GridworldState&) = default;
};

struct BlocksworldState {
  std::vector<std::vector<std::string>> towers;  // bottom to top
  std::optional<std::string> holding;

  std::vector<std::string> all_blocks() const;   // sorted
  bool is_clear(const std::string& block) const;
  // Towers sorted by bottom block; used for state hashing and comparison.
  BlocksworldState canonical() const;

  friend bool operator==(const BlocksworldState&, const BlocksworldState&) = default;
};

struct BoxLiftBox {
  int weight = 0;
  bool lifted = false;

  friend bool operator==(const BoxLiftBox&, const BoxLiftBox&) = default;
};

struct BoxLiftState {
  std::map<std::string, int> robots;        // robot id -> capacity
  std::map<std::string, BoxLiftBox> boxes;

  friend bool operator==(const BoxLiftState&, const BoxLiftState&) = default;
};

struct BoxNetBox {
  Cell cell;
  bool placed = false;  // in the goal slot of its color

  friend bool operator==(const BoxNetBox&, const BoxNetBox&) = default;
};

struct BoxNetState {
  int width = 0;
  int height = 0;
  std::map<std::string, Cell> arms;          // arm id -> fixed cell
  std::map<std::string, BoxNetBox> boxes;    // box id "box_<color>" -> location
  std::map<std::string, Cell> goals;         // color -> cell holding its goal slot

  bool in_bounds(Cell c) const;
  std::optional<std::string> arm_at(Cell c) const;

  friend bool operator==(const BoxNetState&, const BoxNetState&) = default;
};

// Color encoded in the id, e.g. "box_blue" -> "blue".
std::string box_color(const std::string& box_id);

void to_json(json& j, const BoxLiftBox& b);
void from_json(const json& j, BoxLiftBox& b);
void to_json(json& j, const BoxNetBox& b);
void from_json(const json& j, BoxNetBox& b);
void to_json(json& j, const GridworldState& s);
void from_json(const json& j, GridworldState& s);
void to_json(json& j, const BlocksworldState& s);
void from_json(const json& j, BlocksworldState& s);
void to_json(json& j, const BoxLiftState& s);
void from_json(const json& j, BoxLiftState& s);
void to_json(json& j, const BoxNetState& s);
void from_json(const json& j, BoxNetState& s);

// --- Transition semantics ---------------------------------------------------

struct IllegalAction {
  std::string detail;
};

template <typename State>
using ApplyResult = std::variant<State, IllegalAction>;

// Applies one time step of simultaneous per-robot actions. Inputs are never
// mutated; an IllegalAction outcome leaves no side effects. Robots omitted
// from the step implicitly no-op. A robot listed twice is illegal.
ApplyResult<GridworldState> apply_step(const GridworldState& s, const Step& step);
ApplyResult<BlocksworldState> apply_step(const BlocksworldState& s, const Step& step);
ApplyResult<BoxLiftState> apply_step(const BoxLiftState& s, const Step& step);
ApplyResult<BoxNetState> apply_step(const BoxNetState& s, const Step& step);

bool is_goal(const GridworldState& s);
bool is_goal(const BlocksworldState& s, const GoalSpec& goal);
bool is_goal(const BoxLiftState& s);
bool is_goal(const BoxNetState& s);

// All legal single-commitment steps from this state, for candidate scoring
// (SayCan) and per-step proposal validation (HMAS-2). Each entry is one
// complete step; for BoxLift a step bundles the cheapest sufficient robot
// group for one box.
std::vector<Step> enumerate_candidate_steps(const GridworldState& s);
std::vector<Step> enumerate_candidate_steps(const BlocksworldState& s);
std::vector<Step> enumerate_candidate_steps(const BoxLiftState& s);
std::vector<Step> enumerate_candidate_steps(const BoxNetState& s);

// Compact human/LLM-facing token for a candidate step, stable across runs.
std::string step_to_token(const Step& step);
std::optional<Step> step_from_token(const std::string& token);

// --- Generation -------------------------------------------------------------

// Deterministic in (difficulty, rng seed); certified solvable before return.
GridworldState generate_gridworld(const DifficultyParams& d, Rng& rng);
std::pair<BlocksworldState, GoalSpec> generate_blocksworld(const DifficultyParams& d, Rng& rng);
BoxLiftState generate_boxlift(const DifficultyParams& d, Rng& rng);
BoxNetState generate_boxnet(const DifficultyParams& d, Rng& rng);

// Constructive solvability certificates, also used by generators.
bool gridworld_solvable(const GridworldState& s);
bool boxlift_solvable(const BoxLiftState& s);
bool boxnet_solvable(const BoxNetState& s);

}  // namespace tampforge
