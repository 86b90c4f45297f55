#pragma once

#include <optional>

#include "tampforge/instance.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

struct OracleConfig {
  size_t budget = 1'000'000;  // expanded states / assignment probes
};

enum class OracleStatus { Solved, NoSolution, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::BudgetExceeded;
  std::optional<Plan> plan;
  std::optional<int> optimal_length;  // step count of the returned plan
  size_t expanded = 0;
};

// Brute-force ground truth. Gridworld and Blocksworld run on independent
// re-implementations of the action semantics; BoxNet and BoxLift search over
// apply_step successors. ShapeFormation enumerates box-to-slot assignments.
// Path-Racecars and Path-Drones are not solvable by brute force and throw.
OracleResult oracle_solve(const TaskInstance& instance, const OracleConfig& config = {});

// BFS depth of the first goal state; nullopt when the budget ran out.
std::optional<int> oracle_optimal_length(const TaskInstance& instance,
                                         const OracleConfig& config = {});

// Sets step_limit to 3x the oracle-optimal length when the oracle solves the
// instance within budget; leaves the formula-based limit otherwise.
void tighten_step_limit(TaskInstance& instance, const OracleConfig& config = {});

}  // namespace tampforge
