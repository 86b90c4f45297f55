#include "tampforge/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tampforge {

namespace {

OracleResult solved(std::vector<Step> steps, size_t expanded) {
  OracleResult result;
  result.status = OracleStatus::Solved;
  result.optimal_length = static_cast<int>(steps.size());
  result.plan = Plan::actions(std::move(steps));
  result.expanded = expanded;
  return result;
}

OracleResult exhausted(size_t expanded) {
  OracleResult result;
  result.status = OracleStatus::NoSolution;
  result.expanded = expanded;
  return result;
}

OracleResult over_budget(size_t expanded) {
  OracleResult result;
  result.status = OracleStatus::BudgetExceeded;
  result.expanded = expanded;
  return result;
}

// --- Gridworld: independent grid BFS over (cell, visited-goal mask) ----------

OracleResult solve_gridworld(const GridworldState& start, const OracleConfig& config) {
  const int w = start.width;
  const int h = start.height;
  const size_t num_goals = start.goals.size();
  const uint32_t full_mask = num_goals == 0 ? 0 : (1u << num_goals) - 1;

  std::vector<char> blocked(static_cast<size_t>(w) * h, 0);
  for (const Cell& c : start.obstacles) blocked[static_cast<size_t>(c.y) * w + c.x] = 1;
  std::vector<int> goal_at(static_cast<size_t>(w) * h, -1);
  for (size_t i = 0; i < num_goals; ++i) {
    goal_at[static_cast<size_t>(start.goals[i].y) * w + start.goals[i].x] =
        static_cast<int>(i);
  }

  uint32_t start_mask = 0;
  for (size_t i = 0; i < num_goals; ++i) {
    if (start.visited[i]) start_mask |= 1u << i;
  }

  struct Node {
    int x, y;
    uint32_t mask;
  };
  const auto key = [&](int x, int y, uint32_t mask) {
    return (static_cast<uint64_t>(mask) * h + y) * w + x;
  };
  // visited-state key -> (parent key, action 0..3 move / 4 visit)
  std::unordered_map<uint64_t, std::pair<uint64_t, int>> parent;
  std::deque<Node> frontier{{start.robot.x, start.robot.y, start_mask}};
  parent[key(start.robot.x, start.robot.y, start_mask)] = {UINT64_MAX, -1};

  constexpr int dx[] = {0, 0, -1, 1};
  constexpr int dy[] = {1, -1, 0, 0};
  constexpr const char* move_names[] = {"move_up", "move_down", "move_left", "move_right"};

  size_t expanded = 0;
  std::optional<uint64_t> goal_key;
  if (start_mask == full_mask) goal_key = key(start.robot.x, start.robot.y, start_mask);

  while (!frontier.empty() && !goal_key) {
    if (++expanded > config.budget) return over_budget(expanded);
    const Node cur = frontier.front();
    frontier.pop_front();
    const uint64_t cur_key = key(cur.x, cur.y, cur.mask);

    const auto consider = [&](int x, int y, uint32_t mask, int action) {
      const uint64_t k = key(x, y, mask);
      if (parent.count(k)) return;
      parent[k] = {cur_key, action};
      if (mask == full_mask) goal_key = k;
      frontier.push_back({x, y, mask});
    };

    for (int m = 0; m < 4 && !goal_key; ++m) {
      const int nx = cur.x + dx[m];
      const int ny = cur.y + dy[m];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      if (blocked[static_cast<size_t>(ny) * w + nx]) continue;
      consider(nx, ny, cur.mask, m);
    }
    if (!goal_key) {
      const int g = goal_at[static_cast<size_t>(cur.y) * w + cur.x];
      if (g >= 0 && !(cur.mask & (1u << g))) consider(cur.x, cur.y, cur.mask | (1u << g), 4);
    }
  }

  if (!goal_key) return exhausted(expanded);

  std::vector<Step> steps;
  uint64_t k = *goal_key;
  while (true) {
    const auto& [prev, action] = parent.at(k);
    if (action < 0) break;
    const std::string name = action == 4 ? "visit_goal" : move_names[action];
    steps.push_back({Action{"robot", name, {}}});
    k = prev;
  }
  std::reverse(steps.begin(), steps.end());
  return solved(std::move(steps), expanded);
}

// --- Blocksworld: independent BFS with its own move generator ----------------

struct BwState {
  std::vector<std::vector<std::string>> towers;  // kept sorted
  std::string holding;                           // empty when hand free

  std::string key() const {
    std::string out;
    for (const auto& tower : towers) {
      for (const auto& block : tower) {
        out += block;
        out += ',';
      }
      out += '|';
    }
    out += '^';
    out += holding;
    return out;
  }
};

struct BwMove {
  Action action;
  BwState next;
};

std::vector<BwMove> bw_moves(const BwState& s) {
  std::vector<BwMove> moves;
  const auto normalized = [](BwState state) {
    std::sort(state.towers.begin(), state.towers.end());
    return state;
  };

  if (!s.holding.empty()) {
    {
      BwState next = s;
      next.towers.push_back({next.holding});
      next.holding.clear();
      moves.push_back({Action{"arm", "putdown", {json(s.holding)}}, normalized(next)});
    }
    for (size_t i = 0; i < s.towers.size(); ++i) {
      BwState next = s;
      next.towers[i].push_back(next.holding);
      next.holding.clear();
      moves.push_back(
          {Action{"arm", "stack", {json(s.holding), json(s.towers[i].back())}},
           normalized(next)});
    }
    return moves;
  }

  for (size_t i = 0; i < s.towers.size(); ++i) {
    const auto& tower = s.towers[i];
    if (tower.size() == 1) {
      BwState next = s;
      next.holding = tower.front();
      next.towers.erase(next.towers.begin() + static_cast<long>(i));
      moves.push_back({Action{"arm", "pickup", {json(tower.front())}}, normalized(next)});
    } else {
      BwState next = s;
      next.holding = tower.back();
      next.towers[i].pop_back();
      moves.push_back({Action{"arm", "unstack",
                              {json(tower.back()), json(tower[tower.size() - 2])}},
                       normalized(next)});
    }
  }
  return moves;
}

OracleResult solve_blocksworld(const BlocksworldState& start, const GoalSpec& goal,
                               const OracleConfig& config) {
  BwState init;
  init.towers = start.towers;
  std::erase_if(init.towers, [](const auto& t) { return t.empty(); });
  std::sort(init.towers.begin(), init.towers.end());
  if (start.holding) init.holding = *start.holding;

  auto goal_towers = goal.towers;
  std::sort(goal_towers.begin(), goal_towers.end());
  const auto is_goal_state = [&](const BwState& s) {
    return s.holding.empty() && s.towers == goal_towers;
  };

  std::unordered_map<std::string, std::pair<std::string, Action>> parent;
  std::deque<BwState> frontier{init};
  parent[init.key()] = {"", Action{}};
  std::optional<BwState> goal_state;
  if (is_goal_state(init)) goal_state = init;

  size_t expanded = 0;
  while (!frontier.empty() && !goal_state) {
    if (++expanded > config.budget) return over_budget(expanded);
    const BwState cur = frontier.front();
    frontier.pop_front();
    for (auto& [action, next] : bw_moves(cur)) {
      const std::string k = next.key();
      if (parent.count(k)) continue;
      parent[k] = {cur.key(), action};
      if (is_goal_state(next)) {
        goal_state = next;
        break;
      }
      frontier.push_back(std::move(next));
    }
  }

  if (!goal_state) return exhausted(expanded);

  std::vector<Step> steps;
  std::string k = goal_state->key();
  while (true) {
    const auto& [prev, action] = parent.at(k);
    if (prev.empty() && k == init.key()) break;
    steps.push_back({action});
    k = prev;
  }
  std::reverse(steps.begin(), steps.end());
  return solved(std::move(steps), expanded);
}

// --- BoxNet: BFS over joint steps built from apply_step ----------------------

OracleResult solve_boxnet(const BoxNetState& start, const OracleConfig& config) {
  const auto state_key = [](const BoxNetState& s) { return json(s).dump(); };

  // Per-arm options in this state (noop excluded; it is the default).
  const auto arm_options = [](const BoxNetState& s, const std::string& arm, Cell cell) {
    std::vector<Action> options;
    for (const auto& [box_id, box] : s.boxes) {
      if (box.placed || box.cell != cell) continue;
      for (const char* dir : {"up", "down", "left", "right"}) {
        const Cell target = dir == std::string("up")      ? Cell{cell.x, cell.y + 1}
                            : dir == std::string("down")  ? Cell{cell.x, cell.y - 1}
                            : dir == std::string("left")  ? Cell{cell.x - 1, cell.y}
                                                          : Cell{cell.x + 1, cell.y};
        if (s.in_bounds(target)) {
          options.push_back(Action{arm, "move_box", {json(box_id), json(dir)}});
        }
      }
      const auto goal = s.goals.find(box_color(box_id));
      if (goal != s.goals.end() && goal->second == cell) {
        options.push_back(Action{arm, "place_box", {json(box_id)}});
      }
    }
    return options;
  };

  std::unordered_map<std::string, std::pair<std::string, Step>> parent;
  std::deque<BoxNetState> frontier{start};
  parent[state_key(start)] = {"", {}};
  std::optional<BoxNetState> goal_state;
  if (is_goal(start)) goal_state = start;

  size_t expanded = 0;
  while (!frontier.empty() && !goal_state) {
    if (++expanded > config.budget) return over_budget(expanded);
    const BoxNetState cur = frontier.front();
    frontier.pop_front();
    const std::string cur_key = state_key(cur);

    std::vector<std::pair<std::string, std::vector<Action>>> per_arm;
    for (const auto& [arm, cell] : cur.arms) {
      auto options = arm_options(cur, arm, cell);
      if (!options.empty()) per_arm.emplace_back(arm, std::move(options));
    }
    if (per_arm.empty()) continue;

    // Joint steps: each acting arm picks one option or sits out; at least one
    // acts; no two arms touch the same box.
    std::vector<Step> joint;
    Step current;
    std::set<std::string> used_boxes;
    const std::function<void(size_t)> expand_joint = [&](size_t idx) {
      if (joint.size() > 4096) return;  // defensive cap, never hit at oracle sizes
      if (idx == per_arm.size()) {
        if (!current.empty()) joint.push_back(current);
        return;
      }
      expand_joint(idx + 1);  // this arm no-ops
      for (const Action& a : per_arm[idx].second) {
        const std::string box = a.args[0].get<std::string>();
        if (used_boxes.count(box)) continue;
        used_boxes.insert(box);
        current.push_back(a);
        expand_joint(idx + 1);
        current.pop_back();
        used_boxes.erase(box);
      }
    };
    expand_joint(0);

    for (const Step& step : joint) {
      auto result = apply_step(cur, step);
      if (std::holds_alternative<IllegalAction>(result)) continue;
      BoxNetState next = std::get<BoxNetState>(std::move(result));
      const std::string k = state_key(next);
      if (parent.count(k)) continue;
      parent[k] = {cur_key, step};
      if (is_goal(next)) {
        goal_state = next;
        break;
      }
      frontier.push_back(std::move(next));
    }
  }

  if (!goal_state) return exhausted(expanded);

  std::vector<Step> steps;
  std::string k = state_key(*goal_state);
  const std::string init_key = state_key(start);
  while (k != init_key) {
    const auto& [prev, step] = parent.at(k);
    steps.push_back(step);
    k = prev;
  }
  std::reverse(steps.begin(), steps.end());
  return solved(std::move(steps), expanded);
}

// --- BoxLift: bitmask BFS over remaining boxes --------------------------------

OracleResult solve_boxlift(const BoxLiftState& start, const OracleConfig& config) {
  std::vector<std::string> box_ids;
  std::vector<int> weights;
  uint32_t start_mask = 0;
  for (const auto& [id, box] : start.boxes) {
    if (!box.lifted) start_mask |= 1u << box_ids.size();
    box_ids.push_back(id);
    weights.push_back(box.weight);
  }
  const size_t num_boxes = box_ids.size();
  std::vector<std::pair<std::string, int>> robots(start.robots.begin(), start.robots.end());
  std::sort(robots.begin(), robots.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  size_t expanded = 0;

  // liftable[subset]: a robot-to-box partition lifting every box in `subset`
  // within one step, recorded as robot index -> box position in the subset.
  std::unordered_map<uint32_t, std::optional<std::vector<int>>> liftable_memo;
  const auto liftable = [&](uint32_t subset) -> const std::optional<std::vector<int>>& {
    auto it = liftable_memo.find(subset);
    if (it != liftable_memo.end()) return it->second;

    std::vector<int> targets;  // box indices in the subset
    for (size_t b = 0; b < num_boxes; ++b) {
      if (subset & (1u << b)) targets.push_back(static_cast<int>(b));
    }
    std::vector<int> deficit(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) deficit[i] = weights[targets[i]] + 1;
    std::vector<int> suffix_cap(robots.size() + 1, 0);
    for (size_t r = robots.size(); r-- > 0;) {
      suffix_cap[r] = suffix_cap[r + 1] + robots[r].second;
    }

    std::vector<int> assign(robots.size(), -1);
    std::optional<std::vector<int>> witness;
    const std::function<void(size_t)> search = [&](size_t r) {
      if (witness) return;
      ++expanded;
      int remaining = 0;
      for (const int d : deficit) remaining += std::max(0, d);
      if (remaining == 0) {
        witness = assign;
        return;
      }
      if (r == robots.size() || remaining > suffix_cap[r]) return;
      for (size_t t = 0; t < targets.size(); ++t) {
        if (deficit[t] <= 0) continue;
        deficit[t] -= robots[r].second;
        assign[r] = static_cast<int>(t);
        search(r + 1);
        assign[r] = -1;
        deficit[t] += robots[r].second;
        if (witness) return;
      }
      assign[r] = -1;
      search(r + 1);  // robot idles
    };
    search(0);
    return liftable_memo.emplace(subset, std::move(witness)).first->second;
  };

  // BFS over masks of boxes still on the ground.
  std::unordered_map<uint32_t, std::pair<uint32_t, uint32_t>> parent;  // mask -> (prev, lifted)
  std::deque<uint32_t> frontier{start_mask};
  parent[start_mask] = {start_mask, 0};

  bool found = start_mask == 0;
  while (!frontier.empty() && !found) {
    if (++expanded > config.budget) return over_budget(expanded);
    const uint32_t mask = frontier.front();
    frontier.pop_front();
    // All nonempty submasks of `mask`.
    for (uint32_t subset = mask; subset != 0; subset = (subset - 1) & mask) {
      if (expanded > config.budget) return over_budget(expanded);
      if (!liftable(subset)) continue;
      const uint32_t next = mask & ~subset;
      if (parent.count(next)) continue;
      parent[next] = {mask, subset};
      if (next == 0) {
        found = true;
        break;
      }
      frontier.push_back(next);
    }
  }

  if (!found) return exhausted(expanded);

  std::vector<Step> steps;
  uint32_t mask = 0;
  while (mask != start_mask) {
    const auto& [prev, subset] = parent.at(mask);
    std::vector<int> targets;
    for (size_t b = 0; b < num_boxes; ++b) {
      if (subset & (1u << b)) targets.push_back(static_cast<int>(b));
    }
    const auto& witness = liftable(subset);
    Step step;
    for (size_t r = 0; r < robots.size(); ++r) {
      const int t = (*witness)[r];
      if (t >= 0) step.push_back(Action{robots[r].first, "lift", {json(box_ids[targets[t]])}});
    }
    steps.push_back(std::move(step));
    mask = prev;
  }
  std::reverse(steps.begin(), steps.end());
  return solved(std::move(steps), expanded);
}

// --- Shape Formation: box-to-slot assignment -----------------------------------

OracleResult solve_shape(const ContinuousState& state, const OracleConfig& config) {
  const ShapeSpec& shape = *state.shape;
  std::vector<std::string> boxes;
  for (const auto& [id, spec] : state.scene.robots) boxes.push_back(id);
  if (boxes.size() > shape.slots.size()) return exhausted(0);

  // Slots are generated outside bowls; assign in id order and time the picks
  // sequentially so the picking order is explicit.
  std::map<std::string, std::vector<Waypoint>> trajectories;
  double cursor = 0.0;
  for (size_t i = 0; i < boxes.size(); ++i) {
    const Vec2 start = state.scene.robots.at(boxes[i]).start;
    const Vec2 slot = shape.slots[i].center;
    const double travel =
        std::max(0.5, distance(start, slot) / state.scene.v_max * 1.25);
    trajectories[boxes[i]] = {{start.x, start.y, cursor},
                              {slot.x, slot.y, cursor + travel}};
    cursor += travel + 0.5;
  }
  if (cursor > state.scene.time_limit) return exhausted(0);

  OracleResult result;
  result.status = OracleStatus::Solved;
  result.optimal_length = static_cast<int>(boxes.size());
  result.plan = Plan::waypoints(std::move(trajectories));
  result.expanded = boxes.size();
  (void)config;
  return result;
}

}  // namespace

OracleResult oracle_solve(const TaskInstance& instance, const OracleConfig& config) {
  switch (instance.env_kind) {
    case EnvKind::Gridworld:
      return solve_gridworld(std::get<GridworldState>(instance.initial_state), config);
    case EnvKind::Blocksworld:
      return solve_blocksworld(std::get<BlocksworldState>(instance.initial_state),
                               instance.goal, config);
    case EnvKind::BoxNet:
      return solve_boxnet(std::get<BoxNetState>(instance.initial_state), config);
    case EnvKind::BoxLift:
      return solve_boxlift(std::get<BoxLiftState>(instance.initial_state), config);
    case EnvKind::ShapeFormation:
      return solve_shape(instance.continuous(), config);
    default:
      throw std::invalid_argument(
          "oracle_solve supports discrete envs and shape formation only");
  }
}

std::optional<int> oracle_optimal_length(const TaskInstance& instance,
                                         const OracleConfig& config) {
  const OracleResult result = oracle_solve(instance, config);
  if (result.status == OracleStatus::BudgetExceeded) return std::nullopt;
  if (result.status == OracleStatus::NoSolution) return std::nullopt;
  return result.optimal_length;
}

void tighten_step_limit(TaskInstance& instance, const OracleConfig& config) {
  if (!is_discrete(instance.env_kind)) return;
  const OracleResult result = oracle_solve(instance, config);
  if (result.status != OracleStatus::Solved) return;
  instance.step_limit = std::max(1, *result.optimal_length * 3);
}

}  // namespace tampforge
