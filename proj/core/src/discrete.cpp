#include "tampforge/discrete.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace tampforge {

namespace {

const std::map<std::string, Cell, std::less<>> kDirections = {
    {"up", {0, 1}}, {"down", {0, -1}}, {"left", {-1, 0}}, {"right", {1, 0}}};

constexpr const char* kColorPalette[] = {"red",    "blue", "green", "yellow",
                                         "orange", "purple", "cyan", "magenta"};

std::optional<Cell> step_toward(Cell from, const std::string& dir) {
  auto it = kDirections.find(dir);
  if (it == kDirections.end()) return std::nullopt;
  return Cell{from.x + it->second.x, from.y + it->second.y};
}

IllegalAction illegal(std::string detail) { return IllegalAction{std::move(detail)}; }

std::optional<std::string> arg_string(const Action& a, size_t i) {
  if (i >= a.args.size() || !a.args[i].is_string()) return std::nullopt;
  return a.args[i].get<std::string>();
}

// Rejects steps that list the same robot twice.
std::optional<IllegalAction> check_unique_actors(const Step& step) {
  std::set<std::string> seen;
  for (const Action& a : step) {
    if (!seen.insert(a.robot).second) {
      return illegal("robot '" + a.robot + "' acts twice in one step");
    }
  }
  return std::nullopt;
}

}  // namespace

void to_json(json& j, const Cell& c) { j = json::array({c.x, c.y}); }

void from_json(const json& j, Cell& c) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("cell must be [x, y]");
  c.x = j[0].get<int>();
  c.y = j[1].get<int>();
}

// --- Gridworld ---------------------------------------------------------------

bool GridworldState::in_bounds(Cell c) const {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
}

bool GridworldState::is_obstacle(Cell c) const {
  return std::binary_search(obstacles.begin(), obstacles.end(), c);
}

std::optional<size_t> GridworldState::goal_index(Cell c) const {
  auto it = std::lower_bound(goals.begin(), goals.end(), c);
  if (it == goals.end() || *it != c) return std::nullopt;
  return static_cast<size_t>(it - goals.begin());
}

ApplyResult<GridworldState> apply_step(const GridworldState& s, const Step& step) {
  if (auto err = check_unique_actors(step)) return *err;
  if (step.size() > 1) return illegal("gridworld has a single robot");
  if (step.empty()) return s;

  const Action& a = step.front();
  if (a.robot != "robot") return illegal("unknown robot '" + a.robot + "'");

  GridworldState next = s;
  if (a.action == "visit_goal") {
    const auto idx = s.goal_index(s.robot);
    if (!idx) return illegal("visit_goal off any goal cell");
    if (s.visited[*idx]) return illegal("goal already visited");
    next.visited[*idx] = true;
    return next;
  }
  if (a.action.rfind("move_", 0) == 0) {
    const auto target = step_toward(s.robot, a.action.substr(5));
    if (!target) return illegal("unknown action '" + a.action + "'");
    if (!s.in_bounds(*target)) return illegal("move out of the grid");
    if (s.is_obstacle(*target)) return illegal("move into an obstacle");
    next.robot = *target;
    return next;
  }
  return illegal("unknown action '" + a.action + "'");
}

bool is_goal(const GridworldState& s) {
  return std::all_of(s.visited.begin(), s.visited.end(), [](bool v) { return v; });
}

std::vector<Step> enumerate_candidate_steps(const GridworldState& s) {
  std::vector<Step> out;
  for (const char* dir : {"up", "down", "left", "right"}) {
    Step step{{"robot", std::string("move_") + dir, {}}};
    if (std::holds_alternative<GridworldState>(apply_step(s, step))) out.push_back(step);
  }
  Step visit{{"robot", "visit_goal", {}}};
  if (std::holds_alternative<GridworldState>(apply_step(s, visit))) out.push_back(visit);
  return out;
}

bool gridworld_solvable(const GridworldState& s) {
  // Plain grid BFS from the robot; every goal cell must be reachable.
  std::vector<char> seen(static_cast<size_t>(s.width) * s.height, 0);
  const auto index = [&](Cell c) { return static_cast<size_t>(c.y) * s.width + c.x; };
  std::deque<Cell> frontier{s.robot};
  seen[index(s.robot)] = 1;
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop_front();
    for (const auto& [name, d] : kDirections) {
      const Cell nxt{cur.x + d.x, cur.y + d.y};
      if (!s.in_bounds(nxt) || s.is_obstacle(nxt) || seen[index(nxt)]) continue;
      seen[index(nxt)] = 1;
      frontier.push_back(nxt);
    }
  }
  return std::all_of(s.goals.begin(), s.goals.end(),
                     [&](Cell g) { return seen[index(g)] != 0; });
}

GridworldState generate_gridworld(const DifficultyParams& d, Rng& rng) {
  for (int attempt = 0; attempt < kGenerationResampleLimit; ++attempt) {
    GridworldState s;
    s.width = d.grid_width;
    s.height = d.grid_height;

    std::vector<Cell> cells;
    for (int y = 0; y < s.height; ++y)
      for (int x = 0; x < s.width; ++x) cells.push_back({x, y});
    rng.shuffle(cells);

    size_t cursor = 0;
    s.robot = cells[cursor++];
    for (int i = 0; i < d.num_obstacles && cursor < cells.size(); ++i)
      s.obstacles.push_back(cells[cursor++]);
    std::sort(s.obstacles.begin(), s.obstacles.end());

    // Goals may coincide with the start cell but never with obstacles.
    std::vector<Cell> open;
    open.push_back(s.robot);
    for (size_t i = cursor; i < cells.size(); ++i) open.push_back(cells[i]);
    rng.shuffle(open);
    if (open.size() < static_cast<size_t>(d.num_goals)) continue;
    s.goals.assign(open.begin(), open.begin() + d.num_goals);
    std::sort(s.goals.begin(), s.goals.end());
    s.visited.assign(s.goals.size(), false);

    if (gridworld_solvable(s)) return s;
  }
  throw UnsatisfiableError("gridworld: no solvable layout after re-sampling");
}

// --- Blocksworld -------------------------------------------------------------

std::vector<std::string> BlocksworldState::all_blocks() const {
  std::vector<std::string> out;
  for (const auto& tower : towers) out.insert(out.end(), tower.begin(), tower.end());
  if (holding) out.push_back(*holding);
  std::sort(out.begin(), out.end());
  return out;
}

bool BlocksworldState::is_clear(const std::string& block) const {
  for (const auto& tower : towers) {
    if (!tower.empty() && tower.back() == block) return true;
  }
  return false;
}

BlocksworldState BlocksworldState::canonical() const {
  BlocksworldState c = *this;
  std::sort(c.towers.begin(), c.towers.end());
  return c;
}

namespace {

struct BlockPos {
  size_t tower;
  size_t height;
};

std::optional<BlockPos> find_block(const BlocksworldState& s, const std::string& block) {
  for (size_t i = 0; i < s.towers.size(); ++i) {
    for (size_t h = 0; h < s.towers[i].size(); ++h) {
      if (s.towers[i][h] == block) return BlockPos{i, h};
    }
  }
  return std::nullopt;
}

void drop_empty_towers(BlocksworldState& s) {
  std::erase_if(s.towers, [](const auto& t) { return t.empty(); });
}

}  // namespace

ApplyResult<BlocksworldState> apply_step(const BlocksworldState& s, const Step& step) {
  if (auto err = check_unique_actors(step)) return *err;
  if (step.size() > 1) return illegal("blocksworld has a single arm");
  if (step.empty()) return s;

  const Action& a = step.front();
  if (a.robot != "arm") return illegal("unknown robot '" + a.robot + "'");
  BlocksworldState next = s;

  if (a.action == "pickup") {
    const auto block = arg_string(a, 0);
    if (!block) return illegal("pickup needs a block argument");
    if (s.holding) return illegal("arm already holds " + *s.holding);
    const auto pos = find_block(s, *block);
    if (!pos) return illegal("no such block " + *block);
    if (s.towers[pos->tower].size() != 1) {
      return illegal("pickup only lifts a block that sits alone on the table");
    }
    next.towers[pos->tower].clear();
    drop_empty_towers(next);
    next.holding = *block;
    return next;
  }
  if (a.action == "unstack") {
    const auto block = arg_string(a, 0);
    const auto under = arg_string(a, 1);
    if (!block || !under) return illegal("unstack needs block and base arguments");
    if (s.holding) return illegal("arm already holds " + *s.holding);
    const auto pos = find_block(s, *block);
    if (!pos) return illegal("no such block " + *block);
    const auto& tower = s.towers[pos->tower];
    if (tower.back() != *block) return illegal(*block + " is not clear");
    if (tower.size() < 2 || tower[tower.size() - 2] != *under) {
      return illegal(*block + " is not on " + *under);
    }
    next.towers[pos->tower].pop_back();
    next.holding = *block;
    return next;
  }
  if (a.action == "putdown") {
    const auto block = arg_string(a, 0);
    if (!block) return illegal("putdown needs a block argument");
    if (!s.holding || *s.holding != *block) return illegal("arm is not holding " + *block);
    next.holding.reset();
    next.towers.push_back({*block});
    return next;
  }
  if (a.action == "stack") {
    const auto block = arg_string(a, 0);
    const auto base = arg_string(a, 1);
    if (!block || !base) return illegal("stack needs block and base arguments");
    if (!s.holding || *s.holding != *block) return illegal("arm is not holding " + *block);
    const auto pos = find_block(s, *base);
    if (!pos) return illegal("no such block " + *base);
    if (s.towers[pos->tower].back() != *base) return illegal(*base + " is not clear");
    next.holding.reset();
    next.towers[pos->tower].push_back(*block);
    return next;
  }
  return illegal("unknown action '" + a.action + "'");
}

bool is_goal(const BlocksworldState& s, const GoalSpec& goal) {
  if (s.holding) return false;
  auto lhs = s.towers;
  auto rhs = goal.towers;
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  return lhs == rhs;
}

std::vector<Step> enumerate_candidate_steps(const BlocksworldState& s) {
  std::vector<Step> out;
  const auto push = [&](Action a) { out.push_back({std::move(a)}); };
  if (s.holding) {
    push({"arm", "putdown", {json(*s.holding)}});
    for (const auto& tower : s.towers) {
      push({"arm", "stack", {json(*s.holding), json(tower.back())}});
    }
    return out;
  }
  for (const auto& tower : s.towers) {
    if (tower.size() == 1) {
      push({"arm", "pickup", {json(tower.front())}});
    } else {
      push({"arm", "unstack", {json(tower.back()), json(tower[tower.size() - 2])}});
    }
  }
  return out;
}

std::pair<BlocksworldState, GoalSpec> generate_blocksworld(const DifficultyParams& d, Rng& rng) {
  std::vector<std::string> blocks;
  for (int i = 0; i < d.num_blocks; ++i) blocks.push_back(std::string(1, char('A' + i)));

  const auto random_layout = [&rng](std::vector<std::string> names) {
    rng.shuffle(names);
    std::vector<std::vector<std::string>> towers;
    size_t i = 0;
    while (i < names.size()) {
      const size_t len = 1 + static_cast<size_t>(rng.uniform_int(
                                 0, static_cast<int64_t>(names.size() - i) - 1));
      towers.push_back({names.begin() + i, names.begin() + i + len});
      i += len;
    }
    return towers;
  };

  BlocksworldState state;
  state.towers = random_layout(blocks);

  GoalSpec goal;
  goal.towers = random_layout(blocks);
  goal.description = "stack the blocks into the target towers";
  // Any configuration is reachable from any other (unstack everything to the
  // table, then rebuild), so no re-sampling is needed.
  return {state, goal};
}

// --- BoxLift -----------------------------------------------------------------

ApplyResult<BoxLiftState> apply_step(const BoxLiftState& s, const Step& step) {
  if (auto err = check_unique_actors(step)) return *err;

  std::map<std::string, int> lift_capacity;  // box -> summed capacity this step
  for (const Action& a : step) {
    const auto robot = s.robots.find(a.robot);
    if (robot == s.robots.end()) return illegal("unknown robot '" + a.robot + "'");
    if (a.action == "noop") continue;
    if (a.action != "lift") return illegal("unknown action '" + a.action + "'");
    const auto box_id = arg_string(a, 0);
    if (!box_id) return illegal("lift needs a box argument");
    const auto box = s.boxes.find(*box_id);
    if (box == s.boxes.end()) return illegal("unknown box '" + *box_id + "'");
    if (box->second.lifted) return illegal(*box_id + " is already lifted");
    lift_capacity[*box_id] += robot->second;
  }

  BoxLiftState next = s;
  for (const auto& [box_id, capacity] : lift_capacity) {
    const BoxLiftBox& box = s.boxes.at(box_id);
    if (capacity <= box.weight) {
      std::ostringstream msg;
      msg << "combined capacity " << capacity << " does not exceed weight "
          << box.weight << " of " << box_id;
      return illegal(msg.str());
    }
    next.boxes.at(box_id).lifted = true;
  }
  return next;
}

bool is_goal(const BoxLiftState& s) {
  return std::all_of(s.boxes.begin(), s.boxes.end(),
                     [](const auto& kv) { return kv.second.lifted; });
}

std::vector<Step> enumerate_candidate_steps(const BoxLiftState& s) {
  // One candidate per unlifted box: the cheapest sufficient robot group,
  // filled largest capacity first.
  std::vector<std::pair<std::string, int>> by_capacity(s.robots.begin(), s.robots.end());
  std::sort(by_capacity.begin(), by_capacity.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<Step> out;
  for (const auto& [box_id, box] : s.boxes) {
    if (box.lifted) continue;
    Step step;
    int total = 0;
    for (const auto& [robot, capacity] : by_capacity) {
      step.push_back({robot, "lift", {json(box_id)}});
      total += capacity;
      if (total > box.weight) break;
    }
    if (total > box.weight) out.push_back(std::move(step));
  }
  return out;
}

bool boxlift_solvable(const BoxLiftState& s) {
  // The strongest possible team is all robots together, so solvable means
  // every box weighs strictly less than the total capacity.
  const int total = std::accumulate(s.robots.begin(), s.robots.end(), 0,
                                    [](int acc, const auto& kv) { return acc + kv.second; });
  return std::all_of(s.boxes.begin(), s.boxes.end(),
                     [&](const auto& kv) { return kv.second.weight < total; });
}

BoxLiftState generate_boxlift(const DifficultyParams& d, Rng& rng) {
  for (int attempt = 0; attempt < kGenerationResampleLimit; ++attempt) {
    BoxLiftState s;
    for (int i = 0; i < d.num_robots; ++i) {
      s.robots["r" + std::to_string(i + 1)] =
          static_cast<int>(rng.uniform_int(d.cap_min, d.cap_max));
    }
    for (int i = 0; i < d.num_boxes; ++i) {
      s.boxes["b" + std::to_string(i + 1)] =
          BoxLiftBox{static_cast<int>(rng.uniform_int(d.weight_min, d.weight_max)), false};
    }
    if (boxlift_solvable(s)) return s;
  }
  throw UnsatisfiableError("boxlift: capacities cannot lift sampled weights");
}

// --- BoxNet ------------------------------------------------------------------

std::string box_color(const std::string& box_id) {
  if (box_id.rfind("box_", 0) == 0) return box_id.substr(4);
  return box_id;
}

bool BoxNetState::in_bounds(Cell c) const {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
}

std::optional<std::string> BoxNetState::arm_at(Cell c) const {
  for (const auto& [arm, cell] : arms) {
    if (cell == c) return arm;
  }
  return std::nullopt;
}

ApplyResult<BoxNetState> apply_step(const BoxNetState& s, const Step& step) {
  if (auto err = check_unique_actors(step)) return *err;

  BoxNetState next = s;
  std::set<std::string> touched_boxes;
  for (const Action& a : step) {
    const auto arm = s.arms.find(a.robot);
    if (arm == s.arms.end()) return illegal("unknown arm '" + a.robot + "'");
    if (a.action == "noop") continue;

    const auto box_id = arg_string(a, 0);
    if (!box_id) return illegal(a.action + " needs a box argument");
    const auto box = s.boxes.find(*box_id);
    if (box == s.boxes.end()) return illegal("unknown box '" + *box_id + "'");
    if (box->second.placed) return illegal(*box_id + " is already placed");
    if (box->second.cell != arm->second) {
      return illegal(*box_id + " is not in the cell of " + a.robot);
    }
    if (!touched_boxes.insert(*box_id).second) {
      return illegal("two arms act on " + *box_id + " in one step");
    }

    if (a.action == "move_box") {
      const auto dir = arg_string(a, 1);
      if (!dir) return illegal("move_box needs a direction argument");
      const auto target = step_toward(arm->second, *dir);
      if (!target) return illegal("unknown direction '" + *dir + "'");
      if (!s.in_bounds(*target)) return illegal("move_box out of the grid");
      next.boxes.at(*box_id).cell = *target;
    } else if (a.action == "place_box") {
      const auto goal = s.goals.find(box_color(*box_id));
      if (goal == s.goals.end() || goal->second != arm->second) {
        return illegal("no matching goal slot in the cell of " + a.robot);
      }
      next.boxes.at(*box_id).placed = true;
    } else {
      return illegal("unknown action '" + a.action + "'");
    }
  }
  return next;
}

bool is_goal(const BoxNetState& s) {
  return std::all_of(s.boxes.begin(), s.boxes.end(),
                     [](const auto& kv) { return kv.second.placed; });
}

std::vector<Step> enumerate_candidate_steps(const BoxNetState& s) {
  std::vector<Step> out;
  for (const auto& [box_id, box] : s.boxes) {
    if (box.placed) continue;
    const auto arm = s.arm_at(box.cell);
    if (!arm) continue;
    for (const auto& [dir, delta] : kDirections) {
      if (s.in_bounds({box.cell.x + delta.x, box.cell.y + delta.y})) {
        out.push_back({{*arm, "move_box", {json(box_id), json(dir)}}});
      }
    }
    const auto goal = s.goals.find(box_color(box_id));
    if (goal != s.goals.end() && goal->second == box.cell) {
      out.push_back({{*arm, "place_box", {json(box_id)}}});
    }
  }
  return out;
}

bool boxnet_solvable(const BoxNetState& s) {
  // A box moves from cell to cell only through cells that have an arm, and
  // placing requires an arm in the goal cell. BFS per box over armed cells.
  for (const auto& [box_id, box] : s.boxes) {
    if (box.placed) continue;
    const auto goal = s.goals.find(box_color(box_id));
    if (goal == s.goals.end()) return false;
    if (!s.arm_at(goal->second)) return false;

    std::set<Cell> seen{box.cell};
    std::deque<Cell> frontier{box.cell};
    bool reached = box.cell == goal->second;
    while (!frontier.empty() && !reached) {
      const Cell cur = frontier.front();
      frontier.pop_front();
      if (!s.arm_at(cur)) continue;  // nothing can push the box onward from here
      for (const auto& [dir, delta] : kDirections) {
        const Cell nxt{cur.x + delta.x, cur.y + delta.y};
        if (!s.in_bounds(nxt) || seen.count(nxt)) continue;
        seen.insert(nxt);
        if (nxt == goal->second) reached = true;
        frontier.push_back(nxt);
      }
    }
    if (!reached) return false;
  }
  return true;
}

BoxNetState generate_boxnet(const DifficultyParams& d, Rng& rng) {
  for (int attempt = 0; attempt < kGenerationResampleLimit; ++attempt) {
    BoxNetState s;
    s.width = d.grid_width;
    s.height = d.grid_height;

    // One stationary arm per cell, numbered in row-major order.
    int arm_index = 1;
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        s.arms["arm" + std::to_string(arm_index++)] = Cell{x, y};
      }
    }

    std::vector<std::string> colors(std::begin(kColorPalette), std::end(kColorPalette));
    rng.shuffle(colors);
    const int num_boxes = std::min<int>(d.num_boxes, static_cast<int>(colors.size()));
    for (int i = 0; i < num_boxes; ++i) {
      const Cell start{static_cast<int>(rng.uniform_int(0, s.width - 1)),
                       static_cast<int>(rng.uniform_int(0, s.height - 1))};
      const Cell goal{static_cast<int>(rng.uniform_int(0, s.width - 1)),
                      static_cast<int>(rng.uniform_int(0, s.height - 1))};
      s.boxes["box_" + colors[i]] = BoxNetBox{start, false};
      s.goals[colors[i]] = goal;
    }
    if (boxnet_solvable(s)) return s;
  }
  throw UnsatisfiableError("boxnet: no solvable layout after re-sampling");
}

// --- Step tokens -------------------------------------------------------------

std::string step_to_token(const Step& step) {
  json actions = json::array();
  for (const Action& a : step) {
    actions.push_back(json{{"robot", a.robot}, {"action", a.action}, {"args", a.args}});
  }
  return actions.dump();
}

std::optional<Step> step_from_token(const std::string& token) {
  json parsed = json::parse(token, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_array()) return std::nullopt;
  Step step;
  for (const json& item : parsed) {
    if (!item.is_object() || !item.contains("robot") || !item.contains("action")) {
      return std::nullopt;
    }
    Action a;
    a.robot = item["robot"].get<std::string>();
    a.action = item["action"].get<std::string>();
    for (const json& arg : item.value("args", json::array())) a.args.push_back(arg);
    step.push_back(std::move(a));
  }
  return step;
}

// --- JSON --------------------------------------------------------------------

void to_json(json& j, const GridworldState& s) {
  j = json{{"width", s.width},   {"height", s.height}, {"obstacles", s.obstacles},
           {"goals", s.goals},   {"visited", s.visited}, {"robot", s.robot}};
}

void from_json(const json& j, GridworldState& s) {
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.obstacles = j.at("obstacles").get<std::vector<Cell>>();
  s.goals = j.at("goals").get<std::vector<Cell>>();
  s.visited = j.value("visited", std::vector<bool>(s.goals.size(), false));
  s.robot = j.at("robot").get<Cell>();
  std::sort(s.obstacles.begin(), s.obstacles.end());
  if (s.visited.size() != s.goals.size()) {
    throw std::invalid_argument("visited flags must match goals");
  }
  // Keep goals and visited flags aligned while sorting.
  std::vector<std::pair<Cell, bool>> paired;
  for (size_t i = 0; i < s.goals.size(); ++i) paired.emplace_back(s.goals[i], s.visited[i]);
  std::sort(paired.begin(), paired.end());
  for (size_t i = 0; i < paired.size(); ++i) {
    s.goals[i] = paired[i].first;
    s.visited[i] = paired[i].second;
  }
}

void to_json(json& j, const BlocksworldState& s) {
  j = json{{"towers", s.towers}};
  j["holding"] = s.holding ? json(*s.holding) : json(nullptr);
}

void from_json(const json& j, BlocksworldState& s) {
  s.towers = j.at("towers").get<std::vector<std::vector<std::string>>>();
  if (j.contains("holding") && !j["holding"].is_null()) {
    s.holding = j["holding"].get<std::string>();
  } else {
    s.holding.reset();
  }
}

void to_json(json& j, const BoxLiftBox& b) {
  j = json{{"weight", b.weight}, {"lifted", b.lifted}};
}

void from_json(const json& j, BoxLiftBox& b) {
  b.weight = j.at("weight").get<int>();
  b.lifted = j.value("lifted", false);
}

void to_json(json& j, const BoxLiftState& s) {
  j = json{{"robots", s.robots}, {"boxes", s.boxes}};
}

void from_json(const json& j, BoxLiftState& s) {
  s.robots = j.at("robots").get<std::map<std::string, int>>();
  s.boxes = j.at("boxes").get<std::map<std::string, BoxLiftBox>>();
}

void to_json(json& j, const BoxNetBox& b) {
  j = json{{"cell", b.cell}, {"placed", b.placed}};
}

void from_json(const json& j, BoxNetBox& b) {
  b.cell = j.at("cell").get<Cell>();
  b.placed = j.value("placed", false);
}

void to_json(json& j, const BoxNetState& s) {
  j = json{{"width", s.width}, {"height", s.height}, {"arms", s.arms},
           {"boxes", s.boxes}, {"goals", s.goals}};
}

void from_json(const json& j, BoxNetState& s) {
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.arms = j.at("arms").get<std::map<std::string, Cell>>();
  s.boxes = j.at("boxes").get<std::map<std::string, BoxNetBox>>();
  s.goals = j.at("goals").get<std::map<std::string, Cell>>();
}

}  // namespace tampforge
