#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "tampforge/instance.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

// Marker line that starts a plan document on guest-program stdout.
inline constexpr std::string_view kPlanMarker = "===PLAN===";

struct PlanParseError {
  enum class Kind { NoDocument, SchemaMismatch, VariantMismatch };

  Kind kind = Kind::NoDocument;
  std::string message;
};

std::string_view to_string(PlanParseError::Kind kind);

using PlanParseOutcome = std::variant<Plan, PlanParseError>;

// Wire format, bit-exact: the marker line followed by one JSON object,
//   {"variant":"actions","steps":[[{"robot":...,"action":...,"args":[...]},...],...]}
//   {"variant":"waypoints","trajectories":{"<robot>":[[x,y,t],...]}}
std::string serialize_plan(const Plan& plan);
json plan_to_json(const Plan& plan);

// Inverse of plan_to_json without instance-level validation; nullopt when
// the document shape is wrong.
std::optional<Plan> plan_from_json(const json& doc);

// Extracts the last well-formed plan document from arbitrary program output.
// Accepts any bytes; validates the document schema, the waypoint time
// invariants, trajectory robot ids, and the variant expected by the
// instance's env kind.
PlanParseOutcome parse_plan(std::string_view raw_output, const TaskInstance& instance);

// Same validation, but also accepts a bare plan JSON object without the
// marker line (last valid one wins). Used by the direct text-answer method.
PlanParseOutcome parse_plan_lenient(std::string_view raw_output, const TaskInstance& instance);

}  // namespace tampforge
