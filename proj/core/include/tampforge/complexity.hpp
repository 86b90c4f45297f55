#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "tampforge/types.hpp"

namespace tampforge {

struct ComplexityCounts {
  int loops = 0;
  int nested_loops = 0;
  int recursion = 0;
  int search_frontier = 0;
  int numeric_ops = 0;
  int combinatorial_enumeration = 0;
  int constraint_checks = 0;

  friend bool operator==(const ComplexityCounts&, const ComplexityCounts&) = default;
};

enum class ComplexityClass { Trivial, Moderate, Symbolic };

std::string_view to_string(ComplexityClass c);

struct ComplexityReport {
  ComplexityCounts counts;
  int score = 0;
  ComplexityClass classification = ComplexityClass::Trivial;
  std::string summary;
  std::string pattern_table_version;
};

void to_json(json& j, const ComplexityCounts& c);
void from_json(const json& j, ComplexityCounts& c);
void to_json(json& j, const ComplexityReport& r);
void from_json(const json& j, ComplexityReport& r);

// Versioned, per-guest-language rule set. Detection is lexical over
// comment- and string-stripped source, so malformed code still analyzes.
class PatternTable {
 public:
  static PatternTable from_json(const json& spec);
  static PatternTable load(const std::string& path);
  static const PatternTable& python_v1();  // compiled-in copy of the shipped table

  const std::string& version() const { return version_; }

 private:
  friend ComplexityReport analyze(std::string_view, const PatternTable&);

  std::string version_;
  bool indent_family_ = true;
  std::string line_comment_;
  std::vector<std::pair<std::string, std::string>> block_delimiters_;
  std::vector<std::regex> loop_patterns_;
  std::regex function_def_;
  std::regex comparison_;
  std::vector<std::regex> search_frontier_;
  std::vector<std::regex> combinatorial_;
  std::vector<std::regex> numeric_ops_;
};

// score = 1*loops + 2*nested_loops + 3*recursion + 3*search_frontier
//       + 3*combinatorial_enumeration + 1*constraint_checks + numeric_ops/10.
// trivial < 2, moderate 2..4, symbolic >= 5.
std::pair<int, ComplexityClass> score_and_classify(const ComplexityCounts& counts);

ComplexityReport analyze(std::string_view source, const PatternTable& table);

}  // namespace tampforge
