#include "tampforge/complexity.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tampforge {

std::string_view to_string(ComplexityClass c) {
  switch (c) {
    case ComplexityClass::Trivial: return "trivial";
    case ComplexityClass::Moderate: return "moderate";
    case ComplexityClass::Symbolic: return "symbolic";
  }
  return "unknown";
}

void to_json(json& j, const ComplexityCounts& c) {
  j = json{{"loops", c.loops},
           {"nested_loops", c.nested_loops},
           {"recursion", c.recursion},
           {"search_frontier", c.search_frontier},
           {"numeric_ops", c.numeric_ops},
           {"combinatorial_enumeration", c.combinatorial_enumeration},
           {"constraint_checks", c.constraint_checks}};
}

void from_json(const json& j, ComplexityCounts& c) {
  c.loops = j.value("loops", 0);
  c.nested_loops = j.value("nested_loops", 0);
  c.recursion = j.value("recursion", 0);
  c.search_frontier = j.value("search_frontier", 0);
  c.numeric_ops = j.value("numeric_ops", 0);
  c.combinatorial_enumeration = j.value("combinatorial_enumeration", 0);
  c.constraint_checks = j.value("constraint_checks", 0);
}

void to_json(json& j, const ComplexityReport& r) {
  j = json{{"counts", r.counts},
           {"score", r.score},
           {"classification", std::string(to_string(r.classification))},
           {"summary", r.summary},
           {"pattern_table_version", r.pattern_table_version}};
}

void from_json(const json& j, ComplexityReport& r) {
  r.counts = j.value("counts", ComplexityCounts{});
  r.score = j.value("score", 0);
  const std::string cls = j.value("classification", "trivial");
  r.classification = cls == "symbolic"   ? ComplexityClass::Symbolic
                     : cls == "moderate" ? ComplexityClass::Moderate
                                          : ComplexityClass::Trivial;
  r.summary = j.value("summary", "");
  r.pattern_table_version = j.value("pattern_table_version", "");
}

PatternTable PatternTable::from_json(const json& spec) {
  PatternTable table;
  table.version_ = spec.at("version").get<std::string>();
  table.indent_family_ = spec.value("language_family", "indent") == "indent";
  table.line_comment_ = spec.value("line_comment", "");
  for (const auto& pair :
       spec.value("block_delimiters", std::vector<std::vector<std::string>>{})) {
    if (pair.size() == 2) table.block_delimiters_.emplace_back(pair[0], pair[1]);
  }
  for (const auto& p : spec.at("loop").get<std::vector<std::string>>()) {
    table.loop_patterns_.emplace_back(p);
  }
  table.function_def_ = std::regex(spec.at("function_def").get<std::string>());
  table.comparison_ = std::regex(spec.at("comparison").get<std::string>());
  const json& categories = spec.at("categories");
  for (const auto& p : categories.at("search_frontier").get<std::vector<std::string>>()) {
    table.search_frontier_.emplace_back(p);
  }
  for (const auto& p :
       categories.at("combinatorial_enumeration").get<std::vector<std::string>>()) {
    table.combinatorial_.emplace_back(p);
  }
  for (const auto& p : categories.at("numeric_ops").get<std::vector<std::string>>()) {
    table.numeric_ops_.emplace_back(p);
  }
  return table;
}

PatternTable PatternTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pattern table: " + path);
  json spec;
  in >> spec;
  return from_json(spec);
}

const PatternTable& PatternTable::python_v1() {
  static const PatternTable table = from_json(json::parse(R"({
    "version": "python_v1",
    "language_family": "indent",
    "line_comment": "#",
    "block_delimiters": [["'''", "'''"], ["\"\"\"", "\"\"\""]],
    "loop": ["\\bfor\\b", "\\bwhile\\b"],
    "function_def": "\\bdef\\s+([A-Za-z_][A-Za-z0-9_]*)\\s*\\(",
    "comparison": "<<|>>|==|!=|<=|>=|<|>",
    "categories": {
      "search_frontier": ["\\bheapq\\b", "\\bdeque\\b", "PriorityQueue", "LifoQueue",
                          "\\bfrontier\\b", "\\bqueue\\b", "\\bstack\\b", "\\bpopleft\\b",
                          "\\bheappush\\b", "\\bheappop\\b"],
      "combinatorial_enumeration": ["\\bpermutations\\s*\\(", "\\bcombinations\\s*\\(",
                                    "\\bproduct\\s*\\(", "\\bitertools\\b",
                                    "\\bpowerset\\b", "1\\s*<<"],
      "numeric_ops": ["[+*/%-]"]
    }
  })"));
  return table;
}

std::pair<int, ComplexityClass> score_and_classify(const ComplexityCounts& c) {
  const int score = 1 * c.loops + 2 * c.nested_loops + 3 * c.recursion +
                    3 * c.search_frontier + 3 * c.combinatorial_enumeration +
                    1 * c.constraint_checks + c.numeric_ops / 10;
  ComplexityClass cls = ComplexityClass::Trivial;
  if (score >= 5) {
    cls = ComplexityClass::Symbolic;
  } else if (score >= 2) {
    cls = ComplexityClass::Moderate;
  }
  return {score, cls};
}

namespace {

// Blanks out comments and string literal contents, preserving line layout so
// the structural passes see unchanged indentation and line numbers.
std::string strip_comments_and_strings(std::string_view source, const std::string& line_comment,
                                       const std::vector<std::pair<std::string, std::string>>&
                                           block_delims,
                                       bool indent_family) {
  std::string out(source);
  const auto blank = [&](size_t from, size_t to) {
    for (size_t i = from; i < to && i < out.size(); ++i) {
      if (out[i] != '\n') out[i] = ' ';
    }
  };

  size_t i = 0;
  while (i < out.size()) {
    bool advanced = false;
    for (const auto& [open, close] : block_delims) {
      if (out.compare(i, open.size(), open) == 0) {
        size_t end = out.find(close, i + open.size());
        end = end == std::string::npos ? out.size() : end + close.size();
        blank(i, end);
        i = end;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;

    const char c = out[i];
    if (!line_comment.empty() && out.compare(i, line_comment.size(), line_comment) == 0) {
      size_t end = out.find('\n', i);
      if (end == std::string::npos) end = out.size();
      blank(i, end);
      i = end;
      continue;
    }
    if (c == '"' || (indent_family && c == '\'') || (!indent_family && c == '\'')) {
      size_t end = i + 1;
      while (end < out.size() && out[end] != c && out[end] != '\n') {
        if (out[end] == '\\') ++end;
        ++end;
      }
      blank(i + 1, end);  // keep the quotes, erase the contents
      i = std::min(end + 1, out.size());
      continue;
    }
    ++i;
  }

  // Arrow tokens (python annotations) would otherwise count as arithmetic.
  size_t arrow = out.find("->");
  while (arrow != std::string::npos) {
    out[arrow] = ' ';
    out[arrow + 1] = ' ';
    arrow = out.find("->", arrow + 2);
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

int indent_of(const std::string& line) {
  int indent = 0;
  for (const char c : line) {
    if (c == ' ') {
      ++indent;
    } else if (c == '\t') {
      indent += 4;
    } else {
      break;
    }
  }
  return indent;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

int count_matches(const std::string& text, const std::regex& re) {
  int count = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    ++count;
  }
  return count;
}

int count_comparisons(const std::string& text, const std::regex& re) {
  int count = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
       it != std::sregex_iterator(); ++it) {
    const std::string m = it->str();
    if (m != "<<" && m != ">>") ++count;  // shifts are not constraint checks
  }
  return count;
}

// Functions whose stripped body calls the function itself.
int count_recursive_functions_indent(const std::vector<std::string>& lines,
                                     const std::regex& function_def) {
  int count = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::smatch match;
    if (!std::regex_search(lines[i], match, function_def) || match.size() < 2) continue;
    const std::string name = match[1].str();
    const int def_indent = indent_of(lines[i]);
    std::string body;
    for (size_t k = i + 1; k < lines.size(); ++k) {
      if (!is_blank(lines[k]) && indent_of(lines[k]) <= def_indent) break;
      body += lines[k];
      body += '\n';
    }
    if (std::regex_search(body, std::regex("\\b" + name + "\\s*\\("))) ++count;
  }
  return count;
}

int count_recursive_functions_braces(const std::string& text, const std::regex& function_def) {
  int count = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), function_def);
       it != std::sregex_iterator(); ++it) {
    if (it->size() < 2) continue;
    const std::string name = (*it)[1].str();
    const size_t body_start = static_cast<size_t>(it->position()) + it->length();
    int depth = 1;
    size_t k = body_start;
    while (k < text.size() && depth > 0) {
      if (text[k] == '{') ++depth;
      if (text[k] == '}') --depth;
      ++k;
    }
    const std::string body = text.substr(body_start, k - body_start);
    if (std::regex_search(body, std::regex("\\b" + name + "\\s*\\("))) ++count;
  }
  return count;
}

}  // namespace

ComplexityReport analyze(std::string_view source, const PatternTable& table) {
  ComplexityReport report;
  report.pattern_table_version = table.version_;

  const std::string stripped = strip_comments_and_strings(
      source, table.line_comment_, table.block_delimiters_, table.indent_family_);
  const std::vector<std::string> lines = split_lines(stripped);

  ComplexityCounts& counts = report.counts;

  // Loop structure and comparisons-in-loops, tracked per line.
  struct OpenLoop {
    int level;  // indent for the indent family, brace depth for braces
  };
  std::vector<OpenLoop> loop_stack;
  int brace_depth = 0;

  for (const std::string& line : lines) {
    if (is_blank(line)) continue;
    const int level = table.indent_family_ ? indent_of(line) : brace_depth;
    while (!loop_stack.empty() && level <= loop_stack.back().level &&
           table.indent_family_) {
      loop_stack.pop_back();
    }
    if (!table.indent_family_) {
      while (!loop_stack.empty() && brace_depth < loop_stack.back().level) {
        loop_stack.pop_back();
      }
    }

    int loop_matches = 0;
    for (const std::regex& re : table.loop_patterns_) loop_matches += count_matches(line, re);
    if (loop_matches > 0) {
      counts.loops += loop_matches;
      counts.nested_loops += loop_stack.empty() ? loop_matches - 1 : loop_matches;
      loop_stack.push_back({table.indent_family_ ? level : brace_depth + 1});
    }
    if (!loop_stack.empty()) {
      counts.constraint_checks += count_comparisons(line, table.comparison_);
    }
    if (!table.indent_family_) {
      for (const char c : line) {
        if (c == '{') ++brace_depth;
        if (c == '}') brace_depth = std::max(0, brace_depth - 1);
      }
    }
  }

  counts.recursion = table.indent_family_
                         ? count_recursive_functions_indent(lines, table.function_def_)
                         : count_recursive_functions_braces(stripped, table.function_def_);

  for (const std::regex& re : table.search_frontier_) {
    counts.search_frontier += count_matches(stripped, re);
  }
  for (const std::regex& re : table.combinatorial_) {
    counts.combinatorial_enumeration += count_matches(stripped, re);
  }
  for (const std::regex& re : table.numeric_ops_) {
    counts.numeric_ops += count_matches(stripped, re);
  }

  const auto [score, classification] = score_and_classify(counts);
  report.score = score;
  report.classification = classification;

  std::ostringstream summary;
  summary << "loops=" << counts.loops << " nested_loops=" << counts.nested_loops
          << " recursion=" << counts.recursion
          << " search_frontier=" << counts.search_frontier
          << " combinatorial_enumeration=" << counts.combinatorial_enumeration
          << " constraint_checks=" << counts.constraint_checks
          << " numeric_ops=" << counts.numeric_ops << "; score=" << score
          << " classification=" << to_string(classification);
  report.summary = summary.str();
  return report;
}

}  // namespace tampforge
