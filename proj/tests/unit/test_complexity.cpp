#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tampforge/complexity.hpp"
#include "tampforge/prompt.hpp"
#include "test_support.hpp"

using namespace tampforge;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::set<std::string> detected_categories(const ComplexityCounts& c) {
  std::set<std::string> out;
  if (c.loops > 0) out.insert("loops");
  if (c.nested_loops > 0) out.insert("nested_loops");
  if (c.recursion > 0) out.insert("recursion");
  if (c.search_frontier > 0) out.insert("search_frontier");
  if (c.numeric_ops > 0) out.insert("numeric_ops");
  if (c.combinatorial_enumeration > 0) out.insert("combinatorial_enumeration");
  if (c.constraint_checks > 0) out.insert("constraint_checks");
  return out;
}

}  // namespace

TEST_CASE("rubric examples evaluate exactly") {
  // score = loops + 2*nested + 3*recursion + 3*frontier + 3*comb + checks + ops/10
  CHECK(score_and_classify({}) == std::pair{0, ComplexityClass::Trivial});

  ComplexityCounts nested_comb;
  nested_comb.nested_loops = 1;
  nested_comb.combinatorial_enumeration = 1;
  CHECK(score_and_classify(nested_comb) == std::pair{5, ComplexityClass::Symbolic});

  ComplexityCounts loop_check;
  loop_check.loops = 1;
  loop_check.constraint_checks = 1;
  CHECK(score_and_classify(loop_check) == std::pair{2, ComplexityClass::Moderate});

  ComplexityCounts ops_only;
  ops_only.numeric_ops = 25;
  CHECK(score_and_classify(ops_only) == std::pair{2, ComplexityClass::Moderate});

  ComplexityCounts threshold;
  threshold.loops = 1;  // score 1: still trivial
  CHECK(score_and_classify(threshold).second == ComplexityClass::Trivial);
}

TEST_CASE("hand-labeled corpus classifies with category precision and recall 1.0") {
  namespace fs = std::filesystem;
  const fs::path corpus = fs::path(testing::test_data_dir()) / "complexity_corpus";
  const json labels = json::parse(read_file(corpus / "labels.json"));
  REQUIRE(labels.size() == 10);

  const PatternTable table_from_file =
      PatternTable::load((fs::path(default_config_dir()) / "patterns" / "python_v1.json")
                             .string());

  for (const auto& [file, expected] : labels.items()) {
    const std::string source = read_file(corpus / file);
    const ComplexityReport report = analyze(source, table_from_file);

    std::set<std::string> expected_categories;
    for (const auto& c : expected["categories"]) {
      expected_categories.insert(c.get<std::string>());
    }
    CHECK_MESSAGE(detected_categories(report.counts) == expected_categories,
                  file, ": ", report.summary);
    CHECK_MESSAGE(std::string(to_string(report.classification)) ==
                      expected["classification"].get<std::string>(),
                  file, ": ", report.summary);

    // Shipped file and compiled-in table must not drift apart.
    const ComplexityReport builtin = analyze(source, PatternTable::python_v1());
    CHECK(builtin.counts == report.counts);
    CHECK(builtin.score == report.score);
  }
}

TEST_CASE("analyze is a pure function of source and table") {
  const std::string source = "for i in range(3):\n    if i > 1:\n        print(i)\n";
  const ComplexityReport a = analyze(source, PatternTable::python_v1());
  const ComplexityReport b = analyze(source, PatternTable::python_v1());
  CHECK(a.counts == b.counts);
  CHECK(a.score == b.score);
  CHECK(a.summary == b.summary);
  CHECK(a.pattern_table_version == "python_v1");
}

TEST_CASE("empty and malformed sources analyze without raising") {
  const ComplexityReport empty = analyze("", PatternTable::python_v1());
  CHECK(empty.score == 0);
  CHECK(empty.classification == ComplexityClass::Trivial);
  CHECK(empty.counts == ComplexityCounts{});

  // Unbalanced quotes, stray indentation, binary junk: counts only.
  const std::string malformed = "def broken(:\n  while '\x01\x02 unterminated\n\tfor x in";
  CHECK_NOTHROW(analyze(malformed, PatternTable::python_v1()));
}

TEST_CASE("appending a detected pattern never decreases the score") {
  const std::string bases[] = {
      "",
      "print('hello')\n",
      "for i in range(3):\n    print(i)\n",
      "from itertools import permutations\nfor p in permutations([1,2]):\n    print(p)\n",
  };
  const std::string additions[] = {
      "while True:\n    break\n",
      "import heapq\n",
      "x = 1 + 2\n",
      "for a in range(2):\n    for b in range(2):\n        pass\n",
  };
  for (const std::string& base : bases) {
    const int before = analyze(base, PatternTable::python_v1()).score;
    for (const std::string& extra : additions) {
      const int after = analyze(base + extra, PatternTable::python_v1()).score;
      CHECK(after >= before);
    }
  }
}

TEST_CASE("comments and strings do not trigger patterns") {
  const std::string source =
      "# for while itertools deque 1 + 2\n"
      "x = 'for while heapq + - * /'\n"
      "s = \"permutations(combinations)\"\n";
  const ComplexityReport report = analyze(source, PatternTable::python_v1());
  CHECK(report.counts == ComplexityCounts{});
}

TEST_CASE("trivial hardcoded-plan source scores zero") {
  const std::string source =
      "print(\"===PLAN===\")\n"
      "print('{\"variant\":\"actions\",\"steps\":[]}')\n";
  const ComplexityReport report = analyze(source, PatternTable::python_v1());
  CHECK(report.score == 0);
  CHECK(report.classification == ComplexityClass::Trivial);
}

TEST_CASE("braces-family table handles brace-structured source") {
  const PatternTable table = PatternTable::load(
      (std::filesystem::path(default_config_dir()) / "patterns" / "braces_v1.json").string());
  const std::string source =
      "int main() {\n"
      "  for (int i = 0; i < 4; i++) {\n"
      "    for (int j = 0; j < 4; j++) {\n"
      "      if (i < j) { count++; }\n"
      "    }\n"
      "  }\n"
      "}\n";
  const ComplexityReport report = analyze(source, table);
  CHECK(report.counts.loops >= 2);
  CHECK(report.counts.nested_loops >= 1);
  CHECK(report.counts.constraint_checks >= 1);
}

TEST_CASE("report serializes for round records") {
  const ComplexityReport report =
      analyze("for i in range(2):\n    pass\n", PatternTable::python_v1());
  json j;
  to_json(j, report);
  ComplexityReport back;
  from_json(j, back);
  CHECK(back.counts == report.counts);
  CHECK(back.score == report.score);
  CHECK(back.classification == report.classification);
}
