#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

namespace {

std::string code_of(const std::string& text) {
  try {
    parse_matrix_document(text);
  } catch (const parse_failure& e) {
    return e.code();
  }
  return "(no failure)";
}

}  // namespace

TEST_CASE("parse_matrix_document accepts a well-formed document") {
  const MatrixDocument doc = parse_matrix_document(R"({
    "name": "t", "dim": 2,
    "entries": [[0,0],[2,0],[-0.5,0],[0,0]],
    "role": "operator"
  })");
  CHECK(doc.name == "t");
  CHECK(doc.dim == 2);
  CHECK(doc.role == "operator");
  CHECK(doc.value(0, 1) == Complex(2, 0));
  CHECK(doc.value(1, 0) == Complex(-0.5, 0));
}

TEST_CASE("parse_matrix_document failure codes are distinct and specific") {
  CHECK(code_of("not json at all") == "MALFORMED_JSON");
  CHECK(code_of(R"({"name": "t", "dim": 2})") == "MALFORMED_JSON");
  CHECK(code_of(R"({"name": "t", "dim": 0, "entries": []})") ==
        "MALFORMED_JSON");
  CHECK(code_of(R"({"name": "t", "dim": 2, "entries": [[1,0]]})") ==
        "DIM_MISMATCH");
  CHECK(code_of(R"({"name": "t", "dim": 1, "entries": [[1e999,0]]})") ==
        "NON_FINITE_ENTRY");
  // Role "metric" triggers positivity validation.
  CHECK(code_of(R"({"name": "p", "dim": 2,
                    "entries": [[1,0],[0,0],[0,0],[-1,0]],
                    "role": "metric"})") == "METRIC_NOT_POSITIVE");
  CHECK(code_of(R"({"name": "p", "dim": 2,
                    "entries": [[1,0],[1,0],[0,0],[1,0]],
                    "role": "metric"})") == "METRIC_NOT_POSITIVE");
}

TEST_CASE("matrix documents round-trip through the emitter") {
  const std::string text = R"({
    "name": "t", "dim": 2,
    "entries": [[0.5,0],[0,1.25],[-3,0],[0,0]],
    "role": "operator"
  })";
  const MatrixDocument doc = parse_matrix_document(text);
  JsonWriter w;
  emit::matrix_document(w, doc);
  const MatrixDocument back = parse_matrix_document(w.take());
  CHECK(back.name == doc.name);
  CHECK(back.dim == doc.dim);
  CHECK(back.role == doc.role);
  CHECK((back.value - doc.value).norm() == 0.0);
}

TEST_CASE("JsonWriter emits doubles without precision loss") {
  JsonWriter w;
  w.begin_object();
  w.key("x").value(0.1);
  w.key("y").value(1.0 / 3.0);
  w.end_object();
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["x"].get<double>() == 0.1);
  CHECK(parsed["y"].get<double>() == 1.0 / 3.0);
}

TEST_CASE("JsonWriter escapes string content") {
  JsonWriter w;
  w.begin_object();
  w.key("s").value(std::string_view("a\"b\\c\nd"));
  w.end_object();
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["s"].get<std::string>() == "a\"b\\c\nd");
}

TEST_CASE("make_report wraps the result in the standard envelope") {
  const MatrixDocument doc = parse_matrix_document(
      R"({"name": "t", "dim": 1, "entries": [[2,0]], "role": "operator"})");
  const std::string out =
      make_report("classify --op t.json --m 1", {doc},
                  "2024-01-01T00:00:00Z", [](JsonWriter& w) {
                    w.begin_object();
                    w.key("ok").value(true);
                    w.end_object();
                  });
  CHECK(out.back() == '\n');
  const auto parsed = nlohmann::json::parse(out);
  CHECK(parsed["tool_version"] == "1.0.0");
  CHECK(parsed["command"] == "classify --op t.json --m 1");
  CHECK(parsed["timestamp"] == "2024-01-01T00:00:00Z");
  CHECK(parsed["inputs"].size() == 1);
  CHECK(parsed["inputs"][0]["name"] == "t");
  CHECK(parsed["result"]["ok"] == true);
  CHECK(parsed["tolerances"]["psd"].get<double>() == tolerances().psd);
  CHECK(parsed["tolerances"].size() == 17);
}

TEST_CASE("verdict serialization distinguishes vacuous from failed") {
  TheoremVerdict v;
  v.theorem_id = TheoremId::THM_30;
  v.hypotheses_hold = false;
  JsonWriter w;
  emit::theorem_verdict(w, v);
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["conclusion_holds"] == "not-applicable");
  v.hypotheses_hold = true;
  v.conclusion_holds = false;
  JsonWriter w2;
  emit::theorem_verdict(w2, v);
  CHECK(nlohmann::json::parse(w2.take())["conclusion_holds"] == false);
}

TEST_CASE("instance specs serialize seeds losslessly as strings") {
  InstanceSpec spec;
  spec.dim = 4;
  spec.generator = Generator::jordan;
  spec.seed = 18446744073709551615ull;  // max 64-bit value
  spec.metric = MetricKind::random_positive;
  JsonWriter w;
  emit::instance_spec(w, spec);
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["seed"].get<std::string>() == "18446744073709551615");
  CHECK(parsed["generator"] == "jordan");
  CHECK(parsed["metric"] == "random_positive");
}

TEST_CASE("fuzz summaries serialize with consistent counts") {
  FuzzConfig cfg;
  cfg.trials = 2;
  cfg.seed = 3;
  const FuzzSummary s = fuzz(cfg);
  JsonWriter w;
  emit::fuzz_summary(w, s);
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["total_counterexamples"] == 0);
  CHECK(parsed["totals"].size() == 11);
  long evaluated = 0;
  for (const auto& [name, row] : parsed["totals"].items())
    evaluated += row["evaluated"].get<long>();
  CHECK(evaluated > 0);
  CHECK(parsed["config"]["seed"].get<std::string>() == "3");
}

TEST_CASE("defect sequence serialization carries the whole ladder") {
  Matrix t(2, 2);
  t << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
  const DefectSequence s =
      defect_sequence(t, HermitianMatrix(Matrix::Identity(2, 2)), 3);
  JsonWriter w;
  emit::defect_sequence(w, s);
  const auto parsed = nlohmann::json::parse(w.take());
  CHECK(parsed["m"] == 3);
  CHECK(parsed["values"].size() == 4);
  CHECK(parsed["values"][0]["entries"][0][0] == 1.0);
}
