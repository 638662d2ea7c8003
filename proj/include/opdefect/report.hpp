#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "opdefect/elementary.hpp"
#include "opdefect/structure.hpp"
#include "opdefect/verify.hpp"

namespace opdefect {

/// Input rejected at the document layer.  `code` is the stable
/// machine-readable identifier the CLI forwards to callers.
class parse_failure : public std::runtime_error {
 public:
  parse_failure(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// On-disk matrix: square, row-major [re, im] pairs, optionally tagged
/// with the role it plays in a command.
struct MatrixDocument {
  std::string name;
  int dim = 0;
  Matrix value;
  std::string role;  // "operator", "metric", or empty
};

inline MatrixDocument parse_matrix_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::out_of_range& e) {
    // Number overflow: the written value has no finite double form.
    throw parse_failure("NON_FINITE_ENTRY", e.what());
  } catch (const nlohmann::json::exception& e) {
    throw parse_failure("MALFORMED_JSON", e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string() ||
      !j.contains("dim") || !j["dim"].is_number_integer() ||
      !j.contains("entries") || !j["entries"].is_array())
    throw parse_failure("MALFORMED_JSON",
                        "expected {name, dim, entries[, role]}");
  MatrixDocument doc;
  doc.name = j["name"].get<std::string>();
  const long long dim = j["dim"].get<long long>();
  if (dim < 1 || dim > 1024)
    throw parse_failure("MALFORMED_JSON", "dim must be a positive integer");
  doc.dim = int(dim);
  const auto& entries = j["entries"];
  if (static_cast<long long>(entries.size()) != dim * dim)
    throw parse_failure("DIM_MISMATCH",
                        "entries must hold dim*dim [re, im] pairs");
  doc.value = Matrix(doc.dim, doc.dim);
  for (long long k = 0; k < dim * dim; ++k) {
    const auto& e = entries[size_t(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      throw parse_failure("MALFORMED_JSON", "entry must be a [re, im] pair");
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw parse_failure("NON_FINITE_ENTRY",
                          "matrix entries must be finite");
    doc.value(Eigen::Index(k / dim), Eigen::Index(k % dim)) = Complex(re, im);
  }
  if (j.contains("role")) {
    if (!j["role"].is_string())
      throw parse_failure("MALFORMED_JSON", "role must be a string");
    doc.role = j["role"].get<std::string>();
    if (doc.role != "operator" && doc.role != "metric")
      throw parse_failure("MALFORMED_JSON",
                          "role must be \"operator\" or \"metric\"");
  }
  if (doc.role == "metric") {
    if (hermitian_defect_norm(doc.value) > tolerances().herm)
      throw parse_failure("METRIC_NOT_POSITIVE",
                          "metric document is not Hermitian");
    if (!is_positive_invertible(HermitianMatrix(doc.value)))
      throw parse_failure("METRIC_NOT_POSITIVE",
                          "metric document is not positive invertible");
  }
  return doc;
}

/// Streaming JSON emitter with a fixed layout: keys appear in call
/// order, reals carry 17 significant digits, so equal data produces
/// byte-equal output.
class JsonWriter {
 public:
  std::string take() { return std::move(out_); }
  const std::string& str() const { return out_; }

  JsonWriter& begin_object() { open('{'); return *this; }
  JsonWriter& end_object() { close('}'); return *this; }
  JsonWriter& begin_array() { open('['); return *this; }
  JsonWriter& end_array() { close(']'); return *this; }

  JsonWriter& key(std::string_view name) {
    separate();
    write_string(name);
    out_ += ": ";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double x) {
    separate();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out_ += buf;
    return *this;
  }
  JsonWriter& value(long long x) {
    separate();
    out_ += std::to_string(x);
    return *this;
  }
  JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(long x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(bool b) {
    separate();
    out_ += b ? "true" : "false";
    return *this;
  }
  JsonWriter& value(std::string_view s) {
    separate();
    write_string(s);
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& null() {
    separate();
    out_ += "null";
    return *this;
  }
  JsonWriter& value(Complex z) {
    // One line per complex number keeps matrix listings readable.
    separate();
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", z.real(), z.imag());
    out_ += buf;
    return *this;
  }

 private:
  void open(char c) {
    separate();
    out_ += c;
    depth_.push_back(false);
  }
  void close(char c) {
    const bool had_items = depth_.back();
    depth_.pop_back();
    if (had_items) {
      out_ += '\n';
      indent();
    }
    out_ += c;
    if (!depth_.empty()) depth_.back() = true;
  }
  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (depth_.empty()) return;
    if (depth_.back()) out_ += ',';
    out_ += '\n';
    indent();
    depth_.back() = true;
  }
  void indent() {
    for (size_t i = 0; i < depth_.size(); ++i) out_ += "  ";
  }
  void write_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> depth_;  // per level: wrote at least one item
  bool pending_value_ = false;
};

inline constexpr const char* kToolVersion = "1.0.0";

namespace emit {

inline void matrix(JsonWriter& w, const Matrix& m) {
  w.begin_object();
  w.key("rows").value(int(m.rows()));
  w.key("cols").value(int(m.cols()));
  w.key("entries").begin_array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.value(m(i, j));
  w.end_array();
  w.end_object();
}

inline void matrix_document(JsonWriter& w, const MatrixDocument& doc) {
  w.begin_object();
  w.key("name").value(doc.name);
  w.key("dim").value(doc.dim);
  if (!doc.role.empty()) w.key("role").value(doc.role);
  w.key("entries").begin_array();
  for (Eigen::Index i = 0; i < doc.value.rows(); ++i)
    for (Eigen::Index j = 0; j < doc.value.cols(); ++j)
      w.value(doc.value(i, j));
  w.end_array();
  w.end_object();
}

inline void tolerances_map(JsonWriter& w, const Tolerances& t) {
  w.begin_object();
  w.key("psd").value(t.psd);
  w.key("herm").value(t.herm);
  w.key("skew").value(t.skew);
  w.key("defect_cross").value(t.defect_cross);
  w.key("power_pair").value(t.power_pair);
  w.key("spectral_band").value(t.spectral_band);
  w.key("rank_sv").value(t.rank_sv);
  w.key("cluster_merge").value(t.cluster_merge);
  w.key("cluster_guard").value(t.cluster_guard);
  w.key("metric_residual").value(t.metric_residual);
  w.key("similarity_residual").value(t.similarity_residual);
  w.key("nilpotent").value(t.nilpotent);
  w.key("minpoly_residual").value(t.minpoly_residual);
  w.key("invertibility").value(t.invertibility);
  w.key("structure_residual").value(t.structure_residual);
  w.key("contraction_norm").value(t.contraction_norm);
  w.key("equiv_norm").value(t.equiv_norm);
  w.end_object();
}

inline void class_report(JsonWriter& w, const ClassReport& r) {
  w.begin_object();
  w.key("m").value(r.m);
  w.key("metric_id").value(r.metric_id);
  w.key("expansive").value(r.expansive);
  w.key("contractive").value(r.contractive);
  w.key("isometric").value(r.isometric);
  w.key("hyperexpansive").value(r.hyperexpansive);
  w.key("hypercontractive").value(r.hypercontractive);
  w.key("alternatingly_expansive").value(r.alternatingly_expansive);
  // Sign convention the alternating flag uses, recorded so readers do
  // not have to guess which of the two literature conventions applies.
  w.key("alternating_convention").value("(-1)^t * defect_t is PSD for t <= m");
  w.key("margins").begin_array();
  for (const ClassMargin& m : r.margins) {
    w.begin_object();
    w.key("t").value(m.t);
    w.key("min_eig").value(m.min_eig);
    w.key("max_eig").value(m.max_eig);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

inline void stability_report(JsonWriter& w, const StabilityReport& r) {
  w.begin_object();
  w.key("power_bounded").value(r.power_bounded);
  w.key("c0_dot").value(r.c0_dot);
  w.key("c1_dot").value(r.c1_dot);
  w.key("c_dot0").value(r.c_dot0);
  w.key("c_dot1").value(r.c_dot1);
  w.key("sup_norm_estimate").value(r.sup_norm_estimate);
  w.end_object();
}

inline void defect_sequence(JsonWriter& w, const DefectSequence& s) {
  w.begin_object();
  w.key("m").value(s.m);
  w.key("values").begin_array();
  for (const HermitianMatrix& v : s.values) matrix(w, v.mat());
  w.end_array();
  w.end_object();
}

inline void invariant_metric_result(JsonWriter& w,
                                    const std::optional<InvariantMetric>& im) {
  w.begin_object();
  w.key("exists").value(im.has_value());
  if (im) {
    w.key("q");
    matrix(w, im->q.mat());
    w.key("residual").value(im->residual);
  }
  w.end_object();
}

inline void similarity_witness(JsonWriter& w,
                               const std::optional<SimilarityWitness>& sw) {
  w.begin_object();
  w.key("exists").value(sw.has_value());
  if (sw) {
    w.key("transform");
    matrix(w, sw->transform);
    w.key("target");
    matrix(w, sw->target);
    w.key("residual").value(sw->residual);
    w.key("transform_condition").value(sw->transform_condition);
  }
  w.end_object();
}

inline void spectral_split(JsonWriter& w, const SpectralSplit& s) {
  w.begin_object();
  w.key("inner_basis");
  matrix(w, s.inner_basis);
  w.key("peripheral_basis");
  matrix(w, s.peripheral_basis);
  w.key("inner_block");
  matrix(w, s.inner_block);
  w.key("peripheral_block");
  matrix(w, s.peripheral_block);
  w.key("invariance_residual").value(s.invariance_residual);
  w.end_object();
}

inline void dunford_pair(JsonWriter& w, const DunfordPair& d) {
  w.begin_object();
  w.key("semisimple");
  matrix(w, d.semisimple);
  w.key("nilpotent");
  matrix(w, d.nilpotent);
  w.key("nilpotency_index").value(d.nilpotency_index);
  w.key("clusters").begin_array();
  for (const SpectralClusterInfo& c : d.clusters) {
    w.begin_object();
    w.key("eigenvalue").value(c.eigenvalue);
    w.key("multiplicity").value(c.multiplicity);
    w.key("pole_order").value(c.pole_order);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

inline void minimal_polynomial_result(JsonWriter& w,
                                      const MinimalPolynomial& p) {
  w.begin_object();
  w.key("degree").value(p.degree);
  w.key("coefficients").begin_array();
  for (Complex c : p.coefficients) w.value(c);
  w.end_array();
  w.key("residual").value(p.residual);
  w.end_object();
}

inline void invertibility_report(JsonWriter& w, const InvertibilityReport& r) {
  w.begin_object();
  w.key("invertible").value(r.invertible);
  w.key("sigma_min").value(r.sigma_min);
  w.key("zero_is_pole_order").value(r.zero_is_pole_order);
  w.end_object();
}

inline void douglas_result(JsonWriter& w, const Matrix& a, const Matrix& b,
                           const std::optional<Matrix>& c) {
  w.begin_object();
  w.key("factorizable").value(c.has_value());
  if (c) {
    w.key("factor");
    matrix(w, *c);
    w.key("residual").value((a - b * *c).norm());
  }
  w.end_object();
}

inline void theorem_verdict(JsonWriter& w, const TheoremVerdict& v) {
  w.begin_object();
  w.key("theorem_id").value(to_string(v.theorem_id));
  w.key("hypotheses_hold").value(v.hypotheses_hold);
  w.key("conclusion_holds");
  if (v.conclusion_holds)
    w.value(*v.conclusion_holds);
  else
    w.value("not-applicable");
  w.key("residuals").begin_object();
  for (const auto& [name, x] : v.residuals) w.key(name).value(x);
  w.end_object();
  w.key("witness").begin_object();
  for (const auto& [name, m] : v.witness) {
    w.key(name);
    matrix(w, m);
  }
  w.end_object();
  w.end_object();
}

inline void instance_spec(JsonWriter& w, const InstanceSpec& s) {
  w.begin_object();
  w.key("dim").value(s.dim);
  w.key("generator").value(to_string(s.generator));
  w.key("seed").value(std::to_string(s.seed));  // string: full 64-bit
  w.key("metric").value(to_string(s.metric));
  w.end_object();
}

inline void fuzz_summary(JsonWriter& w, const FuzzSummary& s) {
  w.begin_object();
  w.key("config").begin_object();
  w.key("trials").value(s.config.trials);
  w.key("seed").value(std::to_string(s.config.seed));
  w.key("dim_min").value(s.config.dim_min);
  w.key("dim_max").value(s.config.dim_max);
  w.key("m_min").value(s.config.m_min);
  w.key("m_max").value(s.config.m_max);
  w.key("families").begin_array();
  for (Generator g : s.config.families) w.value(to_string(g));
  w.end_array();
  w.end_object();
  const auto counts = [&w](const TheoremCounts& c) {
    w.begin_object();
    w.key("evaluated").value(c.evaluated);
    w.key("applicable").value(c.applicable);
    w.key("passed").value(c.passed);
    w.key("counterexamples").value(c.counterexamples);
    w.end_object();
  };
  w.key("totals").begin_object();
  for (TheoremId id : kAllTheorems) {
    w.key(to_string(id));
    counts(s.totals[size_t(id)]);
  }
  w.end_object();
  w.key("by_family").begin_object();
  for (const auto& [family, per_theorem] : s.by_family) {
    w.key(to_string(family)).begin_object();
    for (TheoremId id : kAllTheorems) {
      w.key(to_string(id));
      counts(per_theorem[size_t(id)]);
    }
    w.end_object();
  }
  w.end_object();
  w.key("total_counterexamples").value(s.total_counterexamples);
  w.key("counterexamples").begin_array();
  for (const Counterexample& ce : s.counterexamples) {
    w.begin_object();
    w.key("spec");
    instance_spec(w, ce.spec);
    w.key("m").value(ce.m);
    w.key("verdict");
    theorem_verdict(w, ce.verdict);
    w.key("op");
    matrix(w, ce.op);
    w.key("metric");
    matrix(w, ce.metric);
    w.key("tolerances");
    tolerances_map(w, ce.tolerances);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace emit

/// Assembles the standard report wrapper around a serialized result.
/// `emit_result` writes the result value into the writer it is given.
template <typename EmitResult>
std::string make_report(const std::string& command,
                        const std::vector<MatrixDocument>& inputs,
                        const std::string& timestamp,
                        EmitResult&& emit_result) {
  JsonWriter w;
  w.begin_object();
  w.key("tool_version").value(kToolVersion);
  w.key("tolerances");
  emit::tolerances_map(w, tolerances());
  w.key("command").value(command);
  w.key("inputs").begin_array();
  for (const MatrixDocument& doc : inputs) emit::matrix_document(w, doc);
  w.end_array();
  w.key("result");
  emit_result(w);
  w.key("timestamp").value(timestamp);
  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

}  // namespace opdefect
