// Command-line front end: loads matrix documents, dispatches to the
// library, and prints a deterministic JSON report per invocation.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "opdefect/opdefect.hpp"

namespace {

using namespace opdefect;

void print_error(const std::string& code, const std::string& message) {
  JsonWriter w;
  w.begin_object();
  w.key("error").value(code);
  w.key("message").value(message);
  w.end_object();
  const std::string pretty = w.take();
  // Structural newlines and their indentation collapse to single spaces;
  // string values never hold raw newlines, so the payload is untouched.
  std::string line;
  for (size_t i = 0; i < pretty.size(); ++i) {
    if (pretty[i] == '\n') {
      while (i + 1 < pretty.size() && pretty[i + 1] == ' ') ++i;
      line += ' ';
    } else {
      line += pretty[i];
    }
  }
  std::cerr << line << "\n";
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MatrixDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_failure("IO_ERROR", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_matrix_document(text.str());
}

/// Treats the document as a metric regardless of its role tag, so the
/// positivity contract is enforced for every --metric argument.
HermitianMatrix as_metric(const MatrixDocument& doc) {
  if (hermitian_defect_norm(doc.value) > tolerances().herm)
    throw parse_failure("METRIC_NOT_POSITIVE",
                        doc.name + " is not Hermitian");
  HermitianMatrix p(doc.value);
  if (!is_positive_invertible(p))
    throw parse_failure("METRIC_NOT_POSITIVE",
                        doc.name + " is not positive invertible");
  return p;
}

void require_matching_dims(const MatrixDocument& a, const MatrixDocument& b) {
  if (a.dim != b.dim)
    throw parse_failure("DIM_MISMATCH", a.name + " is " + std::to_string(a.dim) +
                                            "-dimensional but " + b.name +
                                            " is " + std::to_string(b.dim));
}

struct RangeFlag {
  int lo = 0;
  int hi = 0;
};

RangeFlag parse_range(const std::string& text) {
  const size_t dots = text.find("..");
  RangeFlag r;
  try {
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(text);
    } else {
      r.lo = std::stoi(text.substr(0, dots));
      r.hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected N or LO..HI, got " + text);
  }
  if (r.lo > r.hi) throw CLI::ValidationError("empty range " + text);
  return r;
}

struct Invocation {
  std::string command_line;
  std::vector<MatrixDocument> inputs;
  std::function<void(JsonWriter&)> result;
};

int run(int argc, char** argv) {
  std::string command_line;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) command_line += ' ';
    command_line += argv[i];
  }

  CLI::App app{"Operator defect calculus: classification, similarity, "
               "decomposition, and theorem verification for finite matrices"};
  app.require_subcommand(1);

  double psd_tol = -1.0, herm_tol = -1.0;
  std::uint64_t seed = 42;
  app.add_option("--psd-tol", psd_tol,
                 "relative tolerance for positive-semidefinite verdicts");
  app.add_option("--herm-tol", herm_tol,
                 "relative tolerance for Hermitian validation");
  app.add_option("--seed", seed, "seed for seeded commands (fuzz)");

  std::string op_path, metric_path, a_path, b_path, p1_path, p2_path;
  std::string theorem_name, dims_text = "2..6", orders_text = "1..6";
  std::string families_text;
  double alpha_re = 0.0, alpha_im = 0.0;
  int order = 1;
  long trials = 1000;

  const auto add_op = [&op_path](CLI::App* cmd, bool required = true) {
    CLI::Option* o = cmd->add_option("--op", op_path, "operator document");
    if (required) o->required();
  };
  const auto add_metric = [&metric_path](CLI::App* cmd) {
    cmd->add_option("--metric", metric_path,
                    "metric document (identity when omitted)");
  };
  const auto add_order = [&order](CLI::App* cmd) {
    cmd->add_option("--m", order, "defect order")->required();
  };

  CLI::App* c_classify = app.add_subcommand(
      "classify", "expansive/contractive/isometric classification");
  add_op(c_classify);
  add_metric(c_classify);
  add_order(c_classify);

  CLI::App* c_defect =
      app.add_subcommand("defect", "defect ladder values through order m");
  add_op(c_defect);
  add_metric(c_defect);
  add_order(c_defect);

  CLI::App* c_stability =
      app.add_subcommand("stability", "power boundedness and orbit classes");
  add_op(c_stability);

  CLI::App* c_metric =
      app.add_subcommand("metric", "positive invariant metric, if one exists");
  add_op(c_metric);

  CLI::App* c_similar =
      app.add_subcommand("similar", "similarity to a unitary, if possible");
  add_op(c_similar);

  CLI::App* c_dunford = app.add_subcommand(
      "dunford", "semisimple plus commuting nilpotent decomposition");
  add_op(c_dunford);

  CLI::App* c_minpoly = app.add_subcommand("minpoly", "minimal polynomial");
  add_op(c_minpoly);

  CLI::App* c_split = app.add_subcommand(
      "split", "decaying/peripheral invariant-subspace split");
  add_op(c_split);

  CLI::App* c_douglas =
      app.add_subcommand("douglas", "range-inclusion factorization A = B C");
  c_douglas->add_option("--a", a_path, "left-hand document")->required();
  c_douglas->add_option("--b", b_path, "factor document")->required();

  CLI::App* c_verify =
      app.add_subcommand("verify", "check one theorem on one instance");
  c_verify->add_option("--theorem", theorem_name, "theorem identifier")
      ->required();
  add_op(c_verify, /*required=*/false);
  add_metric(c_verify);
  add_order(c_verify);
  c_verify->add_option("--alpha-re", alpha_re, "scalar block, real part");
  c_verify->add_option("--alpha-im", alpha_im, "scalar block, imaginary part");
  c_verify->add_option("--p1", p1_path, "first metric block document");
  c_verify->add_option("--p2", p2_path, "second metric block document");

  CLI::App* c_fuzz = app.add_subcommand(
      "fuzz", "seeded random search for theorem counterexamples");
  c_fuzz->add_option("--trials", trials, "instances per family");
  c_fuzz->add_option("--dims", dims_text, "dimension range LO..HI");
  c_fuzz->add_option("--m", orders_text, "defect order range LO..HI");
  c_fuzz->add_option("--families", families_text,
                     "comma-separated generator families (default: all)");

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("USAGE_ERROR", e.what());
    return 2;
  }

  // Tolerance precedence: built-in default, then environment, then flag.
  if (const char* env = std::getenv("OPDEFECT_TOLERANCE")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      print_error("USAGE_ERROR",
                  "OPDEFECT_TOLERANCE must be a positive decimal string");
      return 2;
    }
    tolerances().psd = v;
  }
  if (psd_tol > 0.0) tolerances().psd = psd_tol;
  if (herm_tol > 0.0) tolerances().herm = herm_tol;

  try {
    Invocation inv;
    inv.command_line = command_line;

    const auto loaded_op = [&]() {
      MatrixDocument doc = load_document(op_path);
      inv.inputs.push_back(doc);
      return doc;
    };
    const auto loaded_metric = [&](const MatrixDocument& op) {
      if (metric_path.empty())
        return HermitianMatrix(Matrix::Identity(op.dim, op.dim));
      MatrixDocument doc = load_document(metric_path);
      require_matching_dims(op, doc);
      inv.inputs.push_back(doc);
      return as_metric(doc);
    };

    if (*c_classify) {
      const MatrixDocument op = loaded_op();
      const HermitianMatrix p = loaded_metric(op);
      const std::string metric_id = metric_path.empty() ? "I" : inv.inputs[1].name;
      const ClassReport r = classify(op.value, p, order, metric_id);
      inv.result = [r](JsonWriter& w) { emit::class_report(w, r); };
    } else if (*c_defect) {
      const MatrixDocument op = loaded_op();
      const HermitianMatrix p = loaded_metric(op);
      const DefectSequence s = defect_sequence(op.value, p, order);
      inv.result = [s](JsonWriter& w) { emit::defect_sequence(w, s); };
    } else if (*c_stability) {
      const MatrixDocument op = loaded_op();
      const StabilityReport r = stability(op.value);
      inv.result = [r](JsonWriter& w) { emit::stability_report(w, r); };
    } else if (*c_metric) {
      const MatrixDocument op = loaded_op();
      const std::optional<InvariantMetric> im = invariant_metric(op.value);
      inv.result = [im](JsonWriter& w) { emit::invariant_metric_result(w, im); };
    } else if (*c_similar) {
      const MatrixDocument op = loaded_op();
      const std::optional<SimilarityWitness> sw = similar_to_unitary(op.value);
      inv.result = [sw](JsonWriter& w) { emit::similarity_witness(w, sw); };
    } else if (*c_dunford) {
      const MatrixDocument op = loaded_op();
      const DunfordPair d = dunford_decompose(op.value);
      inv.result = [d](JsonWriter& w) { emit::dunford_pair(w, d); };
    } else if (*c_minpoly) {
      const MatrixDocument op = loaded_op();
      const MinimalPolynomial mp = minimal_polynomial(op.value);
      inv.result = [mp](JsonWriter& w) { emit::minimal_polynomial_result(w, mp); };
    } else if (*c_split) {
      const MatrixDocument op = loaded_op();
      const SpectralSplit s = kerchy_split(op.value);
      inv.result = [s](JsonWriter& w) { emit::spectral_split(w, s); };
    } else if (*c_douglas) {
      MatrixDocument da = load_document(a_path);
      MatrixDocument db = load_document(b_path);
      require_matching_dims(da, db);
      inv.inputs.push_back(da);
      inv.inputs.push_back(db);
      const std::optional<Matrix> c = douglas_factor(da.value, db.value);
      const Matrix a = da.value, b = db.value;
      inv.result = [a, b, c](JsonWriter& w) { emit::douglas_result(w, a, b, c); };
    } else if (*c_verify) {
      const std::optional<TheoremId> id = theorem_from_string(theorem_name);
      if (!id) {
        print_error("USAGE_ERROR", "unknown theorem " + theorem_name);
        return 2;
      }
      TheoremVerdict v;
      if (*id == TheoremId::REMARK_CONTRACTIVE) {
        if (p1_path.empty() || p2_path.empty()) {
          print_error("USAGE_ERROR",
                      "REMARK_CONTRACTIVE needs --alpha-re/--alpha-im, --p1, --p2");
          return 2;
        }
        MatrixDocument d1 = load_document(p1_path);
        MatrixDocument d2 = load_document(p2_path);
        inv.inputs.push_back(d1);
        inv.inputs.push_back(d2);
        v = verify_remark(Complex(alpha_re, alpha_im), order, as_metric(d1),
                          as_metric(d2));
      } else {
        if (op_path.empty()) {
          print_error("USAGE_ERROR", "--op is required for " + theorem_name);
          return 2;
        }
        if ((*id == TheoremId::PRO_00 && order % 2 == 0) ||
            (*id == TheoremId::PRO_01 && order % 2 == 1)) {
          print_error("USAGE_ERROR",
                      std::string(to_string(*id)) + " is stated for " +
                          (*id == TheoremId::PRO_00 ? "odd" : "even") +
                          " m, got m = " + std::to_string(order));
          return 2;
        }
        const MatrixDocument op = loaded_op();
        const HermitianMatrix p = loaded_metric(op);
        switch (*id) {
          case TheoremId::PRO_00:
          case TheoremId::PRO_01:
            v = verify_descent(op.value, p, order);
            break;
          case TheoremId::THM_30:
            v = verify_power_bounded_hyper(op.value, p, order);
            break;
          case TheoremId::THM_31:
          case TheoremId::THM_32:
            v = verify_similarity(op.value, p, order, *id);
            break;
          case TheoremId::THM_310:
            v = verify_contractive_split(op.value, p, order);
            break;
          case TheoremId::SPECTRAL_INCLUSION:
            v = verify_spectral_inclusion(op.value, p, order);
            break;
          case TheoremId::NO_SINGULAR_DRAZIN:
            v = verify_invertibility(op.value, p, order);
            break;
          case TheoremId::THM_10:
            v = verify_algebraic_structure(op.value, p, order);
            break;
          case TheoremId::PRO_11:
            v = verify_alternating(op.value, p, order);
            break;
          case TheoremId::REMARK_CONTRACTIVE:
            break;  // handled above
        }
      }
      inv.result = [v](JsonWriter& w) { emit::theorem_verdict(w, v); };
    } else if (*c_fuzz) {
      const RangeFlag dims = parse_range(dims_text);
      const RangeFlag orders = parse_range(orders_text);
      FuzzConfig cfg;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.dim_min = dims.lo;
      cfg.dim_max = dims.hi;
      cfg.m_min = orders.lo;
      cfg.m_max = orders.hi;
      if (!families_text.empty()) {
        cfg.families.clear();
        std::stringstream ss(families_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const std::optional<Generator> g = generator_from_string(item);
          if (!g) {
            print_error("USAGE_ERROR", "unknown generator family " + item);
            return 2;
          }
          cfg.families.push_back(*g);
        }
      }
      const FuzzSummary s = fuzz(cfg);
      inv.result = [s](JsonWriter& w) { emit::fuzz_summary(w, s); };
    }

    std::cout << make_report(inv.command_line, inv.inputs, iso_timestamp(),
                             inv.result);
    return 0;
  } catch (const CLI::ValidationError& e) {
    print_error("USAGE_ERROR", e.what());
    return 2;
  } catch (const parse_failure& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const contract_violation& e) {
    print_error("CONTRACT_VIOLATION", e.what());
    return 1;
  } catch (const domain_error& e) {
    print_error("DOMAIN_ERROR", e.what());
    return 1;
  } catch (const ill_conditioned_error& e) {
    print_error("ILL_CONDITIONED", e.what());
    return 1;
  } catch (const consistency_error& e) {
    print_error("CONSISTENCY_ERROR", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("INTERNAL_ERROR", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
