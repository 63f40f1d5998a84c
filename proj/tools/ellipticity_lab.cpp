// ellipticity-lab: generate tensors, run the certification pipeline and its
// individual stages, emit JSON reports.
//
// Exit codes: 0 decided, 1 input error, 2 undecided.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "ellipticity/check.hpp"
#include "ellipticity/errors.hpp"
#include "ellipticity/generators.hpp"
#include "ellipticity/io.hpp"
#include "ellipticity/oracle.hpp"

using namespace ellipticity;

namespace {

constexpr int kDecided = 0;
constexpr int kInputError = 1;
constexpr int kUndecided = 2;

struct Common {
  std::string input;
  std::string output;
  std::string decomp;
  bool json_out = false;
};

Elast4 load_tensor(const std::string& path) { return elast4_from_json(read_json_file(path)); }

// JSON goes to --output when given and to stdout with --json; otherwise a
// short summary is printed.
void emit(const Common& c, const json& doc, const std::string& summary) {
  if (!c.output.empty()) write_json_file(c.output, doc);
  if (c.json_out)
    std::cout << doc.dump(2) << '\n';
  else
    std::cout << summary;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void require_positive(double v, const char* flag) {
  if (!(v > 0)) throw InvalidOptions(std::string(flag) + " must be > 0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong ellipticity certification for 3x3x3x3 elasticity tensors"};
  app.require_subcommand(1);

  Common common;
  std::optional<double> tol, epsilon, gamma, lambda, mu, seed;
  int max_iter = PocsOptions{}.max_iter;
  int grid_n = 2000;
  int case_id = 0;
  bool sweep = false;
  std::string generator;

  auto add_io = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input,-i", common.input, "elast4-v1 tensor file");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--output,-o", common.output, "write the JSON result to this file");
    sub->add_flag("--json", common.json_out, "print the JSON result to stdout");
  };

  auto* gen = app.add_subcommand("gen", "write a named tensor as elast4-v1 JSON");
  gen->add_option("name", generator, "E, choi-lam, isotropic, counterexample-s2, random-spd, random")->required();
  gen->add_option("--gamma", gamma, "choi-lam parameter (default 1)");
  gen->add_option("--lambda", lambda, "isotropic Lame modulus");
  gen->add_option("--mu", mu, "isotropic shear modulus");
  gen->add_option("--seed", seed, "random generators (default 0)");
  gen->add_option("--output,-o", common.output, "output file (stdout when omitted)");

  auto* check = app.add_subcommand("check", "run the full certification pipeline");
  add_io(check, true);
  check->add_option("--decomp", common.decomp, "decomp-v1 structured decomposition");
  check->add_option("--tol", tol, "oracle and case tolerance (default 1e-8)");
  check->add_option("--max-iter", max_iter, "POCS iteration budget");
  check->add_option("--epsilon", epsilon, "M-PD shift (default 1e-6)");
  check->add_flag("--sweep", sweep, "halve epsilon up to 5 times when M-PD certification fails");
  check->add_option("--grid-n", grid_n, "oracle points per sphere");

  auto* pocs = app.add_subcommand("pocs", "alternating projections on A - epsilon E");
  add_io(pocs, true);
  pocs->add_option("--tol", tol, "convergence tolerance relative to max(1, ||A||) (default 1e-10)");
  pocs->add_option("--max-iter", max_iter, "iteration budget");
  pocs->add_option("--epsilon", epsilon, "shift (default 0)");

  auto* cse = app.add_subcommand("case", "structured case check");
  add_io(cse, true);
  cse->add_option("--case", case_id, "1, 2 or 3 (detected from the shape when omitted)")
      ->check(CLI::Range(1, 3));
  cse->add_option("--decomp", common.decomp, "decomp-v1 structured decomposition");
  cse->add_option("--tol", tol, "structural and verdict tolerance (default 1e-8)");

  auto* orc = app.add_subcommand("oracle", "brute-force minimum of the bi-quadratic form");
  add_io(orc, true);
  orc->add_option("--grid-n", grid_n, "points per sphere (>= 100)");
  orc->add_option("--tol", tol, "verdict band relative to max |a_ijkl| (default 1e-8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (tol) require_positive(*tol, "--tol");
    if (max_iter < 1) throw InvalidOptions("--max-iter must be >= 1");

    if (*gen) {
      std::map<std::string, double> params;
      if (gamma) params["gamma"] = *gamma;
      if (lambda) params["lambda"] = *lambda;
      if (mu) params["mu"] = *mu;
      if (seed) params["seed"] = *seed;
      const GeneratedTensor g = generate(generator, params);
      json doc = to_json(g.tensor, g.name);
      if (!g.note.empty()) std::cerr << "note: " << g.note << '\n';
      if (common.output.empty())
        std::cout << doc.dump(2) << '\n';
      else
        write_json_file(common.output, doc);
      return kDecided;
    }

    const Elast4 a = load_tensor(common.input);

    if (*check) {
      CheckConfig cfg;
      if (tol) cfg.tol = cfg.cases.tol = *tol;
      cfg.pocs.max_iter = max_iter;
      if (epsilon) cfg.epsilon = *epsilon;
      cfg.epsilon_sweep = sweep;
      cfg.grid_n = grid_n;
      if (!common.decomp.empty()) cfg.decomp = decomp_from_json(read_json_file(common.decomp));
      const CheckReport rep = run_check(a, cfg);
      std::string s;
      for (const auto& st : rep.stages) s += st.stage + ": " + st.verdict + "\n";
      s += std::string("overall: ") + to_string(rep.overall);
      if (!rep.provenance.empty()) s += " (" + rep.provenance + ")";
      s += "\n";
      if (!rep.tripwire.empty()) s += rep.tripwire + "\n";
      emit(common, to_json(rep), s);
      return rep.exit_code();
    }

    if (*pocs) {
      PocsOptions opts;
      opts.max_iter = max_iter;
      if (tol) opts.tol_converge = *tol;
      if (epsilon) opts.epsilon_shift = *epsilon;
      const PocsReport rep = run_pocs(a, opts);
      emit(common, to_json(rep),
           std::string(to_string(rep.verdict)) + " after " + std::to_string(rep.iterations) +
               " iterations, gap " + fmt(rep.final_gap) + "\n");
      return rep.verdict == PocsVerdict::Inconclusive ? kUndecided : kDecided;
    }

    if (*cse) {
      CaseOptions opts;
      if (tol) opts.tol = *tol;
      StructuredDecomposition dec;
      std::string source = "supplied";
      if (!common.decomp.empty()) {
        dec = decomp_from_json(read_json_file(common.decomp));
        dec.order_positives_first();
      } else {
        dec = spectral_decomposition(a);
        source = "auto-extracted (heuristic)";
      }
      if (case_id == 0) {
        const auto which = detect_case(dec);
        if (!which)
          throw CaseMismatch("decomposition shape (r=" + std::to_string(dec.size()) +
                                 ", q=" + std::to_string(dec.positive_count()) + ") matches no case",
                             0);
        case_id = *which;
      }
      const CaseReport rep = case_id == 1 ? check_case1(dec, opts)
                             : case_id == 2 ? check_case2(dec, opts)
                                            : check_case3(dec, opts);
      json doc = to_json(rep);
      doc["decomposition"] = source;
      std::string s = "Case " + std::to_string(case_id) + ": " + to_string(rep.verdict) + "\n";
      if (rep.sup) s += "eta_sup " + fmt(rep.eta_sup) + ", threshold " + fmt(rep.threshold) + "\n";
      if (rep.c_matrix) s += "min eigenvalue of C " + fmt(rep.c_min_eigenvalue) + "\n";
      emit(common, doc, s);
      const bool decided = rep.verdict == CaseVerdict::MPSD || rep.verdict == CaseVerdict::MPD ||
                           rep.verdict == CaseVerdict::NotMPSD;
      return decided ? kDecided : kUndecided;
    }

    if (*orc) {
      const OracleVerdict v = oracle_verdict(a, grid_n, tol.value_or(1e-8));
      std::string s = std::string(to_string(v.kind)) + ", min " + fmt(v.min_value) + "\n";
      emit(common, to_json(v), s);
      return kDecided;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
