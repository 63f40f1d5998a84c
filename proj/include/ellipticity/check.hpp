#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellipticity/cases.hpp"
#include "ellipticity/io.hpp"
#include "ellipticity/pocs.hpp"

namespace ellipticity {

struct CheckConfig {
  double tol = 1e-8;            // oracle band and case tolerance
  double spectral_tol = 1e-12;  // S-PD / S-PSD eigenvalue test, relative to ||A||
  PocsOptions pocs;             // epsilon_shift is taken from `epsilon`
  double epsilon = kDefaultMpdEpsilon;
  bool epsilon_sweep = false;
  int grid_n = 2000;
  int oracle_starts = 10;
  std::optional<StructuredDecomposition> decomp;  // user-supplied; auto-extracted otherwise
  CaseOptions cases;
};

enum class Overall { MPD, MPSD, NotMPSD, Unknown };
const char* to_string(Overall o);

struct StageResult {
  std::string stage;    // "s-psd", "pocs", "case", "oracle"
  std::string verdict;  // stage-specific
  bool certifies_mpd = false;
  bool certifies_mpsd = false;
  bool refutes = false;  // machine-checkable evidence that A is not M-PSD
  json details;
};

struct CheckReport {
  std::vector<StageResult> stages;
  Overall overall = Overall::Unknown;
  std::string provenance;  // stage that decided, empty when Unknown
  std::string tripwire;    // nonempty when a certifying stage and a refuting stage disagree

  // 0 decided, 2 undecided (input errors are reported by the caller as 1).
  int exit_code() const { return overall == Overall::Unknown ? 2 : 0; }
};

// Stages in order: S-PD/S-PSD eigenvalue test, POCS (M-PD with the epsilon
// shift, then M-PSD), structured case analysis, oracle. The oracle always runs
// and any disagreement with a certifying stage makes the result Unknown with
// a tripwire diagnostic.
CheckReport run_check(const Elast4& a, const CheckConfig& cfg = {});

// Overall verdict, provenance and tripwire from already computed stages.
CheckReport aggregate(std::vector<StageResult> stages);

json to_json(const CheckReport& rep);

}  // namespace ellipticity
