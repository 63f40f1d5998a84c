#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

struct PocsOptions {
  int max_iter = 20000;
  double tol_converge = 1e-10;  // relative to max(1, ||A||)
  double tol_stall = 1e-6;      // per-iteration relative gap decrease
  int stall_window = 50;        // consecutive stalled iterations before GapPositive
  double epsilon_shift = 0.0;   // iterate on A - eps E when > 0

  // Throws InvalidOptions.
  void validate() const;
};

enum class PocsVerdict { IntersectionFound, GapPositive, Inconclusive };
const char* to_string(PocsVerdict v);

struct PocsReport {
  PocsVerdict verdict = PocsVerdict::Inconclusive;
  int iterations = 0;
  double final_gap = 0.0;         // ||A^(t) - B^(t)|| at the last iterate
  double epsilon_shift = 0.0;
  double gap_threshold = 0.0;     // tol_converge * max(1, ||A||)
  Pair4 limit_A;                  // last iterate in T_A
  Pair4 limit_B;                  // last iterate in S
  std::vector<double> gap_trace;  // one entry per iteration
};

// Orthogonal projection onto T_ref = { T : t_ijkl = t_jilk, t_ijkl + t_jikl = 2 ref_ijkl }:
//   r_ijkl = ref_ijkl + (b_ijkl - b_jikl) / 2.
Pair4 project_T(const Elast4& ref, const Pair4& b);

// Projection onto the S-PSD cone: fold(psd_project(unfold(b))).
Pair4 project_S(const Pair4& b);

// Called after each iteration t = 1, 2, ... with the current (A^(t), B^(t)).
using PocsObserver = std::function<void(int t, const Pair4& a_iter, const Pair4& b_iter)>;

// Alternating projections B^(t+1) = P_S(A^(t)), A^(t+1) = P_T(B^(t+1)) starting
// from A^(0) = A - eps E.
PocsReport run_pocs(const Elast4& a, const PocsOptions& opts, const PocsObserver& observer = {});

enum class CertificateKind { CertifiedMPSD, CertifiedMPD, NotCertified };
const char* to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::NotCertified;
  double epsilon = 0.0;             // shift used by the deciding run
  std::vector<double> tried_epsilons;
  PocsReport report;                // deciding (or last) run
  std::string note;
};

// Sufficient test only: a failed run does not show the tensor is not M-PSD.
Certificate certify_mpsd(const Elast4& a, PocsOptions opts = {});

// Runs POCS on A - eps E with eps = opts.epsilon_shift (> 0, else
// InvalidEpsilon). With sweep, eps is halved up to 5 times on failure.
Certificate certify_mpd(const Elast4& a, PocsOptions opts, bool sweep = false);

inline constexpr double kDefaultMpdEpsilon = 1e-6;

}  // namespace ellipticity
