#pragma once

#include <optional>
#include <vector>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

// Brute-force estimates of min A x^2 y^2 over unit x, y. A negative value is
// a certificate (the witness pair can be re-evaluated by anyone); a positive
// value is only evidence, since grid search plus descent cannot prove
// positivity.

struct Minimizer {
  Vec3 x;
  Vec3 y;
  double value;
};

struct OracleReport {
  double min_value = 0.0;
  Vec3 argmin_x = Vec3::UnitX();
  Vec3 argmin_y = Vec3::UnitX();
  int grid_n = 0;
  bool refined = false;
  // Distinct local minima reached by refinement, ascending by value.
  std::vector<Minimizer> minimizers;
  // Objective after each alternating sweep (refine_min only).
  std::vector<double> trace;
};

// (A x^2)_kl = sum_ij a_ijkl x_i x_j, the y-side counterpart of contract_yy.
Mat3 contract_xx(const Elast4& a, const Vec3& x);

// Evaluates the form on all n^2 pairs of an n-point Fibonacci lattice
// (n >= 100). Deterministic, including ties (lowest pair index wins).
OracleReport grid_min_biquadratic(const Elast4& a, int n);

// Alternating minimization: x <- min eigenvector of A y^2, then y <- min
// eigenvector of A x^2, until a sweep lowers the value by less than tol. A
// step that would raise the objective is rejected, so the trace never goes up.
OracleReport refine_min(const Elast4& a, const Vec3& start_x, const Vec3& start_y, double tol = 1e-14,
                        int max_sweeps = 20000);

// min eigenvalue of unfold(A) >= -tol ||A|| (resp. >= +tol ||A||).
bool is_spsd(const Elast4& a, double tol = 1e-12);
bool is_spd(const Elast4& a, double tol = 1e-12);

enum class OracleVerdictKind { MPDLikely, MPSDBoundary, NotMPSD };
const char* to_string(OracleVerdictKind k);

struct OracleVerdict {
  OracleVerdictKind kind = OracleVerdictKind::MPSDBoundary;
  double scale = 0.0;    // max |a_ijkl|
  double min_value = 0.0;
  OracleReport report;   // grid + refinement
  // Present for NotMPSD: a pair with A x^2 y^2 < -tol * scale, re-evaluated
  // independently of the search.
  std::optional<Minimizer> witness;
};

// Grid (n points per sphere) then refinement from the best `starts` distinct
// grid candidates.
OracleVerdict oracle_verdict(const Elast4& a, int n = 2000, double tol = 1e-8, int starts = 10);

}  // namespace ellipticity
