#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ellipticity/decomposition.hpp"
#include "ellipticity/tensor.hpp"

namespace ellipticity {

// ---------------------------------------------------------------------------
// Supremum of a degree-0 homogeneous function over the unit sphere
// ---------------------------------------------------------------------------

struct SupEtaOptions {
  int grid_n = 20000;            // Fibonacci points on the upper hemisphere
  int starts = 10;               // local ascents launched from the best grid points
  double converge_tol = 1e-10;   // relative improvement that ends an ascent
  double singular_tol = 1e-8;    // angular exclusion radius around singular lines
  double ascent_guard = 1e-6;    // ascents stop this close to a singular line
  int max_ascent_iter = 5000;
};

// eta evaluated at nonzero y; nullopt outside its domain.
using EtaFunction = std::function<std::optional<double>(const Vec3&)>;

// Values of eta along geodesics approaching one singular line.
struct SingularProbe {
  Vec3 line;
  std::vector<double> angles;  // decreasing
  std::vector<double> values;  // best value over directions at each angle
  double limit = 0.0;          // value at the smallest angle
};

struct SupEtaResult {
  double value = 0.0;  // lower bound on the supremum
  Vec3 argmax = Vec3::Zero();
  bool converged = false;  // every ascent converged (or ended at the guard of a singular line)
  int ascents = 0;
  int ascents_at_singular = 0;
  int evaluated = 0;
  int excluded = 0;
  std::vector<SingularProbe> probes;
};

// Deterministic grid search plus local ascent. Throws EmptyDomain when every
// grid point is excluded.
SupEtaResult sup_eta(const EtaFunction& eta, std::span<const Vec3> singular_lines,
                     const SupEtaOptions& opts = {});

// ---------------------------------------------------------------------------
// Structured cases
// ---------------------------------------------------------------------------

// Frames of a Case 1/2/3 decomposition. w_{s+3h} is column s of frames[h].
struct CaseStructure {
  int case_id = 0;
  Mat3 V = Mat3::Identity();
  std::vector<Mat3> frames;          // W, W~, W^ (1, 2 or 3 of them)
  std::vector<double> alphas;        // positive coefficients in s = 1..3m order
  std::vector<double> negative_alphas;
  // Case 1: sigma per negative term; Cases 2-3: sigma_1..sigma_{3m} in one entry.
  std::vector<Eigen::VectorXd> sigmas;
  double cond_V = 0.0;
  std::vector<double> cond_frames;
};

// Value of the rank-structured A y^2 rebuilt from the frames, alphas and sigmas.
Mat3 reconstruct_contract_yy(const CaseStructure& cs, const Vec3& y);

// eta(y) = sum_s (sum_h sigma_{s+3h} w_{s+3h}.y)^2 / sum_h alpha_{s+3h} (w_{s+3h}.y)^2
// Case 2: throws SingularDirection when y is within tol (angle) of a line
// w_s^perp cap w_{s+3}^perp.
double eta_case2(const CaseStructure& cs, const Vec3& y, double tol = 1e-8);
// Case 3: throws DegenerateDenominator when a denominator is <= tol ||y||^2.
double eta_case3(const CaseStructure& cs, const Vec3& y, double tol = 1e-12);

// Directions w_s x w_{s+3} (Case 2) where eta is undefined.
std::vector<Vec3> case2_singular_lines(const CaseStructure& cs);

enum class CaseVerdict { MPSD, MPD, NotMPSD, StructureMismatch, Inconclusive };
const char* to_string(CaseVerdict v);

struct CaseCondition {
  std::string name;
  bool ok = false;
  double value = 0.0;
  std::string detail;
};

struct CaseReport {
  int case_id = 0;
  CaseVerdict verdict = CaseVerdict::StructureMismatch;
  bool structure_ok = false;
  std::vector<CaseCondition> conditions;
  std::optional<CaseStructure> structure;
  bool regrouped = false;  // terms were reordered to find the shared-v pattern

  // Case 1
  std::optional<Mat3> c_matrix;
  double c_min_eigenvalue = 0.0;

  // Cases 2-3
  double threshold = 0.0;  // 1 / (-alpha_last)
  std::optional<SupEtaResult> sup;
  double eta_sup = 0.0;
  Vec3 eta_argmax = Vec3::Zero();

  bool boundary = false;
  std::string note;
};

struct CaseOptions {
  double tol = 1e-8;         // structural residuals, rank and verdict tolerance
  double tol_strict = 1e-8;  // MPD vs MPSD separation in Case 3
  double group_angle = 1e-6; // v vectors match up to sign within this angle
  bool allow_regroup = true;
  SupEtaOptions sup;
};

// Require a decomposition whose positive terms precede the negative ones.
// Throw CaseMismatch on the wrong (r, q) shape.
CaseReport check_case1(const StructuredDecomposition& dec, const CaseOptions& opts = {});
CaseReport check_case2(const StructuredDecomposition& dec, const CaseOptions& opts = {});
CaseReport check_case3(const StructuredDecomposition& dec, const CaseOptions& opts = {});

// Dispatches on (r, q): q = 3 -> Case 1, (7, 6) -> Case 2, (10, 9) -> Case 3.
std::optional<int> detect_case(const StructuredDecomposition& dec);

// For a Case 1 report with verdict MPSD: C = sum a~ s~ s~^T and terms
// (a~, V diag(s~) W^T), all coefficients positive.
StructuredDecomposition case1_positive_redecomposition(const CaseReport& report,
                                                       double tol = 1e-12);

}  // namespace ellipticity
