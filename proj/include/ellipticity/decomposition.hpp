#pragma once

#include <optional>
#include <vector>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

struct DecompTerm {
  double alpha = 0.0;
  Mat3 u = Mat3::Zero();
};

// A y^2 = sum_s alpha_s (U_s y)(U_s y)^T. Positive terms come first once
// order_positives_first() has been applied.
struct StructuredDecomposition {
  std::vector<DecompTerm> terms;

  int size() const noexcept { return static_cast<int>(terms.size()); }  // r
  int positive_count() const noexcept;                                  // q
  // True when every positive term precedes every negative one and no alpha is zero.
  bool is_ordered() const noexcept;
  // Stable partition: positives first, relative order otherwise kept.
  void order_positives_first();

  Mat3 contract_yy(const Vec3& y) const;
  // Unfolding sum_s alpha_s u_s u_s^T (a weakly symmetric tensor).
  Pair4 to_pair() const;
  // The unique elasticity tensor with this A y^2:
  //   a_ijkl = 1/2 sum_s alpha_s (u_ik u_jl + u_jk u_il).
  Elast4 to_tensor() const;
};

// Terms from the eigenpairs of unfold(A) with |alpha| > 1e-12 * ||A||,
// positives first, each group in descending |alpha|.
StructuredDecomposition spectral_decomposition(const Elast4& a);

struct RankOneFactor {
  Vec3 v;  // unit, largest-magnitude entry positive
  Vec3 w;  // U = v w^T
};

// Returns the factorization when the second singular value of u is at most
// tol * ||u||_F (and u is nonzero).
std::optional<RankOneFactor> detect_rank_one(const Mat3& u, double tol);

}  // namespace ellipticity
