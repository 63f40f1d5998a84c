#include "ellipticity/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "ellipticity/spectral.hpp"

namespace ellipticity {

int StructuredDecomposition::positive_count() const noexcept {
  return static_cast<int>(
      std::count_if(terms.begin(), terms.end(), [](const DecompTerm& t) { return t.alpha > 0; }));
}

bool StructuredDecomposition::is_ordered() const noexcept {
  bool seen_negative = false;
  for (const auto& t : terms) {
    if (t.alpha == 0.0) return false;
    if (t.alpha < 0) seen_negative = true;
    else if (seen_negative) return false;
  }
  return true;
}

void StructuredDecomposition::order_positives_first() {
  std::stable_partition(terms.begin(), terms.end(), [](const DecompTerm& t) { return t.alpha > 0; });
}

Mat3 StructuredDecomposition::contract_yy(const Vec3& y) const {
  Mat3 m = Mat3::Zero();
  for (const auto& t : terms) {
    const Vec3 uy = t.u * y;
    m += t.alpha * uy * uy.transpose();
  }
  return m;
}

Pair4 StructuredDecomposition::to_pair() const {
  Mat9 b = Mat9::Zero();
  for (const auto& t : terms) {
    const Vec9 u = vectorize(t.u);
    b += t.alpha * u * u.transpose();
  }
  return fold(0.5 * (b + b.transpose()));
}

Elast4 StructuredDecomposition::to_tensor() const {
  RawTensor raw{};
  for (const auto& t : terms)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            raw[flat_index(i, j, k, l)] +=
                0.5 * t.alpha * (t.u(i, k) * t.u(j, l) + t.u(j, k) * t.u(i, l));
  return Elast4::symmetrized(raw);
}

StructuredDecomposition spectral_decomposition(const Elast4& a) {
  const EigPair<9> e = sym_eig<9>(unfold(a));
  const double cut = 1e-12 * a.norm();
  StructuredDecomposition dec;
  // values ascend: walk down for the positives, then up for the negatives.
  for (int n = 8; n >= 0; --n)
    if (e.values(n) > cut) dec.terms.push_back({e.values(n), devectorize(e.vectors.col(n))});
  for (int n = 0; n < 9; ++n)
    if (e.values(n) < -cut) dec.terms.push_back({e.values(n), devectorize(e.vectors.col(n))});
  return dec;
}

std::optional<RankOneFactor> detect_rank_one(const Mat3& u, double tol) {
  const double fro = u.norm();
  if (fro == 0.0) return std::nullopt;
  Eigen::JacobiSVD<Mat3> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  if (s(1) > tol * fro) return std::nullopt;
  Vec3 v = svd.matrixU().col(0);
  Vec3 w = s(0) * svd.matrixV().col(0);
  int big = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(v(k)) > std::abs(v(big))) big = k;
  if (v(big) < 0) {
    v = -v;
    w = -w;
  }
  return RankOneFactor{v, w};
}

}  // namespace ellipticity
