#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

namespace ellipticity {

using Vec3 = Eigen::Vector3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;

// Dense storage of a 3x3x3x3 tensor, index (i,j,k,l) at flat_index(i,j,k,l).
using RawTensor = std::array<double, 81>;

// Indices are 0-based everywhere in the C++ API; file formats use 1-based.
constexpr std::size_t flat_index(int i, int j, int k, int l) noexcept {
  return static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + l);
}

// Weakly symmetric tensor: t_ijkl = t_jilk. This is the ambient space of the
// alternating projections; it is isomorphic to symmetric 9x9 matrices through
// unfold()/fold().
class Pair4 {
 public:
  Pair4() : a_{} {}

  // Averages each pair {t_ijkl, t_jilk}. Throws SymmetryViolation when a pair
  // differs by more than tol.
  static Pair4 from_raw(const RawTensor& raw, double tol);
  // Averages without checking.
  static Pair4 symmetrized(const RawTensor& raw);

  double operator()(int i, int j, int k, int l) const { return a_[flat_index(i, j, k, l)]; }
  const RawTensor& entries() const noexcept { return a_; }

  double norm() const;  // Frobenius over all 81 entries
  double max_abs() const;

  Pair4& operator+=(const Pair4& o);
  Pair4& operator-=(const Pair4& o);
  Pair4& operator*=(double s);
  friend Pair4 operator+(Pair4 a, const Pair4& b) { return a += b; }
  friend Pair4 operator-(Pair4 a, const Pair4& b) { return a -= b; }
  friend Pair4 operator*(double s, Pair4 a) { return a *= s; }
  bool operator==(const Pair4&) const = default;

 private:
  RawTensor a_;
};

// Elasticity tensor: a_ijkl = a_jikl = a_ijlk (and hence a_ijkl = a_jilk).
class Elast4 {
 public:
  Elast4() = default;

  // Averages over the orbit {(i,j,k,l),(j,i,k,l),(i,j,l,k),(j,i,l,k)}.
  // Throws SymmetryViolation if any orbit's max - min exceeds tol.
  static Elast4 from_raw(const RawTensor& raw, double tol);
  // Orbit average of an arbitrary tensor; preserves the bi-quadratic form of
  // any weakly symmetric input.
  static Elast4 symmetrized(const RawTensor& raw);

  double operator()(int i, int j, int k, int l) const { return p_(i, j, k, l); }
  const RawTensor& entries() const noexcept { return p_.entries(); }
  const Pair4& as_pair() const noexcept { return p_; }

  double norm() const { return p_.norm(); }
  double max_abs() const { return p_.max_abs(); }

  friend Elast4 operator+(const Elast4& a, const Elast4& b) { return Elast4(a.p_ + b.p_); }
  friend Elast4 operator-(const Elast4& a, const Elast4& b) { return Elast4(a.p_ - b.p_); }
  friend Elast4 operator*(double s, const Elast4& a) { return Elast4(s * a.p_); }
  bool operator==(const Elast4&) const = default;

 private:
  explicit Elast4(const Pair4& p) : p_(p) {}
  Pair4 p_;
};

// Same as Elast4::from_raw.
Elast4 make_elast4(const RawTensor& raw, double tol);

// Largest orbit spread max - min over the Elast4 symmetry orbits of raw.
double elast4_orbit_spread(const RawTensor& raw);

// 9x9 unfolding: row 3k+i, column 3l+j holds t_ijkl (0-based). Symmetric for
// every Pair4.
Mat9 unfold(const Pair4& t);
inline Mat9 unfold(const Elast4& a) { return unfold(a.as_pair()); }

// Inverse of unfold. Throws AsymmetricInput when max |M - M^T| exceeds
// tol * max(1, max |M|).
Pair4 fold(const Mat9& m, double tol = 1e-12);

// Column-stacking vectorization z[3k+i] = Z(i,k) and its inverse.
Vec9 vectorize(const Mat3& z);
Mat3 devectorize(const Vec9& z);

// (A y^2)_ij = sum_kl a_ijkl y_k y_l.
Mat3 contract_yy(const Elast4& a, const Vec3& y);

struct PairContraction {
  Mat3 matrix;       // symmetric part
  double asymmetry;  // Frobenius norm of the antisymmetric part of the raw contraction
};
PairContraction contract_yy(const Pair4& t, const Vec3& y);

// sum_ijkl a_ijkl x_i x_j y_k y_l
double biquadratic(const Pair4& t, const Vec3& x, const Vec3& y);
inline double biquadratic(const Elast4& a, const Vec3& x, const Vec3& y) {
  return biquadratic(a.as_pair(), x, y);
}

// sum_ijkl a_ijkl z_ik z_jl = vec(Z)^T unfold(A) vec(Z)
double contract_zz(const Pair4& t, const Mat3& z);
inline double contract_zz(const Elast4& a, const Mat3& z) { return contract_zz(a.as_pair(), z); }

// e_iikk = 1, all other entries zero; E x^2 y^2 = (x.x)(y.y).
Elast4 tensor_E();

// Choi-Lam bi-quadratic form
//   x1^2y1^2 + x2^2y2^2 + x3^2y3^2 - 2(x1x2y1y2 + x2x3y2y3 + x3x1y3y1)
//   + gamma (x1^2y2^2 + x2^2y3^2 + x3^2y1^2).
// The classical regime is gamma >= 1; see choi_lam_in_regime().
Elast4 tensor_choi_lam(double gamma);
constexpr bool choi_lam_in_regime(double gamma) noexcept { return gamma >= 1.0; }

// Isotropic material with Lame moduli (lambda, mu), arranged so that
//   A x^2 y^2 = mu (x.x)(y.y) + (lambda + mu) (x.y)^2,
// the acoustic form of C_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
// Strongly elliptic iff mu > 0 and lambda + 2 mu > 0.
Elast4 tensor_isotropic(double lambda, double mu);

// The M-PSD tensor that is not S-PSD:
// a_1111 = a_2222 = a_3333 = 2, a_1212 = a_2112 = a_1221 = a_2121 = 1, so that
// A x^2 y^2 = 2 (x1 y1 + x2 y2)^2 + 2 x3^2 y3^2.
Elast4 tensor_mpsd_not_spsd();

}  // namespace ellipticity
