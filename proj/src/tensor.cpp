#include "ellipticity/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellipticity/errors.hpp"

namespace ellipticity {

namespace {

// Pairwise averaging keeps an orbit of identical values bit-identical, which
// makes canonicalization idempotent.
double orbit_mean(double a, double b, double c, double d) {
  return 0.5 * (0.5 * (a + b) + 0.5 * (c + d));
}

std::string index_string(int i, int j, int k, int l) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1 << ")";
  return os.str();
}

}  // namespace

Pair4 Pair4::symmetrized(const RawTensor& raw) {
  Pair4 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double v = 0.5 * (raw[flat_index(i, j, k, l)] + raw[flat_index(j, i, l, k)]);
          out.a_[flat_index(i, j, k, l)] = v;
          out.a_[flat_index(j, i, l, k)] = v;
        }
  return out;
}

Pair4 Pair4::from_raw(const RawTensor& raw, double tol) {
  double worst = 0.0;
  int wi = 0, wj = 0, wk = 0, wl = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double d = std::abs(raw[flat_index(i, j, k, l)] - raw[flat_index(j, i, l, k)]);
          if (d > worst) {
            worst = d;
            wi = i, wj = j, wk = k, wl = l;
          }
        }
  if (worst > tol) {
    std::ostringstream os;
    os << "weak symmetry t_ijkl = t_jilk violated at " << index_string(wi, wj, wk, wl)
       << ": spread " << worst << " > tol " << tol;
    throw SymmetryViolation(os.str(), worst);
  }
  return symmetrized(raw);
}

double Pair4::norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double Pair4::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

Pair4& Pair4::operator+=(const Pair4& o) {
  for (std::size_t n = 0; n < a_.size(); ++n) a_[n] += o.a_[n];
  return *this;
}

Pair4& Pair4::operator-=(const Pair4& o) {
  for (std::size_t n = 0; n < a_.size(); ++n) a_[n] -= o.a_[n];
  return *this;
}

Pair4& Pair4::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

double elast4_orbit_spread(const RawTensor& raw) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double v[4] = {raw[flat_index(i, j, k, l)], raw[flat_index(j, i, k, l)],
                               raw[flat_index(i, j, l, k)], raw[flat_index(j, i, l, k)]};
          const auto [lo, hi] = std::minmax_element(std::begin(v), std::end(v));
          worst = std::max(worst, *hi - *lo);
        }
  return worst;
}

Elast4 Elast4::symmetrized(const RawTensor& raw) {
  RawTensor out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          // Orbit members are visited in a canonical order so that every member
          // receives the same rounded mean.
          const int ci = std::min(i, j), cj = std::max(i, j);
          const int ck = std::min(k, l), cl = std::max(k, l);
          out[flat_index(i, j, k, l)] =
              orbit_mean(raw[flat_index(ci, cj, ck, cl)], raw[flat_index(cj, ci, cl, ck)],
                         raw[flat_index(cj, ci, ck, cl)], raw[flat_index(ci, cj, cl, ck)]);
        }
  // The result satisfies t_ijkl = t_jilk exactly, so no further averaging happens.
  return Elast4(Pair4::symmetrized(out));
}

Elast4 Elast4::from_raw(const RawTensor& raw, double tol) {
  const double spread = elast4_orbit_spread(raw);
  if (spread > tol) {
    std::ostringstream os;
    os << "elasticity symmetry a_ijkl = a_jikl = a_ijlk violated: max orbit spread " << spread
       << " > tol " << tol;
    throw SymmetryViolation(os.str(), spread);
  }
  return symmetrized(raw);
}

Elast4 make_elast4(const RawTensor& raw, double tol) { return Elast4::from_raw(raw, tol); }

Mat9 unfold(const Pair4& t) {
  Mat9 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) m(3 * k + i, 3 * l + j) = t(i, j, k, l);
  return m;
}

Pair4 fold(const Mat9& m, double tol) {
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "fold: matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw AsymmetricInput(os.str(), asym);
  }
  RawTensor raw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) raw[flat_index(i, j, k, l)] = m(3 * k + i, 3 * l + j);
  return Pair4::symmetrized(raw);
}

Vec9 vectorize(const Mat3& z) {
  Vec9 v;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) v(3 * k + i) = z(i, k);
  return v;
}

Mat3 devectorize(const Vec9& v) {
  Mat3 z;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) z(i, k) = v(3 * k + i);
  return z;
}

namespace {

Mat3 raw_contract_yy(const Pair4& t, const Vec3& y) {
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += t(i, j, k, l) * y(k) * y(l);
      m(i, j) = s;
    }
  return m;
}

}  // namespace

Mat3 contract_yy(const Elast4& a, const Vec3& y) {
  // a_ijkl = a_jikl makes the raw contraction symmetric entry by entry.
  return raw_contract_yy(a.as_pair(), y);
}

PairContraction contract_yy(const Pair4& t, const Vec3& y) {
  const Mat3 raw = raw_contract_yy(t, y);
  return {0.5 * (raw + raw.transpose()), (0.5 * (raw - raw.transpose())).norm()};
}

double biquadratic(const Pair4& t, const Vec3& x, const Vec3& y) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double inner = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) inner += t(i, j, k, l) * y(k) * y(l);
      s += x(i) * x(j) * inner;
    }
  return s;
}

double contract_zz(const Pair4& t, const Mat3& z) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += t(i, j, k, l) * z(i, k) * z(j, l);
  return s;
}

Elast4 tensor_E() {
  RawTensor raw{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) raw[flat_index(i, i, k, k)] = 1.0;
  return Elast4::from_raw(raw, 0.0);
}

Elast4 tensor_choi_lam(double gamma) {
  RawTensor raw{};
  for (int s = 0; s < 3; ++s) {
    const int t = (s + 1) % 3;
    raw[flat_index(s, s, s, s)] = 1.0;
    // -2 x_s x_t y_s y_t split evenly over its four orbit members
    raw[flat_index(s, t, s, t)] = -0.5;
    raw[flat_index(t, s, s, t)] = -0.5;
    raw[flat_index(s, t, t, s)] = -0.5;
    raw[flat_index(t, s, t, s)] = -0.5;
    // gamma x_s^2 y_t^2
    raw[flat_index(s, s, t, t)] = gamma;
  }
  return Elast4::from_raw(raw, 0.0);
}

Elast4 tensor_isotropic(double lambda, double mu) {
  const double h = 0.5 * (lambda + mu);
  RawTensor raw{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double dij = i == j, dkl = k == l, dik = i == k, djl = j == l, dil = i == l,
                       djk = j == k;
          raw[flat_index(i, j, k, l)] = mu * dij * dkl + h * (dik * djl + dil * djk);
        }
  return Elast4::from_raw(raw, 0.0);
}

Elast4 tensor_mpsd_not_spsd() {
  RawTensor raw{};
  for (int s = 0; s < 3; ++s) raw[flat_index(s, s, s, s)] = 2.0;
  raw[flat_index(0, 1, 0, 1)] = 1.0;
  raw[flat_index(1, 0, 0, 1)] = 1.0;
  raw[flat_index(0, 1, 1, 0)] = 1.0;
  raw[flat_index(1, 0, 1, 0)] = 1.0;
  return Elast4::from_raw(raw, 0.0);
}

}  // namespace ellipticity
