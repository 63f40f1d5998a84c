#include "ellipticity/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ellipticity {

namespace {

constexpr int kMaxSweeps = 100;

template <int N>
double off_diagonal_norm2(const Eigen::Matrix<double, N, N>& a) {
  double s = 0.0;
  for (int p = 0; p < N; ++p)
    for (int q = p + 1; q < N; ++q) s += a(p, q) * a(p, q);
  return s;
}

}  // namespace

template <int N>
EigPair<N> sym_eig(const Eigen::Matrix<double, N, N>& m) {
  using Mat = Eigen::Matrix<double, N, N>;
  Mat a = m.template selfadjointView<Eigen::Upper>();
  Mat v = Mat::Identity();

  const double scale2 = a.squaredNorm();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm2<N>(a);
    if (off == 0.0 || off <= 1e-34 * scale2) break;
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Skip rotations that cannot change the diagonal in floating point.
        const double app = a(p, p), aqq = a(q, q);
        if (sweep > 3 && std::abs(apq) * 1e18 < std::min(std::abs(app), std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < N; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < N; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

  EigPair<N> out;
  for (int n = 0; n < N; ++n) {
    out.values(n) = a(order[n], order[n]);
    Eigen::Matrix<double, N, 1> col = v.col(order[n]);
    int big = 0;
    for (int k = 1; k < N; ++k)
      if (std::abs(col(k)) > std::abs(col(big))) big = k;
    if (col(big) < 0) col = -col;
    out.vectors.col(n) = col;
  }
  return out;
}

template EigPair<3> sym_eig<3>(const Mat3&);
template EigPair<9> sym_eig<9>(const Mat9&);

Mat9 psd_project(const Mat9& m) {
  const EigPair<9> e = sym_eig<9>(m);
  const Vec9 clamped = e.values.cwiseMax(0.0);
  const Mat9 p = e.vectors * clamped.asDiagonal() * e.vectors.transpose();
  return 0.5 * (p + p.transpose());
}

}  // namespace ellipticity
