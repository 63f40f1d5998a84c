#pragma once

#include <Eigen/Dense>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

// Eigen-decomposition of a real symmetric matrix. values are ascending; the
// columns of vectors are orthonormal, each with its largest-magnitude entry
// positive (first such entry on ties).
template <int N>
struct EigPair {
  Eigen::Matrix<double, N, 1> values;
  Eigen::Matrix<double, N, N> vectors;
};

// Cyclic Jacobi rotations. Only the upper triangle of m is read.
template <int N>
EigPair<N> sym_eig(const Eigen::Matrix<double, N, N>& m);

// Frobenius-nearest PSD matrix: V max(D, 0) V^T, exactly symmetric.
Mat9 psd_project(const Mat9& m);

template <int N>
double min_eigenvalue(const Eigen::Matrix<double, N, N>& m) {
  return sym_eig<N>(m).values(0);
}

extern template EigPair<3> sym_eig<3>(const Mat3&);
extern template EigPair<9> sym_eig<9>(const Mat9&);

}  // namespace ellipticity
