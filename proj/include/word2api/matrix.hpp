#pragma once

#include <Eigen/Core>

namespace word2api {

// Row-major so one term vector is one contiguous matrix row.
template <class Scalar>
using MatrixX =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Cosine of two vector expressions, accumulated in double. A zero vector has
// no direction; its cosine against anything is defined as 0.
template <class DerivedA, class DerivedB>
double cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  const double dot =
      a.template cast<double>().cwiseProduct(b.template cast<double>()).sum();
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

}  // namespace word2api
