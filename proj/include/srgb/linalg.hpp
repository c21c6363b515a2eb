#pragma once

#include <cmath>
#include <stdexcept>

#include "srgb/fields.hpp"

namespace srgb {

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves M X = R by Gaussian elimination with partial pivoting. Works for
/// double and for jet scalars; pivots are chosen by the magnitude of the
/// base-point value.
template <typename T, int C>
Eigen::Matrix<T, 3, C> solve3(Mat3<T> m, Eigen::Matrix<T, 3, C> r, double pivotTol = 1e-300) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int i = col + 1; i < 3; ++i)
      if (std::abs(valueOf(m(i, col))) > std::abs(valueOf(m(piv, col)))) piv = i;
    if (std::abs(valueOf(m(piv, col))) <= pivotTol) throw SingularMatrix("singular 3x3 system");
    if (piv != col) {
      m.row(col).swap(m.row(piv));
      r.row(col).swap(r.row(piv));
    }
    const T inv = T(1.0) / m(col, col);
    for (int i = col + 1; i < 3; ++i) {
      const T f = m(i, col) * inv;
      for (int j = col; j < 3; ++j) m(i, j) -= f * m(col, j);
      for (int j = 0; j < C; ++j) r(i, j) -= f * r(col, j);
    }
  }
  for (int col = 2; col >= 0; --col) {
    const T inv = T(1.0) / m(col, col);
    for (int j = 0; j < C; ++j) {
      T s = r(col, j);
      for (int k = col + 1; k < 3; ++k) s -= m(col, k) * r(k, j);
      r(col, j) = s * inv;
    }
  }
  return r;
}

template <typename T>
Mat3<T> inverse3(const Mat3<T>& m) {
  Mat3<T> id;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) id(i, j) = T(i == j ? 1.0 : 0.0);
  return solve3<T, 3>(m, id);
}

template <typename T>
T det2(const Mat2<T>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <typename T>
Vec2<T> solve2(const Mat2<T>& m, const Vec2<T>& r) {
  const T inv = T(1.0) / det2(m);
  return Vec2<T>((m(1, 1) * r(0) - m(0, 1) * r(1)) * inv, (m(0, 0) * r(1) - m(1, 0) * r(0)) * inv);
}

}  // namespace srgb
