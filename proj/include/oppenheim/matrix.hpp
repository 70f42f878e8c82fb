#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oppenheim {

// Dense n x n matrix, row-major.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), T(0)) {}

  static SquareMatrix identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int size() const { return n_; }
  T& operator()(int i, int j) { return a_[index(i, j)]; }
  const T& operator()(int i, int j) const { return a_[index(i, j)]; }

  SquareMatrix transpose() const {
    SquareMatrix t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.n_ != y.n_) throw std::invalid_argument("matrix dimension mismatch");
    SquareMatrix out(x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        if (x(i, k) == T(0)) continue;
        for (int j = 0; j < x.n_; ++j) out(i, j) += x(i, k) * y(k, j);
      }
    return out;
  }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  friend bool operator==(const SquareMatrix& x, const SquareMatrix& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<T> a_;
};

// Gaussian elimination with partial pivoting on the largest-magnitude entry
// (exact for rational T, where any nonzero pivot is acceptable).
template <class T>
T determinant(SquareMatrix<T> m) {
  using std::abs;
  const int n = m.size();
  T det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!(m(r, col) == T(0))) {
        if (pivot < 0 || abs(m(r, col)) > abs(m(pivot, col))) pivot = r;
      }
    }
    if (pivot < 0) return T(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (m(r, col) == T(0)) continue;
      T f = m(r, col) / m(col, col);
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return det;
}

// g^T * a * g
template <class T>
SquareMatrix<T> congruence(const SquareMatrix<T>& a, const SquareMatrix<T>& g) {
  return g.transpose() * a * g;
}

}  // namespace oppenheim
