#pragma once

#include <array>
#include <cmath>

#include "rheocontrol/errors.hpp"

namespace rheo {

// Dense symmetric n x n matrix, n = 2 or 3.  Symmetry is enforced by
// construction: entries are always written through set(), which mirrors
// (i,j) and (j,i).
class SymMatrix {
public:
  explicit SymMatrix(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) throw ShapeError("SymMatrix: dim must be 2 or 3");
    a_.fill(0.0);
  }

  static SymMatrix identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
  }

  // 2x2 from the three independent entries.
  static SymMatrix sym2(double a11, double a22, double a12) {
    SymMatrix m(2);
    m.set(0, 0, a11);
    m.set(1, 1, a22);
    m.set(0, 1, a12);
    return m;
  }

  // 3x3 from the six independent entries.
  static SymMatrix sym3(double a11, double a22, double a33, double a12, double a13, double a23) {
    SymMatrix m(3);
    m.set(0, 0, a11);
    m.set(1, 1, a22);
    m.set(2, 2, a33);
    m.set(0, 1, a12);
    m.set(0, 2, a13);
    m.set(1, 2, a23);
    return m;
  }

  int dim() const { return dim_; }

  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }

  void set(int i, int j, double v) {
    a_[static_cast<std::size_t>(i * dim_ + j)] = v;
    a_[static_cast<std::size_t>(j * dim_ + i)] = v;
  }

  // Frobenius norm |eta| = sqrt(sum_ij eta_ij^2).
  double frobenius() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

  // Double contraction eta : zeta = sum_ij eta_ij zeta_ij.
  double contract(const SymMatrix& o) const {
    require_same_dim(o);
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * o(i, j);
    return s;
  }

  SymMatrix scaled(double c) const {
    SymMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) m.set(i, j, c * (*this)(i, j));
    return m;
  }

  SymMatrix operator+(const SymMatrix& o) const {
    require_same_dim(o);
    SymMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) m.set(i, j, (*this)(i, j) + o(i, j));
    return m;
  }

  SymMatrix operator-(const SymMatrix& o) const {
    require_same_dim(o);
    SymMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) m.set(i, j, (*this)(i, j) - o(i, j));
    return m;
  }

private:
  void require_same_dim(const SymMatrix& o) const {
    if (o.dim_ != dim_) throw ShapeError("SymMatrix: mismatched dimensions");
  }

  int dim_;
  std::array<double, 9> a_;
};

}  // namespace rheo
