#include "rheocontrol/detail/assembly.hpp"

#include <cmath>

namespace rheo::detail {

namespace {

using Triplet = Eigen::Triplet<double>;

SpMat from_triplets(int rows, int cols, std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double face_value(const StaggeredField& f, const Face& a) {
  return a.s == Slot::U ? f.u(a.i, a.j) : f.v(a.i, a.j);
}

// Row of a strain-matrix entry: T11 and T22 rows per cell, then one shear
// row per node.
int strain_row(const MacGrid& g, int comp, int index) {
  return comp == 2 ? 2 * g.n_cells() + index : comp * g.n_cells() + index;
}

int strain_row_count(const MacGrid& g) { return 2 * g.n_cells() + g.n_nodes(); }

// Quarter-sum of a cell array over the cells adjacent to node (a, b): the
// transpose of the four-corner average, equal to node_weight * local mean.
double quarter_sum(const MacGrid& g, const std::vector<double>& cell, int a, int b) {
  double s = 0.0;
  for (int j = b - 1; j <= b; ++j)
    for (int i = a - 1; i <= a; ++i)
      if (i >= 0 && i < g.nx() && j >= 0 && j < g.ny())
        s += cell[static_cast<std::size_t>(g.ci(i, j))];
  return 0.25 * s;
}

}  // namespace

SpMat strain_matrix(const MacGrid& g) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(g.n_cells()) * 12);
  for_each_strain_entry(g, [&](int comp, int index, Slot s, int i, int j, double coeff) {
    const int col = face_dof(g, Face{s, i, j});
    if (col >= 0) t.emplace_back(strain_row(g, comp, index), col, coeff);
  });
  return from_triplets(strain_row_count(g), g.n_veldof(), t);
}

SpMat div_matrix(const MacGrid& g) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(g.n_cells()) * 4);
  for_each_div_entry(g, [&](int cell, Slot s, int i, int j, double coeff) {
    const int col = face_dof(g, Face{s, i, j});
    if (col >= 0) t.emplace_back(cell, col, coeff);
  });
  return from_triplets(g.n_cells(), g.n_veldof(), t);
}

SpMat grad_matrix(const MacGrid& g) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grad_row_count(g)) * 2);
  for_each_grad_entry(g, [&](int row, Slot s, int i, int j, double coeff) {
    const int col = face_dof(g, Face{s, i, j});
    if (col >= 0) t.emplace_back(row, col, coeff);
  });
  return from_triplets(grad_row_count(g), g.n_veldof(), t);
}

SpMat strain_weighted_matrix(const MacGrid& g, const std::vector<double>& b_cell) {
  const int m = g.n_cells();
  if (b_cell.size() != static_cast<std::size_t>(m))
    throw ShapeError("strain_weighted_matrix: coefficient count does not match cells");
  const SpMat d = strain_matrix(g);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(strain_row_count(g)));
  for (int c = 0; c < m; ++c) {
    t.emplace_back(c, c, b_cell[static_cast<std::size_t>(c)]);
    t.emplace_back(m + c, m + c, b_cell[static_cast<std::size_t>(c)]);
  }
  // Shear weight 2 * quarter-sum of the cell coefficients: the exact
  // derivative of the cell-invariant energy, and the node-quadrature analog
  // of the (1,1,2) component weight.
  for (int b = 0; b <= g.ny(); ++b)
    for (int a = 0; a <= g.nx(); ++a) {
      const int r = 2 * m + g.ni(a, b);
      t.emplace_back(r, r, 2.0 * quarter_sum(g, b_cell, a, b));
    }
  SpMat b = from_triplets(strain_row_count(g), strain_row_count(g), t);
  SpMat a = d.transpose() * (b * d).eval();
  a.makeCompressed();
  return a;
}

SpMat strain_jacobian_matrix(const MacGrid& g, const std::vector<double>& a_cell,
                             const std::vector<double>& b_cell, const SymTensorField& eta) {
  const int m = g.n_cells();
  if (a_cell.size() != static_cast<std::size_t>(m) || b_cell.size() != static_cast<std::size_t>(m))
    throw ShapeError("strain_jacobian_matrix: coefficient count does not match cells");
  const SpMat d = strain_matrix(g);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(36 * m));
  // Exact Hessian of the cell-invariant dissipation: per cell, the local
  // metric G = diag(1, 1, 1/2 x4) over (t11, t22, four corner shears) plus
  // the rank-one term a_c (G eta)(G eta)^T; scattering the local blocks
  // accumulates the same shear diagonal as strain_weighted_matrix.
  for (int cj = 0; cj < g.ny(); ++cj)
    for (int ci2 = 0; ci2 < g.nx(); ++ci2) {
      const int c = g.ci(ci2, cj);
      const std::size_t n = static_cast<std::size_t>(c);
      const int rows[6] = {c,
                           m + c,
                           2 * m + g.ni(ci2, cj),
                           2 * m + g.ni(ci2 + 1, cj),
                           2 * m + g.ni(ci2, cj + 1),
                           2 * m + g.ni(ci2 + 1, cj + 1)};
      const double gdiag[6] = {1.0, 1.0, 0.5, 0.5, 0.5, 0.5};
      const double gt[6] = {eta.t11(ci2, cj),
                            eta.t22(ci2, cj),
                            0.5 * eta.t12(ci2, cj),
                            0.5 * eta.t12(ci2 + 1, cj),
                            0.5 * eta.t12(ci2, cj + 1),
                            0.5 * eta.t12(ci2 + 1, cj + 1)};
      for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) {
          double v = a_cell[n] * gt[p] * gt[q];
          if (p == q) v += b_cell[n] * gdiag[p];
          if (v != 0.0) t.emplace_back(rows[p], rows[q], v);
        }
    }
  SpMat b = from_triplets(strain_row_count(g), strain_row_count(g), t);
  SpMat a = d.transpose() * (b * d).eval();
  a.makeCompressed();
  return a;
}

SpMat advection_matrix(const MacGrid& g, const StaggeredField& w) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(g.n_veldof()) * 18);
  for_each_adv_entry(g, [&](const Face& out, const Face& zf, const Face& wf, double gamma) {
    const int col = face_dof(g, zf);
    if (col < 0) return;
    const double v = gamma * face_value(w, wf);
    if (v != 0.0) t.emplace_back(face_dof(g, out), col, v);
  });
  return from_triplets(g.n_veldof(), g.n_veldof(), t);
}

SpMat skew_convection_matrix(const MacGrid& g, const StaggeredField& w) {
  const SpMat a = advection_matrix(g, w);
  SpMat s = 0.5 * (a - SpMat(a.transpose()));
  s.makeCompressed();
  return s;
}

SpMat convection_w_jacobian(const MacGrid& g, const StaggeredField& y) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(g.n_veldof()) * 36);
  for_each_adv_entry(g, [&](const Face& out, const Face& zf, const Face& wf, double gamma) {
    const int wcol = face_dof(g, wf);
    if (wcol < 0) return;
    // Forward part: d/dw of gamma * w[wf] * y[zf] lands on the out row.
    const double fwd = 0.5 * gamma * face_value(y, zf);
    if (fwd != 0.0) t.emplace_back(face_dof(g, out), wcol, fwd);
    // Transposed part: d/dw of -gamma * w[wf] * y[out] lands on the zf row.
    const int zrow = face_dof(g, zf);
    if (zrow < 0) return;
    const double bwd = -0.5 * gamma * face_value(y, out);
    if (bwd != 0.0) t.emplace_back(zrow, wcol, bwd);
  });
  return from_triplets(g.n_veldof(), g.n_veldof(), t);
}

SpMat saddle_matrix(const MacGrid& g, const SpMat& Avv) {
  const int n = g.n_veldof();
  const int m = g.n_cells();
  if (Avv.rows() != n || Avv.cols() != n) throw ShapeError("saddle_matrix: velocity block has wrong size");
  const SpMat div = div_matrix(g);
  const double h2 = g.h() * g.h();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(Avv.nonZeros() + 2 * div.nonZeros() + 2 * m));
  for (int k = 0; k < Avv.outerSize(); ++k)
    for (SpMat::InnerIterator it(Avv, k); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < div.outerSize(); ++k)
    for (SpMat::InnerIterator it(div, k); it; ++it) {
      const int cell = static_cast<int>(it.row());
      const int dof = static_cast<int>(it.col());
      t.emplace_back(n + cell, dof, it.value());     // continuity rows
      t.emplace_back(dof, n + cell, -it.value());    // pressure gradient columns
    }
  // Single-entry gauge: the multiplier relaxes the (redundant) continuity row
  // of the last cell and the gauge row pins that cell's pressure.  A dense
  // all-cells gauge would be equivalent but ruins the LU fill-in.
  t.emplace_back(n + m - 1, n + m, h2);
  t.emplace_back(n + m, n + m - 1, h2);
  return from_triplets(n + m + 1, n + m + 1, t);
}

Vec field_to_vec(const StaggeredField& y) {
  const MacGrid& g = y.grid();
  Vec x = Vec::Zero(g.n_veldof());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) x[g.udof(i, j)] = y.u(i, j);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) x[g.vdof(i, j)] = y.v(i, j);
  return x;
}

StaggeredField vec_to_field(const MacGrid& g, const Vec& x) {
  if (x.size() < g.n_veldof()) throw ShapeError("vec_to_field: vector too short");
  StaggeredField y(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) y.u(i, j) = x[g.udof(i, j)];
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) y.v(i, j) = x[g.vdof(i, j)];
  return y;
}

PressureField vec_to_pressure(const MacGrid& g, const Vec& x) {
  const int n = g.n_veldof();
  if (x.size() < n + g.n_cells()) throw ShapeError("vec_to_pressure: vector too short");
  PressureField p(g);
  for (int c = 0; c < g.n_cells(); ++c) p.data()[static_cast<std::size_t>(c)] = x[n + c];
  return p;
}

void DirectSolver::factorize(const SpMat& A) {
  A_ = A;
  A_.makeCompressed();
  lu_.compute(A_);
  if (lu_.info() != Eigen::Success)
    throw LinearSolveError("sparse LU factorization failed (matrix singular or structurally deficient)");
}

Vec DirectSolver::solve(const Vec& b, double rel_tol, int max_refine) const {
  Vec x = lu_.solve(b);
  if (lu_.info() != Eigen::Success) throw LinearSolveError("sparse LU backsolve failed");
  const double bnorm = std::max(b.norm(), 1e-300);
  Vec r = b - A_ * x;
  last_rel_ = r.norm() / bnorm;
  for (int k = 0; k < max_refine && last_rel_ > rel_tol; ++k) {
    x += lu_.solve(r);
    r = b - A_ * x;
    last_rel_ = r.norm() / bnorm;
  }
  if (last_rel_ > rel_tol)
    throw LinearSolveError("linear core missed the residual target: reached " +
                           std::to_string(last_rel_) + ", wanted " + std::to_string(rel_tol));
  return x;
}

}  // namespace rheo::detail
