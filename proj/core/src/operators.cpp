#include "rheocontrol/operators.hpp"

#include <cmath>

#include "rheocontrol/detail/stencils.hpp"

namespace rheo {

namespace {

using detail::Face;
using detail::Slot;

double value(const StaggeredField& f, const Face& a) {
  return a.s == Slot::U ? f.u(a.i, a.j) : f.v(a.i, a.j);
}

double& ref(StaggeredField& f, const Face& a) {
  return a.s == Slot::U ? f.u(a.i, a.j) : f.v(a.i, a.j);
}

double* tensor_component(SymTensorField& t, int comp) {
  switch (comp) {
    case 0: return t.t11_data().data();
    case 1: return t.t22_data().data();
    default: return t.t12_data().data();
  }
}

const double* tensor_component(const SymTensorField& t, int comp) {
  switch (comp) {
    case 0: return t.t11_data().data();
    case 1: return t.t22_data().data();
    default: return t.t12_data().data();
  }
}

// Pairing weight of a tensor row: diagonal components count once per cell;
// the shear counts twice (symmetric off-diagonal pair), scaled by the node's
// quadrature weight so the pairing matches the cell-invariant energy.
double tensor_row_weight(const MacGrid& g, int comp, int index) {
  if (comp < 2) return 1.0;
  const int a = index % (g.nx() + 1);
  const int b = index / (g.nx() + 1);
  return 2.0 * detail::node_weight(g, a, b);
}

}  // namespace

SymTensorField sym_gradient(const StaggeredField& y) {
  const MacGrid& g = y.grid();
  SymTensorField t(g);
  double* comp[3] = {tensor_component(t, 0), tensor_component(t, 1), tensor_component(t, 2)};
  detail::for_each_strain_entry(g, [&](int c, int index, Slot s, int i, int j, double coeff) {
    comp[c][index] += coeff * value(y, Face{s, i, j});
  });
  return t;
}

PressureField divergence(const StaggeredField& y) {
  const MacGrid& g = y.grid();
  PressureField d(g);
  double* out = d.data().data();
  detail::for_each_div_entry(g, [&](int cell, Slot s, int i, int j, double coeff) {
    out[cell] += coeff * value(y, Face{s, i, j});
  });
  return d;
}

StaggeredField div_stress(const SymTensorField& T) {
  const MacGrid& g = T.grid();
  StaggeredField r(g);
  const double* comp[3] = {tensor_component(T, 0), tensor_component(T, 1), tensor_component(T, 2)};
  detail::for_each_strain_entry(g, [&](int c, int index, Slot s, int i, int j, double coeff) {
    const Face f{s, i, j};
    if (detail::face_on_boundary(g, f)) return;
    ref(r, f) -= tensor_row_weight(g, c, index) * coeff * comp[c][index];
  });
  return r;
}

StaggeredField grad_pressure(const PressureField& p) {
  const MacGrid& g = p.grid();
  StaggeredField r(g);
  const double* pc = p.data().data();
  detail::for_each_div_entry(g, [&](int cell, Slot s, int i, int j, double coeff) {
    const Face f{s, i, j};
    if (detail::face_on_boundary(g, f)) return;
    ref(r, f) -= coeff * pc[cell];
  });
  return r;
}

StaggeredField convect(const StaggeredField& w, const StaggeredField& z) {
  w.require_same_grid(z);
  const MacGrid& g = w.grid();
  StaggeredField r(g);
  detail::for_each_adv_entry(g, [&](const Face& out, const Face& zf, const Face& wf, double gamma) {
    const double c = 0.5 * gamma * value(w, wf);
    ref(r, out) += c * value(z, zf);
    if (!detail::face_on_boundary(g, zf)) ref(r, zf) -= c * value(z, out);
  });
  return r;
}

double inner_product(const StaggeredField& a, const StaggeredField& b) {
  a.require_same_grid(b);
  const MacGrid& g = a.grid();
  const double h2 = g.h() * g.h();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const double w = g.u_on_boundary(i) ? 0.5 : 1.0;
      s += w * a.u(i, j) * b.u(i, j);
    }
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double w = g.v_on_boundary(j) ? 0.5 : 1.0;
      s += w * a.v(i, j) * b.v(i, j);
    }
  return h2 * s;
}

double inner_product(const PressureField& a, const PressureField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("inner_product: mismatched grids");
  const double h2 = a.grid().h() * a.grid().h();
  double s = 0.0;
  for (std::size_t n = 0; n < a.data().size(); ++n) s += a.data()[n] * b.data()[n];
  return h2 * s;
}

double tensor_inner_product(const SymTensorField& a, const SymTensorField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("tensor_inner_product: mismatched grids");
  const MacGrid& g = a.grid();
  const double h2 = g.h() * g.h();
  double s = 0.0;
  const std::size_t n = a.t11_data().size();
  for (std::size_t k = 0; k < n; ++k)
    s += a.t11_data()[k] * b.t11_data()[k] + a.t22_data()[k] * b.t22_data()[k];
  for (int b2 = 0; b2 <= g.ny(); ++b2)
    for (int a2 = 0; a2 <= g.nx(); ++a2)
      s += 2.0 * detail::node_weight(g, a2, b2) * a.t12(a2, b2) * b.t12(a2, b2);
  return h2 * s;
}

double norm2(const StaggeredField& a) { return std::sqrt(inner_product(a, a)); }
double norm2(const PressureField& a) { return std::sqrt(inner_product(a, a)); }
double norm2(const SymTensorField& a) { return std::sqrt(tensor_inner_product(a, a)); }

double grad_norm2(const StaggeredField& y) {
  const MacGrid& g = y.grid();
  const double h2 = g.h() * g.h();
  std::vector<double> rows(static_cast<std::size_t>(detail::grad_row_count(g)), 0.0);
  detail::for_each_grad_entry(g, [&](int r, Slot sl, int i, int j, double coeff) {
    rows[static_cast<std::size_t>(r)] += coeff * value(y, Face{sl, i, j});
  });
  double s = 0.0;
  for (double r : rows) s += r * r;
  return std::sqrt(h2 * s);
}

double norm_w12(const StaggeredField& y) {
  const double a = norm2(y);
  const double b = grad_norm2(y);
  return std::sqrt(a * a + b * b);
}

double norm_lq(const StaggeredField& y, double q) {
  if (!(q >= 1.0)) throw EvalError("norm_lq: q must be >= 1");
  const MacGrid& g = y.grid();
  const double h2 = g.h() * g.h();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double ub = 0.5 * (y.u(i, j) + y.u(i + 1, j));
      const double vb = 0.5 * (y.v(i, j) + y.v(i, j + 1));
      s += std::pow(std::hypot(ub, vb), q);
    }
  return std::pow(h2 * s, 1.0 / q);
}

std::vector<double> to_dofs(const StaggeredField& y) {
  const MacGrid& g = y.grid();
  std::vector<double> d(static_cast<std::size_t>(g.n_veldof()), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) d[static_cast<std::size_t>(g.udof(i, j))] = y.u(i, j);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) d[static_cast<std::size_t>(g.vdof(i, j))] = y.v(i, j);
  return d;
}

StaggeredField from_dofs(const MacGrid& g, const std::vector<double>& dofs) {
  if (dofs.size() != static_cast<std::size_t>(g.n_veldof()))
    throw ShapeError("from_dofs: vector length does not match the grid");
  StaggeredField y(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) y.u(i, j) = dofs[static_cast<std::size_t>(g.udof(i, j))];
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) y.v(i, j) = dofs[static_cast<std::size_t>(g.vdof(i, j))];
  return y;
}

}  // namespace rheo
