#pragma once

#include "rheocontrol/grid.hpp"

// Single source of truth for the staggered-grid stencils.  Every operator is
// written once as a loop that emits (row, column, coefficient) entries; the
// matrix-free applies, the transpose applies, and the sparse assemblies all
// consume the same emissions, so they cannot drift apart.

namespace rheo::detail {

enum class Slot : int { U = 0, V = 1 };

struct Face {
  Slot s;
  int i, j;
};

inline bool face_on_boundary(const MacGrid& g, const Face& f) {
  return f.s == Slot::U ? g.u_on_boundary(f.i) : g.v_on_boundary(f.j);
}

// Quadrature weight of a mesh node: the fraction of a full cell's area the
// node's quarter-cells cover (1 interior, 1/2 on an edge, 1/4 at a corner).
// It is exactly (number of adjacent cells) / 4, which is what makes the
// node-collocated shear sums below the transpose of the four-corner cell
// average; the shear component of every tensor inner product carries it.
inline double node_weight(const MacGrid& g, int a, int b) {
  const double wa = (a == 0 || a == g.nx()) ? 0.5 : 1.0;
  const double wb = (b == 0 || b == g.ny()) ? 0.5 : 1.0;
  return wa * wb;
}

// Symmetric-gradient rows.  emit(comp, index, slot, i, j, coeff) with
// comp 0 -> T11, 1 -> T22 (index = cell) and comp 2 -> T12 (index = node):
//   T[comp][index] = sum coeff * y[slot](i, j).
// Diagonal entries are central differences to the cell centre.  The shear
// rate lives at mesh nodes, where both one-sided rates are compact central
// differences; wall nodes use the reflected tangential ghost (u(a,-1) =
// -u(a,0) and so on), folding the no-slip condition into the coefficient.
// Keeping the shear at nodes instead of averaging it to cell centres is
// what preserves second-order velocity convergence: the cell average and
// its exact transpose cannot both be second-order consistent at walls.
// Boundary faces may still appear as columns; admissible fields carry
// zeros there.
template <class F>
void for_each_strain_entry(const MacGrid& g, F&& emit) {
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.ci(i, j);
      emit(0, c, Slot::U, i + 1, j, 1.0 / h);
      emit(0, c, Slot::U, i, j, -1.0 / h);
      emit(1, c, Slot::V, i, j + 1, 1.0 / h);
      emit(1, c, Slot::V, i, j, -1.0 / h);
    }
  for (int b = 0; b <= ny; ++b)
    for (int a = 0; a <= nx; ++a) {
      const int n = g.ni(a, b);
      if (b == 0)
        emit(2, n, Slot::U, a, 0, 1.0 / h);
      else if (b == ny)
        emit(2, n, Slot::U, a, ny - 1, -1.0 / h);
      else {
        emit(2, n, Slot::U, a, b, 0.5 / h);
        emit(2, n, Slot::U, a, b - 1, -0.5 / h);
      }
      if (a == 0)
        emit(2, n, Slot::V, 0, b, 1.0 / h);
      else if (a == nx)
        emit(2, n, Slot::V, nx - 1, b, -1.0 / h);
      else {
        emit(2, n, Slot::V, a, b, 0.5 / h);
        emit(2, n, Slot::V, a - 1, b, -0.5 / h);
      }
    }
}

// Divergence rows.  emit(cell, slot, i, j, coeff) with
//   div(y)[cell] = sum coeff * y[slot](i, j).
template <class F>
void for_each_div_entry(const MacGrid& g, F&& emit) {
  const double h = g.h();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int c = g.ci(i, j);
      emit(c, Slot::U, i + 1, j, 1.0 / h);
      emit(c, Slot::U, i, j, -1.0 / h);
      emit(c, Slot::V, i, j + 1, 1.0 / h);
      emit(c, Slot::V, i, j, -1.0 / h);
    }
}

// Full-gradient rows used by the embedding-constant eigenproblems.
// emit(row, slot, i, j, coeff); rows enumerate the four scalar derivative
// fields one after another (du/dx and dv/dy at cells, du/dy and dv/dx at
// nodes, with the same reflected wall ghost as the strain stencil, so each
// node's tangential-rate functional is shared by the two operators).
template <class F>
void for_each_grad_entry(const MacGrid& g, F&& emit) {
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  int row = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      emit(row, Slot::U, i + 1, j, 1.0 / h);
      emit(row, Slot::U, i, j, -1.0 / h);
      ++row;
      emit(row, Slot::V, i, j + 1, 1.0 / h);
      emit(row, Slot::V, i, j, -1.0 / h);
      ++row;
    }
  for (int b = 0; b <= ny; ++b)
    for (int a = 0; a <= nx; ++a) {
      if (b == 0)
        emit(row, Slot::U, a, 0, 2.0 / h);
      else if (b == ny)
        emit(row, Slot::U, a, ny - 1, -2.0 / h);
      else {
        emit(row, Slot::U, a, b, 1.0 / h);
        emit(row, Slot::U, a, b - 1, -1.0 / h);
      }
      ++row;
      if (a == 0)
        emit(row, Slot::V, 0, b, 2.0 / h);
      else if (a == nx)
        emit(row, Slot::V, nx - 1, b, -2.0 / h);
      else {
        emit(row, Slot::V, a, b, 1.0 / h);
        emit(row, Slot::V, a - 1, b, -1.0 / h);
      }
      ++row;
    }
}

inline int grad_row_count(const MacGrid& g) {
  return 2 * g.n_cells() + 2 * g.n_nodes();
}

// Centred advection emissions.  emit(out, zf, wf, gamma) means
//   (A_w z)[out] += gamma * w[wf] * z[zf].
// The skew form 0.5 * (A_w - A_w^T) applied to z reads the same emissions
// twice, once forward and once with out and zf exchanged.  Transverse
// advecting velocities are the four-point face averages; advected values
// behind a tangential wall are rerouted through the reflected interior face
// with a flipped sign.
template <class F>
void for_each_adv_entry(const MacGrid& g, F&& emit) {
  const int nx = g.nx(), ny = g.ny();
  const double g2 = 1.0 / (2.0 * g.h());
  const double g8 = 1.0 / (8.0 * g.h());
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const Face out{Slot::U, i, j};
      emit(out, Face{Slot::U, i + 1, j}, out, g2);
      emit(out, Face{Slot::U, i - 1, j}, out, -g2);
      const Face vw[4] = {Face{Slot::V, i - 1, j}, Face{Slot::V, i, j},
                          Face{Slot::V, i - 1, j + 1}, Face{Slot::V, i, j + 1}};
      for (const Face& w : vw) {
        if (j + 1 == ny)
          emit(out, Face{Slot::U, i, ny - 1}, w, -g8);
        else
          emit(out, Face{Slot::U, i, j + 1}, w, g8);
        if (j == 0)
          emit(out, Face{Slot::U, i, 0}, w, g8);
        else
          emit(out, Face{Slot::U, i, j - 1}, w, -g8);
      }
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Face out{Slot::V, i, j};
      emit(out, Face{Slot::V, i, j + 1}, out, g2);
      emit(out, Face{Slot::V, i, j - 1}, out, -g2);
      const Face uw[4] = {Face{Slot::U, i, j - 1}, Face{Slot::U, i + 1, j - 1},
                          Face{Slot::U, i, j}, Face{Slot::U, i + 1, j}};
      for (const Face& w : uw) {
        if (i + 1 == nx)
          emit(out, Face{Slot::V, nx - 1, j}, w, -g8);
        else
          emit(out, Face{Slot::V, i + 1, j}, w, g8);
        if (i == 0)
          emit(out, Face{Slot::V, 0, j}, w, g8);
        else
          emit(out, Face{Slot::V, i - 1, j}, w, -g8);
      }
    }
}

}  // namespace rheo::detail
