#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rheocontrol/detail/assembly.hpp"
#include "rheocontrol/operators.hpp"
#include "rheocontrol/poincare_korn.hpp"
#include "support/testutil.hpp"

using namespace rheo;

namespace {

SymTensorField random_tensor(const MacGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SymTensorField T(g);
  for (double& v : T.t11_data()) v = n(rng);
  for (double& v : T.t22_data()) v = n(rng);
  for (double& v : T.t12_data()) v = n(rng);
  return T;
}

PressureField random_pressure(const MacGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  PressureField p(g);
  for (double& v : p.data()) v = n(rng);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// The three structural identities, exact to roundoff by construction.
// ---------------------------------------------------------------------------

TEST_CASE("stress divergence is exactly minus the adjoint of the strain") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MacGrid g(8 + 3 * (s % 5), 6 + 2 * (s % 7), 1.0, 1.0);
    const StaggeredField v = random_field(g, 100 + s);
    const SymTensorField T = random_tensor(g, 200 + s);
    const double lhs = inner_product(div_stress(T), v);
    const double rhs = -tensor_inner_product(T, sym_gradient(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("pressure gradient is exactly minus the adjoint of the divergence") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MacGrid g(9 + (s % 6), 7 + (s % 4), 2.0, 1.5);
    const StaggeredField v = random_field(g, 300 + s);
    const PressureField q = random_pressure(g, 400 + s);
    const double lhs = inner_product(grad_pressure(q), v);
    const double rhs = -inner_product(divergence(v), q);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("convection is exactly skew for every advecting field") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MacGrid g(10, 12, 1.0, 1.0);
    const StaggeredField w = random_field(g, 500 + s);  // not divergence-free
    const StaggeredField z = random_field(g, 600 + s);
    const double q = inner_product(convect(w, z), z);
    CHECK(std::abs(q) <= 1e-12 * std::max(1.0, norm2(z) * norm2(z) * w.max_abs()));
  }
}

// ---------------------------------------------------------------------------
// Pointwise exactness on simple fields.
// ---------------------------------------------------------------------------

TEST_CASE("strain and divergence are exact on affine velocity fields") {
  const MacGrid g(16, 12, 1.0, 1.0);
  StaggeredField y(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) y.u(i, j) = 1.0 + 2.0 * g.ux(i) + 3.0 * g.uy(j);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) y.v(i, j) = 4.0 + 5.0 * g.vx(i) - 2.0 * g.vy(j);

  const SymTensorField D = sym_gradient(y);
  const PressureField dv = divergence(y);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      CHECK(D.t11(i, j) == doctest::Approx(2.0).epsilon(1e-13));
      CHECK(D.t22(i, j) == doctest::Approx(-2.0).epsilon(1e-13));
      CHECK(dv.at(i, j) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
  // The shear value 0.5 (u_y + v_x) = 4 is reproduced at interior nodes; wall
  // rows read reflected ghosts and are only consistent for no-slip fields.
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i)
      CHECK(D.t12(i, j) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("quadratures are exact for constants") {
  const MacGrid g(14, 10, 1.0, 1.0);
  StaggeredField ones(g);
  for (double& v : ones.u_data()) v = 1.0;
  for (double& v : ones.v_data()) v = 1.0;
  // Halved boundary faces make the face sum exact: each component integrates
  // to the domain area.
  CHECK(norm2(ones) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  SymTensorField shear(g);
  for (double& v : shear.t12_data()) v = 1.0;
  // Factor 2 on the shear component, node weights summing to the cell count.
  CHECK(tensor_inner_product(shear, shear) == doctest::Approx(2.0).epsilon(1e-13));

  StaggeredField y34(g);
  for (double& v : y34.u_data()) v = 3.0;
  for (double& v : y34.v_data()) v = 4.0;
  CHECK(norm_lq(y34, 4.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(norm_lq(y34, 2.5) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("stress divergence and pressure gradient keep boundary faces zero") {
  const MacGrid g(9, 11, 1.0, 1.0);
  const StaggeredField f1 = div_stress(random_tensor(g, 71));
  const StaggeredField f2 = grad_pressure(random_pressure(g, 72));
  for (int j = 0; j < g.ny(); ++j) {
    CHECK(f1.u(0, j) == 0.0);
    CHECK(f1.u(g.nx(), j) == 0.0);
    CHECK(f2.u(0, j) == 0.0);
    CHECK(f2.u(g.nx(), j) == 0.0);
  }
  for (int i = 0; i < g.nx(); ++i) {
    CHECK(f1.v(i, 0) == 0.0);
    CHECK(f1.v(i, g.ny()) == 0.0);
    CHECK(f2.v(i, 0) == 0.0);
    CHECK(f2.v(i, g.ny()) == 0.0);
  }
}

// ---------------------------------------------------------------------------
// Norm relations and DOF flattening.
// ---------------------------------------------------------------------------

TEST_CASE("full gradient seminorm dominates the strain seminorm") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const MacGrid g(12, 9, 1.0, 1.0);
    const StaggeredField y = random_field(g, 800 + s);
    const double dn = norm2(sym_gradient(y));
    CHECK(dn * dn <= grad_norm2(y) * grad_norm2(y) * (1.0 + 1e-12) + 1e-12);
    const double w12 = norm_w12(y);
    CHECK(w12 * w12 ==
          doctest::Approx(norm2(y) * norm2(y) + grad_norm2(y) * grad_norm2(y)).epsilon(1e-12));
  }
}

TEST_CASE("dof flattening round-trips and zeroes the boundary") {
  const MacGrid g(7, 8, 1.0, 1.0);
  StaggeredField y = random_field(g, 99);
  // random_field vanishes on the boundary already; perturb one interior value
  // to make the round trip nontrivial.
  y.u(3, 4) += 0.5;
  const std::vector<double> dofs = to_dofs(y);
  CHECK(static_cast<int>(dofs.size()) == g.n_veldof());
  const StaggeredField back = from_dofs(g, dofs);
  CHECK(testutil::field_dist(back, y) == 0.0);
}

// ---------------------------------------------------------------------------
// Assembled operators agree with the matrix-free ones entry by entry.
// ---------------------------------------------------------------------------

TEST_CASE("strain matrix reproduces sym_gradient on interior dofs") {
  const MacGrid g(11, 9, 1.0, 1.0);
  const StaggeredField y = random_field(g, 1234);
  const detail::SpMat D = detail::strain_matrix(g);
  CHECK(D.rows() == 2 * g.n_cells() + g.n_nodes());
  CHECK(D.cols() == g.n_veldof());
  const detail::Vec t = D * detail::field_to_vec(y);
  const SymTensorField T = sym_gradient(y);
  const int m = g.n_cells();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      CHECK(t[g.ci(i, j)] == doctest::Approx(T.t11(i, j)).epsilon(1e-14));
      CHECK(t[m + g.ci(i, j)] == doctest::Approx(T.t22(i, j)).epsilon(1e-14));
    }
  for (int b = 0; b <= g.ny(); ++b)
    for (int a = 0; a <= g.nx(); ++a)
      CHECK(t[2 * m + g.ni(a, b)] == doctest::Approx(T.t12(a, b)).epsilon(1e-14));
}

TEST_CASE("divergence matrix reproduces the divergence operator") {
  const MacGrid g(10, 13, 1.0, 1.0);
  const StaggeredField y = random_field(g, 4321);
  const detail::Vec d = detail::div_matrix(g) * detail::field_to_vec(y);
  const PressureField dv = divergence(y);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      CHECK(d[g.ci(i, j)] == doctest::Approx(dv.at(i, j)).epsilon(1e-14));
}

TEST_CASE("skew convection matrix reproduces convect and is antisymmetric") {
  const MacGrid g(8, 8, 1.0, 1.0);
  const StaggeredField w = random_field(g, 55);
  const StaggeredField z = random_field(g, 56);
  const detail::SpMat C = detail::skew_convection_matrix(g, w);
  const detail::SpMat Ct = C.transpose();
  CHECK((C + Ct).norm() <= 1e-13 * std::max(1.0, C.norm()));
  const StaggeredField cz = convect(w, z);
  const detail::Vec v = C * detail::field_to_vec(z);
  const detail::Vec want = detail::field_to_vec(cz);
  CHECK((v - want).norm() <= 1e-13 * std::max(1.0, want.norm()));
}

TEST_CASE("weighted strain operator equals strain-scale-transpose composition") {
  const MacGrid g(9, 7, 1.0, 1.0);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> b(static_cast<std::size_t>(g.n_cells()));
  for (double& v : b) v = u(rng);
  const detail::SpMat W = detail::strain_weighted_matrix(g, b);
  CHECK((detail::SpMat(W.transpose()) - W).norm() <= 1e-13 * W.norm());
  // Against div_stress of the viscosity-scaled strain of a random field.
  const StaggeredField y = random_field(g, 809);
  SymTensorField T = sym_gradient(y);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      T.t11(i, j) *= b[static_cast<std::size_t>(g.ci(i, j))];
      T.t22(i, j) *= b[static_cast<std::size_t>(g.ci(i, j))];
    }
  for (int bb = 0; bb <= g.ny(); ++bb)
    for (int aa = 0; aa <= g.nx(); ++aa) {
      double s = 0.0;
      int cnt = 0;
      for (int j = bb - 1; j <= bb; ++j)
        for (int i = aa - 1; i <= aa; ++i)
          if (i >= 0 && i < g.nx() && j >= 0 && j < g.ny()) {
            s += b[static_cast<std::size_t>(g.ci(i, j))];
            ++cnt;
          }
      T.t12(aa, bb) *= s / cnt;
    }
  const StaggeredField div_scaled = div_stress(T);
  const detail::Vec got = W * detail::field_to_vec(y);
  const detail::Vec want = -detail::field_to_vec(div_scaled);
  CHECK((got - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
}

TEST_CASE("saddle operator has the bordered shape with a single gauge entry") {
  const MacGrid g(6, 5, 1.0, 1.0);
  const detail::SpMat A = detail::strain_weighted_matrix(g, std::vector<double>(g.n_cells(), 1.0));
  const detail::SpMat S = detail::saddle_matrix(g, A);
  const int nv = g.n_veldof(), nc = g.n_cells();
  CHECK(S.rows() == nv + nc + 1);
  CHECK(S.cols() == nv + nc + 1);
  // Gauge row/column touch exactly the last cell's pressure.
  const detail::SpMat Sd = S;
  int gauge_entries = 0;
  for (int k = 0; k < Sd.outerSize(); ++k)
    for (detail::SpMat::InnerIterator it(Sd, k); it; ++it)
      if (it.row() == nv + nc || it.col() == nv + nc) {
        CHECK(it.value() == doctest::Approx(g.h() * g.h()));
        ++gauge_entries;
      }
  CHECK(gauge_entries == 2);
}

// ---------------------------------------------------------------------------
// Embedding constants.
// ---------------------------------------------------------------------------

TEST_CASE("poincare constant approaches its continuum value on fine grids") {
  const MacGrid g(48, 48, 1.0, 1.0);
  const EmbeddingConstants ec = estimate_poincare_korn(g, 8);
  const double exact = 1.0 / (M_PI * std::sqrt(2.0));  // unit square
  CHECK(std::abs(ec.c1 - exact) <= 0.02 * exact);
  CHECK(ec.c2 > 0.0);
  CHECK(ec.c2 <= 1.0 + 1e-12);
  CHECK(ec.trials == 8);
}

TEST_CASE("embedding estimates are deterministic and memoized per grid") {
  const MacGrid g(16, 16, 1.0, 1.0);
  const EmbeddingConstants a = estimate_poincare_korn(g, 4, 42);
  const EmbeddingConstants b = estimate_poincare_korn(g, 4, 42);
  CHECK(a.c1 == b.c1);
  CHECK(a.c2 == b.c2);
  const EmbeddingConstants& m1 = embedding_constants(g);
  const EmbeddingConstants& m2 = embedding_constants(MacGrid(16, 16, 1.0, 1.0));
  CHECK(&m1 == &m2);
  // Embedding inequalities hold on sampled random fields.
  for (std::uint64_t s = 0; s < 5; ++s) {
    const StaggeredField y = random_field(g, 900 + s);
    CHECK(norm2(y) <= m1.c1 * grad_norm2(y) * (1.0 + 1e-10));
    CHECK(norm2(sym_gradient(y)) >= m1.c2 * norm_w12(y) * (1.0 - 1e-10));
  }
}
