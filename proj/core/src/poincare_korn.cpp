#include "rheocontrol/poincare_korn.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "rheocontrol/detail/assembly.hpp"
#include "rheocontrol/errors.hpp"
#include "rheocontrol/fields.hpp"
#include "rheocontrol/operators.hpp"

namespace rheo {

namespace {

using detail::SpMat;
using detail::Vec;

// Smallest eigenvalue of the SPD pencil A x = lambda B x by inverse power
// iteration with B-normalization.  The h^2 quadrature weight cancels from
// every Rayleigh quotient, so A and B are assembled without it.
double smallest_pencil_eigenvalue(const SpMat& A, const SpMat& B, std::uint64_t seed) {
  detail::DirectSolver lu;
  lu.factorize(A);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec x = Vec::NullaryExpr(A.rows(), [&](Eigen::Index) { return gauss(rng); });

  double lambda = 0.0;
  double prev = -1.0;
  for (int it = 0; it < 500; ++it) {
    Vec bx = B * x;
    x = lu.solve(bx, 1e-12);
    const double bnorm = std::sqrt(x.dot(B * x));
    if (!(bnorm > 0.0)) throw LinearSolveError("embedding eigensolve: iterate collapsed to zero");
    x /= bnorm;
    lambda = x.dot(A * x);  // Rayleigh quotient, since x^T B x = 1
    if (prev > 0.0 && std::abs(lambda - prev) <= 1e-12 * lambda) break;
    prev = lambda;
  }
  return lambda;
}

}  // namespace

EmbeddingConstants estimate_poincare_korn(const MacGrid& g, int trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("estimate_poincare_korn: trials must be >= 1");

  // Random-trial bounds.  Each trial is a zero-boundary field; the ratio
  // ||y|| / ||grad y|| bounds c1 from below and ||Dy|| / ||y||_{1,2}
  // bounds c2 from above.
  double c1 = 0.0;
  double c2 = 1.0;
  for (int t = 0; t < trials; ++t) {
    const StaggeredField y = random_field(g, seed + static_cast<std::uint64_t>(t));
    const double ny = norm2(y);
    const double ng = grad_norm2(y);
    if (!(ng > 0.0)) continue;  // degenerate draw; keep the other trials
    c1 = std::max(c1, ny / ng);
    c2 = std::min(c2, norm2(sym_gradient(y)) / norm_w12(y));
  }

  // Eigenvalue sharpening.  With G and D the gradient / strain matrices and
  // W the (1,1,2) component weight,
  //   c1 = 1 / sqrt(min eig of  G^T G x = lambda x),
  //   c2 =     sqrt(min eig of  D^T W D x = lambda (I + G^T G) x).
  const SpMat G = detail::grad_matrix(g);
  SpMat I(G.cols(), G.cols());
  I.setIdentity();

  const SpMat KG = SpMat(G.transpose()) * G;
  const double lam1 = smallest_pencil_eigenvalue(KG, I, seed ^ 0xabcdefULL);
  c1 = std::max(c1, 1.0 / std::sqrt(lam1));

  const SpMat KD = detail::strain_weighted_matrix(g, std::vector<double>(g.n_cells(), 1.0));
  const SpMat B2 = I + KG;
  const double lam2 = smallest_pencil_eigenvalue(KD, B2, seed ^ 0x123456ULL);
  c2 = std::min(c2, std::sqrt(lam2));

  return {c1, c2, trials};
}

const EmbeddingConstants& embedding_constants(const MacGrid& g) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mu;
  static std::map<Key, EmbeddingConstants> cache;

  const Key key{g.nx(), g.ny(), g.Lx(), g.Ly()};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, estimate_poincare_korn(g, 32)).first;
  return it->second;
}

}  // namespace rheo
