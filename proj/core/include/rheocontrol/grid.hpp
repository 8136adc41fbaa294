#pragma once

#include <cmath>
#include <string>

#include "rheocontrol/errors.hpp"

namespace rheo {

// Axis-aligned rectangle [0, Lx] x [0, Ly].
struct Domain {
  double Lx = 1.0;
  double Ly = 1.0;

  bool contains(double x1, double x2) const {
    return x1 >= 0.0 && x1 <= Lx && x2 >= 0.0 && x2 <= Ly;
  }
};

// Uniform staggered (marker-and-cell) grid on a rectangle:
//   - x-velocity u on vertical faces,   (nx+1) x ny values at (i*h, (j+1/2)*h)
//   - y-velocity v on horizontal faces,  nx x (ny+1) values at ((i+1/2)*h, j*h)
//   - pressure at cell centers,          nx x ny values at ((i+1/2)*h, (j+1/2)*h)
//
// Velocity fields are treated as no-slip: normal boundary faces (u at
// i in {0, nx}, v at j in {0, ny}) carry the value 0 and are excluded from
// the unknowns; tangential wall values enter difference stencils through
// reflected ghosts.
class MacGrid {
public:
  MacGrid(int nx, int ny, double Lx, double Ly) : nx_(nx), ny_(ny), Lx_(Lx), Ly_(Ly) {
    if (nx < 4 || ny < 4) throw ConfigError("grid: nx and ny must be at least 4");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw ConfigError("grid: domain edges must be positive");
    const double hx = Lx / nx;
    const double hy = Ly / ny;
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
      throw ConfigError("grid: cells must be square (Lx/nx == Ly/ny), got hx=" +
                        std::to_string(hx) + " hy=" + std::to_string(hy));
    h_ = hx;
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double Lx() const { return Lx_; }
  double Ly() const { return Ly_; }
  Domain domain() const { return {Lx_, Ly_}; }

  bool operator==(const MacGrid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && Lx_ == o.Lx_ && Ly_ == o.Ly_;
  }

  // Storage sizes.
  int n_u() const { return (nx_ + 1) * ny_; }
  int n_v() const { return nx_ * (ny_ + 1); }
  int n_cells() const { return nx_ * ny_; }
  int n_nodes() const { return (nx_ + 1) * (ny_ + 1); }

  // Storage indices (i fastest would waste cache for our j-inner loops;
  // we keep i contiguous).
  int ui(int i, int j) const { return j * (nx_ + 1) + i; }
  int vi(int i, int j) const { return j * nx_ + i; }
  int ci(int i, int j) const { return j * nx_ + i; }
  int ni(int i, int j) const { return j * (nx_ + 1) + i; }

  bool u_on_boundary(int i) const { return i == 0 || i == nx_; }
  bool v_on_boundary(int j) const { return j == 0 || j == ny_; }

  // Numbering of the velocity unknowns (boundary faces excluded):
  // u dofs first, then v dofs.
  int n_udof() const { return (nx_ - 1) * ny_; }
  int n_vdof() const { return nx_ * (ny_ - 1); }
  int n_veldof() const { return n_udof() + n_vdof(); }

  int udof(int i, int j) const { return u_on_boundary(i) ? -1 : j * (nx_ - 1) + (i - 1); }
  int vdof(int i, int j) const { return v_on_boundary(j) ? -1 : n_udof() + (j - 1) * nx_ + i; }

  // Face / center coordinates.
  double ux(int i) const { return i * h_; }
  double uy(int j) const { return (j + 0.5) * h_; }
  double vx(int i) const { return (i + 0.5) * h_; }
  double vy(int j) const { return j * h_; }
  double cx(int i) const { return (i + 0.5) * h_; }
  double cy(int j) const { return (j + 0.5) * h_; }

private:
  int nx_, ny_;
  double Lx_, Ly_;
  double h_;
};

}  // namespace rheo
