#ifndef CHIRALWG_FIELD_OPTICS_HPP
#define CHIRALWG_FIELD_OPTICS_HPP

#include <string>
#include <vector>

#include "chiralwg/common.hpp"

namespace chiralwg {

// Complex field amplitudes E = (Ex, Ey, Ez) sampled on a uniform 2D grid in
// the transverse plane. Coordinates are in units of the vacuum wavelength, so
// the wavenumber is k = 2*pi. A forward-propagating field carries the spatial
// factor exp(+ikz); the backward counterpart of a mode is the pointwise
// complex conjugate (time-reversal), which flips the transverse spin.
struct FieldMap {
  std::vector<double> xs;       // size nx, uniform spacing
  std::vector<double> ys;       // size ny, uniform spacing
  std::vector<Vector3cd> amps;  // row-major: index = ix * ny + iy
  double lambda_nm = 0.0;
  Direction direction = Direction::forward;

  int nx() const { return static_cast<int>(xs.size()); }
  int ny() const { return static_cast<int>(ys.size()); }
  const Vector3cd& at(int ix, int iy) const {
    return amps[static_cast<size_t>(ix) * static_cast<size_t>(ys.size()) +
                static_cast<size_t>(iy)];
  }
  Vector3cd& at(int ix, int iy) {
    return amps[static_cast<size_t>(ix) * static_cast<size_t>(ys.size()) +
                static_cast<size_t>(iy)];
  }
  double dx() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
  double dy() const { return ys.size() > 1 ? ys[1] - ys[0] : 0.0; }
  // angular frequency 2*pi*c / lambda in rad/s
  double omega_rad_per_s() const;

  void validate() const;  // uniform grid, finite amplitudes, sizes consistent
};

// Electric part of the optical spin density, -(i/2) E* x E per point,
// in units of epsilon_0 |E|^2 / omega.
struct SpinDensityMap {
  std::vector<double> xs, ys;
  std::vector<Vector3d> values;  // same layout as FieldMap::amps
};

struct DipoleSpec {
  Vector3cd d;  // unit-norm complex dipole direction
};

// gamma_plus / gamma_minus: emission rates into the forward/backward guided
// mode; gamma_loss: emission into all other modes.
struct RateSet {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gamma_loss = 0.0;
};

struct BetaFactors {
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double beta = 0.0;
};

struct GridSpec {
  double x0 = 0.0, x1 = 0.0;
  int nx = 1;
  double y0 = 0.0, y1 = 0.0;
  int ny = 1;
};

DipoleSpec make_dipole(const Vector3cd& d);
// circular dipole (x +/- iy)/sqrt(2)
DipoleSpec circular_dipole(int helicity);

// Longitudinal component from Gauss's law for a transversely confined beam:
// Ez = s * (i/k) (dEx/dx + dEy/dy), s = +1 forward / -1 backward.
// 4th-order centered differences inside, 2nd-order one-sided at the edges.
// Refuses grids coarser than lambda/10.
FieldMap longitudinal_component(const FieldMap& transverse, Direction direction);

SpinDensityMap electric_spin_density(const FieldMap& field);

// Counter-propagating partner: conjugate amplitudes, flipped direction tag.
FieldMap flip_direction(const FieldMap& field);

// Evanescent field in medium 2 for p-polarized total internal reflection at
// the x = 0 interface (medium 1 at x < 0, n1 > n2). The field propagates
// along the interface with constant beta = k n1 sin(theta) and decays as
// exp(-kappa x), kappa = k sqrt(n1^2 sin^2(theta) - n2^2). Derived from the
// divergence-free condition: Ez/Ex = -i kappa/beta for forward propagation,
// so the spin density points along +y. Normalized to unit peak intensity at
// the interface. Grid x-coordinates must lie in medium 2 (x >= 0).
FieldMap tir_evanescent_field(double n1, double n2, double theta, double lambda_nm,
                              const GridSpec& grid,
                              Direction direction = Direction::forward);

double tir_propagation_constant(double n1, double theta);       // beta, k = 2*pi
double tir_decay_constant(double n1, double n2, double theta);  // kappa

// Spin expectation per photon in units of hbar:
// -i * sum(E* x E) / sum(|E|^2) over the grid.
Vector3d photon_spin_expectation(const FieldMap& field);

// max |dEx/dx + dEy/dy + i s beta Ez| over interior grid points, where beta
// is the longitudinal propagation constant of the mode and s the direction
// sign. Zero for a divergence-free field.
double divergence_residual(const FieldMap& field, double beta);

// gamma_pm proportional to |d* . E_pm|^2 with E_- = conj(E_+), scaled so that
// gamma_plus + gamma_minus = gamma_wg.
RateSet directional_rates(const DipoleSpec& dipole, const Vector3cd& field_plus,
                          double gamma_wg, double gamma_loss);

BetaFactors beta_factors(const RateSet& rates);

// CSV schema: metadata line `# lambda_nm=<float> direction=<forward|backward>`
// then header `x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez`, rows in x-major
// order. Doubles use the shortest round-trip representation; loading a saved
// map reproduces the amplitudes bitwise.
FieldMap load_field_map(const std::string& path);
void save_field_map(const FieldMap& field, const std::string& path);

}  // namespace chiralwg

#endif
