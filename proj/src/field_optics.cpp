#include "chiralwg/field_optics.hpp"

#include <cmath>

namespace chiralwg {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

void check_uniform(const std::vector<double>& v, const char* axis) {
  if (v.size() < 2) return;
  const double h = v[1] - v[0];
  require(h > 0, std::string("grid axis ") + axis + " must be increasing");
  for (size_t i = 1; i < v.size(); ++i) {
    const double hi = v[i] - v[i - 1];
    if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument(std::string("non-uniform ") + axis +
                                  " spacing: " + std::to_string(hi) + " vs " +
                                  std::to_string(h));
    }
  }
}

std::vector<double> linspace(double a, double b, int n) {
  require(n >= 1, "grid axis needs at least one point");
  std::vector<double> v(static_cast<size_t>(n));
  if (n == 1) {
    v[0] = a;
    return v;
  }
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = a + h * i;
  return v;
}

// first derivative along one axis; n >= 5 uses the 4th-order interior stencil
Complex derivative_1d(const std::vector<Complex>& f, long i, double h) {
  const long n = static_cast<long>(f.size());
  if (n == 1) return 0.0;
  if (n == 2) return (f[1] - f[0]) / h;
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  if (i == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  if (n < 5 || i == 1 || i == n - 2)
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
  return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

// plain algebraic cross product (Eigen's complex cross() conjugates)
Vector3cd ccross(const Vector3cd& a, const Vector3cd& b) {
  return Vector3cd(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                   a(0) * b(1) - a(1) * b(0));
}

// dEx/dx + dEy/dy at every grid point
std::vector<Complex> transverse_divergence(const FieldMap& m) {
  const int nx = m.nx(), ny = m.ny();
  std::vector<Complex> div(static_cast<size_t>(nx) * ny, Complex(0, 0));
  if (nx > 1) {
    std::vector<Complex> col(static_cast<size_t>(nx));
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) col[static_cast<size_t>(ix)] = m.at(ix, iy)(0);
      for (int ix = 0; ix < nx; ++ix)
        div[static_cast<size_t>(ix) * ny + iy] += derivative_1d(col, ix, m.dx());
    }
  }
  if (ny > 1) {
    std::vector<Complex> row(static_cast<size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) row[static_cast<size_t>(iy)] = m.at(ix, iy)(1);
      for (int iy = 0; iy < ny; ++iy)
        div[static_cast<size_t>(ix) * ny + iy] += derivative_1d(row, iy, m.dy());
    }
  }
  return div;
}

}  // namespace

double FieldMap::omega_rad_per_s() const {
  require(lambda_nm > 0, "wavelength must be positive");
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-9);
}

void FieldMap::validate() const {
  require(!xs.empty() && !ys.empty(), "field map grid is empty");
  require(amps.size() == xs.size() * ys.size(),
          "field map amplitude count does not match grid");
  check_uniform(xs, "x");
  check_uniform(ys, "y");
  for (const auto& a : amps) {
    require(a.allFinite(), "field map contains non-finite amplitudes");
  }
}

DipoleSpec make_dipole(const Vector3cd& d) {
  const double n = d.norm();
  require(n > 0, "dipole vector must be nonzero");
  return DipoleSpec{d / n};
}

DipoleSpec circular_dipole(int helicity) {
  require(helicity == 1 || helicity == -1, "helicity must be +1 or -1");
  Vector3cd d(1.0, Complex(0.0, static_cast<double>(helicity)), 0.0);
  return make_dipole(d);
}

FieldMap longitudinal_component(const FieldMap& transverse, Direction direction) {
  transverse.validate();
  const double k = 2.0 * kPi;  // grid coordinates in units of lambda
  const double max_h = std::max(transverse.dx(), transverse.dy());
  if (max_h > 0.1 + 1e-12) {
    throw std::invalid_argument(
        "grid too coarse for finite differences: spacing " +
        std::to_string(max_h) + " lambda exceeds lambda/10");
  }
  FieldMap out = transverse;
  out.direction = direction;
  const double s = direction == Direction::forward ? 1.0 : -1.0;
  const auto div = transverse_divergence(transverse);
  for (size_t i = 0; i < out.amps.size(); ++i) {
    out.amps[i](2) = s * Complex(0.0, 1.0) / k * div[i];
  }
  return out;
}

SpinDensityMap electric_spin_density(const FieldMap& field) {
  field.validate();
  SpinDensityMap out;
  out.xs = field.xs;
  out.ys = field.ys;
  out.values.resize(field.amps.size());
  for (size_t i = 0; i < field.amps.size(); ++i) {
    const Vector3cd cross = ccross(field.amps[i].conjugate(), field.amps[i]);
    out.values[i] = (Complex(0.0, -0.5) * cross).real();
  }
  return out;
}

FieldMap flip_direction(const FieldMap& field) {
  FieldMap out = field;
  for (auto& a : out.amps) a = a.conjugate();
  out.direction = field.direction == Direction::forward ? Direction::backward
                                                        : Direction::forward;
  return out;
}

double tir_propagation_constant(double n1, double theta) {
  return 2.0 * kPi * n1 * std::sin(theta);
}

double tir_decay_constant(double n1, double n2, double theta) {
  const double arg = n1 * n1 * std::sin(theta) * std::sin(theta) - n2 * n2;
  require(arg > 0, "no total internal reflection: angle below critical angle");
  return 2.0 * kPi * std::sqrt(arg);
}

FieldMap tir_evanescent_field(double n1, double n2, double theta, double lambda_nm,
                              const GridSpec& grid, Direction direction) {
  require(n1 > n2 && n2 > 0, "requires n1 > n2 > 0");
  require(std::sin(theta) > n2 / n1,
          "no total internal reflection: angle below critical angle");
  require(grid.x0 >= 0, "TIR grid must lie in medium 2 (x >= 0)");

  const double beta = tir_propagation_constant(n1, theta);
  const double kappa = tir_decay_constant(n1, n2, theta);
  // |E(0)|^2 = 1 at the interface
  const double amp = beta / std::sqrt(beta * beta + kappa * kappa);
  const double s = direction == Direction::forward ? 1.0 : -1.0;

  FieldMap out;
  out.xs = linspace(grid.x0, grid.x1, grid.nx);
  out.ys = linspace(grid.y0, grid.y1, grid.ny);
  out.lambda_nm = lambda_nm;
  out.direction = direction;
  out.amps.resize(static_cast<size_t>(grid.nx) * grid.ny);
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double envelope = amp * std::exp(-kappa * out.xs[static_cast<size_t>(ix)]);
    const Vector3cd e(envelope, 0.0,
                      Complex(0.0, -s * kappa / beta) * envelope);
    for (int iy = 0; iy < grid.ny; ++iy) out.at(ix, iy) = e;
  }
  return out;
}

Vector3d photon_spin_expectation(const FieldMap& field) {
  field.validate();
  Vector3cd spin = Vector3cd::Zero();
  double weight = 0.0;
  for (const auto& a : field.amps) {
    spin += Complex(0.0, -1.0) * ccross(a.conjugate(), a);
    weight += a.squaredNorm();
  }
  require(weight > 0, "field map has zero intensity");
  return spin.real() / weight;
}

double divergence_residual(const FieldMap& field, double beta) {
  field.validate();
  const int nx = field.nx(), ny = field.ny();
  const auto div = transverse_divergence(field);
  const double s = field.direction == Direction::forward ? 1.0 : -1.0;
  // interior: full 4th-order stencil available on every nontrivial axis
  const int x_lo = nx > 1 ? 2 : 0, x_hi = nx > 1 ? nx - 3 : 0;
  const int y_lo = ny > 1 ? 2 : 0, y_hi = ny > 1 ? ny - 3 : 0;
  require(x_hi >= x_lo && y_hi >= y_lo,
          "grid too small for an interior divergence check");
  double worst = 0.0;
  for (int ix = x_lo; ix <= x_hi; ++ix)
    for (int iy = y_lo; iy <= y_hi; ++iy) {
      const Complex r = div[static_cast<size_t>(ix) * ny + iy] +
                        Complex(0.0, s * beta) * field.at(ix, iy)(2);
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

RateSet directional_rates(const DipoleSpec& dipole, const Vector3cd& field_plus,
                          double gamma_wg, double gamma_loss) {
  require(field_plus.norm() > 0, "field vector at the emitter must be nonzero");
  require(gamma_wg > 0, "gamma_wg must be positive");
  require(gamma_loss >= 0, "gamma_loss must be nonnegative");
  // Eigen's dot conjugates its first argument, so d.dot(E) = sum conj(d_i) E_i.
  const Complex overlap_p = dipole.d.dot(field_plus);
  const Complex overlap_m = dipole.d.dot(field_plus.conjugate());
  const double wp = std::norm(overlap_p);
  const double wm = std::norm(overlap_m);
  require(wp + wm > 0, "dipole is orthogonal to both propagation directions");
  return RateSet{gamma_wg * wp / (wp + wm), gamma_wg * wm / (wp + wm), gamma_loss};
}

BetaFactors beta_factors(const RateSet& rates) {
  require(rates.gamma_plus >= 0 && rates.gamma_minus >= 0 && rates.gamma_loss >= 0,
          "rates must be nonnegative");
  const double total = rates.gamma_plus + rates.gamma_minus + rates.gamma_loss;
  require(total > 0, "total rate must be positive");
  BetaFactors b;
  b.beta_plus = rates.gamma_plus / total;
  b.beta_minus = rates.gamma_minus / total;
  b.beta = b.beta_plus + b.beta_minus;
  return b;
}

}  // namespace chiralwg
