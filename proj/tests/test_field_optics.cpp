#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "chiralwg/field_optics.hpp"

using namespace chiralwg;

namespace {

FieldMap gaussian_beam(double w, double half_width, int n) {
  FieldMap m;
  m.lambda_nm = 852.0;
  m.direction = Direction::forward;
  m.xs.resize(static_cast<size_t>(n));
  m.ys.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    m.xs[static_cast<size_t>(i)] = -half_width + 2.0 * half_width * i / (n - 1);
    m.ys[static_cast<size_t>(i)] = m.xs[static_cast<size_t>(i)];
  }
  m.amps.resize(static_cast<size_t>(n) * n);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double x = m.xs[static_cast<size_t>(ix)], y = m.ys[static_cast<size_t>(iy)];
      m.at(ix, iy) = Vector3cd(std::exp(-(x * x + y * y) / (w * w)), 0.0, 0.0);
    }
  return m;
}

}  // namespace

TEST_CASE("uniform plane wave has no longitudinal component") {
  FieldMap m;
  m.lambda_nm = 852.0;
  m.xs = {0.0, 0.05, 0.1, 0.15, 0.2};
  m.ys = {0.0, 0.05, 0.1, 0.15, 0.2};
  m.amps.assign(25, Vector3cd(1.0, 0.0, 0.0));
  const FieldMap out = longitudinal_component(m, Direction::forward);
  for (const auto& a : out.amps) CHECK(std::abs(a(2)) == 0.0);
}

TEST_CASE("Gaussian beam longitudinal component matches the analytic derivative") {
  // lambda/20 spacing: 121 points across [-3, 3] lambda
  const double w = 1.0;
  const FieldMap m = gaussian_beam(w, 3.0, 121);
  CHECK(m.dx() == doctest::Approx(0.05));

  const double k = 2.0 * kPi;
  for (Direction dir : {Direction::forward, Direction::backward}) {
    const FieldMap out = longitudinal_component(m, dir);
    const double sign = dir == Direction::forward ? 1.0 : -1.0;
    double num = 0.0, peak = 0.0;
    for (int ix = 0; ix < m.nx(); ++ix)
      for (int iy = 0; iy < m.ny(); ++iy) {
        const double x = m.xs[static_cast<size_t>(ix)];
        const Complex exact = sign * Complex(0.0, 1.0) / k * (-2.0 * x / (w * w)) *
                              m.at(ix, iy)(0);
        num = std::max(num, std::abs(out.at(ix, iy)(2) - exact));
        peak = std::max(peak, std::abs(exact));
      }
    CHECK(num / peak < 1e-4);
  }
}

TEST_CASE("direction flip negates the longitudinal component") {
  const FieldMap m = gaussian_beam(1.0, 3.0, 121);
  const FieldMap fwd = longitudinal_component(m, Direction::forward);
  const FieldMap bwd = longitudinal_component(m, Direction::backward);
  for (size_t i = 0; i < fwd.amps.size(); ++i) {
    CHECK(fwd.amps[i](2) == -bwd.amps[i](2));
  }
}

TEST_CASE("coarse grids are refused with a diagnostic") {
  FieldMap m;
  m.lambda_nm = 852.0;
  m.xs = {0.0, 0.2, 0.4};
  m.ys = {0.0};
  m.amps.assign(3, Vector3cd(1.0, 0.0, 0.0));
  CHECK_THROWS_WITH_AS(longitudinal_component(m, Direction::forward),
                       doctest::Contains("too coarse"), std::invalid_argument);
}

TEST_CASE("spin density of canonical polarizations") {
  FieldMap m;
  m.lambda_nm = 852.0;
  m.xs = {0.0};
  m.ys = {0.0};
  const double e0 = 2.0;
  m.amps = {Vector3cd(e0 / std::sqrt(2.0), Complex(0.0, e0 / std::sqrt(2.0)), 0.0)};
  const SpinDensityMap circ = electric_spin_density(m);
  CHECK(circ.values[0](2) == doctest::Approx(e0 * e0 / 2.0));
  CHECK(std::abs(circ.values[0](0)) < 1e-15);
  CHECK(std::abs(circ.values[0](1)) < 1e-15);

  m.amps = {Vector3cd(e0, 0.0, 0.0)};
  const SpinDensityMap lin = electric_spin_density(m);
  CHECK(lin.values[0].norm() == 0.0);
}

TEST_CASE("TIR evanescent field: transverse spin along +y, paper benchmark") {
  const double n1 = 1.45, n2 = 1.0;
  const double theta = 0.5 * kPi;  // grazing incidence
  GridSpec grid;
  grid.x0 = 0.0;
  grid.x1 = 0.5;
  grid.nx = 101;
  const FieldMap m = tir_evanescent_field(n1, n2, theta, 852.0, grid);

  // unit peak intensity at the interface
  CHECK(m.at(0, 0).squaredNorm() == doctest::Approx(1.0));
  // p-polarized: no y-component; longitudinal and normal components pi/2 apart
  for (const auto& a : m.amps) {
    CHECK(std::abs(a(1)) == 0.0);
    CHECK(a(0).imag() == 0.0);
    CHECK(a(2).real() == 0.0);
  }

  const SpinDensityMap spin = electric_spin_density(m);
  for (const auto& v : spin.values) {
    CHECK(v(1) > 0.0);               // along +y
    CHECK(std::abs(v(0)) < 1e-15);   // purely transverse
    CHECK(std::abs(v(2)) < 1e-15);
  }

  // photon spin expectation vs the boundary-condition closed form
  const double beta = tir_propagation_constant(n1, theta);
  const double kappa = tir_decay_constant(n1, n2, theta);
  const double formula = 2.0 * beta * kappa / (beta * beta + kappa * kappa);
  const Vector3d s = photon_spin_expectation(m);
  CHECK(std::abs(s(1) - formula) < 1e-12);
  CHECK(std::abs(s(1) - 0.96) < 0.01);  // close to the maximum of one hbar
  CHECK(std::abs(s(0)) < 1e-15);
  CHECK(std::abs(s(2)) < 1e-15);

  // backward propagation flips the transverse spin
  const FieldMap bwd = tir_evanescent_field(n1, n2, theta, 852.0, grid,
                                            Direction::backward);
  CHECK(photon_spin_expectation(bwd)(1) == doctest::Approx(-s(1)));
}

TEST_CASE("TIR limiting and error cases") {
  GridSpec grid;
  grid.x0 = 0.0;
  grid.x1 = 0.3;
  grid.nx = 31;
  // just above the critical angle the field becomes propagating and linear
  const double critical = std::asin(1.0 / 1.45);
  const FieldMap near = tir_evanescent_field(1.45, 1.0, critical + 1e-4, 852.0, grid);
  CHECK(photon_spin_expectation(near)(1) < 0.05);

  CHECK_THROWS_WITH_AS(
      tir_evanescent_field(1.45, 1.0, critical - 1e-3, 852.0, grid),
      doctest::Contains("no total internal reflection"), std::invalid_argument);
}

TEST_CASE("TIR field satisfies the divergence condition") {
  const double n1 = 1.45, n2 = 1.0, theta = 0.5 * kPi;
  GridSpec grid;
  grid.x0 = 0.0;
  grid.x1 = 0.5;
  grid.nx = 101;  // lambda/200 spacing
  const FieldMap m = tir_evanescent_field(n1, n2, theta, 852.0, grid);
  const double beta = tir_propagation_constant(n1, theta);
  double peak = 0.0;
  for (const auto& a : m.amps) peak = std::max(peak, a.norm());
  CHECK(divergence_residual(m, beta) < 1e-6 * peak);
}

TEST_CASE("spin-momentum locking at field level") {
  const FieldMap m = tir_evanescent_field(1.45, 1.0, 1.3, 852.0,
                                          GridSpec{0.0, 0.4, 41, 0.0, 0.0, 1});
  const FieldMap flipped = flip_direction(m);
  const SpinDensityMap s = electric_spin_density(m);
  const SpinDensityMap sf = electric_spin_density(flipped);
  for (size_t i = 0; i < s.values.size(); ++i) {
    CHECK((s.values[i] + sf.values[i]).norm() < 1e-15);
  }
}

TEST_CASE("directional rates") {
  const DipoleSpec sigma_plus = circular_dipole(+1);
  const Vector3cd matched(1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0)),
                          0.0);
  const RateSet fully = directional_rates(sigma_plus, matched, 1.0, 0.0);
  CHECK(fully.gamma_plus == doctest::Approx(1.0));
  CHECK(fully.gamma_minus == doctest::Approx(0.0));

  const DipoleSpec linear = make_dipole(Vector3cd(1.0, 0.0, 0.0));
  const RateSet sym = directional_rates(linear, matched, 2.0, 0.5);
  CHECK(sym.gamma_plus == doctest::Approx(sym.gamma_minus));
  CHECK(sym.gamma_plus + sym.gamma_minus == doctest::Approx(2.0));
  CHECK(sym.gamma_loss == 0.5);

  CHECK_THROWS_AS(directional_rates(linear, Vector3cd::Zero(), 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("directional rates in the TIR field vs direct overlaps") {
  const double n1 = 1.45, n2 = 1.0, theta = 80.0 * kPi / 180.0;
  const FieldMap m = tir_evanescent_field(n1, n2, theta, 852.0,
                                          GridSpec{0.0, 0.1, 11, 0.0, 0.0, 1});
  const Vector3cd field = m.at(0, 0);
  // circular dipole in the plane of field rotation (x-z)
  const DipoleSpec d = make_dipole(Vector3cd(1.0, 0.0, Complex(0.0, -1.0)));
  const RateSet r = directional_rates(d, field, 1.0, 0.0);

  // brute-force overlap oracle
  auto overlap2 = [&](const Vector3cd& e) {
    Complex acc = 0.0;
    for (int c = 0; c < 3; ++c) acc += std::conj(d.d(c)) * e(c);
    return std::norm(acc);
  };
  const double wp = overlap2(field);
  const double wm = overlap2(field.conjugate());
  CHECK(r.gamma_plus == doctest::Approx(wp / (wp + wm)));
  CHECK(r.gamma_minus == doctest::Approx(wm / (wp + wm)));
  const double asym = (r.gamma_plus - r.gamma_minus) / (r.gamma_plus + r.gamma_minus);
  CHECK(asym > 0.9);  // strongly directional near grazing

  // invariance under global phases of dipole and field
  const DipoleSpec d_rot = make_dipole(d.d * std::polar(1.0, 0.7));
  const RateSet r_rot = directional_rates(d_rot, field * std::polar(1.0, -1.1), 1.0, 0.0);
  CHECK(r_rot.gamma_plus == doctest::Approx(r.gamma_plus).epsilon(1e-12));
  CHECK(r_rot.gamma_minus == doctest::Approx(r.gamma_minus).epsilon(1e-12));
}

TEST_CASE("beta factors") {
  const BetaFactors ideal = beta_factors(RateSet{1.0, 0.0, 0.0});
  CHECK(ideal.beta_plus == 1.0);
  CHECK(ideal.beta_minus == 0.0);
  CHECK(ideal.beta == 1.0);

  const BetaFactors mixed = beta_factors(RateSet{1.0, 1.0, 2.0});
  CHECK(mixed.beta_plus == 0.25);
  CHECK(mixed.beta_minus == 0.25);
  CHECK(mixed.beta == 0.5);

  // the perfect chiral absorber point
  const BetaFactors absorber = beta_factors(RateSet{1.0, 0.0, 1.0});
  CHECK(absorber.beta_plus == 0.5);
  CHECK(absorber.beta_minus == 0.0);

  // exact closure: beta_plus + beta_minus + loss fraction = 1
  const RateSet r{0.3, 0.45, 1.2};
  const BetaFactors b = beta_factors(r);
  const double total = r.gamma_plus + r.gamma_minus + r.gamma_loss;
  CHECK(b.beta_plus + b.beta_minus + r.gamma_loss / total == 1.0);

  CHECK_THROWS_AS(beta_factors(RateSet{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("field map save/load round-trips bitwise") {
  const FieldMap m = tir_evanescent_field(1.45, 1.0, 1.2, 852.0,
                                          GridSpec{0.0, 0.25, 13, -0.1, 0.1, 3});
  const std::string path = "/tmp/chiralwg_test_field_map.csv";
  save_field_map(m, path);
  const FieldMap loaded = load_field_map(path);
  REQUIRE(loaded.nx() == m.nx());
  REQUIRE(loaded.ny() == m.ny());
  CHECK(loaded.lambda_nm == m.lambda_nm);
  CHECK(loaded.direction == m.direction);
  for (size_t i = 0; i < m.amps.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      CHECK(loaded.amps[i](c).real() == m.amps[i](c).real());
      CHECK(loaded.amps[i](c).imag() == m.amps[i](c).imag());
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("field map loader rejects malformed input") {
  const std::string path = "/tmp/chiralwg_test_bad_map.csv";
  {
    std::ofstream out(path);
    out << "# lambda_nm=852 direction=forward\n";
    out << "x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez\n";
    out << "0,0,1,0,0,0,0,0\n";
    out << "0.1,0,1,0,0,0,0,0\n";
    out << "0.3,0,1,0,0,0,0,0\n";  // non-uniform x spacing
  }
  CHECK_THROWS_WITH_AS(load_field_map(path), doctest::Contains("non-uniform"),
                       std::invalid_argument);
  {
    std::ofstream out(path);
    out << "# lambda_nm=852 direction=forward\n";
    out << "x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez\n";
    out << "0,0,1,0,0,0\n";  // missing columns
  }
  CHECK_THROWS_WITH_AS(load_field_map(path), doctest::Contains("columns"),
                       std::invalid_argument);
  {
    std::ofstream out(path);
    out << "x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez\n";
  }
  CHECK_THROWS_AS(load_field_map(path), std::invalid_argument);
  std::remove(path.c_str());

  // a well-formed two-point file loads
  {
    std::ofstream out(path);
    out << "# lambda_nm=780 direction=backward\n";
    out << "x,y,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez\n";
    out << "0,0,1,0,0,0,0,0\n";
    out << "0.05,0,0.5,0.25,0,0,0,0\n";
  }
  const FieldMap two = load_field_map(path);
  CHECK(two.nx() == 2);
  CHECK(two.ny() == 1);
  CHECK(two.direction == Direction::backward);
  CHECK(two.amps[1](0) == Complex(0.5, 0.25));
  std::remove(path.c_str());
}
