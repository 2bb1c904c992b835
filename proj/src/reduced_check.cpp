#include <array>
#include <cmath>

#include "chiralwg/master_equation.hpp"

namespace chiralwg {

namespace {

// classic RK4 with a fixed step; identical step sequences for every initial
// state keep the reduced-dynamics comparison free of controller noise
MatrixXcd rk4_step(const Generator& gen, const MatrixXcd& rho, double h) {
  const MatrixXcd k1 = gen.apply(rho);
  const MatrixXcd k2 = gen.apply(rho + 0.5 * h * k1);
  const MatrixXcd k3 = gen.apply(rho + 0.5 * h * k2);
  const MatrixXcd k4 = gen.apply(rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

ReducedCheckReport reduced_generator_check(const Generator& gen, double t_final,
                                           int n_steps, double closed_tol) {
  require(gen.sites == 2, "reduced check requires exactly two emitters");
  require(t_final > 0 && n_steps > 0, "invalid time grid");

  // emitter 1 starts in (|g>+|e>)/sqrt(2); emitter 2 varies over g, e, +
  Eigen::Vector2cd plus;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd g, e;
  g << 1.0, 0.0;
  e << 0.0, 1.0;
  const Eigen::Matrix2cd rho1 = plus * plus.adjoint();
  const std::array<Eigen::Matrix2cd, 3> rho2 = {
      g * g.adjoint(), e * e.adjoint(), plus * plus.adjoint()};

  std::array<MatrixXcd, 3> rho;
  for (size_t i = 0; i < 3; ++i) rho[i] = kron(rho1, rho2[i]);

  const double h = t_final / n_steps;
  const int sample_every = std::max(1, n_steps / 100);
  double worst = 0.0;

  auto compare = [&]() {
    std::array<DensityMatrix, 3> reduced;
    for (size_t i = 0; i < 3; ++i) {
      MatrixXcd m = DensityMatrix(rho[i]).mat;  // dimension check
      reduced[i] = partial_trace(DensityMatrix(std::move(m)), {0});
    }
    for (size_t i = 0; i < 3; ++i) {
      for (size_t j = i + 1; j < 3; ++j) {
        worst = std::max(worst, trace_distance(reduced[i], reduced[j]));
      }
    }
  };

  compare();
  for (int s = 1; s <= n_steps; ++s) {
    for (auto& r : rho) r = rk4_step(gen, r, h);
    if (s % sample_every == 0 || s == n_steps) compare();
  }

  ReducedCheckReport rep;
  rep.max_divergence = worst;
  rep.closed = worst < closed_tol;
  return rep;
}

}  // namespace chiralwg
