#include "chiralwg/scattering.hpp"

#include <cmath>
#include <limits>

namespace chiralwg {

namespace {

void check_betas(double bp, double bm) {
  require(bp >= 0 && bm >= 0, "beta factors must be nonnegative");
  require(bp + bm <= 1.0 + 1e-12, "beta_plus + beta_minus must not exceed 1");
}

ScatterSet finalize(Complex tp, Complex tm, Complex r) {
  ScatterSet s;
  s.t_plus = tp;
  s.t_minus = tm;
  s.r = r;
  s.a_plus = 1.0 - std::norm(tp) - std::norm(r);
  s.a_minus = 1.0 - std::norm(tm) - std::norm(r);
  return s;
}

struct TwoPort {
  Complex t_fwd, t_bwd, r_left, r_right;
};

TwoPort emitter_twoport(const ChainEmitter& e) {
  const ScatterSet s = scatter_spectrum(e.beta_plus, e.beta_minus, e.delta);
  return TwoPort{s.t_plus, s.t_minus, s.r, s.r};
}

// Star product of A (left) and B (right) with one-way propagation phase phi
// between them. Multiple internal reflections sum to the 1/D factor.
TwoPort star(const TwoPort& a, const TwoPort& b, double phi) {
  const Complex p = std::exp(Complex(0.0, phi));
  const Complex d = 1.0 - p * p * a.r_right * b.r_left;
  require(std::abs(d) > 1e-300, "degenerate cavity resonance in chain composition");
  TwoPort out;
  out.t_fwd = p * a.t_fwd * b.t_fwd / d;
  out.t_bwd = p * a.t_bwd * b.t_bwd / d;
  out.r_left = a.r_left + p * p * a.t_fwd * a.t_bwd * b.r_left / d;
  out.r_right = b.r_right + p * p * b.t_fwd * b.t_bwd * a.r_right / d;
  return out;
}

}  // namespace

void ChainSpec::validate() const {
  const size_t expected = emitters.empty() ? 0 : emitters.size() - 1;
  require(phases.size() == expected,
          "chain needs exactly one propagation phase between consecutive emitters");
  for (const auto& e : emitters) check_betas(e.beta_plus, e.beta_minus);
  for (double p : phases) require(std::isfinite(p), "propagation phase must be finite");
}

ScatterSet scatter_on_resonance(double beta_plus, double beta_minus) {
  check_betas(beta_plus, beta_minus);
  const double r = -2.0 * std::sqrt(beta_plus * beta_minus);
  return finalize(Complex(1.0 - 2.0 * beta_plus, 0.0),
                  Complex(1.0 - 2.0 * beta_minus, 0.0), Complex(r, 0.0));
}

ScatterSet scatter_spectrum(double beta_plus, double beta_minus, double delta) {
  check_betas(beta_plus, beta_minus);
  if (delta == 0.0) return scatter_on_resonance(beta_plus, beta_minus);
  const Complex line = 1.0 / Complex(1.0, -2.0 * delta);
  return finalize(1.0 - 2.0 * beta_plus * line, 1.0 - 2.0 * beta_minus * line,
                  -2.0 * std::sqrt(beta_plus * beta_minus) * line);
}

TwoPortScatter chain_smatrix(const ChainSpec& chain) {
  chain.validate();
  TwoPort acc{1.0, 1.0, 0.0, 0.0};
  for (size_t j = 0; j < chain.emitters.size(); ++j) {
    const TwoPort e = emitter_twoport(chain.emitters[j]);
    acc = j == 0 ? e : star(acc, e, chain.phases[j - 1]);
  }
  return TwoPortScatter{acc.t_fwd, acc.t_bwd, acc.r_left, acc.r_right};
}

TwoPortScatter chain_smatrix_via_transfer(const ChainSpec& chain) {
  chain.validate();
  using Eigen::Matrix2cd;
  Matrix2cd total = Matrix2cd::Identity();
  for (size_t j = 0; j < chain.emitters.size(); ++j) {
    if (j > 0) {
      const Complex p = std::exp(Complex(0.0, chain.phases[j - 1]));
      Matrix2cd prop = Matrix2cd::Zero();
      prop(0, 0) = p;
      prop(1, 1) = 1.0 / p;
      total = prop * total;
    }
    const TwoPort e = emitter_twoport(chain.emitters[j]);
    if (std::abs(e.t_bwd) < 1e-12) {
      throw std::runtime_error(
          "singular transfer matrix (t = 0); use chain_smatrix");
    }
    Matrix2cd t;
    t(0, 0) = e.t_fwd - e.r_left * e.r_right / e.t_bwd;
    t(0, 1) = e.r_right / e.t_bwd;
    t(1, 0) = -e.r_left / e.t_bwd;
    t(1, 1) = 1.0 / e.t_bwd;
    total = t * total;
  }
  TwoPortScatter s;
  s.t_bwd = 1.0 / total(1, 1);
  s.t_fwd = total(0, 0) - total(0, 1) * total(1, 0) / total(1, 1);
  s.r_right = total(0, 1) / total(1, 1);
  s.r_left = -total(1, 0) / total(1, 1);
  return s;
}

ChainTransmission chain_transmission(const ChainSpec& chain, Direction direction) {
  const TwoPortScatter s = chain_smatrix(chain);
  const Complex t = direction == Direction::forward ? s.t_fwd : s.t_bwd;
  return ChainTransmission{t, std::norm(t)};
}

IsolationMetrics isolation_metrics(const ChainSpec& chain) {
  const TwoPortScatter s = chain_smatrix(chain);
  const double tf = std::norm(s.t_fwd);
  const double tb = std::norm(s.t_bwd);
  IsolationMetrics m;
  m.pass = tf >= tb ? Direction::forward : Direction::backward;
  const double pass = std::max(tf, tb);
  const double block = std::min(tf, tb);
  require(pass > 0, "chain is opaque in both directions");
  m.insertion_loss_db = -10.0 * std::log10(pass);
  m.isolation_db = block == 0.0 ? std::numeric_limits<double>::infinity()
                                : 10.0 * std::log10(pass / block);
  m.reciprocal = tf == tb;
  return m;
}

Eigen::Matrix4cd circulator_smatrix_arms(const Complex& arm_fwd,
                                         const Complex& arm_bwd,
                                         double reflectivity) {
  require(reflectivity >= 0.0 && reflectivity <= 1.0,
          "beamsplitter reflectivity must lie in [0, 1]");
  using Eigen::Matrix2cd;
  Matrix2cd bs;
  const double tt = std::sqrt(1.0 - reflectivity);
  const Complex rr = Complex(0.0, 1.0) * std::sqrt(reflectivity);
  bs << tt, rr, rr, tt;

  auto mzi = [&](const Complex& arm) {
    Matrix2cd phase = Matrix2cd::Identity();
    phase(0, 0) = arm;  // emitter sits in the upper arm
    return Matrix2cd(bs * phase * bs);
  };
  const Matrix2cd fwd = mzi(arm_fwd);   // inputs (1,3) -> outputs (2,4)
  const Matrix2cd bwd = mzi(arm_bwd);   // inputs (2,4) -> outputs (1,3)

  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  s(1, 0) = fwd(0, 0);
  s(1, 2) = fwd(0, 1);
  s(3, 0) = fwd(1, 0);
  s(3, 2) = fwd(1, 1);
  s(0, 1) = bwd(0, 0);
  s(0, 3) = bwd(0, 1);
  s(2, 1) = bwd(1, 0);
  s(2, 3) = bwd(1, 1);
  return s;
}

Eigen::Matrix4cd circulator_smatrix(double phi_fwd, double phi_bwd,
                                    double reflectivity) {
  return circulator_smatrix_arms(std::exp(Complex(0.0, phi_fwd)),
                                 std::exp(Complex(0.0, phi_bwd)), reflectivity);
}

}  // namespace chiralwg
