#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "chiralwg/master_equation.hpp"

using namespace chiralwg;

namespace {

EmitterSpec emitter(double x, double gr, double gl, double loss = 0.0) {
  EmitterSpec e;
  e.x = x;
  e.gamma_right = gr;
  e.gamma_left = gl;
  e.gamma_loss = loss;
  return e;
}

ChiralChannel pair_channel(double kd_over_2pi, double gr, double gl,
                           double loss = 0.0) {
  ChiralChannel ch;
  // k = 2*pi, so a separation of m + kd/(2 pi) wavelengths realizes the phase
  ch.emitters = {emitter(0.0, gr, gl, loss),
                 emitter(1.0 + kd_over_2pi, gr, gl, loss)};
  return ch;
}

DensityMatrix random_hermitian_state(int sites, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  const long d = 1L << sites;
  MatrixXcd g(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(rho);
}

void check_generator_invariants(const Generator& gen, unsigned seed) {
  // anti-Hermitian part of H_eff = -(i/2) sum rate J^dag J
  MatrixXcd damping = MatrixXcd::Zero(gen.dim(), gen.dim());
  for (const auto& jc : gen.jumps) {
    damping += jc.rate * (jc.op.mat.adjoint() * jc.op.mat);
  }
  const MatrixXcd anti = 0.5 * (gen.h_eff.mat - gen.h_eff.mat.adjoint());
  CHECK((anti - Complex(0.0, -0.5) * damping).cwiseAbs().maxCoeff() < 1e-12);

  // trace preservation and Hermiticity preservation
  const DensityMatrix rho = random_hermitian_state(gen.sites, seed);
  const MatrixXcd lrho = gen.apply(rho.mat);
  CHECK(std::abs(lrho.trace()) < 1e-12);
  CHECK((lrho - lrho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  // generator applied to I/dim is traceless
  const MatrixXcd id = MatrixXcd::Identity(gen.dim(), gen.dim()) /
                       static_cast<double>(gen.dim());
  CHECK(std::abs(gen.apply(id).trace()) < 1e-13);

  // superoperator route agrees with the matrix-free route
  const MatrixXcd sup = gen.superoperator();
  const VectorXcd v = Eigen::Map<const VectorXcd>(rho.mat.data(), gen.dim() * gen.dim());
  const VectorXcd lv = sup * v;
  const MatrixXcd from_sup =
      Eigen::Map<const MatrixXcd>(lv.data(), gen.dim(), gen.dim());
  CHECK((from_sup - lrho).cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace

TEST_CASE("single cascaded emitter reduces to plain decay") {
  ChiralChannel ch;
  ch.emitters = {emitter(0.0, 1.3, 0.0)};
  const Generator gen = build_cascaded(ch);
  // H_eff = -(i gamma / 2) n
  MatrixXcd expected = MatrixXcd::Zero(2, 2);
  expected(1, 1) = Complex(0.0, -0.65);
  CHECK((gen.h_eff.mat - expected).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(gen.jumps.size() == 1);
  CHECK(gen.jumps[0].label == "right");
  check_generator_invariants(gen, 1);
}

TEST_CASE("cascaded pair reproduces the printed effective Hamiltonian") {
  const double gamma = 1.0;
  const Generator gen = build_cascaded(pair_channel(0.0, gamma, 0.0));

  // H_eff = -(i gamma/2) (n1 + n2 + 2 sigma2^+ sigma1^-)
  const MatrixXcd n1 = embed_operator(number_op(), 0, 2).mat;
  const MatrixXcd n2 = embed_operator(number_op(), 1, 2).mat;
  const MatrixXcd cross = embed_operator(raising_op(), 1, 2).mat *
                          embed_operator(lowering_op(), 0, 2).mat;
  const MatrixXcd expected = Complex(0.0, -0.5 * gamma) * (n1 + n2 + 2.0 * cross);
  CHECK((gen.h_eff.mat - expected).cwiseAbs().maxCoeff() < 1e-14);

  // single collective jump sigma1^- + sigma2^-
  REQUIRE(gen.jumps.size() == 1);
  const MatrixXcd jump_expected = embed_operator(lowering_op(), 0, 2).mat +
                                  embed_operator(lowering_op(), 1, 2).mat;
  CHECK((gen.jumps[0].op.mat - jump_expected).cwiseAbs().maxCoeff() < 1e-14);
  check_generator_invariants(gen, 2);

  ChiralChannel bad = pair_channel(0.3, 1.0, 0.2);
  CHECK_THROWS_AS(build_cascaded(bad), std::invalid_argument);
}

TEST_CASE("cascaded spectrum is position-independent") {
  // distinct rates keep the spectrum simple (no defective clusters)
  auto channel_at = [](double x2) {
    ChiralChannel ch;
    ch.emitters = {emitter(0.0, 1.0, 0.0, 0.1), emitter(x2, 1.7, 0.0, 0.2)};
    return ch;
  };
  const MatrixXcd a = build_cascaded(channel_at(0.3)).superoperator();
  const MatrixXcd b = build_cascaded(channel_at(0.77)).superoperator();
  Eigen::ComplexEigenSolver<MatrixXcd> ea(a, false), eb(b, false);
  std::vector<Complex> la(ea.eigenvalues().data(), ea.eigenvalues().data() + 16);
  std::vector<Complex> lb(eb.eigenvalues().data(), eb.eigenvalues().data() + 16);
  auto by_parts = [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(la.begin(), la.end(), by_parts);
  std::sort(lb.begin(), lb.end(), by_parts);
  for (size_t i = 0; i < la.size(); ++i) CHECK(std::abs(la[i] - lb[i]) < 1e-10);
}

TEST_CASE("bidirectional pair at zero phase: dark singlet, superradiant triplet") {
  const double gamma = 1.0;
  const Generator gen = build_bidirectional(pair_channel(0.0, gamma, gamma));
  check_generator_invariants(gen, 3);

  VectorXcd singlet = VectorXcd::Zero(4), triplet = VectorXcd::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  triplet(1) = 1.0 / std::sqrt(2.0);
  triplet(2) = 1.0 / std::sqrt(2.0);

  // the singlet is stationary; the triplet decays at 4 gamma
  const MatrixXcd l_singlet = gen.apply(singlet * singlet.adjoint());
  CHECK(l_singlet.cwiseAbs().maxCoeff() < 1e-12);
  const MatrixXcd l_triplet = gen.apply(triplet * triplet.adjoint());
  const double rate = -(triplet.adjoint() * l_triplet * triplet)(0).real();
  CHECK(rate == doctest::Approx(4.0 * gamma).epsilon(1e-12));

  CHECK_THROWS_AS(build_bidirectional(pair_channel(0.0, 1.0, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("bidirectional pair at quarter wavelength: maximal coherent coupling") {
  const double gamma = 0.8;
  const Generator gen = build_bidirectional(pair_channel(0.25, gamma, gamma));
  // Hermitian part of H_eff carries gamma (sigma1^+ sigma2^- + h.c.)
  const MatrixXcd herm = 0.5 * (gen.h_eff.mat + gen.h_eff.mat.adjoint());
  const MatrixXcd ex = embed_operator(raising_op(), 0, 2).mat *
                       embed_operator(lowering_op(), 1, 2).mat;
  const MatrixXcd expected = gamma * (ex + ex.adjoint());
  CHECK((herm - expected).cwiseAbs().maxCoeff() < 1e-12);
  // cross-dissipation vanishes: L(|eg><eg|) has no |ge><ge| recycling feed
  // (cosine coefficient matrix is diagonal at kd = pi/2)
  VectorXcd eg = VectorXcd::Zero(4);
  eg(2) = 1.0;
  const MatrixXcd l_eg = gen.apply(eg * eg.adjoint());
  CHECK(std::abs(l_eg(1, 1)) < 1e-12);
}

TEST_CASE("single bidirectional emitter decays at 2 gamma") {
  ChiralChannel ch;
  ch.emitters = {emitter(0.0, 0.7, 0.7)};
  const Generator gen = build_bidirectional(ch);
  MatrixXcd damping = MatrixXcd::Zero(2, 2);
  for (const auto& jc : gen.jumps) damping += jc.rate * (jc.op.mat.adjoint() * jc.op.mat);
  CHECK(damping(1, 1).real() == doctest::Approx(1.4).epsilon(1e-14));
}

TEST_CASE("chiral generator reduces to both printed limits") {
  std::mt19937 rng(9001);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 5; ++trial) {
      ChiralChannel ch;
      double x = 0.0;
      for (int j = 0; j < n; ++j) {
        x += 0.1 + 2.0 * uni(rng);
        EmitterSpec e = emitter(x, 0.2 + uni(rng), 0.0, 0.5 * uni(rng));
        e.detuning = uni(rng) - 0.5;
        e.drive = Complex(uni(rng) - 0.5, uni(rng) - 0.5);
        ch.emitters.push_back(e);
      }
      // gamma_left = 0: must match the cascaded construction entrywise
      const MatrixXcd diff_casc = build_chiral(ch).superoperator() -
                                  build_cascaded(ch).superoperator();
      CHECK(diff_casc.cwiseAbs().maxCoeff() < 1e-12);

      // gamma_left = gamma_right: must match the bidirectional construction
      for (auto& e : ch.emitters) e.gamma_left = e.gamma_right;
      const MatrixXcd diff_bid = build_chiral(ch).superoperator() -
                                 build_bidirectional(ch).superoperator();
      CHECK(diff_bid.cwiseAbs().maxCoeff() < 1e-12);

      check_generator_invariants(build_chiral(ch), 100 + static_cast<unsigned>(n));
    }
  }
}

TEST_CASE("chiral generator carries right, left and loss channels") {
  const Generator gen = build_chiral(pair_channel(0.3, 1.0, 0.4, 0.2));
  REQUIRE(gen.jumps.size() == 4);
  CHECK(gen.jumps[0].label == "right");
  CHECK(gen.jumps[1].label == "left");
  CHECK(gen.jumps[2].label == "loss:0");
  CHECK(gen.jumps[3].label == "loss:1");
  check_generator_invariants(gen, 4);
}

TEST_CASE("add_drive") {
  const Generator gen = build_cascaded(pair_channel(0.0, 1.0, 0.0));
  // zero drive leaves the generator unchanged
  const Generator same = add_drive(gen, {Complex(0, 0), Complex(0, 0)}, {0.0, 0.0});
  CHECK((same.h_eff.mat - gen.h_eff.mat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.h_sys.mat - gen.h_sys.mat).cwiseAbs().maxCoeff() == 0.0);

  const Complex om(0.2, 0.1);
  const Generator driven = add_drive(gen, {om, om}, {0.3, 0.3});
  const MatrixXcd dh = driven.h_sys.mat - gen.h_sys.mat;
  MatrixXcd expected = MatrixXcd::Zero(4, 4);
  for (int j = 0; j < 2; ++j) {
    const MatrixXcd sm = embed_operator(lowering_op(), j, 2).mat;
    expected += om * sm.adjoint() + std::conj(om) * sm;
    expected -= 0.3 * embed_operator(number_op(), j, 2).mat;
  }
  CHECK((dh - expected).cwiseAbs().maxCoeff() < 1e-15);
  // dissipative part untouched
  CHECK((driven.h_eff.mat - driven.h_sys.mat -
         (gen.h_eff.mat - gen.h_sys.mat)).cwiseAbs().maxCoeff() < 1e-15);
  check_generator_invariants(driven, 5);

  CHECK_THROWS_AS(add_drive(gen, {om}, {0.0}), std::invalid_argument);
}

TEST_CASE("reduced dynamics: cascaded closed, bidirectional not") {
  const Generator cascaded = build_cascaded(pair_channel(0.13, 1.0, 0.0));
  const ReducedCheckReport closed = reduced_generator_check(cascaded, 20.0);
  CHECK(closed.max_divergence < 1e-10);
  CHECK(closed.closed);

  const Generator bidir = build_bidirectional(pair_channel(0.25, 1.0, 1.0));
  const ReducedCheckReport open = reduced_generator_check(bidir, 20.0);
  CHECK(open.max_divergence > 1e-3);
  CHECK(!open.closed);

  // loss-only channel: emitters are independent, divergence at roundoff
  const Generator loss_only = build_chiral(pair_channel(0.4, 0.0, 0.0, 1.0));
  CHECK(reduced_generator_check(loss_only, 20.0).max_divergence < 1e-13);

  CHECK_THROWS_AS(reduced_generator_check(
                      build_cascaded(ChiralChannel{{emitter(0.0, 1.0, 0.0)}, 2.0 * kPi}),
                      20.0),
                  std::invalid_argument);
}

TEST_CASE("channel validation") {
  ChiralChannel ch;
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
  ch.emitters = {emitter(0.0, 1.0, 0.0), emitter(0.0, 1.0, 0.0)};
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);  // non-increasing x
  ch.emitters = {emitter(0.0, 0.0, 0.0)};
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);  // no decay channel
  ch.emitters = {emitter(0.0, -1.0, 0.0)};
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);  // negative rate
}
