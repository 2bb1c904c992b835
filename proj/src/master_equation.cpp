#include "chiralwg/master_equation.hpp"

#include <cmath>

namespace chiralwg {

namespace {

Operator site_lowering(int j, int n) { return embed_operator(lowering_op(), j, n); }
Operator site_number(int j, int n) { return embed_operator(number_op(), j, n); }

MatrixXcd drive_hamiltonian(const ChiralChannel& ch) {
  const int n = ch.size();
  const long d = 1L << n;
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const EmitterSpec& e = ch.emitters[static_cast<size_t>(j)];
    if (e.detuning != 0.0) h -= e.detuning * site_number(j, n).mat;
    if (e.drive != Complex(0.0, 0.0)) {
      const MatrixXcd sm = site_lowering(j, n).mat;
      h += e.drive * sm.adjoint() + std::conj(e.drive) * sm;
    }
  }
  return h;
}

void append_loss_jumps(const ChiralChannel& ch, std::vector<JumpChannel>& jumps) {
  for (int j = 0; j < ch.size(); ++j) {
    const double g = ch.emitters[static_cast<size_t>(j)].gamma_loss;
    if (g > 0.0) {
      jumps.push_back({site_lowering(j, ch.size()), g, "loss:" + std::to_string(j)});
    }
  }
}

// Collective jump for one propagation direction: sum_j sqrt(gamma_j)
// e^{-i s k x_j} sigma_j^-, s = +1 for right-movers, -1 for left-movers.
MatrixXcd collective_jump(const ChiralChannel& ch, bool right,
                          double (*rate_of)(const EmitterSpec&)) {
  const int n = ch.size();
  const long d = 1L << n;
  const double s = right ? 1.0 : -1.0;
  MatrixXcd op = MatrixXcd::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const EmitterSpec& e = ch.emitters[static_cast<size_t>(j)];
    const double g = rate_of(e);
    if (g > 0.0) {
      op += std::sqrt(g) * std::exp(Complex(0.0, -s * ch.wavenumber * e.x)) *
            site_lowering(j, n).mat;
    }
  }
  return op;
}

double right_rate(const EmitterSpec& e) { return e.gamma_right; }
double left_rate(const EmitterSpec& e) { return e.gamma_left; }

// Cascade pieces for one direction: the coherent exchange term
// -(i/2)(J_down^+ J_up^- - h.c.) summed over ordered pairs, written out as
// -i sqrt(g_j g_l) e^{ik|x_j-x_l|} sigma_j^+ sigma_l^- for j downstream of l,
// split into its Hermitian and anti-Hermitian parts by the caller.
MatrixXcd cascade_cross_term(const ChiralChannel& ch, bool right,
                             double (*rate_of)(const EmitterSpec&)) {
  const int n = ch.size();
  const long d = 1L << n;
  MatrixXcd cross = MatrixXcd::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const EmitterSpec& ej = ch.emitters[static_cast<size_t>(j)];
      const EmitterSpec& el = ch.emitters[static_cast<size_t>(l)];
      const bool downstream = right ? ej.x > el.x : ej.x < el.x;
      if (!downstream) continue;
      const double g = std::sqrt(rate_of(ej) * rate_of(el));
      if (g == 0.0) continue;
      const double dist = std::abs(ej.x - el.x);
      const Complex phase = std::exp(Complex(0.0, ch.wavenumber * dist));
      cross += Complex(0.0, -1.0) * g * phase *
               (site_lowering(j, n).mat.adjoint() * site_lowering(l, n).mat);
    }
  }
  return cross;
}

Generator assemble(const ChiralChannel& ch, MatrixXcd h_sys, MatrixXcd h_exchange,
                   std::vector<JumpChannel> jumps) {
  const long d = h_sys.rows();
  MatrixXcd damping = MatrixXcd::Zero(d, d);
  for (const auto& jc : jumps) {
    damping += jc.rate * (jc.op.mat.adjoint() * jc.op.mat);
  }
  Generator g;
  g.sites = ch.size();
  g.h_eff = Operator(h_sys + h_exchange - Complex(0.0, 0.5) * damping);
  g.h_sys = Operator::hermitian_operator(std::move(h_sys));
  g.jumps = std::move(jumps);
  return g;
}

}  // namespace

void ChiralChannel::validate() const {
  require(!emitters.empty(), "channel needs at least one emitter");
  require(size() <= kMaxSitesDensity,
          "channel exceeds dense capacity of " +
              std::to_string(kMaxSitesDensity) + " emitters");
  for (size_t j = 0; j < emitters.size(); ++j) {
    const EmitterSpec& e = emitters[j];
    require(e.gamma_right >= 0 && e.gamma_left >= 0 && e.gamma_loss >= 0,
            "rates must be nonnegative");
    require(e.gamma_right + e.gamma_left + e.gamma_loss > 0,
            "emitter " + std::to_string(j) + " has no decay channel");
    if (j > 0) {
      require(emitters[j - 1].x < e.x, "emitter positions must be strictly increasing");
    }
  }
}

MatrixXcd Generator::apply(const MatrixXcd& rho) const {
  require(rho.rows() == dim() && rho.cols() == dim(),
          "generator/state dimension mismatch");
  MatrixXcd out = Complex(0.0, -1.0) *
                  (h_eff.mat * rho - rho * h_eff.mat.adjoint());
  for (const auto& jc : jumps) {
    out += jc.rate * (jc.op.mat * rho * jc.op.mat.adjoint());
  }
  return out;
}

MatrixXcd Generator::superoperator() const {
  const long d = dim();
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  // column-major vectorization: vec(A X B) = (B^T kron A) vec(X)
  MatrixXcd sup = Complex(0.0, -1.0) * kron(id, h_eff.mat) +
                  Complex(0.0, 1.0) * kron(h_eff.mat.conjugate(), id);
  for (const auto& jc : jumps) {
    sup += jc.rate * kron(jc.op.mat.conjugate(), jc.op.mat);
  }
  return sup;
}

Generator build_cascaded(const ChiralChannel& channel) {
  channel.validate();
  for (const auto& e : channel.emitters) {
    require(e.gamma_left == 0.0, "cascaded channel requires gamma_left = 0");
  }
  const int n = channel.size();
  const long d = 1L << n;

  // Direct transcription of the printed form: the non-Hermitian Hamiltonian
  // carries -(i/2)(gamma + Gamma) n_j and the full -i crossing term; the only
  // waveguide jump is the collective right-moving operator.
  MatrixXcd h_sys = drive_hamiltonian(channel);
  MatrixXcd h_eff = h_sys;
  for (int j = 0; j < n; ++j) {
    const EmitterSpec& e = channel.emitters[static_cast<size_t>(j)];
    h_eff -= Complex(0.0, 0.5) * (e.gamma_right + e.gamma_loss) *
             site_number(j, n).mat;
  }
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < j; ++l) {  // emitters ordered by x, so j is downstream
      const EmitterSpec& ej = channel.emitters[static_cast<size_t>(j)];
      const EmitterSpec& el = channel.emitters[static_cast<size_t>(l)];
      const double g = std::sqrt(ej.gamma_right * el.gamma_right);
      if (g == 0.0) continue;
      const Complex phase =
          std::exp(Complex(0.0, channel.wavenumber * (ej.x - el.x)));
      h_eff += Complex(0.0, -1.0) * g * phase *
               (site_lowering(j, n).mat.adjoint() * site_lowering(l, n).mat);
    }
  }

  std::vector<JumpChannel> jumps;
  MatrixXcd c_right = collective_jump(channel, true, right_rate);
  if (c_right.cwiseAbs().maxCoeff() > 0) {
    jumps.push_back({Operator(std::move(c_right)), 1.0, "right"});
  }
  append_loss_jumps(channel, jumps);

  Generator g;
  g.sites = n;
  g.h_sys = Operator::hermitian_operator(std::move(h_sys));
  g.h_eff = Operator(std::move(h_eff));
  g.jumps = std::move(jumps);
  require(g.dim() == d, "internal dimension mismatch");
  return g;
}

Generator build_bidirectional(const ChiralChannel& channel) {
  channel.validate();
  for (const auto& e : channel.emitters) {
    require(e.gamma_right == e.gamma_left,
            "bidirectional channel requires gamma_right = gamma_left");
  }
  const int n = channel.size();
  const long d = 1L << n;
  const double k = channel.wavenumber;

  // Printed form: coherent sqrt(g_i g_j) sin(k|x_i-x_j|) exchange plus the
  // cosine dissipator, diagonalized into collective jump modes.
  MatrixXcd h_sys = drive_hamiltonian(channel);
  MatrixXcd h_dd = MatrixXcd::Zero(d, d);
  Eigen::MatrixXd cosine(n, n);
  for (int i = 0; i < n; ++i) {
    const EmitterSpec& ei = channel.emitters[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const EmitterSpec& ej = channel.emitters[static_cast<size_t>(j)];
      const double g = std::sqrt(ei.gamma_right * ej.gamma_right);
      const double dist = std::abs(ei.x - ej.x);
      cosine(i, j) = 2.0 * g * std::cos(k * dist);
      if (i < j && g > 0.0) {
        const MatrixXcd exij = site_lowering(i, n).mat.adjoint() *
                               site_lowering(j, n).mat;
        h_dd += g * std::sin(k * dist) * (exij + exij.adjoint());
      }
    }
  }

  std::vector<JumpChannel> jumps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cosine);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-30);
  int mode = 0;
  for (int m = n - 1; m >= 0; --m) {  // descending eigenvalue order
    const double lambda = es.eigenvalues()(m);
    if (lambda <= 1e-14 * scale) continue;
    MatrixXcd op = MatrixXcd::Zero(d, d);
    for (int j = 0; j < n; ++j) op += es.eigenvectors()(j, m) * site_lowering(j, n).mat;
    jumps.push_back({Operator(std::move(op)), lambda,
                     "collective:" + std::to_string(mode++)});
  }
  append_loss_jumps(channel, jumps);
  return assemble(channel, std::move(h_sys), std::move(h_dd), std::move(jumps));
}

Generator build_chiral(const ChiralChannel& channel) {
  channel.validate();

  MatrixXcd h_sys = drive_hamiltonian(channel);
  // coherent exchange = Hermitian part of the two directional crossing terms;
  // the anti-Hermitian remainder is regenerated from the collective jumps
  const MatrixXcd cross = cascade_cross_term(channel, true, right_rate) +
                          cascade_cross_term(channel, false, left_rate);
  MatrixXcd h_exchange = 0.5 * (cross + cross.adjoint());

  std::vector<JumpChannel> jumps;
  MatrixXcd c_right = collective_jump(channel, true, right_rate);
  if (c_right.cwiseAbs().maxCoeff() > 0) {
    jumps.push_back({Operator(std::move(c_right)), 1.0, "right"});
  }
  MatrixXcd c_left = collective_jump(channel, false, left_rate);
  if (c_left.cwiseAbs().maxCoeff() > 0) {
    jumps.push_back({Operator(std::move(c_left)), 1.0, "left"});
  }
  append_loss_jumps(channel, jumps);
  return assemble(channel, std::move(h_sys), std::move(h_exchange), std::move(jumps));
}

Generator add_drive(const Generator& gen, const std::vector<Complex>& drives,
                    const std::vector<double>& detunings) {
  const int n = gen.sites;
  require(static_cast<int>(drives.size()) == n &&
              static_cast<int>(detunings.size()) == n,
          "add_drive needs one drive and one detuning per emitter");
  MatrixXcd extra = MatrixXcd::Zero(gen.dim(), gen.dim());
  for (int j = 0; j < n; ++j) {
    if (detunings[static_cast<size_t>(j)] != 0.0) {
      extra -= detunings[static_cast<size_t>(j)] * site_number(j, n).mat;
    }
    const Complex om = drives[static_cast<size_t>(j)];
    if (om != Complex(0.0, 0.0)) {
      const MatrixXcd sm = site_lowering(j, n).mat;
      extra += om * sm.adjoint() + std::conj(om) * sm;
    }
  }
  Generator out = gen;
  out.h_sys = Operator::hermitian_operator(gen.h_sys.mat + extra);
  out.h_eff = Operator(gen.h_eff.mat + extra);
  return out;
}

}  // namespace chiralwg
