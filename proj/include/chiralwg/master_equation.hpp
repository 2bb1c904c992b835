#ifndef CHIRALWG_MASTER_EQUATION_HPP
#define CHIRALWG_MASTER_EQUATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "chiralwg/operators.hpp"

namespace chiralwg {

// Lindblad generators for N two-level emitters coupled through a 1D channel:
// cascaded (unidirectional), bidirectional, and the general chiral case with
// arbitrary right/left/loss rates. Emitter positions enter only through the
// phases k*x_j.

struct EmitterSpec {
  double x = 0.0;            // position, enters via k*x only
  double gamma_right = 0.0;  // decay into right-movers
  double gamma_left = 0.0;   // decay into left-movers
  double gamma_loss = 0.0;   // decay into non-guided modes
  double detuning = 0.0;     // drive detuning from the transition
  Complex drive{0.0, 0.0};   // Rabi amplitude of a local drive
};

struct ChiralChannel {
  std::vector<EmitterSpec> emitters;  // ascending x
  double wavenumber = 2.0 * kPi;

  int size() const { return static_cast<int>(emitters.size()); }
  void validate() const;
};

struct JumpChannel {
  Operator op;
  double rate = 1.0;
  std::string label;  // "right", "left", "collective:<m>", "loss:<j>"
};

// Lindblad generator, stored as (H_eff, jump list):
//   L rho = -i (H_eff rho - rho H_eff^dag) + sum_m rate_m J_m rho J_m^dag
// with the anti-Hermitian part of H_eff equal to -(i/2) sum rate J^dag J.
// h_sys holds the detuning/drive Hamiltonian only; dissipation-induced
// coherent couplings live in h_eff alongside it.
struct Generator {
  Operator h_sys;
  Operator h_eff;
  std::vector<JumpChannel> jumps;
  int sites = 0;

  long dim() const { return h_eff.dim(); }

  // L rho, matrix-free in the sense that no superoperator matrix is formed.
  MatrixXcd apply(const MatrixXcd& rho) const;

  // Dense superoperator on column-major vectorized density matrices.
  MatrixXcd superoperator() const;
};

using GeneratorFactory = std::function<Generator(double)>;

// Unidirectional channel (every gamma_left = 0): collective right-moving jump
// sum_j sqrt(gamma_Rj) e^{-ik x_j} sigma_j^- plus per-emitter loss, and
//   H_eff = H_sys - (i/2) sum_j (gamma_Rj + Gamma_j) n_j
//           - i sum_{x_j > x_l} sqrt(gamma_Rj gamma_Rl) e^{ik(x_j-x_l)}
//             sigma_j^+ sigma_l^-.
Generator build_cascaded(const ChiralChannel& channel);

// Symmetric channel (gamma_right = gamma_left = gamma_j): dipole-dipole
// coupling sqrt(gamma_i gamma_j) sin(k|x_i-x_j|) and a collective dissipator
// with coefficient matrix C_ij = 2 sqrt(gamma_i gamma_j) cos(k|x_i-x_j|),
// stored through its eigenmode jump operators.
Generator build_bidirectional(const ChiralChannel& channel);

// General chiral channel: right-cascade + left-cascade + local loss. Reduces
// entrywise to build_cascaded when gamma_left = 0 and to build_bidirectional
// when gamma_right = gamma_left.
Generator build_chiral(const ChiralChannel& channel);

// H_sys += sum_j [ -Delta_j n_j + Omega_j sigma_j^+ + conj(Omega_j) sigma_j^- ]
// in the rotating frame; the dissipative part is unchanged.
Generator add_drive(const Generator& gen, const std::vector<Complex>& drives,
                    const std::vector<double>& detunings);

struct ReducedCheckReport {
  double max_divergence = 0.0;  // max trace distance between reduced states
  bool closed = false;          // divergence below the closure tolerance
};

// Evolves a two-emitter generator from initial states that differ only on
// emitter 2 and reports how far the reduced state of emitter 1 diverges.
// Cascaded channels are closed (divergence at roundoff); bidirectional ones
// are generically not. Fixed-step integration keeps the comparison exact.
ReducedCheckReport reduced_generator_check(const Generator& gen, double t_final,
                                           int n_steps = 2000,
                                           double closed_tol = 1e-10);

}  // namespace chiralwg

#endif
