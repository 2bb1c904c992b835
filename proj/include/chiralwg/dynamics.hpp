#ifndef CHIRALWG_DYNAMICS_HPP
#define CHIRALWG_DYNAMICS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "chiralwg/master_equation.hpp"

namespace chiralwg {

// Time evolution, steady states, Liouvillian spectra, quantum-jump Monte
// Carlo, and derived diagnostics.

struct EvolveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int n_samples = 201;       // including t = 0
  bool store_states = true;  // otherwise populations/purity only
  double trace_tol = 1e-8;   // trace drift beyond this is an error, never fixed
  double positivity_tol = 1e-7;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // empty when store_states = false
  std::vector<std::vector<double>> populations;  // [sample][emitter]
  std::vector<double> purity;
};

Trajectory evolve(const Generator& gen, const DensityMatrix& rho0,
                  double t_final, const EvolveOptions& opt = {});

// Time-dependent generator (e.g. pulsed rates). The factory must be pure.
Trajectory evolve(const GeneratorFactory& factory, const DensityMatrix& rho0,
                  double t_final, const EvolveOptions& opt = {});

struct SteadyStateResult {
  bool degenerate = false;
  DensityMatrix rho;                  // valid when not degenerate
  std::vector<MatrixXcd> null_basis;  // stationary elements when degenerate
  int zero_multiplicity = 1;
  double residual = 0.0;  // ||L rho_ss||_F
};

// Null space of the dense Liouvillian via a rank-revealing SVD with the unit
// trace side-condition. A null space of dimension > 1 is reported as such
// instead of picking an arbitrary element.
SteadyStateResult steady_state(const Generator& gen);

// Eigenvalues sorted by descending real part (the slowest modes first).
std::vector<Complex> liouvillian_spectrum(const Generator& gen, int count = -1);

struct JumpEvent {
  double time = 0.0;
  int channel = 0;  // index into Generator::jumps
};

struct JumpRecord {
  uint64_t seed = 0;
  std::vector<std::vector<JumpEvent>> events;  // per trajectory
  std::vector<VectorXcd> final_states;         // normalized, per trajectory
};

struct McOptions {
  int n_trajectories = 1000;
  uint64_t seed = 0;
  int n_samples = 21;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  bool record_states = true;  // accumulate mean |psi><psi| at sample times
};

struct McResult {
  JumpRecord record;
  std::vector<double> times;
  std::vector<MatrixXcd> mean_states;            // [sample], when recorded
  std::vector<std::vector<double>> mean_populations;  // [sample][emitter]
  std::vector<long> jump_counts;                 // per jump channel
};

// Quantum-jump unraveling of the generator's (H_eff, jumps) split. Jump times
// are located by bisecting the norm threshold to 1e-10; trajectories are
// distributed over workers (capped by CHIRALWG_THREADS) and reduced in fixed
// index order, so results are bit-identical for any thread count.
McResult mc_trajectories(const Generator& gen, const PureState& psi0,
                         double t_final, const McOptions& opt);

struct DimerReport {
  double purity = 0.0;
  double singlet_weight = 0.0;
  Complex alpha{0.0, 0.0};
  double fidelity = 0.0;
  double fit_residual = 0.0;  // gap to the optimum over the dimer family
};

// Best fit of a two-emitter state to |psi> ~ |gg> + alpha (|ge> - |eg>),
// maximizing <psi|rho|psi> over complex alpha by golden-section search on
// magnitude and phase.
DimerReport dimer_analysis(const DensityMatrix& rho);

// rate * <J^dag J> per jump channel, labelled.
std::vector<std::pair<std::string, double>> photon_flux(const Generator& gen,
                                                        const DensityMatrix& rho);

}  // namespace chiralwg

#endif
