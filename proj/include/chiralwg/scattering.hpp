#ifndef CHIRALWG_SCATTERING_HPP
#define CHIRALWG_SCATTERING_HPP

#include <vector>

#include "chiralwg/common.hpp"

namespace chiralwg {

// Closed-form single-emitter scattering in the weakly saturated regime and
// transfer-matrix composition of emitter chains.

// t_plus/t_minus: transmission for forward/backward incidence; r: reflection
// amplitude, shared by both directions for a single emitter; A_pm = 1 - |t|^2
// - |r|^2 is the fraction scattered into non-guided modes.
struct ScatterSet {
  Complex t_plus{1.0, 0.0};
  Complex t_minus{1.0, 0.0};
  Complex r{0.0, 0.0};
  double a_plus = 0.0;
  double a_minus = 0.0;
};

struct ChainEmitter {
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double delta = 0.0;  // detuning in units of the total decay rate
};

struct ChainSpec {
  std::vector<ChainEmitter> emitters;
  std::vector<double> phases;  // k*(x_{j+1} - x_j), size = emitters.size() - 1

  void validate() const;
};

// Full 2-port scattering of a composed chain. Reflection becomes
// direction-dependent once emitters are composed with propagation phases.
struct TwoPortScatter {
  Complex t_fwd{1.0, 0.0};
  Complex t_bwd{1.0, 0.0};
  Complex r_left{0.0, 0.0};   // reflection for forward (left) incidence
  Complex r_right{0.0, 0.0};  // reflection for backward (right) incidence
};

struct ChainTransmission {
  Complex amplitude{1.0, 0.0};
  double intensity = 1.0;
};

struct IsolationMetrics {
  double insertion_loss_db = 0.0;
  double isolation_db = 0.0;  // +inf when the blocked direction is fully dark
  Direction pass = Direction::forward;
  bool reciprocal = false;
};

// On resonance: t_pm = 1 - 2 beta_pm, r = -2 sqrt(beta_plus beta_minus).
ScatterSet scatter_on_resonance(double beta_plus, double beta_minus);

// Lorentzian line: t_pm(delta) = 1 - 2 beta_pm / (1 - 2 i delta), and the
// same factor on r. Reduces exactly to the resonant values at delta = 0.
ScatterSet scatter_spectrum(double beta_plus, double beta_minus, double delta);

// Composition via the Redheffer star product of per-emitter S-matrices with
// inter-emitter propagation phases. This route never requires inverting a
// singular transfer matrix and is the authoritative result when some t = 0.
TwoPortScatter chain_smatrix(const ChainSpec& chain);

// Same composition through 2x2 transfer matrices (right-mover, left-mover
// field ordering). Throws when an emitter has |t| = 0 with nonzero r.
TwoPortScatter chain_smatrix_via_transfer(const ChainSpec& chain);

ChainTransmission chain_transmission(const ChainSpec& chain, Direction direction);

IsolationMetrics isolation_metrics(const ChainSpec& chain);

// Mach-Zehnder circulator: two beamsplitters of the given reflectivity with
// one arm carrying a direction-dependent transmission. Ports 1,3 on the left,
// 2,4 on the right of the interferometer; forward propagation maps inputs
// (1,3) to outputs (2,4), backward maps (2,4) to (1,3). Returns the 4x4
// S-matrix S(out, in), zero-indexed ports.
Eigen::Matrix4cd circulator_smatrix_arms(const Complex& arm_fwd,
                                         const Complex& arm_bwd,
                                         double reflectivity);

Eigen::Matrix4cd circulator_smatrix(double phi_fwd, double phi_bwd,
                                    double reflectivity);

}  // namespace chiralwg

#endif
