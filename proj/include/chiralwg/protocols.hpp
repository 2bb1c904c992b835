#ifndef CHIRALWG_PROTOCOLS_HPP
#define CHIRALWG_PROTOCOLS_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "chiralwg/dynamics.hpp"
#include "chiralwg/scattering.hpp"

namespace chiralwg {

// Protocol-level simulations: qubit state transfer through a cascaded
// channel with pulsed emission/capture rates, driven-dimer parameter scans,
// and device-level reports.

struct TransferOptions {
  double bandwidth = 1.0;     // logistic pulse bandwidth `a` (units of gamma_ref)
  double center = -1.0;       // pulse center; < 0 means t_final / 2
  double t_final = 16.0;
  double gamma_loss = 0.0;    // optional loss on both emitters
  bool optimize = true;       // coordinate descent over (bandwidth, center)
  int n_samples = 201;
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
};

struct TransferResult {
  double fidelity = 0.0;
  Complex c_g{1.0, 0.0};
  Complex c_e{0.0, 0.0};
  double bandwidth = 0.0;
  double center = 0.0;
  std::vector<double> times;
  std::vector<double> gamma1;  // emission profile
  std::vector<double> gamma2;  // capture profile (time-reversed mirror)
};

// Emission rate a(1 + tanh(a(t - t0))) on the sender and the mirrored capture
// rate a(1 - tanh(a(t - t0))) on the receiver: the emitted photon is
// time-symmetric, so the receiver reabsorbs it completely. The inter-emitter
// propagation phase is fixed at pi so the transferred amplitude arrives in
// phase with the target |g1>(c_g |g2> + c_e |e2>).
TransferResult state_transfer(const Complex& c_g, const Complex& c_e,
                              const TransferOptions& opt = {});

struct CascadeBaseline {
  double peak_population = 0.0;
  double peak_time = 0.0;
};

// Constant equal rates: emitter-2 population gamma^2 t^2 e^{-gamma t}, peaking
// at 4 e^{-2} at t = 2/gamma. Located by golden-section on the integrated
// master equation; the analytic form is the test oracle, not the computation.
CascadeBaseline constant_rate_baseline(double gamma);

struct MatchedDrive {
  Complex drive2{0.0, 0.0};  // optimal drive for emitter 2 given drive 1
  double purity = 0.0;
  double relative_phase = 0.0;
  double amplitude_ratio = 1.0;
};

// Sweeps the relative phase and amplitude of the second drive of a cascaded
// pair (then refines by golden-section) to maximize steady-state purity.
MatchedDrive find_matched_drive(const ChiralChannel& channel, const Complex& drive1);

struct ScanPoint {
  double amplitude = 0.0;
  double phase = 0.0;
  double ratio = 0.0;  // gamma_left / gamma_right
  double purity = 0.0;
  double dimer_fidelity = 0.0;
  double right_flux = 0.0;
};

struct ScanResult {
  std::vector<double> amplitudes, phases, ratios;
  std::vector<ScanPoint> points;  // row-major over (amplitude, phase, ratio)
};

// Steady-state purity / dimer fidelity / output flux of a driven emitter
// pair over drive amplitude, relative drive phase and coupling-ratio grids.
ScanResult dimer_scan(const std::vector<double>& amplitudes,
                      const std::vector<double>& phases,
                      const std::vector<double>& ratios);

struct IsolatorSpec {
  ChainSpec chain;
};

struct CirculatorSpec {
  double phi_fwd = kPi;
  double phi_bwd = 0.0;
  double reflectivity = 0.5;
  bool arm_from_emitter = false;  // derive arm amplitudes from an emitter
  double beta_plus = 1.0;
  double beta_minus = 0.0;
};

// Structured reports with keys schema_version, device_type, inputs, results,
// diagnostics.
nlohmann::json device_report(const IsolatorSpec& spec);
nlohmann::json device_report(const CirculatorSpec& spec);

}  // namespace chiralwg

#endif
