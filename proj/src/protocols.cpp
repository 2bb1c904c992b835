#include "chiralwg/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "threads.hpp"

namespace chiralwg {

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// cascaded pair with pulsed rates; k (x2 - x1) = pi fixes the arrival phase
GeneratorFactory transfer_factory(double bandwidth, double center,
                                  double gamma_loss) {
  return [=](double t) {
    const double th = std::tanh(bandwidth * (t - center));
    // tanh saturates to +-1 in floating point far from the center; keep the
    // truncated tails strictly positive so the channel stays well-formed
    const double floor = 1e-14 * bandwidth;
    const double g1 = std::max(bandwidth * (1.0 + th), floor);
    const double g2 = std::max(bandwidth * (1.0 - th), floor);
    ChiralChannel ch;
    ch.wavenumber = 2.0 * kPi;
    ch.emitters.resize(2);
    ch.emitters[0] = {0.0, g1, 0.0, gamma_loss, 0.0, {0.0, 0.0}};
    ch.emitters[1] = {0.5, g2, 0.0, gamma_loss, 0.0, {0.0, 0.0}};
    return build_cascaded(ch);
  };
}

double transfer_fidelity(const Complex& c_g, const Complex& c_e,
                         double bandwidth, double center,
                         const TransferOptions& opt) {
  VectorXcd init = VectorXcd::Zero(4);
  init(0) = c_g;  // |g g>
  init(2) = c_e;  // |e g>
  const DensityMatrix rho0(init * init.adjoint());

  EvolveOptions eopt;
  eopt.abs_tol = opt.abs_tol;
  eopt.rel_tol = opt.rel_tol;
  eopt.n_samples = 2;
  eopt.store_states = true;
  const Trajectory traj = evolve(transfer_factory(bandwidth, center, opt.gamma_loss),
                                 rho0, opt.t_final, eopt);

  VectorXcd target = VectorXcd::Zero(4);
  target(0) = c_g;  // |g g>
  target(1) = c_e;  // |g e>
  const double f = fidelity_to_pure(PureState(target), traj.states.back());
  return std::clamp(f, 0.0, 1.0);  // integrator noise can overshoot by ~1e-10
}

ChiralChannel dimer_channel(double ratio, double amplitude, double phase) {
  // total guided rate 1 per emitter, split right/left by the given ratio
  ChiralChannel ch;
  ch.wavenumber = 2.0 * kPi;
  const double gr = 1.0 / (1.0 + ratio);
  const double gl = ratio / (1.0 + ratio);
  ch.emitters.resize(2);
  ch.emitters[0] = {0.0, gr, gl, 0.0, 0.0, Complex(amplitude, 0.0)};
  ch.emitters[1] = {0.23, gr, gl, 0.0, 0.0, std::polar(amplitude, phase)};
  return ch;
}

double steady_purity(const Generator& gen) {
  const SteadyStateResult ss = steady_state(gen);
  require(!ss.degenerate, "degenerate steady state in drive sweep");
  return purity(ss.rho);
}

nlohmann::json complex_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

}  // namespace

TransferResult state_transfer(const Complex& c_g, const Complex& c_e,
                              const TransferOptions& opt) {
  require(std::abs(std::norm(c_g) + std::norm(c_e) - 1.0) < 1e-9,
          "input qubit amplitudes must be normalized");
  require(opt.bandwidth > 0, "pulse bandwidth must be positive");
  require(opt.t_final > 0, "t_final must be positive");
  require(opt.gamma_loss >= 0, "gamma_loss must be nonnegative");

  double bandwidth = opt.bandwidth;
  double center = opt.center > 0 ? opt.center : 0.5 * opt.t_final;

  if (opt.optimize && std::norm(c_e) > 1e-12) {
    for (int round = 0; round < 2; ++round) {
      bandwidth = golden_max(
          [&](double a) { return transfer_fidelity(c_g, c_e, a, center, opt); },
          0.25 * opt.bandwidth, 4.0 * opt.bandwidth, 40);
      center = golden_max(
          [&](double tc) { return transfer_fidelity(c_g, c_e, bandwidth, tc, opt); },
          0.25 * opt.t_final, 0.75 * opt.t_final, 40);
    }
  }

  TransferResult res;
  res.c_g = c_g;
  res.c_e = c_e;
  res.bandwidth = bandwidth;
  res.center = center;
  res.fidelity = transfer_fidelity(c_g, c_e, bandwidth, center, opt);
  res.times.resize(static_cast<size_t>(opt.n_samples));
  res.gamma1.resize(static_cast<size_t>(opt.n_samples));
  res.gamma2.resize(static_cast<size_t>(opt.n_samples));
  for (int i = 0; i < opt.n_samples; ++i) {
    const double t = opt.t_final * static_cast<double>(i) / (opt.n_samples - 1);
    const double th = std::tanh(bandwidth * (t - center));
    res.times[static_cast<size_t>(i)] = t;
    res.gamma1[static_cast<size_t>(i)] = bandwidth * (1.0 + th);
    res.gamma2[static_cast<size_t>(i)] = bandwidth * (1.0 - th);
  }
  return res;
}

CascadeBaseline constant_rate_baseline(double gamma) {
  require(gamma > 0, "gamma must be positive");
  ChiralChannel ch;
  ch.emitters.resize(2);
  ch.emitters[0] = {0.0, gamma, 0.0, 0.0, 0.0, {0.0, 0.0}};
  ch.emitters[1] = {0.5, gamma, 0.0, 0.0, 0.0, {0.0, 0.0}};
  const Generator gen = build_cascaded(ch);

  const DensityMatrix rho0 = density_from_pure(basis_state("eg"));
  EvolveOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.n_samples = 2;
  opt.store_states = true;

  auto pop2 = [&](double t) {
    const Trajectory traj = evolve(gen, rho0, t, opt);
    return traj.populations.back()[1];
  };
  const double t_peak = golden_max(pop2, 1.0 / gamma, 3.0 / gamma, 80);
  return CascadeBaseline{pop2(t_peak), t_peak};
}

MatchedDrive find_matched_drive(const ChiralChannel& channel, const Complex& drive1) {
  channel.validate();
  require(channel.size() == 2, "drive matching is defined for an emitter pair");
  require(std::abs(drive1) > 0, "drive1 must be nonzero");

  auto purity_at = [&](double phase, double ratio) {
    ChiralChannel ch = channel;
    ch.emitters[0].drive = drive1;
    ch.emitters[1].drive = std::polar(ratio * std::abs(drive1), phase);
    return steady_purity(build_cascaded(ch));
  };

  double best_phase = 0.0, best_ratio = 1.0, best = -1.0;
  for (int ip = 0; ip < 64; ++ip) {
    const double phase = -kPi + 2.0 * kPi * ip / 64.0;
    const double p = purity_at(phase, 1.0);
    if (p > best) {
      best = p;
      best_phase = phase;
    }
  }
  for (int round = 0; round < 2; ++round) {
    best_phase = golden_max(
        [&](double ph) { return purity_at(ph, best_ratio); },
        best_phase - 0.25, best_phase + 0.25, 50);
    best_ratio = golden_max(
        [&](double r) { return purity_at(best_phase, r); }, 0.5, 1.5, 50);
  }

  MatchedDrive out;
  out.relative_phase = best_phase;
  out.amplitude_ratio = best_ratio;
  out.drive2 = std::polar(best_ratio * std::abs(drive1),
                          best_phase + std::arg(drive1));
  out.purity = purity_at(best_phase, best_ratio);
  return out;
}

ScanResult dimer_scan(const std::vector<double>& amplitudes,
                      const std::vector<double>& phases,
                      const std::vector<double>& ratios) {
  require(!amplitudes.empty() && !phases.empty() && !ratios.empty(),
          "scan grids must be nonempty");
  for (double r : ratios) require(r >= 0 && r <= 1, "ratio must lie in [0, 1]");
  for (double a : amplitudes) require(a >= 0, "drive amplitude must be nonnegative");

  ScanResult res;
  res.amplitudes = amplitudes;
  res.phases = phases;
  res.ratios = ratios;
  const size_t np = phases.size(), nr = ratios.size();
  res.points.resize(amplitudes.size() * np * nr);

  // grid points are independent; workers fill disjoint row-major slots
  auto compute = [&](size_t idx) {
    const double amp = amplitudes[idx / (np * nr)];
    const double phase = phases[(idx / nr) % np];
    const double ratio = ratios[idx % nr];
    const ChiralChannel ch = dimer_channel(ratio, amp, phase);
    const Generator gen = build_chiral(ch);
    const SteadyStateResult ss = steady_state(gen);
    ScanPoint pt;
    pt.amplitude = amp;
    pt.phase = phase;
    pt.ratio = ratio;
    if (!ss.degenerate) {
      pt.purity = purity(ss.rho);
      const DimerReport rep = dimer_analysis(ss.rho);
      pt.dimer_fidelity = rep.fidelity;
      for (const auto& [label, flux] : photon_flux(gen, ss.rho)) {
        if (label == "right") pt.right_flux = flux;
      }
    }
    res.points[idx] = pt;
  };

  const int workers =
      std::min<int>(detail::worker_count(), static_cast<int>(res.points.size()));
  if (workers <= 1) {
    for (size_t idx = 0; idx < res.points.size(); ++idx) compute(idx);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (size_t idx = static_cast<size_t>(w); idx < res.points.size();
             idx += static_cast<size_t>(workers)) {
          compute(idx);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return res;
}

nlohmann::json device_report(const IsolatorSpec& spec) {
  spec.chain.validate();
  const TwoPortScatter s = chain_smatrix(spec.chain);
  const IsolationMetrics m = isolation_metrics(spec.chain);

  nlohmann::json inputs;
  inputs["emitters"] = nlohmann::json::array();
  for (const auto& e : spec.chain.emitters) {
    inputs["emitters"].push_back({{"beta_plus", e.beta_plus},
                                  {"beta_minus", e.beta_minus},
                                  {"delta", e.delta}});
  }
  inputs["phases"] = spec.chain.phases;

  nlohmann::json results;
  results["t_fwd"] = complex_json(s.t_fwd);
  results["t_bwd"] = complex_json(s.t_bwd);
  results["r_left"] = complex_json(s.r_left);
  results["r_right"] = complex_json(s.r_right);
  results["transmission_fwd"] = std::norm(s.t_fwd);
  results["transmission_bwd"] = std::norm(s.t_bwd);
  results["insertion_loss_db"] = m.insertion_loss_db;
  if (std::isinf(m.isolation_db)) {
    results["isolation_db"] = "inf";
  } else {
    results["isolation_db"] = m.isolation_db;
  }
  results["pass_direction"] = to_string(m.pass);

  nlohmann::json diagnostics;
  diagnostics["reciprocal"] = m.reciprocal;

  return nlohmann::json{{"schema_version", 1},
                        {"device_type", "isolator"},
                        {"inputs", inputs},
                        {"results", results},
                        {"diagnostics", diagnostics}};
}

nlohmann::json device_report(const CirculatorSpec& spec) {
  Eigen::Matrix4cd s;
  nlohmann::json inputs;
  inputs["reflectivity"] = spec.reflectivity;
  if (spec.arm_from_emitter) {
    const ScatterSet sc = scatter_on_resonance(spec.beta_plus, spec.beta_minus);
    s = circulator_smatrix_arms(sc.t_plus, sc.t_minus, spec.reflectivity);
    inputs["beta_plus"] = spec.beta_plus;
    inputs["beta_minus"] = spec.beta_minus;
  } else {
    s = circulator_smatrix(spec.phi_fwd, spec.phi_bwd, spec.reflectivity);
    inputs["phi_fwd"] = spec.phi_fwd;
    inputs["phi_bwd"] = spec.phi_bwd;
  }

  nlohmann::json smatrix = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) row.push_back(complex_json(s(i, j)));
    smatrix.push_back(row);
  }

  // routing: dominant output port and its probability per input port
  nlohmann::json routing = nlohmann::json::array();
  bool cyclic = true;
  for (int in = 0; in < 4; ++in) {
    int best = 0;
    double p = 0.0;
    for (int out = 0; out < 4; ++out) {
      const double q = std::norm(s(out, in));
      if (q > p) {
        p = q;
        best = out;
      }
    }
    routing.push_back({{"in", in + 1}, {"out", best + 1}, {"probability", p}});
    if (best != (in + 1) % 4 || std::abs(p - 1.0) > 1e-9) cyclic = false;
  }

  const Eigen::Matrix4cd defect =
      s.adjoint() * s - Eigen::Matrix4cd::Identity();

  nlohmann::json results;
  results["smatrix"] = smatrix;
  results["routing"] = routing;
  results["unitarity_deficit"] = defect.cwiseAbs().maxCoeff();

  nlohmann::json diagnostics;
  diagnostics["cyclic"] = cyclic;

  return nlohmann::json{{"schema_version", 1},
                        {"device_type", "circulator"},
                        {"inputs", inputs},
                        {"results", results},
                        {"diagnostics", diagnostics}};
}

}  // namespace chiralwg
