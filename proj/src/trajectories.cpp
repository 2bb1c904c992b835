#include <thread>

#include "chiralwg/dynamics.hpp"
#include "chiralwg/rng.hpp"
#include "rk45.hpp"
#include "threads.hpp"

namespace chiralwg {

namespace {

// Trajectories are grouped into fixed-size bins; each bin is summed in
// trajectory-index order by exactly one worker and bins are reduced in bin
// order afterwards, so the result does not depend on the thread count.
constexpr int kBinSize = 64;

struct BinAccumulator {
  std::vector<MatrixXcd> state_sums;                // [sample]
  std::vector<std::vector<double>> pop_sums;        // [sample][emitter]
  std::vector<long> jump_counts;                    // [channel]
};

std::vector<double> population_of(const VectorXcd& psi, int sites) {
  std::vector<double> pops(static_cast<size_t>(sites), 0.0);
  for (long idx = 0; idx < psi.size(); ++idx) {
    const double p = std::norm(psi(idx));
    for (int j = 0; j < sites; ++j) {
      if (idx & (1L << (sites - 1 - j))) pops[static_cast<size_t>(j)] += p;
    }
  }
  return pops;
}

}  // namespace

McResult mc_trajectories(const Generator& gen, const PureState& psi0,
                         double t_final, const McOptions& opt) {
  require(opt.n_trajectories >= 1, "need at least one trajectory");
  require(opt.n_samples >= 2, "need at least two sample times");
  require(t_final > 0, "t_final must be positive");
  require(psi0.dim() == gen.dim(), "generator/state dimension mismatch");
  require(std::abs(psi0.norm() - 1.0) < 1e-12, "initial state must be normalized");

  const long d = gen.dim();
  const int sites = gen.sites;
  const int n_traj = opt.n_trajectories;
  const int n_samples = opt.n_samples;
  const int n_channels = static_cast<int>(gen.jumps.size());

  std::vector<double> times(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    times[static_cast<size_t>(i)] = t_final * static_cast<double>(i) / (n_samples - 1);

  const int n_bins = (n_traj + kBinSize - 1) / kBinSize;
  std::vector<BinAccumulator> bins(static_cast<size_t>(n_bins));
  for (auto& b : bins) {
    if (opt.record_states) {
      b.state_sums.assign(static_cast<size_t>(n_samples), MatrixXcd::Zero(d, d));
    } else {
      b.pop_sums.assign(static_cast<size_t>(n_samples),
                        std::vector<double>(static_cast<size_t>(sites), 0.0));
    }
    b.jump_counts.assign(static_cast<size_t>(n_channels), 0);
  }

  McResult result;
  result.record.seed = opt.seed;
  result.record.events.resize(static_cast<size_t>(n_traj));
  result.record.final_states.resize(static_cast<size_t>(n_traj));
  result.times = times;

  detail::Dopri5::Rhs rhs = [&](double, const VectorXcd& psi, VectorXcd& dpsi) {
    dpsi = Complex(0.0, -1.0) * (gen.h_eff.mat * psi);
  };

  auto run_trajectory = [&](int traj, BinAccumulator& bin) {
    Philox rng(opt.seed, static_cast<uint64_t>(traj));
    detail::AdaptiveIntegrator integ(rhs, {opt.abs_tol, opt.rel_tol});
    VectorXcd psi = psi0.amps;
    double threshold = rng.uniform();
    auto& events = result.record.events[static_cast<size_t>(traj)];

    // locate the norm crossing inside an accepted step by bisection, apply
    // the jump there, and hand the rewound time back to the integrator
    auto handle_step = [&](double t0, const VectorXcd& y0, double& t,
                           VectorXcd& y) {
      if (y.squaredNorm() > threshold) return true;
      const double h = t - t0;
      double lo = 0.0, hi = h;
      VectorXcd k1(y0.size()), trial(y0.size()), err(y0.size()), klast(y0.size());
      rhs(t0, y0, k1);
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        detail::Dopri5::step(rhs, t0, y0, mid, k1, trial, err, klast);
        (trial.squaredNorm() > threshold ? lo : hi) = mid;
      }
      detail::Dopri5::step(rhs, t0, y0, hi, k1, trial, err, klast);

      // channel selection by cumulative weight rate * ||J psi||^2
      std::vector<double> weights(static_cast<size_t>(n_channels), 0.0);
      double total = 0.0;
      for (int m = 0; m < n_channels; ++m) {
        const auto& jc = gen.jumps[static_cast<size_t>(m)];
        weights[static_cast<size_t>(m)] =
            jc.rate * (jc.op.mat * trial).squaredNorm();
        total += weights[static_cast<size_t>(m)];
      }
      require(total > 0, "norm crossing with no available jump channel");
      const double u = rng.uniform() * total;
      double acc = 0.0;
      int channel = n_channels - 1;
      for (int m = 0; m < n_channels; ++m) {
        acc += weights[static_cast<size_t>(m)];
        if (u <= acc) {
          channel = m;
          break;
        }
      }
      const auto& jc = gen.jumps[static_cast<size_t>(channel)];
      VectorXcd jumped = jc.op.mat * trial;
      jumped /= jumped.norm();

      t = t0 + hi;
      y = std::move(jumped);
      events.push_back({t, channel});
      ++bin.jump_counts[static_cast<size_t>(channel)];
      threshold = rng.uniform();
      return false;
    };

    auto record = [&](int sample, const VectorXcd& psi_t) {
      VectorXcd unit = psi_t / psi_t.norm();
      if (opt.record_states) {
        bin.state_sums[static_cast<size_t>(sample)] += unit * unit.adjoint();
      } else {
        const auto pops = population_of(unit, sites);
        auto& sums = bin.pop_sums[static_cast<size_t>(sample)];
        for (int j = 0; j < sites; ++j) sums[static_cast<size_t>(j)] += pops[static_cast<size_t>(j)];
      }
    };

    record(0, psi);
    double h = 0.0;
    for (int i = 1; i < n_samples; ++i) {
      h = integ.run(times[static_cast<size_t>(i - 1)], times[static_cast<size_t>(i)],
                    psi, h, handle_step);
      record(i, psi);
    }
    result.record.final_states[static_cast<size_t>(traj)] = psi / psi.norm();
  };

  const int workers = std::min(detail::worker_count(), n_bins);
  auto work = [&](int w) {
    for (int b = w; b < n_bins; b += workers) {
      const int lo = b * kBinSize;
      const int hi = std::min(lo + kBinSize, n_traj);
      for (int traj = lo; traj < hi; ++traj) run_trajectory(traj, bins[static_cast<size_t>(b)]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  // fixed-order reduction over bins
  result.jump_counts.assign(static_cast<size_t>(n_channels), 0);
  if (opt.record_states) {
    result.mean_states.assign(static_cast<size_t>(n_samples), MatrixXcd::Zero(d, d));
  }
  result.mean_populations.assign(
      static_cast<size_t>(n_samples),
      std::vector<double>(static_cast<size_t>(sites), 0.0));
  for (const auto& bin : bins) {
    for (int m = 0; m < n_channels; ++m)
      result.jump_counts[static_cast<size_t>(m)] += bin.jump_counts[static_cast<size_t>(m)];
    for (int i = 0; i < n_samples; ++i) {
      if (opt.record_states) {
        result.mean_states[static_cast<size_t>(i)] += bin.state_sums[static_cast<size_t>(i)];
      } else {
        for (int j = 0; j < sites; ++j)
          result.mean_populations[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
              bin.pop_sums[static_cast<size_t>(i)][static_cast<size_t>(j)];
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(n_traj);
  for (int i = 0; i < n_samples; ++i) {
    if (opt.record_states) {
      result.mean_states[static_cast<size_t>(i)] *= inv;
      const long dd = d;
      auto& pops = result.mean_populations[static_cast<size_t>(i)];
      for (long idx = 0; idx < dd; ++idx) {
        const double p = result.mean_states[static_cast<size_t>(i)](idx, idx).real();
        for (int j = 0; j < sites; ++j) {
          if (idx & (1L << (sites - 1 - j))) pops[static_cast<size_t>(j)] += p;
        }
      }
    } else {
      for (int j = 0; j < sites; ++j)
        result.mean_populations[static_cast<size_t>(i)][static_cast<size_t>(j)] *= inv;
    }
  }
  return result;
}

}  // namespace chiralwg
