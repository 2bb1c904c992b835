#include "chiralwg/dynamics.hpp"

#include <cmath>

#include "rk45.hpp"

namespace chiralwg {

namespace {

std::vector<double> sample_times(double t_final, int n) {
  require(t_final > 0, "t_final must be positive");
  require(n >= 2, "need at least two sample times");
  std::vector<double> t(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    t[static_cast<size_t>(i)] = t_final * static_cast<double>(i) / (n - 1);
  return t;
}

std::vector<double> emitter_populations(const MatrixXcd& rho, int sites) {
  // <n_j> = sum of diagonal entries whose basis index has bit n-1-j set
  std::vector<double> pops(static_cast<size_t>(sites), 0.0);
  const long d = rho.rows();
  for (long idx = 0; idx < d; ++idx) {
    const double p = rho(idx, idx).real();
    for (int j = 0; j < sites; ++j) {
      if (idx & (1L << (sites - 1 - j))) pops[static_cast<size_t>(j)] += p;
    }
  }
  return pops;
}

void record_sample(Trajectory& out, double t, const MatrixXcd& rho, int sites,
                   const EvolveOptions& opt) {
  const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (tr_err > opt.trace_tol) {
    throw std::runtime_error("trace drift " + std::to_string(tr_err) +
                             " exceeds tolerance at t = " + std::to_string(t));
  }
  const MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  const double lam = min_eigenvalue(herm);
  if (lam < -opt.positivity_tol) {
    throw std::runtime_error("positivity violation, min eigenvalue " +
                             std::to_string(lam) + " at t = " + std::to_string(t));
  }
  out.times.push_back(t);
  out.populations.push_back(emitter_populations(rho, sites));
  out.purity.push_back((rho * rho).trace().real());
  if (opt.store_states) out.states.push_back(DensityMatrix(rho));
}

Trajectory evolve_impl(const GeneratorFactory& factory, bool time_dependent,
                       const Generator& fixed, const DensityMatrix& rho0,
                       double t_final, const EvolveOptions& opt) {
  validate_density(rho0, DensityTolerances{1e-8, 1e-10, 1e-7});
  const long d = rho0.dim();
  const int sites = rho0.sites;
  if (!time_dependent) {
    require(fixed.dim() == d, "generator/state dimension mismatch");
  }

  // integrate the vectorized density matrix
  detail::Dopri5::Rhs rhs = [&](double t, const VectorXcd& v, VectorXcd& dv) {
    const Eigen::Map<const MatrixXcd> rho(v.data(), d, d);
    const MatrixXcd drho =
        time_dependent ? factory(t).apply(rho) : fixed.apply(rho);
    dv = Eigen::Map<const VectorXcd>(drho.data(), d * d);
  };
  detail::AdaptiveIntegrator integ(rhs, {opt.abs_tol, opt.rel_tol});

  const auto times = sample_times(t_final, opt.n_samples);
  VectorXcd y = Eigen::Map<const VectorXcd>(rho0.mat.data(), d * d);

  Trajectory out;
  record_sample(out, 0.0, rho0.mat, sites, opt);
  double h = 0.0;
  for (size_t i = 1; i < times.size(); ++i) {
    h = integ.run(times[i - 1], times[i], y, h,
                  [](double, const VectorXcd&, double&, VectorXcd&) { return true; });
    const Eigen::Map<const MatrixXcd> rho(y.data(), d, d);
    record_sample(out, times[i], rho, sites, opt);
  }
  return out;
}

}  // namespace

Trajectory evolve(const Generator& gen, const DensityMatrix& rho0,
                  double t_final, const EvolveOptions& opt) {
  return evolve_impl(GeneratorFactory{}, false, gen, rho0, t_final, opt);
}

Trajectory evolve(const GeneratorFactory& factory, const DensityMatrix& rho0,
                  double t_final, const EvolveOptions& opt) {
  require(static_cast<bool>(factory), "generator factory is empty");
  Generator unused;
  return evolve_impl(factory, true, unused, rho0, t_final, opt);
}

SteadyStateResult steady_state(const Generator& gen) {
  require(gen.sites <= kMaxSitesSuperop,
          "steady state exceeds dense superoperator capacity of " +
              std::to_string(kMaxSitesSuperop) + " sites");
  const long d = gen.dim();
  const MatrixXcd sup = gen.superoperator();

  Eigen::BDCSVD<MatrixXcd> svd(sup, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), 1e-300);
  int mult = 0;
  for (long i = sv.size() - 1; i >= 0 && sv(i) <= 1e-12 * scale; --i) ++mult;
  require(mult >= 1, "Liouvillian has no null vector at working precision");

  SteadyStateResult out;
  out.zero_multiplicity = mult;
  if (mult > 1) {
    out.degenerate = true;
    for (int m = 0; m < mult; ++m) {
      const VectorXcd v = svd.matrixV().col(sv.size() - 1 - m);
      out.null_basis.emplace_back(Eigen::Map<const MatrixXcd>(v.data(), d, d));
    }
    double worst = 0.0;
    for (const auto& basis : out.null_basis) {
      const MatrixXcd scaled = basis / std::max(basis.norm(), 1e-300);
      worst = std::max(worst, gen.apply(scaled).norm());
    }
    out.residual = worst;
    return out;
  }

  const VectorXcd v = svd.matrixV().col(sv.size() - 1);
  MatrixXcd rho = Eigen::Map<const MatrixXcd>(v.data(), d, d);
  const Complex tr = rho.trace();
  require(std::abs(tr) > 1e-10,
          "stationary null vector is traceless; cannot normalize");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  out.rho = DensityMatrix(rho);
  out.residual = gen.apply(rho).norm();
  validate_density(out.rho, DensityTolerances{1e-9, 1e-9, 1e-7});
  return out;
}

std::vector<Complex> liouvillian_spectrum(const Generator& gen, int count) {
  require(gen.sites <= kMaxSitesSuperop,
          "spectrum exceeds dense superoperator capacity of " +
              std::to_string(kMaxSitesSuperop) + " sites");
  const MatrixXcd sup = gen.superoperator();
  Eigen::ComplexEigenSolver<MatrixXcd> es(sup, false);
  std::vector<Complex> ev(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  if (count >= 0 && count < static_cast<int>(ev.size())) ev.resize(count);
  return ev;
}

DimerReport dimer_analysis(const DensityMatrix& rho) {
  require(rho.sites == 2, "dimer analysis requires exactly two emitters");
  // span of the dimer family: |gg> (index 0) and the singlet (|ge>-|eg>)/sqrt2
  VectorXcd gg = VectorXcd::Zero(4), singlet = VectorXcd::Zero(4);
  gg(0) = 1.0;
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);

  const double a = (gg.adjoint() * rho.mat * gg)(0).real();
  const double s = (singlet.adjoint() * rho.mat * singlet)(0).real();
  const Complex c = (singlet.adjoint() * rho.mat * gg)(0);

  // fidelity of |gg> + b |S> (b = sqrt(2) alpha) against rho
  auto fid = [&](double mag, double phase) {
    const Complex b = std::polar(mag, phase);
    return (a + 2.0 * (std::conj(b) * c).real() + mag * mag * s) /
           (1.0 + mag * mag);
  };
  auto golden = [](auto f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
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
  };

  // the phase only enters through cos(phase - arg c); seed it there so the
  // search does not stall on the flat axis at zero magnitude
  double phase = std::abs(c) > 1e-300 ? std::arg(c) : 0.0;
  double mag = 0.0;
  for (int round = 0; round < 3; ++round) {
    // magnitude parameterized as tan(u) to cover [0, inf)
    const double u = golden([&](double uu) { return fid(std::tan(uu), phase); },
                            0.0, 0.5 * kPi - 1e-6);
    mag = std::tan(u);
    phase = golden([&](double p) { return fid(mag, p); }, phase - 0.5, phase + 0.5);
  }
  const double f_fit = fid(mag, phase);

  // optimum over the family = largest eigenvalue of rho restricted to the span
  Eigen::Matrix2cd block;
  block << Complex(a, 0.0), std::conj(c), c, Complex(s, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  const double f_best = es.eigenvalues().maxCoeff();

  DimerReport rep;
  rep.purity = purity(rho);
  rep.singlet_weight = s;
  rep.alpha = std::polar(mag, phase) / std::sqrt(2.0);
  rep.fidelity = f_fit;
  rep.fit_residual = std::max(0.0, f_best - f_fit);
  return rep;
}

std::vector<std::pair<std::string, double>> photon_flux(const Generator& gen,
                                                        const DensityMatrix& rho) {
  require(gen.dim() == rho.dim(), "generator/state dimension mismatch");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& jc : gen.jumps) {
    const double f =
        jc.rate * (jc.op.mat.adjoint() * jc.op.mat * rho.mat).trace().real();
    out.emplace_back(jc.label, std::max(0.0, f));
  }
  return out;
}

}  // namespace chiralwg
