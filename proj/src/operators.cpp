#include "chiralwg/operators.hpp"

#include <cmath>

namespace chiralwg {

Operator::Operator(MatrixXcd m) : mat(std::move(m)) {
  require(mat.rows() == mat.cols(), "operator matrix must be square");
  sites = sites_for_dim(mat.rows());
}

bool Operator::is_hermitian(double tol) const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() < tol;
}

Operator Operator::hermitian_operator(MatrixXcd m) {
  Operator op(std::move(m));
  require(op.is_hermitian(), "operator is not Hermitian within 1e-12");
  op.hermitian = true;
  return op;
}

PureState::PureState(VectorXcd a) : amps(std::move(a)) {
  sites = sites_for_dim(amps.size());
  require(sites <= kMaxSitesPure,
          "pure state exceeds dense capacity of " +
              std::to_string(kMaxSitesPure) + " sites");
}

DensityMatrix::DensityMatrix(MatrixXcd m) : mat(std::move(m)) {
  require(mat.rows() == mat.cols(), "density matrix must be square");
  sites = sites_for_dim(mat.rows());
  require(sites <= kMaxSitesDensity,
          "density matrix exceeds dense capacity of " +
              std::to_string(kMaxSitesDensity) + " sites");
}

Eigen::Matrix2cd lowering_op() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd raising_op() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;
  return m;
}

Eigen::Matrix2cd number_op() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd identity2() { return Eigen::Matrix2cd::Identity(); }

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator embed_operator(const Eigen::Matrix2cd& local, int site, int n_sites) {
  require(n_sites >= 1, "n_sites must be positive");
  require(n_sites <= kMaxSitesPure,
          "embedding exceeds dense capacity of " +
              std::to_string(kMaxSitesPure) + " sites");
  require(site >= 0 && site < n_sites,
          "site " + std::to_string(site) + " out of range for " +
              std::to_string(n_sites) + " sites");
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int s = 0; s < n_sites; ++s) {
    m = kron(m, s == site ? MatrixXcd(local)
                          : MatrixXcd(MatrixXcd::Identity(2, 2)));
  }
  return Operator(std::move(m));
}

PureState basis_state(const std::string& pattern) {
  const int n = static_cast<int>(pattern.size());
  require(n >= 1, "empty basis-state pattern");
  long idx = 0;
  for (int s = 0; s < n; ++s) {
    const char c = pattern[s];
    require(c == 'g' || c == 'e', "basis-state pattern must contain only g/e");
    idx = (idx << 1) | (c == 'e' ? 1 : 0);
  }
  VectorXcd v = VectorXcd::Zero(1L << n);
  v(idx) = 1.0;
  return PureState(std::move(v));
}

PureState ground_state(int n_sites) {
  return basis_state(std::string(static_cast<size_t>(n_sites), 'g'));
}

DensityMatrix density_from_pure(const PureState& psi) {
  return DensityMatrix(psi.amps * psi.amps.adjoint());
}

DensityMatrix maximally_mixed(int n_sites) {
  const long d = 1L << n_sites;
  return DensityMatrix(MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.sites;
  require(!keep.empty(), "partial_trace: keep set must be nonempty");
  std::vector<bool> kept(static_cast<size_t>(n), false);
  for (int s : keep) {
    require(s >= 0 && s < n, "partial_trace: site index out of range");
    require(!kept[static_cast<size_t>(s)], "partial_trace: duplicate site index");
    kept[static_cast<size_t>(s)] = true;
  }
  std::vector<int> keep_sorted, traced;
  for (int s = 0; s < n; ++s) (kept[static_cast<size_t>(s)] ? keep_sorted : traced).push_back(s);

  const int k = static_cast<int>(keep_sorted.size());
  const int m = n - k;
  // full basis index from (kept bits, traced bits); site s occupies bit n-1-s
  auto compose = [&](long a, long t) {
    long idx = 0;
    for (int i = 0; i < k; ++i)
      if (a & (1L << (k - 1 - i))) idx |= 1L << (n - 1 - keep_sorted[static_cast<size_t>(i)]);
    for (int i = 0; i < m; ++i)
      if (t & (1L << (m - 1 - i))) idx |= 1L << (n - 1 - traced[static_cast<size_t>(i)]);
    return idx;
  };

  MatrixXcd out = MatrixXcd::Zero(1L << k, 1L << k);
  for (long a = 0; a < (1L << k); ++a)
    for (long b = 0; b < (1L << k); ++b) {
      Complex sum = 0.0;
      for (long t = 0; t < (1L << m); ++t)
        sum += rho.mat(compose(a, t), compose(b, t));
      out(a, b) = sum;
    }
  return DensityMatrix(std::move(out));
}

Complex expectation(const DensityMatrix& rho, const Operator& a) {
  require(rho.dim() == a.dim(), "expectation: dimension mismatch");
  return (rho.mat * a.mat).trace();
}

double purity(const DensityMatrix& rho) {
  return (rho.mat * rho.mat).trace().real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "trace_distance: dimension mismatch");
  MatrixXcd diff = a.mat - b.mat;
  diff = 0.5 * (diff + diff.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(diff);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity_to_pure(const PureState& psi, const DensityMatrix& rho) {
  require(psi.dim() == rho.dim(), "fidelity_to_pure: dimension mismatch");
  return (psi.amps.adjoint() * rho.mat * psi.amps)(0).real();
}

double min_eigenvalue(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian);
  return es.eigenvalues().minCoeff();
}

void validate_density(const DensityMatrix& rho, const DensityTolerances& tol) {
  const double tr_err = std::abs(rho.mat.trace() - Complex(1.0, 0.0));
  if (tr_err > tol.trace) {
    throw std::runtime_error("density matrix trace deviates from 1 by " +
                             std::to_string(tr_err));
  }
  const double herm = (rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw std::runtime_error("density matrix not Hermitian, deviation " +
                             std::to_string(herm));
  }
  MatrixXcd h = 0.5 * (rho.mat + rho.mat.adjoint());
  const double lam = min_eigenvalue(h);
  if (lam < -tol.positivity) {
    throw std::runtime_error("density matrix not positive, min eigenvalue " +
                             std::to_string(lam));
  }
}

}  // namespace chiralwg
