#ifndef CHIRALWG_OPERATORS_HPP
#define CHIRALWG_OPERATORS_HPP

#include <string>
#include <vector>

#include "chiralwg/common.hpp"

namespace chiralwg {

// Tensor-product operator algebra for N two-level emitters.
//
// Ordering convention: site 0 is the most significant tensor factor, so the
// basis index of |s_0 s_1 ... s_{N-1}> is sum_j s_j * 2^(N-1-j) with g=0, e=1.
// All rates are in units of a reference rate; hbar = 1.

// Dense operator on the 2^N product space. Immutable after construction.
// The hermitian flag is only ever set by the checked constructor, so a set
// flag guarantees max|mat - mat^dag| < 1e-12.
struct Operator {
  MatrixXcd mat;
  int sites = 0;
  bool hermitian = false;

  Operator() = default;
  explicit Operator(MatrixXcd m);
  static Operator hermitian_operator(MatrixXcd m);

  long dim() const { return mat.rows(); }
  bool is_hermitian(double tol = 1e-12) const;
  Operator adjoint() const { return Operator(mat.adjoint()); }
};

struct PureState {
  VectorXcd amps;
  int sites = 0;

  PureState() = default;
  explicit PureState(VectorXcd a);

  long dim() const { return amps.size(); }
  double norm() const { return amps.norm(); }
};

struct DensityMatrix {
  MatrixXcd mat;
  int sites = 0;

  DensityMatrix() = default;
  explicit DensityMatrix(MatrixXcd m);

  long dim() const { return mat.rows(); }
};

struct DensityTolerances {
  double trace = 1e-10;
  double hermiticity = 1e-12;
  double positivity = 1e-9;  // min eigenvalue >= -positivity
};

// Single-site 2x2 blocks (basis |g> = 0, |e> = 1).
Eigen::Matrix2cd lowering_op();   // |g><e|
Eigen::Matrix2cd raising_op();    // |e><g|
Eigen::Matrix2cd number_op();     // |e><e|
Eigen::Matrix2cd pauli_z();       // diag(-1, +1): <z> = 2<n> - 1
Eigen::Matrix2cd identity2();

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);

// I (x) ... (x) local (x) ... (x) I with `local` at position `site`.
Operator embed_operator(const Eigen::Matrix2cd& local, int site, int n_sites);

// Basis state from a g/e pattern, e.g. "eg" = |e_1 g_2>.
PureState basis_state(const std::string& pattern);
PureState ground_state(int n_sites);

DensityMatrix density_from_pure(const PureState& psi);
DensityMatrix maximally_mixed(int n_sites);

// Reduced density matrix on `keep` (ascending site indices); trace preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

Complex expectation(const DensityMatrix& rho, const Operator& a);

double purity(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
// <psi|rho|psi>, real part (imaginary part is zero for Hermitian rho).
double fidelity_to_pure(const PureState& psi, const DensityMatrix& rho);

// Throws when any DensityMatrix invariant is violated.
void validate_density(const DensityMatrix& rho, const DensityTolerances& tol = {});

double min_eigenvalue(const MatrixXcd& hermitian);

}  // namespace chiralwg

#endif
