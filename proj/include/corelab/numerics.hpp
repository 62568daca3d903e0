#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corelab {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Thrown for malformed inputs (bad shapes, unreadable files, invalid fields).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an analysis precondition fails on well-formed input.
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double eq_tol = 1e-9;
  double psd_tol = 1e-7;
  double rank_rel_tol = 1e-10;

  void validate() const {
    if (eq_tol <= 0 || psd_tol <= 0 || rank_rel_tol <= 0)
      throw ParseError("tolerances must be strictly positive");
  }
};

// Orthonormal column frame spanning a subspace of C^ambient.
class Subspace {
 public:
  Subspace() = default;
  Subspace(Eigen::Index ambient_dim, ComplexMatrix frame);
  static Subspace zero(Eigen::Index ambient_dim);
  static Subspace full(Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const { return ambient_; }
  Eigen::Index dim() const { return frame_.cols(); }
  const ComplexMatrix& frame() const { return frame_; }
  ComplexMatrix projection() const;

  bool contains(const ComplexVector& v, double tol) const;
  bool contains(const Subspace& other, double tol) const;

 private:
  Eigen::Index ambient_ = 0;
  ComplexMatrix frame_;  // ambient x d, orthonormal columns
};

// Number of singular values above the rank threshold. The threshold has an
// absolute floor max(sigma_max, 1): a numerically-zero matrix has rank 0.
int effective_rank(const RealVector& singvals, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol);

// Deterministic phase convention: scale each column so its first component
// with magnitude > 1e-8 * ||col|| becomes real positive.
void fix_phases(ComplexMatrix& columns);

Subspace orthonormal_range(const ComplexMatrix& m, const Tolerance& tol = {});

Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const Tolerance& tol = {});

Subspace subspace_complement_within(const Subspace& whole, const Subspace& part,
                                    const Tolerance& tol = {});

// ||P_a - P_b|| < eq_tol on the projections.
bool subspace_equal(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

bool is_psd(const ComplexMatrix& m, const Tolerance& tol = {});

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerance& tol = {});

double operator_norm(const ComplexMatrix& m);

// Kronecker product, left-factor-major: index of a(x)b is i_a * rows_b + i_b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// A linear map X -> M(X) whose kernel is requested; X ranges over dim x dim.
using LinearConstraint = std::function<ComplexMatrix(const ComplexMatrix&)>;

// Hilbert-Schmidt-orthonormal basis of {X : every constraint maps X to 0}.
std::vector<ComplexMatrix> solve_linear_space(
    const std::vector<LinearConstraint>& constraints, Eigen::Index dim,
    const Tolerance& tol = {});

// Helpers shared across modules.
ComplexMatrix vec(const ComplexMatrix& m);                    // column-major
ComplexMatrix unvec(const ComplexMatrix& v, Eigen::Index rows,
                    Eigen::Index cols);
std::complex<double> hs_dot(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigenvalues descending with phase-fixed eigenvectors, for Hermitian input.
struct HermitianEigen {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns
};
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

}  // namespace corelab
