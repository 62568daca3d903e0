#include "corelab/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace corelab {

namespace {

// BDCSVD mis-deflates on the heavily repeated spectra that frames and
// projections produce (it can return a zero column inside a "full" V), so
// factorizations here use the self-adjoint eigensolver on Gram matrices or
// JacobiSVD instead.

// Rank from the descending eigenvalues of m* m (or m m*): the squared-scale
// analogue of effective_rank, with the same absolute floor so numerically
// zero matrices have rank zero.
int rank_from_gram(const RealVector& values, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol) {
  if (values.size() == 0) return 0;
  double lmax = std::max(values(0), 0.0);
  double cut =
      tol.rank_rel_tol * std::max(lmax, 1.0) * double(std::max(rows, cols));
  int r = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) > cut) ++r;
  return r;
}

}  // namespace

Subspace::Subspace(Eigen::Index ambient_dim, ComplexMatrix frame)
    : ambient_(ambient_dim), frame_(std::move(frame)) {
  if (frame_.size() == 0) frame_.resize(ambient_, 0);
  if (frame_.rows() != ambient_)
    throw AnalysisError("subspace frame does not match ambient dimension");
}

Subspace Subspace::zero(Eigen::Index ambient_dim) {
  return Subspace(ambient_dim, ComplexMatrix(ambient_dim, 0));
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
  return Subspace(ambient_dim,
                  ComplexMatrix::Identity(ambient_dim, ambient_dim));
}

ComplexMatrix Subspace::projection() const {
  return frame_ * frame_.adjoint();
}

bool Subspace::contains(const ComplexVector& v, double tol) const {
  double norm = v.norm();
  if (norm == 0.0) return true;
  ComplexVector residual = v - frame_ * (frame_.adjoint() * v);
  return residual.norm() <= tol * std::max(norm, 1.0);
}

bool Subspace::contains(const Subspace& other, double tol) const {
  for (Eigen::Index j = 0; j < other.dim(); ++j)
    if (!contains(other.frame().col(j), tol)) return false;
  return true;
}

int effective_rank(const RealVector& singvals, Eigen::Index rows,
                   Eigen::Index cols, const Tolerance& tol) {
  if (singvals.size() == 0) return 0;
  double smax = singvals.maxCoeff();
  double threshold =
      tol.rank_rel_tol * std::max(smax, 1.0) * double(std::max(rows, cols));
  int r = 0;
  for (Eigen::Index i = 0; i < singvals.size(); ++i)
    if (singvals[i] > threshold) ++r;
  return r;
}

void fix_phases(ComplexMatrix& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    double colnorm = columns.col(j).norm();
    if (colnorm == 0.0) continue;
    for (Eigen::Index i = 0; i < columns.rows(); ++i) {
      std::complex<double> z = columns(i, j);
      if (std::abs(z) > 1e-8 * colnorm) {
        columns.col(j) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }
}

Subspace orthonormal_range(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.cols() == 0 || m.size() == 0)
    return Subspace::zero(m.rows());
  // Left singular frame via the smaller Gram matrix: eigenvectors of m m*
  // directly, or images m v / sigma of the eigenvectors of m* m.
  const bool tall = m.rows() > m.cols();
  ComplexMatrix g = tall ? ComplexMatrix(m.adjoint() * m)
                         : ComplexMatrix(m * m.adjoint());
  HermitianEigen eig = hermitian_eigen(g);
  int r = rank_from_gram(eig.values, m.rows(), m.cols(), tol);
  ComplexMatrix frame;
  if (tall) {
    frame.resize(m.rows(), r);
    for (int j = 0; j < r; ++j)
      frame.col(j) = m * eig.vectors.col(j) / std::sqrt(eig.values(j));
  } else {
    frame = eig.vectors.leftCols(r);
  }
  fix_phases(frame);
  return Subspace(m.rows(), std::move(frame));
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const Tolerance& tol) {
  if (a.ambient_dim() != b.ambient_dim())
    throw AnalysisError("subspace_intersect: ambient dimensions differ");
  Eigen::Index n = a.ambient_dim();
  // x lies in both iff both complement projections annihilate it; the
  // eigenvalues of their sum are the squared singular values of the stacked
  // complement map, so the kernel-vs-rank split follows the Gram rank rule.
  ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = 2.0 * id - a.projection() - b.projection();
  HermitianEigen eig = hermitian_eigen(sum);
  int r = rank_from_gram(eig.values, 2 * n, n, tol);
  ComplexMatrix frame = eig.vectors.rightCols(n - r);
  fix_phases(frame);
  return Subspace(n, std::move(frame));
}

Subspace subspace_complement_within(const Subspace& whole, const Subspace& part,
                                    const Tolerance& tol) {
  if (whole.ambient_dim() != part.ambient_dim())
    throw AnalysisError("subspace_complement_within: ambient dimensions differ");
  ComplexMatrix residual =
      whole.frame() - part.frame() * (part.frame().adjoint() * whole.frame());
  return orthonormal_range(residual, tol);
}

bool subspace_equal(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  if (a.dim() != b.dim()) return false;
  return operator_norm(a.projection() - b.projection()) < tol.eq_tol;
}

bool is_psd(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols())
    throw AnalysisError("is_psd: matrix is not square");
  double scale = std::max(operator_norm(m), 1.0);
  if (operator_norm(m - ComplexMatrix(m.adjoint())) > tol.psd_tol * scale)
    throw AnalysisError("is_psd: matrix is not Hermitian");
  ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.psd_tol;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerance& tol) {
  if (!is_psd(m, tol))
    throw AnalysisError("psd_sqrt: matrix is not positive semidefinite");
  ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  RealVector vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  ComplexMatrix g = m.rows() <= m.cols() ? ComplexMatrix(m * m.adjoint())
                                         : ComplexMatrix(m.adjoint() * m);
  g = (g + g.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix vec(const ComplexMatrix& m) {
  ComplexMatrix v(m.size(), 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(k++, 0) = m(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, Eigen::Index rows,
                    Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = v(k++, 0);
  return m;
}

std::complex<double> hs_dot(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

std::vector<ComplexMatrix> solve_linear_space(
    const std::vector<LinearConstraint>& constraints, Eigen::Index dim,
    const Tolerance& tol) {
  // Build the constraint matrix acting on vec(X), X in C^{dim x dim},
  // by evaluating each constraint on the elementary-matrix basis.
  Eigen::Index n2 = dim * dim;
  if (constraints.empty()) {
    std::vector<ComplexMatrix> all;
    all.reserve(n2);
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index i = 0; i < dim; ++i) {
        e(i, j) = 1.0;
        all.push_back(e);
        e(i, j) = 0.0;
      }
    return all;
  }
  std::vector<ComplexMatrix> images;  // one stacked column per basis element
  Eigen::Index total_rows = 0;
  ComplexMatrix probe = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> basis_images(n2);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      probe(i, j) = 1.0;
      Eigen::Index rows = 0;
      std::vector<ComplexMatrix> outs;
      outs.reserve(constraints.size());
      for (const auto& c : constraints) {
        outs.push_back(vec(c(probe)));
        rows += outs.back().rows();
      }
      ComplexMatrix stacked(rows, 1);
      Eigen::Index at = 0;
      for (const auto& o : outs) {
        stacked.middleRows(at, o.rows()) = o;
        at += o.rows();
      }
      basis_images[j * dim + i] = std::move(stacked);
      total_rows = basis_images[j * dim + i].rows();
      probe(i, j) = 0.0;
    }
  }
  ComplexMatrix big(total_rows, n2);
  for (Eigen::Index k = 0; k < n2; ++k) big.col(k) = basis_images[k];

  auto svd = Eigen::JacobiSVD<ComplexMatrix>(big, Eigen::ComputeFullV);
  int r = effective_rank(svd.singularValues(), big.rows(), big.cols(), tol);
  ComplexMatrix null_cols = svd.matrixV().rightCols(n2 - r);
  fix_phases(null_cols);
  std::vector<ComplexMatrix> out;
  out.reserve(null_cols.cols());
  for (Eigen::Index k = 0; k < null_cols.cols(); ++k)
    out.push_back(unvec(null_cols.col(k), dim, dim));
  return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::Index n = h.rows();
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // SelfAdjointEigenSolver sorts ascending; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = es.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  fix_phases(out.vectors);
  return out;
}

}  // namespace corelab
