#include "corelab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

namespace corelab {
namespace {

void validate_algebra(const OperatorAlgebra& alg) {
  if (alg.dim < 1) throw ParseError("algebra ambient dimension must be >= 1");
  if (alg.basis.empty()) throw ParseError("algebra basis must be nonempty");
  for (const ComplexMatrix& b : alg.basis)
    if (b.rows() != alg.dim || b.cols() != alg.dim)
      throw ParseError("algebra basis element has wrong shape");
}

ComplexVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = std::complex<double>(nd(rng), nd(rng));
  return v;
}

std::vector<ComplexMatrix> adjoints(const std::vector<ComplexMatrix>& mats) {
  std::vector<ComplexMatrix> out;
  out.reserve(mats.size());
  for (const ComplexMatrix& m : mats) out.push_back(m.adjoint());
  return out;
}

std::vector<ComplexMatrix> restrict_to(const ComplexMatrix& frame,
                                       const std::vector<ComplexMatrix>& mats) {
  std::vector<ComplexMatrix> out;
  out.reserve(mats.size());
  for (const ComplexMatrix& m : mats)
    out.push_back(frame.adjoint() * m * frame);
  return out;
}

// span{ B v : B in elems, v column of vectors }
Subspace span_of_images(const std::vector<ComplexMatrix>& elems,
                        const ComplexMatrix& vectors, const Tolerance& tol) {
  Eigen::Index n = vectors.rows();
  Eigen::Index c = vectors.cols();
  ComplexMatrix cols(n, static_cast<Eigen::Index>(elems.size()) * c);
  for (size_t i = 0; i < elems.size(); ++i)
    cols.middleCols(static_cast<Eigen::Index>(i) * c, c) = elems[i] * vectors;
  return orthonormal_range(cols, tol);
}

// Frame of {v : P B v = 0 for every element}, the largest invariant subspace
// whose image avoids the range of the projection P.
ComplexMatrix invariant_kernel(const std::vector<ComplexMatrix>& elems,
                               const ComplexMatrix& proj,
                               const Tolerance& tol) {
  Eigen::Index n = proj.cols();
  ComplexMatrix stacked(static_cast<Eigen::Index>(elems.size()) * n, n);
  for (size_t i = 0; i < elems.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = proj * elems[i];
  Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
  int r = effective_rank(svd.singularValues(), stacked.rows(), n, tol);
  ComplexMatrix frame = svd.matrixV().rightCols(n - r);
  fix_phases(frame);
  return frame;
}

// Nilpotent ideal of the span via the trace form tr(xy) (characteristic 0).
std::vector<ComplexMatrix> radical_of(const std::vector<ComplexMatrix>& elems,
                                      const Tolerance& tol) {
  std::vector<ComplexMatrix> ab = hs_orthonormalize(elems);
  Eigen::Index k = static_cast<Eigen::Index>(ab.size());
  if (k == 0) return {};
  ComplexMatrix form(k, k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index i = 0; i < k; ++i)
      form(r, i) = (ab[static_cast<size_t>(i)] * ab[static_cast<size_t>(r)])
                       .trace();
  Eigen::JacobiSVD<ComplexMatrix> svd(form, Eigen::ComputeFullV);
  int rank = effective_rank(svd.singularValues(), k, k, tol);
  std::vector<ComplexMatrix> out;
  for (Eigen::Index j = rank; j < k; ++j) {
    ComplexMatrix elem =
        ComplexMatrix::Zero(ab[0].rows(), ab[0].cols());
    for (Eigen::Index i = 0; i < k; ++i)
      elem += svd.matrixV()(i, j) * ab[static_cast<size_t>(i)];
    out.push_back(elem);
  }
  return out;
}

std::vector<ComplexMatrix> commutant_of(const std::vector<ComplexMatrix>& elems,
                                        Eigen::Index w, const Tolerance& tol) {
  std::vector<LinearConstraint> cons;
  cons.reserve(elems.size());
  for (const ComplexMatrix& b : elems)
    cons.push_back([b](const ComplexMatrix& x) { return x * b - b * x; });
  return solve_linear_space(cons, w, tol);
}

// A proper nonzero eigenspace frame (w x p) of some non-scalar commutant
// element of the restricted algebra; empty when none exists.
ComplexMatrix commutant_eigenspace(const std::vector<ComplexMatrix>& restricted,
                                   Eigen::Index w, const Tolerance& tol) {
  std::vector<ComplexMatrix> comm = commutant_of(restricted, w, tol);
  ComplexMatrix id = ComplexMatrix::Identity(w, w);
  for (const ComplexMatrix& c0 : comm) {
    ComplexMatrix c = c0 - (c0.trace() / static_cast<double>(w)) * id;
    if (c.norm() <= 1e-6) continue;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(c, false);
    std::vector<std::complex<double>> vals(
        es.eigenvalues().data(), es.eigenvalues().data() + w);
    std::sort(vals.begin(), vals.end(),
              [](std::complex<double> a, std::complex<double> b) {
                if (a.real() != b.real()) return a.real() > b.real();
                return a.imag() > b.imag();
              });
    size_t i = 0;
    while (i < vals.size()) {
      size_t j = i;
      std::complex<double> sum = 0;
      while (j < vals.size() && std::abs(vals[j] - vals[i]) < 1e-8) {
        sum += vals[j];
        ++j;
      }
      std::complex<double> lambda = sum / static_cast<double>(j - i);
      Eigen::JacobiSVD<ComplexMatrix> svd(ComplexMatrix(c - lambda * id),
                                          Eigen::ComputeFullV);
      double cut = 1e-6 * std::max(svd.singularValues()[0], 1.0);
      Eigen::Index nz = 0;
      for (Eigen::Index s = 0; s < svd.singularValues().size(); ++s)
        if (svd.singularValues()[s] > cut) ++nz;
      Eigen::Index p = w - nz;
      if (p > 0 && p < w) {
        ComplexMatrix frame = svd.matrixV().rightCols(p);
        fix_phases(frame);
        return frame;
      }
      i = j;
    }
  }
  return {};
}

// Shrinks an invariant subspace (orthonormal frame W) of the algebra spanned
// by elems to a minimal invariant subspace.
ComplexMatrix descend_minimal(const std::vector<ComplexMatrix>& elems,
                              ComplexMatrix W, const Tolerance& tol) {
  Eigen::Index n = W.rows();
  for (Eigen::Index guard = 0; guard < 4 * n + 16; ++guard) {
    Eigen::Index w = W.cols();
    if (w <= 0) throw AnalysisError("empty subspace in minimality descent");
    std::vector<ComplexMatrix> restricted = restrict_to(W, elems);
    std::vector<ComplexMatrix> span_basis = hs_orthonormalize(restricted);
    if (static_cast<Eigen::Index>(span_basis.size()) == w * w)
      return W;  // irreducible: restriction spans all of the w x w matrices
    bool moved = false;
    for (Eigen::Index j = 0; j < w && !moved; ++j) {
      Subspace cyc = span_of_images(elems, W.col(j), tol);
      if (cyc.dim() > 0 && cyc.dim() < w) {
        W = cyc.frame();
        moved = true;
      }
    }
    if (moved) continue;
    std::vector<ComplexMatrix> rad = radical_of(span_basis, tol);
    if (!rad.empty()) {
      ComplexMatrix cols(n, static_cast<Eigen::Index>(rad.size()) * w);
      for (size_t i = 0; i < rad.size(); ++i)
        cols.middleCols(static_cast<Eigen::Index>(i) * w, w) = W * rad[i];
      Subspace im = orthonormal_range(cols, tol);
      if (im.dim() > 0 && im.dim() < w) {
        W = im.frame();
        continue;
      }
    }
    ComplexMatrix sel = commutant_eigenspace(span_basis, w, tol);
    if (sel.size() > 0) {
      W = orthonormal_range(W * sel, tol).frame();
      continue;
    }
    throw AnalysisError("minimality descent could not split a reducible subspace");
  }
  throw AnalysisError("minimality descent failed to terminate");
}

// First usable seed vector in the column span of rem_frame: projections of
// standard basis vectors in order, then seeded random vectors.
ComplexVector pick_seed(const ComplexMatrix& rem_frame,
                        std::mt19937_64& rng) {
  Eigen::Index n = rem_frame.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexVector v = rem_frame * rem_frame.row(i).adjoint();
    if (v.norm() > 1e-6) return v / v.norm();
  }
  for (int t = 0; t < 64; ++t) {
    ComplexVector g = random_vector(n, rng);
    ComplexVector v = rem_frame * (rem_frame.adjoint() * g);
    if (v.norm() > 1e-6 * g.norm()) return v / v.norm();
  }
  throw AnalysisError("no usable seed vector in the remaining subspace");
}

// Greedy maximal orthogonal family of minimal invariant subspaces for the
// algebra spanned by elems (acting on C^n).
std::vector<ComplexMatrix> family_frames(const std::vector<ComplexMatrix>& elems,
                                         Eigen::Index n, std::mt19937_64& rng,
                                         const Tolerance& tol) {
  std::vector<ComplexMatrix> frames;
  ComplexMatrix rem = ComplexMatrix::Identity(n, n);
  Eigen::Index total = 0;
  while (rem.cols() > 0) {
    ComplexVector seed = pick_seed(rem, rng);
    Subspace cyc = span_of_images(elems, seed, tol);
    if (cyc.dim() == 0)
      throw AnalysisError("seed vector has empty cyclic subspace");
    frames.push_back(descend_minimal(elems, cyc.frame(), tol));
    total += frames.back().cols();
    if (total > n) throw AnalysisError("family dimensions exceed the space");
    ComplexMatrix span(n, total);
    Eigen::Index at = 0;
    for (const ComplexMatrix& f : frames) {
      span.middleCols(at, f.cols()) = f;
      at += f.cols();
    }
    rem = invariant_kernel(elems, ComplexMatrix(span * span.adjoint()), tol);
  }
  return frames;
}

ComplexMatrix concat_frames(const std::vector<ComplexMatrix>& frames,
                            Eigen::Index n) {
  Eigen::Index total = 0;
  for (const ComplexMatrix& f : frames) total += f.cols();
  ComplexMatrix out(n, total);
  Eigen::Index at = 0;
  for (const ComplexMatrix& f : frames) {
    out.middleCols(at, f.cols()) = f;
    at += f.cols();
  }
  return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix& t) {
  Eigen::JacobiSVD<ComplexMatrix> svd(t,
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

bool well_invertible(const ComplexMatrix& t) {
  if (t.rows() != t.cols() || t.rows() == 0) return false;
  Eigen::JacobiSVD<ComplexMatrix> svd(t);
  double smax = svd.singularValues()[0];
  double smin = svd.singularValues()[svd.singularValues().size() - 1];
  return smax > 0 && smin > 1e-8 * smax;
}

// Intertwiner space {X : X a_i = b_i X} for two matrix tuples.
std::vector<ComplexMatrix> intertwiners_between(
    const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
    Eigen::Index w, const Tolerance& tol) {
  std::vector<LinearConstraint> cons;
  cons.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const ComplexMatrix& ai = a[i];
    const ComplexMatrix& bi = b[i];
    cons.push_back(
        [ai, bi](const ComplexMatrix& x) { return x * ai - bi * x; });
  }
  return solve_linear_space(cons, w, tol);
}

}  // namespace

std::vector<ComplexMatrix> hs_orthonormalize(
    const std::vector<ComplexMatrix>& mats, double drop_tol) {
  std::vector<ComplexMatrix> out;
  for (const ComplexMatrix& m : mats) {
    ComplexMatrix v = m;
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexMatrix& b : out) v -= hs_dot(b, v) * b;
    double n = v.norm();
    if (n > drop_tol) out.push_back(v / n);
  }
  return out;
}

OperatorAlgebra generate_algebra(const std::vector<ComplexMatrix>& generators,
                                 Eigen::Index dim, const Tolerance& tol) {
  if (dim < 1) throw ParseError("algebra ambient dimension must be >= 1");
  for (const ComplexMatrix& g : generators)
    if (g.rows() != dim || g.cols() != dim)
      throw ParseError("algebra generator has wrong shape");
  (void)tol;
  std::vector<ComplexMatrix> cands;
  cands.push_back(ComplexMatrix::Identity(dim, dim));
  cands.insert(cands.end(), generators.begin(), generators.end());
  std::vector<ComplexMatrix> basis = hs_orthonormalize(cands);
  std::vector<ComplexMatrix> frontier = basis;
  while (!frontier.empty()) {
    std::vector<ComplexMatrix> products;
    products.reserve(2 * basis.size() * frontier.size());
    for (const ComplexMatrix& a : basis)
      for (const ComplexMatrix& f : frontier) {
        products.push_back(a * f);
        products.push_back(f * a);
      }
    std::vector<ComplexMatrix> fresh;
    for (const ComplexMatrix& p : products) {
      ComplexMatrix v = p;
      for (int pass = 0; pass < 2; ++pass) {
        for (const ComplexMatrix& b : basis) v -= hs_dot(b, v) * b;
        for (const ComplexMatrix& b : fresh) v -= hs_dot(b, v) * b;
      }
      double n = v.norm();
      if (n > 1e-9) fresh.push_back(v / n);
    }
    basis.insert(basis.end(), fresh.begin(), fresh.end());
    if (static_cast<Eigen::Index>(basis.size()) > dim * dim)
      throw AnalysisError("algebra closure exceeded the matrix space");
    frontier = std::move(fresh);
  }
  return OperatorAlgebra{dim, std::move(basis)};
}

OperatorAlgebra adjoint_algebra(const OperatorAlgebra& alg) {
  validate_algebra(alg);
  return OperatorAlgebra{alg.dim, adjoints(alg.basis)};
}

OperatorAlgebra commutant(const OperatorAlgebra& alg, const Tolerance& tol) {
  validate_algebra(alg);
  return OperatorAlgebra{alg.dim, commutant_of(alg.basis, alg.dim, tol)};
}

double containment_residual(const OperatorAlgebra& alg,
                            const ComplexMatrix& x) {
  validate_algebra(alg);
  ComplexMatrix r = x;
  for (const ComplexMatrix& b : alg.basis) r -= hs_dot(b, x) * b;
  return r.norm() / std::max(x.norm(), 1.0);
}

bool algebra_contains(const OperatorAlgebra& alg, const ComplexMatrix& x,
                      const Tolerance& tol) {
  return containment_residual(alg, x) <= tol.eq_tol;
}

double star_residual(const OperatorAlgebra& alg) {
  validate_algebra(alg);
  double worst = 0;
  for (const ComplexMatrix& b : alg.basis)
    worst = std::max(worst,
                     containment_residual(alg, ComplexMatrix(b.adjoint())));
  return worst;
}

bool is_star_closed(const OperatorAlgebra& alg, const Tolerance& tol) {
  return star_residual(alg) <= tol.eq_tol;
}

Subspace cyclic_closure(const OperatorAlgebra& alg, const ComplexVector& seed,
                        const Tolerance& tol) {
  validate_algebra(alg);
  if (seed.size() != alg.dim)
    throw AnalysisError("seed vector has wrong dimension");
  return span_of_images(alg.basis, seed, tol);
}

Subspace cyclic_closure(const OperatorAlgebra& alg, const Subspace& seed,
                        const Tolerance& tol) {
  validate_algebra(alg);
  if (seed.ambient_dim() != alg.dim)
    throw AnalysisError("seed subspace has wrong ambient dimension");
  if (seed.dim() == 0) return Subspace::zero(alg.dim);
  return span_of_images(alg.basis, seed.frame(), tol);
}

Subspace minimal_coinvariant(const OperatorAlgebra& alg,
                             const ComplexVector& seed,
                             const Tolerance& tol) {
  validate_algebra(alg);
  if (seed.size() != alg.dim)
    throw AnalysisError("seed vector has wrong dimension");
  if (seed.norm() <= 1e-12) throw AnalysisError("zero seed vector");
  std::vector<ComplexMatrix> adj = adjoints(alg.basis);
  Subspace start = span_of_images(adj, seed, tol);
  if (start.dim() == 0) throw AnalysisError("zero seed vector");
  return Subspace(alg.dim, descend_minimal(adj, start.frame(), tol));
}

Subspace minimal_coinvariant(const OperatorAlgebra& alg, const Subspace& seed,
                             const Tolerance& tol) {
  validate_algebra(alg);
  if (seed.ambient_dim() != alg.dim)
    throw AnalysisError("seed subspace has wrong ambient dimension");
  if (seed.dim() == 0) throw AnalysisError("zero seed subspace");
  std::vector<ComplexMatrix> adj = adjoints(alg.basis);
  Subspace start = span_of_images(adj, seed.frame(), tol);
  return Subspace(alg.dim, descend_minimal(adj, start.frame(), tol));
}

MinimalFamily minimal_coinvariant_family(const OperatorAlgebra& alg,
                                         std::uint64_t seed,
                                         const Tolerance& tol) {
  validate_algebra(alg);
  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> adj = adjoints(alg.basis);
  std::vector<ComplexMatrix> frames = family_frames(adj, alg.dim, rng, tol);
  MinimalFamily fam;
  for (const ComplexMatrix& f : frames)
    fam.summands.emplace_back(alg.dim, f);
  fam.vhat = Subspace(alg.dim, concat_frames(frames, alg.dim));
  Subspace cyc = span_of_images(alg.basis, fam.vhat.frame(), tol);
  fam.cyclic_dim = cyc.dim();
  fam.cyclic = cyc.dim() == alg.dim;
  return fam;
}

Subspace minimal_cyclic_coinvariant(const OperatorAlgebra& alg,
                                    std::uint64_t seed, const Tolerance& tol) {
  MinimalFamily fam = minimal_coinvariant_family(alg, seed, tol);
  if (!fam.cyclic)
    throw AnalysisError(
        "cyclicity check failed: the algebra applied to the candidate "
        "subspace spans dimension " +
        std::to_string(fam.cyclic_dim) + " of " + std::to_string(alg.dim));
  return fam.vhat;
}

bool is_minimal_cyclic_coinvariant(const OperatorAlgebra& alg,
                                   const Subspace& s, std::uint64_t seed,
                                   const Tolerance& tol) {
  validate_algebra(alg);
  if (s.ambient_dim() != alg.dim)
    throw AnalysisError("subspace has wrong ambient dimension");
  Eigen::Index n = alg.dim;
  if (s.dim() == 0) return false;
  const ComplexMatrix& F = s.frame();
  ComplexMatrix P = s.projection();
  ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (const ComplexMatrix& b : alg.basis)
    if (operator_norm(ComplexMatrix((id - P) * (b.adjoint() * F))) >
        tol.eq_tol)
      return false;  // not coinvariant
  if (span_of_images(alg.basis, F, tol).dim() != n) return false;  // not cyclic
  if (s.dim() == 1) return true;

  // Maximal family of minimal coinvariant subspaces inside s, then try to
  // exhibit a smaller cyclic coinvariant subspace from it.
  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> adj_in_s =
      hs_orthonormalize(restrict_to(F, adjoints(alg.basis)));
  std::vector<ComplexMatrix> local =
      family_frames(adj_in_s, s.dim(), rng, tol);
  std::vector<ComplexMatrix> members;
  members.reserve(local.size());
  for (const ComplexMatrix& f : local) members.push_back(F * f);
  Eigen::Index total = 0;
  for (const ComplexMatrix& f : members) total += f.cols();

  std::vector<ComplexMatrix> candidates;
  if (total < s.dim()) candidates.push_back(concat_frames(members, n));
  if (members.size() >= 2) {
    for (size_t i = 0; i < members.size(); ++i) {
      std::vector<ComplexMatrix> rest;
      for (size_t j = 0; j < members.size(); ++j)
        if (j != i) rest.push_back(members[j]);
      candidates.push_back(concat_frames(rest, n));
    }
    // diagonal twists of equivalent pairs
    std::vector<ComplexMatrix> adj = adjoints(alg.basis);
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = i + 1; j < members.size(); ++j) {
        if (members[i].cols() != members[j].cols()) continue;
        std::vector<ComplexMatrix> ni = restrict_to(members[i], adj);
        std::vector<ComplexMatrix> nj = restrict_to(members[j], adj);
        std::vector<ComplexMatrix> tw =
            intertwiners_between(ni, nj, members[i].cols(), tol);
        for (const ComplexMatrix& u : tw) {
          if (!well_invertible(u)) continue;
          ComplexMatrix diag =
              orthonormal_range(
                  ComplexMatrix(members[i] + members[j] * u), tol)
                  .frame();
          std::vector<ComplexMatrix> rest;
          for (size_t l = 0; l < members.size(); ++l)
            if (l != i && l != j) rest.push_back(members[l]);
          rest.push_back(diag);
          candidates.push_back(concat_frames(rest, n));
          break;
        }
      }
  }
  for (const ComplexMatrix& cand : candidates) {
    if (cand.cols() == 0 || cand.cols() >= s.dim()) continue;
    if (span_of_images(alg.basis, cand, tol).dim() == n)
      return false;  // a strictly smaller cyclic coinvariant subspace exists
  }
  return true;
}

BlockDecomposition block_decomposition(const OperatorAlgebra& alg,
                                       std::uint64_t seed,
                                       const Tolerance& tol) {
  validate_algebra(alg);
  double sres = star_residual(alg);
  if (sres > tol.eq_tol)
    throw AnalysisError(
        "block decomposition requires a self-adjoint algebra (adjoint "
        "containment residual " +
        std::to_string(sres) + ")");
  Eigen::Index n = alg.dim;
  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> adj = adjoints(alg.basis);
  std::vector<ComplexMatrix> frames = family_frames(adj, n, rng, tol);
  Eigen::Index total = 0;
  for (const ComplexMatrix& f : frames) total += f.cols();
  if (total != n)
    throw AnalysisError(
        "minimal family of a self-adjoint algebra failed to span (dimension " +
        std::to_string(total) + " of " + std::to_string(n) + ")");

  std::vector<std::vector<ComplexMatrix>> restricted;
  restricted.reserve(frames.size());
  for (const ComplexMatrix& f : frames)
    restricted.push_back(restrict_to(f, alg.basis));

  std::vector<std::vector<size_t>> classes;
  std::vector<std::vector<ComplexMatrix>> class_intertwiners;
  for (size_t i = 0; i < frames.size(); ++i) {
    bool placed = false;
    for (size_t c = 0; c < classes.size() && !placed; ++c) {
      size_t ref = classes[c][0];
      if (frames[ref].cols() != frames[i].cols()) continue;
      std::vector<ComplexMatrix> tw = intertwiners_between(
          restricted[ref], restricted[i], frames[i].cols(), tol);
      ComplexMatrix u;
      for (const ComplexMatrix& t : tw)
        if (well_invertible(t)) {
          u = polar_unitary(t);
          break;
        }
      if (u.size() > 0) {
        classes[c].push_back(i);
        class_intertwiners[c].push_back(u);
        placed = true;
      }
    }
    if (!placed) {
      classes.push_back({i});
      class_intertwiners.push_back(
          {ComplexMatrix::Identity(frames[i].cols(), frames[i].cols())});
    }
  }

  BlockDecomposition out;
  for (const ComplexMatrix& f : frames) out.family.emplace_back(n, f);
  for (size_t c = 0; c < classes.size(); ++c) {
    BlockClass bc;
    std::vector<ComplexMatrix> class_frames;
    ComplexMatrix central = ComplexMatrix::Zero(n, n);
    for (size_t idx : classes[c]) {
      class_frames.push_back(frames[idx]);
      bc.members.emplace_back(n, frames[idx]);
      central += frames[idx] * frames[idx].adjoint();
    }
    bc.subspace = Subspace(n, concat_frames(class_frames, n));
    bc.block_dim = frames[classes[c][0]].cols();
    bc.multiplicity = static_cast<Eigen::Index>(classes[c].size());
    bc.intertwiners = class_intertwiners[c];
    bc.central_projection = central;
    out.blocks.push_back(std::move(bc));
  }
  return out;
}

ComplexMatrix phi_map(const GraphRep& rep, const ComplexMatrix& x,
                      const Tolerance& tol) {
  if (x.rows() != rep.dim || x.cols() != rep.dim)
    throw AnalysisError("argument has wrong shape");
  for (const ComplexMatrix& s : rep.sigma)
    if (operator_norm(ComplexMatrix(x * s - s * x)) >
        tol.eq_tol * std::max(operator_norm(x), 1.0))
      throw AnalysisError(
          "argument does not commute with the vertex projections");
  ComplexMatrix row = row_operator(rep);
  Eigen::Index e_count = rep.graph.edge_count();
  return row *
         kron(ComplexMatrix::Identity(e_count, e_count), x) *
         row.adjoint();
}

ComplexMatrix phi_map(const KGraphRep& rep, const ComplexMatrix& x, int color,
                      const Tolerance& tol) {
  (void)tol;
  if (x.rows() != rep.dim || x.cols() != rep.dim)
    throw AnalysisError("argument has wrong shape");
  if (color < -1 || color >= rep.kgraph.k())
    throw AnalysisError("invalid color");
  ComplexMatrix row;
  if (color >= 0) {
    row = row_operator(rep, color);
  } else {
    row = a_tilde_n(rep, std::vector<int>(
                             static_cast<size_t>(rep.kgraph.k()), 1));
  }
  Eigen::Index blocks = row.cols() / rep.dim;
  return row * kron(ComplexMatrix::Identity(blocks, blocks), x) *
         row.adjoint();
}

std::vector<ComplexMatrix> phi_fixed_points(const GraphRep& rep,
                                            const Tolerance& tol) {
  if (coisometry_residual(rep) > tol.eq_tol)
    throw AnalysisError(
        "fixed-point analysis requires a fully coisometric representation");
  ComplexMatrix row = row_operator(rep);
  Eigen::Index e_count = rep.graph.edge_count();
  std::vector<LinearConstraint> cons;
  for (const ComplexMatrix& s : rep.sigma)
    cons.push_back([s](const ComplexMatrix& x) { return x * s - s * x; });
  cons.push_back([row, e_count](const ComplexMatrix& x) {
    return ComplexMatrix(
        row * kron(ComplexMatrix::Identity(e_count, e_count), x) *
            row.adjoint() -
        x);
  });
  return solve_linear_space(cons, rep.dim, tol);
}

std::vector<ComplexMatrix> phi_fixed_points(const KGraphRep& rep,
                                            const Tolerance& tol) {
  if (coisometry_residual(rep) > tol.eq_tol)
    throw AnalysisError(
        "fixed-point analysis requires a fully coisometric representation");
  std::vector<LinearConstraint> cons;
  for (int i = 0; i < rep.kgraph.k(); ++i) {
    ComplexMatrix row = row_operator(rep, i);
    Eigen::Index blocks = row.cols() / rep.dim;
    cons.push_back([row, blocks](const ComplexMatrix& x) {
      return ComplexMatrix(
          row * kron(ComplexMatrix::Identity(blocks, blocks), x) *
              row.adjoint() -
          x);
    });
  }
  return solve_linear_space(cons, rep.dim, tol);
}

ComplexMatrix compress(const ComplexMatrix& x, const Subspace& s) {
  if (x.rows() != s.ambient_dim() || x.cols() != s.ambient_dim())
    throw AnalysisError("matrix and subspace dimensions do not match");
  return s.frame().adjoint() * x * s.frame();
}

GraphRep compress(const GraphRep& rep, const Subspace& s) {
  GraphRep out;
  out.graph = rep.graph;
  out.dim = s.dim();
  for (const ComplexMatrix& m : rep.sigma) out.sigma.push_back(compress(m, s));
  for (const ComplexMatrix& m : rep.A) out.A.push_back(compress(m, s));
  return out;
}

KGraphRep compress(const KGraphRep& rep, const Subspace& s) {
  KGraphRep out{rep.kgraph, s.dim(), {}};
  for (const auto& row : rep.rows) {
    std::vector<ComplexMatrix> crow;
    for (const ComplexMatrix& m : row) crow.push_back(compress(m, s));
    out.rows.push_back(std::move(crow));
  }
  return out;
}

OperatorAlgebra compress(const OperatorAlgebra& alg, const Subspace& s,
                         const Tolerance& tol) {
  validate_algebra(alg);
  if (s.ambient_dim() != alg.dim)
    throw AnalysisError("subspace has wrong ambient dimension");
  if (s.dim() == 0) throw AnalysisError("cannot compress to the zero subspace");
  return generate_algebra(restrict_to(s.frame(), alg.basis), s.dim(), tol);
}

EquivalenceResult unitary_equivalence(const std::vector<ComplexMatrix>& gens_a,
                                      const std::vector<ComplexMatrix>& gens_b,
                                      std::uint64_t seed,
                                      const Tolerance& tol) {
  if (gens_a.size() != gens_b.size())
    throw AnalysisError("generator count mismatch");
  if (gens_a.empty()) throw AnalysisError("empty generator lists");
  Eigen::Index d = gens_a[0].rows();
  for (const ComplexMatrix& g : gens_a)
    if (g.rows() != d || g.cols() != d)
      throw AnalysisError("generator has wrong shape");
  for (const ComplexMatrix& g : gens_b)
    if (g.rows() != d || g.cols() != d)
      throw AnalysisError("dimension mismatch between the two sides");

  EquivalenceResult res;
  std::vector<ComplexMatrix> basis =
      intertwiners_between(gens_a, gens_b, d, tol);
  res.intertwiner_dim = static_cast<Eigen::Index>(basis.size());
  if (basis.empty()) return res;  // NotEquivalent

  double scale = 1.0;
  for (size_t i = 0; i < gens_a.size(); ++i)
    scale = std::max({scale, operator_norm(gens_a[i]),
                      operator_norm(gens_b[i])});
  auto relation_residual = [&](const ComplexMatrix& u) {
    double worst = 0;
    for (size_t i = 0; i < gens_a.size(); ++i)
      worst = std::max(
          worst, operator_norm(ComplexMatrix(u * gens_a[i] - gens_b[i] * u)));
    return worst / scale;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<ComplexMatrix> candidates = basis;
  for (Eigen::Index t = 0; t < d * d; ++t) {
    ComplexMatrix combo = ComplexMatrix::Zero(d, d);
    for (const ComplexMatrix& b : basis)
      combo += std::complex<double>(nd(rng), nd(rng)) * b;
    candidates.push_back(combo);
  }

  bool found_invertible = false;
  double best = 0;
  ComplexMatrix best_u;
  for (const ComplexMatrix& cand : candidates) {
    if (!well_invertible(cand)) continue;
    ComplexMatrix u = polar_unitary(cand);
    double r = relation_residual(u);
    if (!found_invertible || r < best) {
      best = r;
      best_u = u;
    }
    found_invertible = true;
    if (r < 10 * tol.eq_tol) break;
  }
  if (!found_invertible) return res;  // NotEquivalent
  res.max_residual = best;
  if (best < 10 * tol.eq_tol) {
    res.verdict = EquivalenceResult::Verdict::Equivalent;
    res.unitary = best_u;
  } else {
    res.verdict = EquivalenceResult::Verdict::SimilarOnly;
  }
  return res;
}

WmReport wm_equals_vhat(const KGraphRep& rep, const std::vector<int>& m,
                        std::uint64_t seed, const Tolerance& tol) {
  require_valid(rep, tol);
  if (coisometry_residual(rep) > tol.eq_tol)
    throw AnalysisError(
        "word-subspace comparison requires a fully coisometric representation");
  if (static_cast<int>(m.size()) != rep.kgraph.k())
    throw AnalysisError("degree vector has wrong length");
  for (int mi : m)
    if (mi < 0) throw AnalysisError("degree entries must be >= 0");

  WmReport report;
  report.m = m;
  report.all_positive = true;
  for (int mi : m)
    if (mi == 0) report.all_positive = false;

  OperatorAlgebra full = generate_algebra(generators(rep), rep.dim, tol);
  report.vhat = minimal_cyclic_coinvariant(full, seed, tol);
  GraphRep words = product_rep(rep, m);
  OperatorAlgebra word_alg = generate_algebra(generators(words), rep.dim, tol);
  report.wm = minimal_cyclic_coinvariant(word_alg, seed, tol);

  report.equal = subspace_equal(report.vhat, report.wm, tol);
  report.contained = report.vhat.contains(report.wm, tol.eq_tol);
  report.distance =
      operator_norm(report.vhat.projection() - report.wm.projection());
  return report;
}

}  // namespace corelab
