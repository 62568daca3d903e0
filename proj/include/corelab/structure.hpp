#pragma once

#include <cstdint>
#include <vector>

#include "corelab/numerics.hpp"
#include "corelab/reps.hpp"

namespace corelab {

// Unital span-closed matrix algebra with a Hilbert-Schmidt-orthonormal basis.
// dim is the ambient space dimension; basis.size() is the linear dimension.
struct OperatorAlgebra {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> basis;
};

// Modified Gram-Schmidt in the Hilbert-Schmidt inner product, two passes;
// candidates with residual norm <= drop_tol are dropped.
std::vector<ComplexMatrix> hs_orthonormalize(
    const std::vector<ComplexMatrix>& mats, double drop_tol = 1e-9);

// Span closure of words in {I} + generators, iterated to a fixpoint.
OperatorAlgebra generate_algebra(const std::vector<ComplexMatrix>& generators,
                                 Eigen::Index dim, const Tolerance& tol = {});

OperatorAlgebra adjoint_algebra(const OperatorAlgebra& alg);

// {X : XB = BX for every basis element B}, returned as an algebra.
OperatorAlgebra commutant(const OperatorAlgebra& alg, const Tolerance& tol = {});

// Distance of x from span(basis), relative to max(||x||, 1).
double containment_residual(const OperatorAlgebra& alg, const ComplexMatrix& x);
bool algebra_contains(const OperatorAlgebra& alg, const ComplexMatrix& x,
                      const Tolerance& tol = {});

double star_residual(const OperatorAlgebra& alg);
bool is_star_closed(const OperatorAlgebra& alg, const Tolerance& tol = {});

// span{ B v : B in alg } and span{ B f_j : B in alg, f_j frame of seed }.
Subspace cyclic_closure(const OperatorAlgebra& alg, const ComplexVector& seed,
                        const Tolerance& tol = {});
Subspace cyclic_closure(const OperatorAlgebra& alg, const Subspace& seed,
                        const Tolerance& tol = {});

// A minimal alg*-invariant subspace inside the adjoint cyclic closure of the
// seed. Descent: irreducibility certificate (restricted span = w^2), else
// frame-vector cyclic descent, else radical image, else an eigenspace of a
// non-scalar commutant element. Throws AnalysisError on a zero seed.
Subspace minimal_coinvariant(const OperatorAlgebra& alg,
                             const ComplexVector& seed,
                             const Tolerance& tol = {});
Subspace minimal_coinvariant(const OperatorAlgebra& alg, const Subspace& seed,
                             const Tolerance& tol = {});

struct MinimalFamily {
  std::vector<Subspace> summands;  // pairwise orthogonal, minimal coinvariant
  Subspace vhat;                   // direct sum (concatenated frames)
  bool cyclic = false;             // alg[vhat] = ambient space
  Eigen::Index cyclic_dim = 0;     // dim alg[vhat]
};

// Greedy maximal orthogonal family: pick a minimal coinvariant subspace of
// the remainder (seeds: standard basis vectors, then seeded random vectors),
// then shrink the remainder to the largest alg*-invariant subspace orthogonal
// to everything found so far; repeat until the remainder is zero.
MinimalFamily minimal_coinvariant_family(const OperatorAlgebra& alg,
                                         std::uint64_t seed = 1234,
                                         const Tolerance& tol = {});

// The direct sum of the family; throws AnalysisError when alg[vhat] fails to
// be the whole space (the cyclicity check).
Subspace minimal_cyclic_coinvariant(const OperatorAlgebra& alg,
                                    std::uint64_t seed = 1234,
                                    const Tolerance& tol = {});

// s is alg*-invariant, alg[s] is everything, and no proper alg*-invariant
// subspace of s is cyclic (drop-one sub-sums plus diagonal twists of
// equivalent summands).
bool is_minimal_cyclic_coinvariant(const OperatorAlgebra& alg,
                                   const Subspace& s,
                                   std::uint64_t seed = 1234,
                                   const Tolerance& tol = {});

struct BlockClass {
  Subspace subspace;                        // direct sum of the class members
  Eigen::Index block_dim = 0;               // d_h
  Eigen::Index multiplicity = 0;            // m_h
  std::vector<Subspace> members;            // the family members in the class
  std::vector<ComplexMatrix> intertwiners;  // member <- reference; first = I
  ComplexMatrix central_projection;
};

struct BlockDecomposition {
  std::vector<BlockClass> blocks;
  std::vector<Subspace> family;  // the underlying minimal family, in order
};

// Wedderburn-style block structure of a *-closed algebra: partition the
// minimal family into unitary-equivalence classes via intertwiner solves.
// Throws AnalysisError when the algebra is not *-closed.
BlockDecomposition block_decomposition(const OperatorAlgebra& alg,
                                       std::uint64_t seed = 1234,
                                       const Tolerance& tol = {});

// Phi(X) = row (I (x) X) row*. X must commute with every vertex projection.
ComplexMatrix phi_map(const GraphRep& rep, const ComplexMatrix& x,
                      const Tolerance& tol = {});
// color >= 0 uses that color's row; color = -1 uses the (1,...,1) word row.
ComplexMatrix phi_map(const KGraphRep& rep, const ComplexMatrix& x,
                      int color = -1, const Tolerance& tol = {});

// Basis of {X in sigma-commutant : Phi(X) = X}, jointly over all colors.
// Requires a fully coisometric representation.
std::vector<ComplexMatrix> phi_fixed_points(const GraphRep& rep,
                                            const Tolerance& tol = {});
std::vector<ComplexMatrix> phi_fixed_points(const KGraphRep& rep,
                                            const Tolerance& tol = {});

ComplexMatrix compress(const ComplexMatrix& x, const Subspace& s);
GraphRep compress(const GraphRep& rep, const Subspace& s);
KGraphRep compress(const KGraphRep& rep, const Subspace& s);
OperatorAlgebra compress(const OperatorAlgebra& alg, const Subspace& s,
                         const Tolerance& tol = {});

struct EquivalenceResult {
  enum class Verdict { Equivalent, SimilarOnly, NotEquivalent };
  Verdict verdict = Verdict::NotEquivalent;
  ComplexMatrix unitary;        // empty unless verdict = Equivalent
  double max_residual = 0;      // worst relation residual of the certificate
  Eigen::Index intertwiner_dim = 0;
};

// Joint intertwiner space {T : T a_i = b_i T}; searches basis elements and
// seeded random combinations (up to d^2 trials) for an invertible element,
// then certifies the polar unitary against every relation.
EquivalenceResult unitary_equivalence(const std::vector<ComplexMatrix>& gens_a,
                                      const std::vector<ComplexMatrix>& gens_b,
                                      std::uint64_t seed = 1234,
                                      const Tolerance& tol = {});

struct WmReport {
  std::vector<int> m;
  Subspace vhat;         // from the full generator set
  Subspace wm;           // from the degree-m word products
  bool all_positive = false;  // every m_i >= 1
  bool equal = false;
  bool contained = false;     // wm inside vhat
  double distance = 0;        // ||P_vhat - P_wm||
};

// Compares the minimal cyclic coinvariant subspace of the degree-m word
// algebra with the one of the full representation. Requires a fully
// coisometric representation; entries of m must be >= 0.
WmReport wm_equals_vhat(const KGraphRep& rep, const std::vector<int>& m,
                        std::uint64_t seed = 1234, const Tolerance& tol = {});

}  // namespace corelab
