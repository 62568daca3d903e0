#pragma once

#include <cstdint>
#include <vector>

#include "corelab/graphs.hpp"
#include "corelab/numerics.hpp"
#include "corelab/reps.hpp"
#include "corelab/structure.hpp"

namespace corelab {

// blkdiag over edges of sigma(s(e)): the identity of the correspondence
// E (x) V sitting inside the ambient edge-major tensor space.
ComplexMatrix correspondence_identity(const GraphRep& rep);

// I_corr - row* row, the defect of the row operator on E (x) V.
ComplexMatrix defect_squared(const GraphRep& rep);

// Truncated shift-style isometric dilation. The space is
//   V (+) level 0 (+) ... (+) level depth-1,
// level n holding one cell per path p of length n, of size dim W0^{s(p)};
// level 0 cells are indexed by vertices (length-0 paths).
struct TruncatedDilation {
  GraphRep base;
  int depth = 0;

  ComplexMatrix defect_sq;                  // on E (x) V
  ComplexMatrix defect_sqrt;                // support exactly W0
  std::vector<ComplexMatrix> w0_by_vertex;  // frames in E (x) V coordinates
  std::vector<Eigen::Index> w0_dims;
  Subspace w0;

  std::vector<std::vector<GraphPath>> level_paths;     // [level][path index]
  std::vector<std::vector<Eigen::Index>> cell_offsets; // global offsets
  std::vector<Eigen::Index> level_offsets;             // start of each level
  Eigen::Index total_dim = 0;
  Eigen::Index interior_dim = 0;  // everything except the top level

  std::vector<ComplexMatrix> S;    // per edge id, total x total
  std::vector<ComplexMatrix> rho;  // per vertex, total x total

  Eigen::Index alpha() const;          // dim W0 = level-0 dimension
  Eigen::Index level_dim(int n) const;
};

// Throws ParseError for depth < 1, AnalysisError for an invalid or
// non-contractive representation.
TruncatedDilation build_dilation(const GraphRep& rep, int depth,
                                 const Tolerance& tol = {});

struct DilationChecks {
  double compression_residual = 0;  // P_V S(e)|_V vs A(e)
  double vperp_residual = 0;        // top-right block of S(e)
  double reducing_residual = 0;     // off-diagonal blocks of rho(v)
  double isometry_residual = 0;     // S(e)*S(f) vs delta rho(s(e)), interior
  double coisometry_residual = 0;   // sum S S* vs I on interior rows
  std::vector<double> coisometry_by_level;  // V, level 0, ..., level N-2
  bool base_fully_coisometric = false;
  bool coisometric_on_interior = false;
  bool coisometry_matches_base = false;
  bool minimal = false;             // word spans fill successive levels
  std::vector<Eigen::Index> span_dims;  // span{S(p) V : |p| <= n}, n = 0..N-1
  bool alpha_matches_level0 = false;
};

DilationChecks verify_dilation(const TruncatedDilation& dil,
                               const Tolerance& tol = {});

// User-supplied candidate on C^total_dim with V embedded as the first
// base_dim coordinates; interior_dim declares where truncation effects start.
struct DilationCandidate {
  Eigen::Index total_dim = 0;
  Eigen::Index base_dim = 0;
  Eigen::Index interior_dim = 0;
  std::vector<ComplexMatrix> S;    // per edge
  std::vector<ComplexMatrix> rho;  // per vertex
};

struct CandidateReport {
  double reducing_residual = 0;   // axiom: V reduces rho, rho|_V = sigma
  double vperp_residual = 0;      // axiom: V-perp invariant under S(e)
  double compression_residual = 0;  // axiom: P_V S(e)|_V = A(e)
  double isometry_residual = 0;
  double coisometry_residual = 0;
  bool axiom_reducing = false;
  bool axiom_invariant = false;
  bool axiom_compression = false;
  bool isometric_on_interior = false;
  bool coisometric_on_interior = false;
  Eigen::Index word_span_dim = 0;
  bool covers_interior = false;  // word span of V contains declared interior
};

CandidateReport verify_candidate(const DilationCandidate& cand,
                                 const GraphRep& base,
                                 const Tolerance& tol = {});

// k-tuple candidate for a single-vertex k-graph representation.
struct KGraphCandidate {
  Eigen::Index total_dim = 0;
  Eigen::Index base_dim = 0;
  Eigen::Index interior_dim = 0;
  std::vector<std::vector<ComplexMatrix>> rows;  // [color][edge index]
};

struct KCandidateReport {
  std::vector<CandidateReport> per_color;
  double commutation_residual = 0;       // theta relations among the S's
  double doubly_commuting_residual = 0;  // on the full candidate space
  bool relations_ok = false;
};

KCandidateReport verify_candidate_k(const KGraphCandidate& cand,
                                    const KGraphRep& base,
                                    const Tolerance& tol = {});

struct WanderingReport {
  Eigen::Index alpha = 0;                    // rank of the defect
  Eigen::Index vhat_dim = 0;
  std::vector<Eigen::Index> alpha_by_block;  // per equivalence class
  std::vector<Eigen::Index> block_dims;      // d_h
  std::vector<Eigen::Index> multiplicities;  // m_h
  Eigen::Index alpha_from_blocks = 0;        // sum alpha_h m_h
  bool consistent = false;                   // alpha == alpha_from_blocks
};

// alpha from the defect rank; per-block alpha_h from the defect of the
// compression to a representative minimal summand.
WanderingReport wandering_dimension(const GraphRep& rep,
                                    std::uint64_t seed = 1234,
                                    const Tolerance& tol = {});

// Applies S(p)* for every path of length 0..depth-1 and collects the
// V-components; returns their span inside V.
Subspace pullback_to_V(const TruncatedDilation& dil,
                       const std::vector<ComplexVector>& vectors,
                       const Tolerance& tol = {});

// span{ S(p) x : |p| <= max_len, x in v1 } inside the truncated space;
// v1 lives in V (ambient base dimension).
Subspace word_span(const TruncatedDilation& dil, const Subspace& v1,
                   int max_len, const Tolerance& tol = {});

}  // namespace corelab
