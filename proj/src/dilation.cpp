#include "corelab/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace corelab {
namespace {

struct DefectData {
  ComplexMatrix defect_sq;
  ComplexMatrix defect_sqrt;
  std::vector<ComplexMatrix> w0_by_vertex;
  std::vector<Eigen::Index> w0_dims;
  Eigen::Index alpha = 0;
};

// Rows of E (x) V carrying edges with range u (edge-major tensor order).
std::vector<Eigen::Index> vertex_rows(const GraphRep& rep, int u) {
  std::vector<Eigen::Index> rows;
  for (const Edge& e : rep.graph.edges())
    if (e.range == u)
      for (Eigen::Index h = 0; h < rep.dim; ++h)
        rows.push_back(e.id * rep.dim + h);
  return rows;
}

// The defect is block diagonal over range vertices; each block is
// eigendecomposed and eigenvalues above the rank threshold are kept. The
// square root is assembled from the kept pairs so its support is exactly W0.
DefectData per_vertex_defect(const GraphRep& rep, const Tolerance& tol) {
  Eigen::Index d = rep.dim;
  Eigen::Index nd = rep.graph.edge_count() * d;
  DefectData out;
  out.defect_sq = defect_squared(rep);
  out.defect_sqrt = ComplexMatrix::Zero(nd, nd);

  std::vector<std::vector<Eigen::Index>> rows_by_vertex;
  std::vector<HermitianEigen> eigs;
  double lambda_max = 0;
  for (int u = 0; u < rep.graph.vertex_count(); ++u) {
    rows_by_vertex.push_back(vertex_rows(rep, u));
    const auto& rows = rows_by_vertex.back();
    Eigen::Index b = static_cast<Eigen::Index>(rows.size());
    ComplexMatrix block(b, b);
    for (Eigen::Index i = 0; i < b; ++i)
      for (Eigen::Index j = 0; j < b; ++j)
        block(i, j) = out.defect_sq(rows[i], rows[j]);
    eigs.push_back(hermitian_eigen(block));
    if (b > 0) lambda_max = std::max(lambda_max, eigs.back().values[0]);
  }
  double cut = tol.rank_rel_tol * std::max(lambda_max, 1.0) *
               static_cast<double>(std::max<Eigen::Index>(nd, 1));

  for (int u = 0; u < rep.graph.vertex_count(); ++u) {
    const auto& rows = rows_by_vertex[static_cast<size_t>(u)];
    const HermitianEigen& eg = eigs[static_cast<size_t>(u)];
    Eigen::Index b = static_cast<Eigen::Index>(rows.size());
    Eigen::Index keep = 0;
    while (keep < b && eg.values[keep] > cut) ++keep;
    ComplexMatrix frame = ComplexMatrix::Zero(nd, keep);
    for (Eigen::Index c = 0; c < keep; ++c)
      for (Eigen::Index i = 0; i < b; ++i)
        frame(rows[i], c) = eg.vectors(i, c);
    fix_phases(frame);
    for (Eigen::Index c = 0; c < keep; ++c)
      out.defect_sqrt +=
          std::sqrt(eg.values[c]) * (frame.col(c) * frame.col(c).adjoint());
    out.w0_by_vertex.push_back(std::move(frame));
    out.w0_dims.push_back(keep);
    out.alpha += keep;
  }
  return out;
}

ComplexMatrix embed_in_total(const ComplexMatrix& top, Eigen::Index total) {
  ComplexMatrix out = ComplexMatrix::Zero(total, top.cols());
  out.topRows(top.rows()) = top;
  return out;
}

// One round of span growth: span(acc + S(e) acc for all e).
Subspace grow_span(const std::vector<ComplexMatrix>& S, const Subspace& acc,
                   const Tolerance& tol) {
  Eigen::Index n = acc.ambient_dim();
  Eigen::Index c = acc.dim();
  ComplexMatrix cols(n, c * (static_cast<Eigen::Index>(S.size()) + 1));
  cols.leftCols(c) = acc.frame();
  for (size_t e = 0; e < S.size(); ++e)
    cols.middleCols(c * (static_cast<Eigen::Index>(e) + 1), c) =
        S[e] * acc.frame();
  return orthonormal_range(cols, tol);
}

}  // namespace

ComplexMatrix correspondence_identity(const GraphRep& rep) {
  Eigen::Index d = rep.dim;
  Eigen::Index nd = rep.graph.edge_count() * d;
  ComplexMatrix out = ComplexMatrix::Zero(nd, nd);
  for (const Edge& e : rep.graph.edges())
    out.block(e.id * d, e.id * d, d, d) =
        rep.sigma[static_cast<size_t>(e.source)];
  return out;
}

ComplexMatrix defect_squared(const GraphRep& rep) {
  ComplexMatrix row = row_operator(rep);
  return correspondence_identity(rep) - row.adjoint() * row;
}

Eigen::Index TruncatedDilation::alpha() const {
  Eigen::Index a = 0;
  for (Eigen::Index w : w0_dims) a += w;
  return a;
}

Eigen::Index TruncatedDilation::level_dim(int n) const {
  Eigen::Index out = 0;
  for (const GraphPath& p : level_paths[static_cast<size_t>(n)])
    out += w0_dims[static_cast<size_t>(p.source)];
  return out;
}

TruncatedDilation build_dilation(const GraphRep& rep, int depth,
                                 const Tolerance& tol) {
  if (depth < 1) throw ParseError("dilation depth must be >= 1");
  require_valid(rep, tol);
  if (!is_completely_contractive(rep, tol))
    throw AnalysisError("representation is not completely contractive");

  TruncatedDilation dil;
  dil.base = rep;
  dil.depth = depth;
  DefectData dd = per_vertex_defect(rep, tol);
  dil.defect_sq = std::move(dd.defect_sq);
  dil.defect_sqrt = std::move(dd.defect_sqrt);
  dil.w0_by_vertex = std::move(dd.w0_by_vertex);
  dil.w0_dims = std::move(dd.w0_dims);
  {
    Eigen::Index nd = rep.graph.edge_count() * rep.dim;
    ComplexMatrix w0_frame(nd, dd.alpha);
    Eigen::Index at = 0;
    for (const ComplexMatrix& f : dil.w0_by_vertex) {
      w0_frame.middleCols(at, f.cols()) = f;
      at += f.cols();
    }
    dil.w0 = Subspace(nd, w0_frame);
  }

  Eigen::Index d = rep.dim;
  Eigen::Index running = d;
  std::vector<std::map<std::vector<int>, Eigen::Index>> path_index;
  for (int n = 0; n < depth; ++n) {
    dil.level_paths.push_back(paths_of_length(rep.graph, n));
    dil.level_offsets.push_back(running);
    dil.cell_offsets.emplace_back();
    path_index.emplace_back();
    for (size_t pi = 0; pi < dil.level_paths.back().size(); ++pi) {
      const GraphPath& p = dil.level_paths.back()[pi];
      dil.cell_offsets.back().push_back(running);
      path_index.back()[p.edge_ids] = static_cast<Eigen::Index>(pi);
      running += dil.w0_dims[static_cast<size_t>(p.source)];
    }
  }
  dil.total_dim = running;
  dil.interior_dim = dil.total_dim - dil.level_dim(depth - 1);

  for (const Edge& e : rep.graph.edges()) {
    ComplexMatrix S = ComplexMatrix::Zero(dil.total_dim, dil.total_dim);
    S.topLeftCorner(d, d) = rep.A[static_cast<size_t>(e.id)];
    Eigen::Index wu = dil.w0_dims[static_cast<size_t>(e.range)];
    if (wu > 0)
      S.block(dil.cell_offsets[0][static_cast<size_t>(e.range)], 0, wu, d) =
          dil.w0_by_vertex[static_cast<size_t>(e.range)].adjoint() *
          dil.defect_sqrt.middleCols(e.id * d, d) *
          rep.sigma[static_cast<size_t>(e.source)];
    for (int n = 0; n + 1 < depth; ++n) {
      for (size_t pi = 0; pi < dil.level_paths[static_cast<size_t>(n)].size();
           ++pi) {
        const GraphPath& p = dil.level_paths[static_cast<size_t>(n)][pi];
        if (p.range != e.source) continue;
        Eigen::Index wd = dil.w0_dims[static_cast<size_t>(p.source)];
        if (wd == 0) continue;
        std::vector<int> q_ids;
        q_ids.push_back(e.id);
        q_ids.insert(q_ids.end(), p.edge_ids.begin(), p.edge_ids.end());
        Eigen::Index qi = path_index[static_cast<size_t>(n) + 1].at(q_ids);
        S.block(dil.cell_offsets[static_cast<size_t>(n) + 1]
                                [static_cast<size_t>(qi)],
                dil.cell_offsets[static_cast<size_t>(n)][pi], wd, wd) =
            ComplexMatrix::Identity(wd, wd);
      }
    }
    dil.S.push_back(std::move(S));
  }

  for (int v = 0; v < rep.graph.vertex_count(); ++v) {
    ComplexMatrix r = ComplexMatrix::Zero(dil.total_dim, dil.total_dim);
    r.topLeftCorner(d, d) = rep.sigma[static_cast<size_t>(v)];
    for (int n = 0; n < depth; ++n)
      for (size_t pi = 0; pi < dil.level_paths[static_cast<size_t>(n)].size();
           ++pi) {
        const GraphPath& p = dil.level_paths[static_cast<size_t>(n)][pi];
        if (p.range != v) continue;
        Eigen::Index wd = dil.w0_dims[static_cast<size_t>(p.source)];
        Eigen::Index off = dil.cell_offsets[static_cast<size_t>(n)][pi];
        r.block(off, off, wd, wd) = ComplexMatrix::Identity(wd, wd);
      }
    dil.rho.push_back(std::move(r));
  }
  return dil;
}

DilationChecks verify_dilation(const TruncatedDilation& dil,
                               const Tolerance& tol) {
  DilationChecks out;
  Eigen::Index d = dil.base.dim;
  Eigen::Index total = dil.total_dim;
  Eigen::Index interior = dil.interior_dim;
  Eigen::Index rest = total - d;

  for (const Edge& e : dil.base.graph.edges()) {
    const ComplexMatrix& S = dil.S[static_cast<size_t>(e.id)];
    out.compression_residual = std::max(
        out.compression_residual,
        operator_norm(ComplexMatrix(S.topLeftCorner(d, d) -
                                    dil.base.A[static_cast<size_t>(e.id)])));
    if (rest > 0)
      out.vperp_residual = std::max(
          out.vperp_residual, operator_norm(ComplexMatrix(S.block(0, d, d, rest))));
  }
  for (const ComplexMatrix& r : dil.rho)
    if (rest > 0)
      out.reducing_residual = std::max(
          {out.reducing_residual, operator_norm(ComplexMatrix(r.block(0, d, d, rest))),
           operator_norm(ComplexMatrix(r.block(d, 0, rest, d)))});

  for (const Edge& e : dil.base.graph.edges()) {
    ComplexMatrix Me =
        dil.S[static_cast<size_t>(e.id)].leftCols(interior);
    for (const Edge& f : dil.base.graph.edges()) {
      ComplexMatrix Mf =
          dil.S[static_cast<size_t>(f.id)].leftCols(interior);
      ComplexMatrix want =
          e.id == f.id
              ? ComplexMatrix(dil.rho[static_cast<size_t>(e.source)]
                                  .topLeftCorner(interior, interior))
              : ComplexMatrix(ComplexMatrix::Zero(interior, interior));
      out.isometry_residual =
          std::max(out.isometry_residual,
                   operator_norm(ComplexMatrix(Me.adjoint() * Mf - want)));
    }
  }

  ComplexMatrix gram = ComplexMatrix::Zero(interior, interior);
  for (const ComplexMatrix& S : dil.S) {
    ComplexMatrix R = S.topRows(interior);
    gram += R * R.adjoint();
  }
  ComplexMatrix defect =
      gram - ComplexMatrix::Identity(interior, interior);
  out.coisometry_residual = operator_norm(defect);
  out.coisometry_by_level.push_back(
      operator_norm(ComplexMatrix(defect.topRows(d))));
  for (int n = 0; n + 1 < dil.depth; ++n) {
    Eigen::Index off = dil.level_offsets[static_cast<size_t>(n)];
    Eigen::Index ld = dil.level_dim(n);
    out.coisometry_by_level.push_back(
        operator_norm(ComplexMatrix(defect.middleRows(off, ld))));
  }
  out.base_fully_coisometric = is_fully_coisometric(dil.base, tol);
  out.coisometric_on_interior = out.coisometry_residual <= tol.eq_tol;
  out.coisometry_matches_base =
      out.coisometric_on_interior == out.base_fully_coisometric;

  Subspace acc(total, embed_in_total(ComplexMatrix::Identity(d, d), total));
  out.span_dims.push_back(acc.dim());
  out.minimal = acc.dim() == d;
  Eigen::Index expected = d;
  for (int n = 1; n < dil.depth; ++n) {
    acc = grow_span(dil.S, acc, tol);
    expected += dil.level_dim(n - 1);
    out.span_dims.push_back(acc.dim());
    if (acc.dim() != expected) out.minimal = false;
  }
  out.alpha_matches_level0 = dil.alpha() == dil.level_dim(0);
  return out;
}

CandidateReport verify_candidate(const DilationCandidate& cand,
                                 const GraphRep& base, const Tolerance& tol) {
  Eigen::Index d = cand.base_dim;
  Eigen::Index total = cand.total_dim;
  Eigen::Index interior = cand.interior_dim;
  if (d != base.dim) throw ParseError("candidate base dimension mismatch");
  if (total < d || interior < d || interior > total)
    throw ParseError("candidate dimensions are inconsistent");
  if (static_cast<int>(cand.S.size()) != base.graph.edge_count())
    throw ParseError("candidate needs one operator per edge");
  if (static_cast<int>(cand.rho.size()) != base.graph.vertex_count())
    throw ParseError("candidate needs one operator per vertex");
  for (const ComplexMatrix& s : cand.S)
    if (s.rows() != total || s.cols() != total)
      throw ParseError("candidate edge operator has wrong shape");
  for (const ComplexMatrix& r : cand.rho)
    if (r.rows() != total || r.cols() != total)
      throw ParseError("candidate vertex operator has wrong shape");

  CandidateReport out;
  Eigen::Index rest = total - d;
  for (size_t v = 0; v < cand.rho.size(); ++v) {
    const ComplexMatrix& r = cand.rho[v];
    double res = operator_norm(
        ComplexMatrix(r.topLeftCorner(d, d) - base.sigma[v]));
    if (rest > 0)
      res = std::max({res, operator_norm(ComplexMatrix(r.block(0, d, d, rest))),
                      operator_norm(ComplexMatrix(r.block(d, 0, rest, d)))});
    out.reducing_residual = std::max(out.reducing_residual, res);
  }
  for (size_t e = 0; e < cand.S.size(); ++e) {
    const ComplexMatrix& S = cand.S[e];
    out.compression_residual = std::max(
        out.compression_residual,
        operator_norm(ComplexMatrix(S.topLeftCorner(d, d) - base.A[e])));
    if (rest > 0)
      out.vperp_residual = std::max(
          out.vperp_residual, operator_norm(ComplexMatrix(S.block(0, d, d, rest))));
  }
  for (const Edge& e : base.graph.edges()) {
    ComplexMatrix Me = cand.S[static_cast<size_t>(e.id)].leftCols(interior);
    for (const Edge& f : base.graph.edges()) {
      ComplexMatrix Mf = cand.S[static_cast<size_t>(f.id)].leftCols(interior);
      ComplexMatrix want =
          e.id == f.id
              ? ComplexMatrix(cand.rho[static_cast<size_t>(e.source)]
                                  .topLeftCorner(interior, interior))
              : ComplexMatrix(ComplexMatrix::Zero(interior, interior));
      out.isometry_residual =
          std::max(out.isometry_residual,
                   operator_norm(ComplexMatrix(Me.adjoint() * Mf - want)));
    }
  }
  ComplexMatrix gram = ComplexMatrix::Zero(interior, interior);
  for (const ComplexMatrix& S : cand.S) {
    ComplexMatrix R = S.topRows(interior);
    gram += R * R.adjoint();
  }
  out.coisometry_residual = operator_norm(
      ComplexMatrix(gram - ComplexMatrix::Identity(interior, interior)));

  Subspace acc(total, embed_in_total(ComplexMatrix::Identity(d, d), total));
  for (Eigen::Index guard = 0; guard <= total; ++guard) {
    Subspace next = grow_span(cand.S, acc, tol);
    if (next.dim() == acc.dim()) break;
    acc = next;
  }
  out.word_span_dim = acc.dim();
  out.covers_interior = true;
  for (Eigen::Index i = 0; i < interior; ++i) {
    ComplexVector e = ComplexVector::Zero(total);
    e[i] = 1.0;
    if (!acc.contains(e, 1e-7)) {
      out.covers_interior = false;
      break;
    }
  }

  out.axiom_reducing = out.reducing_residual <= tol.eq_tol;
  out.axiom_invariant = out.vperp_residual <= tol.eq_tol;
  out.axiom_compression = out.compression_residual <= tol.eq_tol;
  out.isometric_on_interior = out.isometry_residual <= tol.eq_tol;
  out.coisometric_on_interior = out.coisometry_residual <= tol.eq_tol;
  return out;
}

KCandidateReport verify_candidate_k(const KGraphCandidate& cand,
                                    const KGraphRep& base,
                                    const Tolerance& tol) {
  if (static_cast<int>(cand.rows.size()) != base.kgraph.k())
    throw ParseError("candidate needs one row per color");
  KCandidateReport out;
  for (int i = 0; i < base.kgraph.k(); ++i) {
    int mi = base.kgraph.m()[static_cast<size_t>(i)];
    if (static_cast<int>(cand.rows[static_cast<size_t>(i)].size()) != mi)
      throw ParseError("candidate row has wrong number of entries");
    std::vector<Edge> edges;
    for (int l = 0; l < mi; ++l) edges.push_back(Edge{l, 0, 0});
    GraphRep color_base;
    color_base.graph = DirectedGraph(1, edges);
    color_base.dim = base.dim;
    color_base.sigma = {ComplexMatrix::Identity(base.dim, base.dim)};
    color_base.A = base.rows[static_cast<size_t>(i)];
    DilationCandidate c;
    c.total_dim = cand.total_dim;
    c.base_dim = cand.base_dim;
    c.interior_dim = cand.interior_dim;
    c.S = cand.rows[static_cast<size_t>(i)];
    c.rho = {ComplexMatrix::Identity(cand.total_dim, cand.total_dim)};
    out.per_color.push_back(verify_candidate(c, color_base, tol));
  }
  KGraphRep on_total{base.kgraph, cand.total_dim, cand.rows};
  out.commutation_residual = check_kgraph_rep(on_total).commutation;
  out.doubly_commuting_residual = doubly_commuting_residual(on_total);
  out.relations_ok = out.commutation_residual <= tol.eq_tol &&
                     out.doubly_commuting_residual <= tol.eq_tol;
  return out;
}

WanderingReport wandering_dimension(const GraphRep& rep, std::uint64_t seed,
                                    const Tolerance& tol) {
  require_valid(rep, tol);
  WanderingReport out;
  out.alpha = per_vertex_defect(rep, tol).alpha;
  OperatorAlgebra alg = generate_algebra(generators(rep), rep.dim, tol);
  Subspace vhat = minimal_cyclic_coinvariant(alg, seed, tol);
  out.vhat_dim = vhat.dim();
  GraphRep rep_hat = compress(rep, vhat);
  OperatorAlgebra alg_hat = compress(alg, vhat, tol);
  BlockDecomposition bd = block_decomposition(alg_hat, seed, tol);
  for (const BlockClass& bc : bd.blocks) {
    GraphRep rep_h = compress(rep_hat, bc.members[0]);
    Eigen::Index ah = per_vertex_defect(rep_h, tol).alpha;
    out.alpha_by_block.push_back(ah);
    out.block_dims.push_back(bc.block_dim);
    out.multiplicities.push_back(bc.multiplicity);
    out.alpha_from_blocks += ah * bc.multiplicity;
  }
  out.consistent = out.alpha == out.alpha_from_blocks;
  return out;
}

Subspace pullback_to_V(const TruncatedDilation& dil,
                       const std::vector<ComplexVector>& vectors,
                       const Tolerance& tol) {
  Eigen::Index d = dil.base.dim;
  std::vector<ComplexVector> collected;
  for (const ComplexVector& x : vectors) {
    if (x.size() != dil.total_dim)
      throw AnalysisError("vector has wrong dimension for the dilation space");
    for (const auto& level : dil.level_paths)
      for (const GraphPath& p : level) {
        ComplexVector y = x;
        for (int id : p.edge_ids)
          y = dil.S[static_cast<size_t>(id)].adjoint() * y;
        collected.push_back(y.head(d));
      }
  }
  ComplexMatrix cols(d, static_cast<Eigen::Index>(collected.size()));
  for (size_t i = 0; i < collected.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = collected[i];
  return orthonormal_range(cols, tol);
}

Subspace word_span(const TruncatedDilation& dil, const Subspace& v1,
                   int max_len, const Tolerance& tol) {
  if (v1.ambient_dim() != dil.base.dim)
    throw AnalysisError("subspace must live in the base space");
  Subspace acc(dil.total_dim, embed_in_total(v1.frame(), dil.total_dim));
  for (int l = 0; l < max_len; ++l) acc = grow_span(dil.S, acc, tol);
  return acc;
}

}  // namespace corelab
