#include "corelab/reps.hpp"

#include <algorithm>
#include <cmath>

namespace corelab {

double GraphRepResiduals::worst() const {
  return std::max(std::max(sigma_projection, sigma_orthogonality),
                  std::max(sigma_sum, covariance));
}

GraphRepResiduals check_graph_rep(const GraphRep& rep) {
  if (rep.dim < 1) throw ParseError("representation dimension must be >= 1");
  if (static_cast<int>(rep.sigma.size()) != rep.graph.vertex_count())
    throw ParseError("need one sigma matrix per vertex");
  if (static_cast<int>(rep.A.size()) != rep.graph.edge_count())
    throw ParseError("need one edge matrix per edge");
  for (const ComplexMatrix& s : rep.sigma)
    if (s.rows() != rep.dim || s.cols() != rep.dim)
      throw ParseError("sigma matrix has wrong shape");
  for (const ComplexMatrix& a : rep.A)
    if (a.rows() != rep.dim || a.cols() != rep.dim)
      throw ParseError("edge matrix has wrong shape");

  GraphRepResiduals res;
  ComplexMatrix sum = ComplexMatrix::Zero(rep.dim, rep.dim);
  for (const ComplexMatrix& s : rep.sigma) {
    res.sigma_projection =
        std::max(res.sigma_projection,
                 std::max(operator_norm(s * s - s),
                          operator_norm(ComplexMatrix(s.adjoint()) - s)));
    sum += s;
  }
  res.sigma_sum =
      operator_norm(sum - ComplexMatrix::Identity(rep.dim, rep.dim));
  for (size_t i = 0; i < rep.sigma.size(); ++i)
    for (size_t j = i + 1; j < rep.sigma.size(); ++j)
      res.sigma_orthogonality = std::max(
          res.sigma_orthogonality, operator_norm(rep.sigma[i] * rep.sigma[j]));
  for (const Edge& e : rep.graph.edges()) {
    const ComplexMatrix& a = rep.A[static_cast<size_t>(e.id)];
    res.covariance = std::max(
        res.covariance,
        operator_norm(rep.sigma[static_cast<size_t>(e.range)] * a *
                          rep.sigma[static_cast<size_t>(e.source)] -
                      a));
  }
  return res;
}

void require_valid(const GraphRep& rep, const Tolerance& tol) {
  GraphRepResiduals res = check_graph_rep(rep);
  if (res.worst() > tol.eq_tol)
    throw AnalysisError("graph representation invariants violated (residual " +
                        std::to_string(res.worst()) + ")");
}

KGraphRepResiduals check_kgraph_rep(const KGraphRep& rep) {
  if (rep.dim < 1) throw ParseError("representation dimension must be >= 1");
  if (static_cast<int>(rep.rows.size()) != rep.kgraph.k())
    throw ParseError("need one matrix row per color");
  for (int i = 0; i < rep.kgraph.k(); ++i) {
    const auto& row = rep.rows[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != rep.kgraph.m()[static_cast<size_t>(i)])
      throw ParseError("matrix row has wrong number of entries");
    for (const ComplexMatrix& a : row)
      if (a.rows() != rep.dim || a.cols() != rep.dim)
        throw ParseError("row matrix has wrong shape");
  }
  KGraphRepResiduals res;
  for (int i = 0; i < rep.kgraph.k(); ++i)
    for (int j = i + 1; j < rep.kgraph.k(); ++j) {
      int mi = rep.kgraph.m()[static_cast<size_t>(i)];
      int mj = rep.kgraph.m()[static_cast<size_t>(j)];
      const std::vector<int>& th = rep.kgraph.theta(i, j);
      for (int l = 0; l < mi; ++l)
        for (int m = 0; m < mj; ++m) {
          int image = th[static_cast<size_t>(l * mj + m)];
          int lp = image / mj, mp = image % mj;
          res.commutation = std::max(
              res.commutation,
              operator_norm(rep.rows[static_cast<size_t>(i)][static_cast<size_t>(l)] *
                                rep.rows[static_cast<size_t>(j)][static_cast<size_t>(m)] -
                            rep.rows[static_cast<size_t>(j)][static_cast<size_t>(mp)] *
                                rep.rows[static_cast<size_t>(i)][static_cast<size_t>(lp)]));
        }
    }
  return res;
}

void require_valid(const KGraphRep& rep, const Tolerance& tol) {
  KGraphRepResiduals res = check_kgraph_rep(rep);
  if (res.worst() > tol.eq_tol)
    throw AnalysisError(
        "k-graph representation commutation relations violated (residual " +
        std::to_string(res.worst()) + ")");
}

ComplexMatrix row_operator(const GraphRep& rep) {
  Eigen::Index e_count = rep.graph.edge_count();
  ComplexMatrix row(rep.dim, e_count * rep.dim);
  for (const Edge& e : rep.graph.edges())
    row.middleCols(e.id * rep.dim, rep.dim) =
        rep.A[static_cast<size_t>(e.id)] *
        rep.sigma[static_cast<size_t>(e.source)];
  return row;
}

ComplexMatrix row_operator(const KGraphRep& rep, int color) {
  if (color < 0 || color >= rep.kgraph.k())
    throw AnalysisError("invalid color");
  const auto& row = rep.rows[static_cast<size_t>(color)];
  ComplexMatrix out(rep.dim, static_cast<Eigen::Index>(row.size()) * rep.dim);
  for (size_t l = 0; l < row.size(); ++l)
    out.middleCols(static_cast<Eigen::Index>(l) * rep.dim, rep.dim) = row[l];
  return out;
}

bool is_completely_contractive(const GraphRep& rep, const Tolerance& tol) {
  return operator_norm(row_operator(rep)) <= 1.0 + tol.eq_tol;
}

bool is_completely_contractive(const KGraphRep& rep, const Tolerance& tol) {
  for (int i = 0; i < rep.kgraph.k(); ++i)
    if (operator_norm(row_operator(rep, i)) > 1.0 + tol.eq_tol) return false;
  return true;
}

bool is_isometric(const GraphRep& rep, const Tolerance& tol) {
  if (rep.graph.edge_count() == 0) return true;
  for (const Edge& e : rep.graph.edges())
    for (const Edge& f : rep.graph.edges()) {
      ComplexMatrix want =
          e.id == f.id ? rep.sigma[static_cast<size_t>(e.source)]
                       : ComplexMatrix::Zero(rep.dim, rep.dim);
      if (operator_norm(ComplexMatrix(rep.A[static_cast<size_t>(e.id)].adjoint() *
                                      rep.A[static_cast<size_t>(f.id)]) -
                        want) > tol.eq_tol)
        return false;
    }
  return true;
}

bool is_isometric(const KGraphRep& rep, const Tolerance& tol) {
  ComplexMatrix id = ComplexMatrix::Identity(rep.dim, rep.dim);
  for (int i = 0; i < rep.kgraph.k(); ++i) {
    const auto& row = rep.rows[static_cast<size_t>(i)];
    for (size_t l = 0; l < row.size(); ++l)
      for (size_t m = 0; m < row.size(); ++m) {
        ComplexMatrix want =
            l == m ? id : ComplexMatrix::Zero(rep.dim, rep.dim);
        if (operator_norm(ComplexMatrix(row[l].adjoint() * row[m]) - want) >
            tol.eq_tol)
          return false;
      }
  }
  return true;
}

double coisometry_residual(const GraphRep& rep) {
  ComplexMatrix sum = ComplexMatrix::Zero(rep.dim, rep.dim);
  for (const ComplexMatrix& a : rep.A) sum += a * a.adjoint();
  return operator_norm(sum - ComplexMatrix::Identity(rep.dim, rep.dim));
}

double coisometry_residual(const KGraphRep& rep) {
  double worst = 0;
  for (int i = 0; i < rep.kgraph.k(); ++i) {
    ComplexMatrix sum = ComplexMatrix::Zero(rep.dim, rep.dim);
    for (const ComplexMatrix& a : rep.rows[static_cast<size_t>(i)])
      sum += a * a.adjoint();
    worst = std::max(
        worst,
        operator_norm(sum - ComplexMatrix::Identity(rep.dim, rep.dim)));
  }
  return worst;
}

bool is_fully_coisometric(const GraphRep& rep, const Tolerance& tol) {
  return coisometry_residual(rep) <= tol.eq_tol;
}

bool is_fully_coisometric(const KGraphRep& rep, const Tolerance& tol) {
  return coisometry_residual(rep) <= tol.eq_tol;
}

ComplexMatrix a_tilde_n(const KGraphRep& rep, const std::vector<int>& n) {
  std::vector<Word> words = words_of_degree(rep.kgraph, n);
  ComplexMatrix out(rep.dim,
                    static_cast<Eigen::Index>(words.size()) * rep.dim);
  for (size_t w = 0; w < words.size(); ++w) {
    ComplexMatrix prod = ComplexMatrix::Identity(rep.dim, rep.dim);
    for (const Letter& l : words[w])
      prod = prod * rep.rows[static_cast<size_t>(l.color)]
                            [static_cast<size_t>(l.index)];
    out.middleCols(static_cast<Eigen::Index>(w) * rep.dim, rep.dim) = prod;
  }
  return out;
}

ComplexMatrix theta_exchange_matrix(const ThetaKGraph& g, int i, int j) {
  int mi = g.m()[static_cast<size_t>(i)];
  int mj = g.m()[static_cast<size_t>(j)];
  const std::vector<int>& th = g.theta(i, j);
  ComplexMatrix t = ComplexMatrix::Zero(mi * mj, mi * mj);
  for (int l = 0; l < mi; ++l)
    for (int m = 0; m < mj; ++m) {
      int image = th[static_cast<size_t>(l * mj + m)];
      int lp = image / mj, mp = image % mj;
      t(mp * mi + lp, l * mj + m) = 1.0;
    }
  return t;
}

double doubly_commuting_residual(const KGraphRep& rep) {
  double worst = 0;
  Eigen::Index d = rep.dim;
  for (int i = 0; i < rep.kgraph.k(); ++i)
    for (int j = i + 1; j < rep.kgraph.k(); ++j) {
      Eigen::Index mi = rep.kgraph.m()[static_cast<size_t>(i)];
      Eigen::Index mj = rep.kgraph.m()[static_cast<size_t>(j)];
      ComplexMatrix ai = row_operator(rep, i);   // d x mi*d
      ComplexMatrix aj = row_operator(rep, j);   // d x mj*d
      ComplexMatrix lhs = aj.adjoint() * ai;     // mj*d x mi*d
      ComplexMatrix rhs =
          kron(ComplexMatrix::Identity(mj, mj), ai) *
          kron(theta_exchange_matrix(rep.kgraph, i, j),
               ComplexMatrix::Identity(d, d)) *
          kron(ComplexMatrix::Identity(mi, mi), ComplexMatrix(aj.adjoint()));
      worst = std::max(worst, operator_norm(lhs - rhs));
    }
  return worst;
}

bool is_doubly_commuting(const KGraphRep& rep, const Tolerance& tol) {
  return doubly_commuting_residual(rep) <= tol.eq_tol;
}

ComplexMatrix defect_operator(const KGraphRep& rep, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw AnalysisError("defect parameter must lie in (0,1)");
  int k = rep.kgraph.k();
  ComplexMatrix delta = ComplexMatrix::Zero(rep.dim, rep.dim);
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> n(static_cast<size_t>(k), 0);
    int weight = 0;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) {
        n[static_cast<size_t>(i)] = 1;
        ++weight;
      }
    ComplexMatrix an = a_tilde_n(rep, n);
    delta += std::pow(-s * s, weight) * (an * an.adjoint());
  }
  return delta;
}

PopescuReport satisfies_popescu(const KGraphRep& rep, std::vector<double> grid,
                                const Tolerance& tol) {
  if (grid.empty()) throw AnalysisError("empty grid");
  std::sort(grid.begin(), grid.end());
  PopescuReport report;
  report.grid = grid;
  for (double s : grid)
    report.psd.push_back(is_psd(defect_operator(rep, s), tol));
  report.verdict = report.psd.back();
  return report;
}

RegularDilationReport regular_dilation_condition(const KGraphRep& rep,
                                                 const Tolerance& tol) {
  int k = rep.kgraph.k();
  Eigen::Index d = rep.dim;
  RegularDilationReport report;
  report.all_hold = true;
  for (int vmask = 0; vmask < (1 << k); ++vmask) {
    std::vector<int> v_colors;
    std::vector<int> ev(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i)
      if (vmask & (1 << i)) {
        v_colors.push_back(i);
        ev[static_cast<size_t>(i)] = 1;
      }
    std::vector<Word> vwords = words_of_degree(rep.kgraph, ev);
    Eigen::Index wcount = static_cast<Eigen::Index>(vwords.size());
    ComplexMatrix op = ComplexMatrix::Zero(wcount * d, wcount * d);
    for (int umask = 0; umask < (1 << k); ++umask) {
      if ((umask & vmask) != umask) continue;  // u must sit inside v
      std::vector<int> eu(static_cast<size_t>(k), 0);
      int usize = 0;
      for (int i = 0; i < k; ++i)
        if (umask & (1 << i)) {
          eu[static_cast<size_t>(i)] = 1;
          ++usize;
        }
      // identification E(e(v)) ~ E(e(v)-e(u)) (x) E(e(u)): rewrite each basis
      // word so the colors of u trail, then split
      std::vector<int> prio(static_cast<size_t>(k), 0);
      {
        int next = 0;
        for (int i = 0; i < k; ++i)
          if ((vmask & (1 << i)) && !(umask & (1 << i)))
            prio[static_cast<size_t>(i)] = next++;
        for (int i = 0; i < k; ++i)
          if (umask & (1 << i)) prio[static_cast<size_t>(i)] = next++;
      }
      ComplexMatrix au = a_tilde_n(rep, eu);
      ComplexMatrix gram = au.adjoint() * au;  // on E(e(u)) (x) H
      Eigen::Index ucount = gram.rows() / d;
      // permutation on word indices induced by the factorization
      std::vector<Eigen::Index> to_split(static_cast<size_t>(wcount));
      for (Eigen::Index widx = 0; widx < wcount; ++widx) {
        Word split = sort_by_priority(rep.kgraph,
                                      vwords[static_cast<size_t>(widx)], prio);
        Word head(split.begin(),
                  split.end() - static_cast<std::ptrdiff_t>(usize));
        Word tail(split.end() - static_cast<std::ptrdiff_t>(usize),
                  split.end());
        to_split[static_cast<size_t>(widx)] =
            static_cast<Eigen::Index>(word_index(rep.kgraph, head)) * ucount +
            word_index(rep.kgraph, tail);
      }
      double sign = (usize % 2 == 0) ? 1.0 : -1.0;
      // term = P* (I_rest (x) gram) P on E(e(v)) (x) H
      for (Eigen::Index wa = 0; wa < wcount; ++wa)
        for (Eigen::Index wb = 0; wb < wcount; ++wb) {
          Eigen::Index sa = to_split[static_cast<size_t>(wa)];
          Eigen::Index sb = to_split[static_cast<size_t>(wb)];
          if (sa / ucount != sb / ucount) continue;  // different head words
          op.block(wa * d, wb * d, d, d) +=
              sign * gram.block((sa % ucount) * d, (sb % ucount) * d, d, d);
        }
    }
    double min_eig = 0.0;
    {
      HermitianEigen eg = hermitian_eigen(op);
      min_eig = eg.values.size() ? eg.values[eg.values.size() - 1] : 0.0;
    }
    bool ok = is_psd(op, tol);
    report.subsets.push_back(v_colors);
    report.psd.push_back(ok);
    report.min_eigenvalue.push_back(min_eig);
    if (!ok) report.all_hold = false;
  }
  return report;
}

GraphRep product_rep(const KGraphRep& rep, const std::vector<int>& n) {
  std::vector<Word> words = words_of_degree(rep.kgraph, n);
  std::vector<Edge> edges;
  for (size_t w = 0; w < words.size(); ++w)
    edges.push_back(Edge{static_cast<int>(w), 0, 0});
  GraphRep out;
  out.graph = DirectedGraph(1, edges);
  out.dim = rep.dim;
  out.sigma = {ComplexMatrix::Identity(rep.dim, rep.dim)};
  for (const Word& w : words) {
    ComplexMatrix prod = ComplexMatrix::Identity(rep.dim, rep.dim);
    for (const Letter& l : w)
      prod = prod * rep.rows[static_cast<size_t>(l.color)]
                            [static_cast<size_t>(l.index)];
    out.A.push_back(prod);
  }
  return out;
}

std::vector<ComplexMatrix> generators(const GraphRep& rep) {
  std::vector<ComplexMatrix> out = rep.sigma;
  out.insert(out.end(), rep.A.begin(), rep.A.end());
  return out;
}

std::vector<ComplexMatrix> generators(const KGraphRep& rep) {
  std::vector<ComplexMatrix> out;
  for (const auto& row : rep.rows)
    out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace corelab
