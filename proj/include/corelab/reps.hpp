#pragma once

#include <vector>

#include "corelab/graphs.hpp"
#include "corelab/kgraphs.hpp"
#include "corelab/numerics.hpp"

namespace corelab {

// Graph representation: a projection sigma(v) per vertex and a matrix A(e)
// per edge on C^dim, with sigma(r(e)) A(e) sigma(s(e)) = A(e).
struct GraphRep {
  DirectedGraph graph;
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> sigma;  // per vertex
  std::vector<ComplexMatrix> A;      // per edge id
};

struct GraphRepResiduals {
  double sigma_projection = 0;   // ||sigma^2 - sigma||, ||sigma* - sigma||
  double sigma_orthogonality = 0;
  double sigma_sum = 0;          // ||sum sigma - I||
  double covariance = 0;         // ||sigma(r) A sigma(s) - A||
  double worst() const;
};

// Shape errors throw ParseError; residuals are reported, not enforced.
GraphRepResiduals check_graph_rep(const GraphRep& rep);
// Throws AnalysisError when the worst residual exceeds eq_tol.
void require_valid(const GraphRep& rep, const Tolerance& tol);

// Single-vertex k-graph representation: one row of dim x dim matrices per
// color, satisfying the theta commutation relations.
struct KGraphRep {
  ThetaKGraph kgraph;
  Eigen::Index dim = 0;
  std::vector<std::vector<ComplexMatrix>> rows;  // rows[color][edge index]
};

struct KGraphRepResiduals {
  double commutation = 0;  // worst || A_l^i A_m^j - A_{m'}^j A_{l'}^i ||
  double worst() const { return commutation; }
};

KGraphRepResiduals check_kgraph_rep(const KGraphRep& rep);
void require_valid(const KGraphRep& rep, const Tolerance& tol);

// Block row [A(e0) sigma(s(e0)), A(e1) sigma(s(e1)), ...] : E (x) V -> V.
ComplexMatrix row_operator(const GraphRep& rep);
ComplexMatrix row_operator(const KGraphRep& rep, int color);

bool is_completely_contractive(const GraphRep& rep, const Tolerance& tol = {});
bool is_completely_contractive(const KGraphRep& rep, const Tolerance& tol = {});

bool is_isometric(const GraphRep& rep, const Tolerance& tol = {});
bool is_isometric(const KGraphRep& rep, const Tolerance& tol = {});

double coisometry_residual(const GraphRep& rep);
double coisometry_residual(const KGraphRep& rep);  // worst color
bool is_fully_coisometric(const GraphRep& rep, const Tolerance& tol = {});
bool is_fully_coisometric(const KGraphRep& rep, const Tolerance& tol = {});

// Block row over words_of_degree(n): the block of word w is the left-to-right
// product of the letters' matrices; tensor index = word_index * dim + h.
ComplexMatrix a_tilde_n(const KGraphRep& rep, const std::vector<int>& n);

// Permutation matrix of theta_{ij} on tensor indices:
// t[m' * m_i + l', l * m_j + m] = 1 when theta_{ij}(l, m) = (l', m').
ComplexMatrix theta_exchange_matrix(const ThetaKGraph& g, int i, int j);

double doubly_commuting_residual(const KGraphRep& rep);
bool is_doubly_commuting(const KGraphRep& rep, const Tolerance& tol = {});

// Delta_s = sum over n in {0,1}^k of (-s^2)^|n| A~_n A~_n*.
ComplexMatrix defect_operator(const KGraphRep& rep, double s);

struct PopescuReport {
  std::vector<double> grid;
  std::vector<bool> psd;
  bool verdict = false;  // positivity persists at the top of the grid
};
PopescuReport satisfies_popescu(const KGraphRep& rep, std::vector<double> grid,
                                const Tolerance& tol = {});

struct RegularDilationReport {
  std::vector<std::vector<int>> subsets;  // colors, 0-based, ascending
  std::vector<bool> psd;
  std::vector<double> min_eigenvalue;
  bool all_hold = false;
};
RegularDilationReport regular_dilation_condition(const KGraphRep& rep,
                                                 const Tolerance& tol = {});

// Single-vertex 1-graph rep with one edge per word of degree n; the edge
// matrix is the word product.
GraphRep product_rep(const KGraphRep& rep, const std::vector<int>& n);

// Generators of the unital algebra of the representation.
std::vector<ComplexMatrix> generators(const GraphRep& rep);   // sigmas then As
std::vector<ComplexMatrix> generators(const KGraphRep& rep);  // rows, color-major

}  // namespace corelab
