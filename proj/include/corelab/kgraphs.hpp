#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corelab/numerics.hpp"

namespace corelab {

// Letters and permutation data are 0-based internally; the file format and
// reports use 1-based labels.
struct Letter {
  int color = 0;
  int index = 0;
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

// Single-vertex k-graph: k colors, m[i] edges of color i, and for each pair
// i < j a permutation of pairs giving the relation
//   e_l^(i) e_m^(j) = e_{m'}^(j) e_{l'}^(i)  when theta_{ij}(l, m) = (l', m').
// The permutation is stored flat: perm[l * m[j] + m] = l' * m[j] + m'.
class ThetaKGraph {
 public:
  ThetaKGraph() = default;
  ThetaKGraph(int k, std::vector<int> m,
              std::map<std::pair<int, int>, std::vector<int>> theta);

  int k() const { return k_; }
  const std::vector<int>& m() const { return m_; }
  const std::vector<int>& theta(int i, int j) const;
  const std::vector<int>& theta_inverse(int i, int j) const;

 private:
  int k_ = 0;
  std::vector<int> m_;
  std::map<std::pair<int, int>, std::vector<int>> theta_;
  std::map<std::pair<int, int>, std::vector<int>> theta_inv_;
};

struct ThetaDiagnostic {
  bool ok = true;
  std::string message;
};

// For every color triple i<j<l and every generator triple, the two reorder
// routes must produce the same sorted word. Always true for k <= 2.
ThetaDiagnostic validate_theta(const ThetaKGraph& g);

std::vector<int> degree(const ThetaKGraph& g, const Word& w);

// The unique color-sorted word reachable by theta swaps.
Word normal_form(const ThetaKGraph& g, Word w);

// Generalized sort: letters ordered by ascending priority_of_color; the
// plain normal form is priority_of_color[i] = i.
Word sort_by_priority(const ThetaKGraph& g, Word w,
                      const std::vector<int>& priority_of_color);

// All color-sorted words of the given degree, lexicographic order.
std::vector<Word> words_of_degree(const ThetaKGraph& g,
                                  const std::vector<int>& n);

// Position of a color-sorted word within words_of_degree(degree(w)).
int word_index(const ThetaKGraph& g, const Word& w);

}  // namespace corelab
