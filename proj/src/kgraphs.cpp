#include "corelab/kgraphs.hpp"

#include <algorithm>
#include <sstream>

namespace corelab {

ThetaKGraph::ThetaKGraph(int k, std::vector<int> m,
                         std::map<std::pair<int, int>, std::vector<int>> theta)
    : k_(k), m_(std::move(m)), theta_(std::move(theta)) {
  if (k_ < 1) throw ParseError("k must be at least 1");
  if (static_cast<int>(m_.size()) != k_)
    throw ParseError("edge-count list must have one entry per color");
  for (int c : m_)
    if (c < 1) throw ParseError("every color needs at least one edge");
  for (int i = 0; i < k_; ++i)
    for (int j = i + 1; j < k_; ++j) {
      auto it = theta_.find({i, j});
      if (it == theta_.end())
        throw ParseError("missing permutation for a color pair");
      const std::vector<int>& p = it->second;
      int n = m_[static_cast<size_t>(i)] * m_[static_cast<size_t>(j)];
      if (static_cast<int>(p.size()) != n)
        throw ParseError("permutation has wrong size");
      std::vector<int> inv(p.size(), -1);
      for (int a = 0; a < n; ++a) {
        if (p[static_cast<size_t>(a)] < 0 || p[static_cast<size_t>(a)] >= n)
          throw ParseError("permutation entry out of range");
        if (inv[static_cast<size_t>(p[static_cast<size_t>(a)])] != -1)
          throw ParseError("permutation is not a bijection");
        inv[static_cast<size_t>(p[static_cast<size_t>(a)])] = a;
      }
      theta_inv_[{i, j}] = std::move(inv);
    }
  for (const auto& [key, value] : theta_) {
    (void)value;
    if (key.first < 0 || key.second >= k_ || key.first >= key.second)
      throw ParseError("permutation keys must satisfy 0 <= i < j < k");
  }
}

const std::vector<int>& ThetaKGraph::theta(int i, int j) const {
  auto it = theta_.find({i, j});
  if (it == theta_.end()) throw AnalysisError("no permutation for color pair");
  return it->second;
}

const std::vector<int>& ThetaKGraph::theta_inverse(int i, int j) const {
  auto it = theta_inv_.find({i, j});
  if (it == theta_inv_.end())
    throw AnalysisError("no permutation for color pair");
  return it->second;
}

std::vector<int> degree(const ThetaKGraph& g, const Word& w) {
  std::vector<int> deg(static_cast<size_t>(g.k()), 0);
  for (const Letter& l : w) {
    if (l.color < 0 || l.color >= g.k() || l.index < 0 ||
        l.index >= g.m()[static_cast<size_t>(l.color)])
      throw AnalysisError("letter outside the k-graph alphabet");
    ++deg[static_cast<size_t>(l.color)];
  }
  return deg;
}

namespace {

// Swap the adjacent letters w[p], w[p+1] (distinct colors) using the theta
// relation; the pair's color order flips, the pair's degree is preserved.
void swap_adjacent(const ThetaKGraph& g, Word& w, size_t p) {
  Letter a = w[p], b = w[p + 1];
  if (a.color < b.color) {
    // e_l^(i) e_m^(j) -> e_{m'}^(j) e_{l'}^(i) via the forward permutation
    int mj = g.m()[static_cast<size_t>(b.color)];
    int image = g.theta(a.color, b.color)[static_cast<size_t>(
        a.index * mj + b.index)];
    w[p] = Letter{b.color, image % mj};
    w[p + 1] = Letter{a.color, image / mj};
  } else {
    // e_{m'}^(j) e_{l'}^(i) -> e_l^(i) e_m^(j) via the inverse permutation
    int mj = g.m()[static_cast<size_t>(a.color)];
    int pre = g.theta_inverse(b.color, a.color)[static_cast<size_t>(
        b.index * mj + a.index)];
    w[p] = Letter{b.color, pre / mj};
    w[p + 1] = Letter{a.color, pre % mj};
  }
}

Word sort_leftmost(const ThetaKGraph& g, Word w,
                   const std::vector<int>& prio) {
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t p = 0; p + 1 < w.size(); ++p) {
      if (prio[static_cast<size_t>(w[p].color)] >
          prio[static_cast<size_t>(w[p + 1].color)]) {
        swap_adjacent(g, w, p);
        moved = true;
        break;
      }
    }
  }
  return w;
}

Word sort_rightmost(const ThetaKGraph& g, Word w,
                    const std::vector<int>& prio) {
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t p = w.size(); p >= 2; --p) {
      if (prio[static_cast<size_t>(w[p - 2].color)] >
          prio[static_cast<size_t>(w[p - 1].color)]) {
        swap_adjacent(g, w, p - 2);
        moved = true;
        break;
      }
    }
  }
  return w;
}

}  // namespace

Word sort_by_priority(const ThetaKGraph& g, Word w,
                      const std::vector<int>& priority_of_color) {
  degree(g, w);  // validates letters
  return sort_leftmost(g, std::move(w), priority_of_color);
}

Word normal_form(const ThetaKGraph& g, Word w) {
  std::vector<int> prio(static_cast<size_t>(g.k()));
  for (int i = 0; i < g.k(); ++i) prio[static_cast<size_t>(i)] = i;
  return sort_by_priority(g, std::move(w), prio);
}

ThetaDiagnostic validate_theta(const ThetaKGraph& g) {
  std::vector<int> prio(static_cast<size_t>(g.k()));
  for (int i = 0; i < g.k(); ++i) prio[static_cast<size_t>(i)] = i;
  for (int i = 0; i < g.k(); ++i)
    for (int j = i + 1; j < g.k(); ++j)
      for (int l = j + 1; l < g.k(); ++l)
        for (int a = 0; a < g.m()[static_cast<size_t>(i)]; ++a)
          for (int b = 0; b < g.m()[static_cast<size_t>(j)]; ++b)
            for (int c = 0; c < g.m()[static_cast<size_t>(l)]; ++c) {
              Word w{{l, c}, {j, b}, {i, a}};
              Word lhs = sort_leftmost(g, w, prio);
              Word rhs = sort_rightmost(g, w, prio);
              if (!(lhs == rhs)) {
                std::ostringstream os;
                os << "inconsistent permutations: reordering e" << c + 1
                   << "^(" << l + 1 << ") e" << b + 1 << "^(" << j + 1
                   << ") e" << a + 1 << "^(" << i + 1
                   << ") depends on the route";
                return {false, os.str()};
              }
            }
  return {true, ""};
}

std::vector<Word> words_of_degree(const ThetaKGraph& g,
                                  const std::vector<int>& n) {
  if (static_cast<int>(n.size()) != g.k())
    throw AnalysisError("degree vector has wrong length");
  for (int c : n)
    if (c < 0) throw AnalysisError("degree entries must be nonnegative");
  std::vector<int> colors;  // color pattern of every sorted word of degree n
  for (int i = 0; i < g.k(); ++i)
    colors.insert(colors.end(), static_cast<size_t>(n[static_cast<size_t>(i)]),
                  i);
  std::vector<Word> out;
  Word current(colors.size());
  for (size_t p = 0; p < colors.size(); ++p)
    current[p] = Letter{colors[p], 0};
  while (true) {
    out.push_back(current);
    // odometer with the last letter fastest
    size_t p = colors.size();
    while (p > 0) {
      --p;
      int cap = g.m()[static_cast<size_t>(colors[p])];
      if (current[p].index + 1 < cap) {
        ++current[p].index;
        for (size_t q = p + 1; q < colors.size(); ++q) current[q].index = 0;
        break;
      }
      if (p == 0) return out;
    }
    if (colors.empty()) return out;
  }
}

int word_index(const ThetaKGraph& g, const Word& w) {
  int idx = 0;
  for (const Letter& l : w) idx = idx * g.m()[static_cast<size_t>(l.color)] + l.index;
  return idx;
}

}  // namespace corelab
