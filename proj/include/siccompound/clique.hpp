#pragma once

// Small undirected graphs and exact clique search. Graphs here have at most a
// few thousand nodes, so a dense adjacency matrix is used throughout.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "siccompound/error.hpp"

namespace siccompound {

class Graph {
 public:
  explicit Graph(std::size_t nodes) : n_(nodes), adj_(nodes * nodes, 0) {}

  std::size_t size() const noexcept { return n_; }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) return;  // no self-edges
    adj_[a * n_ + b] = 1;
    adj_[b * n_ + a] = 1;
  }

  bool adjacent(std::size_t a, std::size_t b) const { return adj_[a * n_ + b] != 0; }

  std::size_t degree(std::size_t a) const {
    std::size_t d = 0;
    for (std::size_t b = 0; b < n_; ++b) d += adj_[a * n_ + b];
    return d;
  }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1)) / 2;
  }

  bool is_clique(const std::vector<std::size_t>& nodes) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (!adjacent(nodes[i], nodes[j])) return false;
    return true;
  }

  /// Builds the graph on n nodes with an edge wherever pred(a, b) holds for a < b.
  template <class Pred>
  static Graph from_predicate(std::size_t n, Pred&& pred) {
    Graph g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (pred(a, b)) g.add_edge(a, b);
    return g;
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;
};

namespace detail {

// Greedy colouring of the candidate set; colours give an upper bound on the
// clique size reachable from each prefix of the returned order.
inline void colour_sort(const Graph& g, const std::vector<std::size_t>& cand,
                        std::vector<std::size_t>& order, std::vector<std::size_t>& bound) {
  order.clear();
  bound.clear();
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t v : cand) {
    std::size_t k = 0;
    for (; k < classes.size(); ++k) {
      bool clash = false;
      for (std::size_t u : classes[k]) {
        if (g.adjacent(u, v)) {
          clash = true;
          break;
        }
      }
      if (!clash) break;
    }
    if (k == classes.size()) classes.emplace_back();
    classes[k].push_back(v);
  }
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (std::size_t v : classes[k]) {
      order.push_back(v);
      bound.push_back(k + 1);
    }
  }
}

inline void expand_max(const Graph& g, std::vector<std::size_t>& current,
                       std::vector<std::size_t> cand, std::vector<std::size_t>& best) {
  std::vector<std::size_t> order, bound;
  colour_sort(g, cand, order, bound);
  for (std::size_t i = order.size(); i-- > 0;) {
    if (current.size() + bound[i] <= best.size()) return;
    const std::size_t v = order[i];
    current.push_back(v);
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < i; ++j)
      if (g.adjacent(v, order[j])) next.push_back(order[j]);
    if (next.empty()) {
      if (current.size() > best.size()) best = current;
    } else {
      expand_max(g, current, std::move(next), best);
    }
    current.pop_back();
  }
}

// Depth-first search in increasing node order; the first clique of the target
// size found is the lexicographically smallest one.
inline bool first_of_size(const Graph& g, std::size_t target, std::vector<std::size_t>& current,
                          const std::vector<std::size_t>& cand) {
  if (current.size() == target) return true;
  if (current.size() + cand.size() < target) return false;
  std::vector<std::size_t> order, bound;
  colour_sort(g, cand, order, bound);
  if (current.size() + (bound.empty() ? 0 : *std::max_element(bound.begin(), bound.end())) <
      target) {
    return false;
  }
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const std::size_t v = cand[i];
    current.push_back(v);
    std::vector<std::size_t> next;
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (g.adjacent(v, cand[j])) next.push_back(cand[j]);
    if (first_of_size(g, target, current, next)) return true;
    current.pop_back();
  }
  return false;
}

}  // namespace detail

inline constexpr std::size_t kCliqueNodeCap = 4096;

/// Exact maximum clique (branch and bound with colouring). The witness is the
/// lexicographically smallest clique of maximum size.
inline std::vector<std::size_t> maximum_clique(const Graph& g) {
  if (g.size() > kCliqueNodeCap) {
    throw DimensionMismatch("graph has " + std::to_string(g.size()) + " nodes, cap is " +
                            std::to_string(kCliqueNodeCap));
  }
  if (g.size() == 0) return {};
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> current, best;
  detail::expand_max(g, current, all, best);
  const std::size_t omega = best.size();
  current.clear();
  detail::first_of_size(g, omega, current, all);
  return current;
}

/// Every clique with exactly k nodes, each sorted, in lexicographic order.
inline std::vector<std::vector<std::size_t>> cliques_of_size(const Graph& g, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::function<void(const std::vector<std::size_t>&)> rec =
      [&](const std::vector<std::size_t>& cand) {
        if (current.size() == k) {
          out.push_back(current);
          return;
        }
        if (current.size() + cand.size() < k) return;
        for (std::size_t i = 0; i < cand.size(); ++i) {
          current.push_back(cand[i]);
          std::vector<std::size_t> next;
          for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (g.adjacent(cand[i], cand[j])) next.push_back(cand[j]);
          rec(next);
          current.pop_back();
        }
      };
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  rec(all);
  return out;
}

}  // namespace siccompound
