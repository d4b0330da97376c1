#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpfactor/errors.hpp"
#include "gpfactor/graph.hpp"
#include "gpfactor/tri_state.hpp"
#include "gpfactor/word.hpp"

namespace gpf {

// Elements per length; weighted holds the q-weighted layer sums when a
// weight vector was supplied (weighted[n] = sum over |w| = n of q_w).
struct GrowthTable {
  std::vector<std::uint64_t> counts;
  std::vector<double> weighted;
};

// Counts by breadth-first enumeration with normal-form deduplication.
inline GrowthTable growth_counts_bfs(const SimpleGraph& g, int max_len,
                                     std::size_t cap = 1000000) {
  if (max_len < 0) throw input_error("negative length bound");
  GrowthTable t;
  t.counts.assign(max_len + 1, 0);
  t.counts[0] = 1;
  std::vector<std::vector<int>> frontier{{}};
  std::size_t total = 1;
  for (int len = 1; len <= max_len; ++len) {
    std::unordered_set<std::string> seen;
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier) {
      for (int s = 0; s < g.size(); ++s) {
        std::vector<int> seq = w;
        detail::push_letter(g, seq, s);
        if (static_cast<int>(seq.size()) != len) continue;
        // canonical order so that shuffle-equivalent words collide
        std::vector<int> level = detail::layer_levels(g, seq);
        std::vector<int> order(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          if (level[a] != level[b]) return level[a] < level[b];
          return seq[a] < seq[b];
        });
        std::string key(seq.size(), '\0');
        std::vector<int> canon(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
          canon[i] = seq[order[i]];
          key[i] = static_cast<char>(canon[i]);
        }
        if (seen.insert(key).second) next.push_back(std::move(canon));
      }
    }
    total += next.size();
    if (total > cap)
      throw resource_error("word enumeration exceeds cap of " +
                           std::to_string(cap) + " elements");
    t.counts[len] = next.size();
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return t;
}

namespace detail {

struct TransferSystem {
  std::vector<VertexSet> cliques;         // all non-empty cliques
  std::vector<std::vector<int>> succ;     // allowed next layers
  std::vector<double> weight;             // product of q over the clique
  std::vector<int> csize;
};

// A layer T' may follow T when every letter of T' is blocked by T: not in T
// and non-adjacent to some letter of T.
inline bool layer_transition(const SimpleGraph& g, VertexSet t, VertexSet t2) {
  for (int v : set_vertices(t2)) {
    if (has_vertex(t, v)) return false;
    bool blocked = false;
    for (int u : set_vertices(t))
      if (!g.adjacent(u, v)) {
        blocked = true;
        break;
      }
    if (!blocked) return false;
  }
  return true;
}

inline TransferSystem build_transfer(const SimpleGraph& g,
                                     const std::vector<double>& q) {
  if (g.size() > 20)
    throw resource_error("clique transfer system limited to 20 vertices");
  TransferSystem ts;
  for (VertexSet s = 1; s <= g.all(); ++s)
    if (g.is_clique(s)) ts.cliques.push_back(s);
  ts.succ.resize(ts.cliques.size());
  ts.weight.resize(ts.cliques.size());
  ts.csize.resize(ts.cliques.size());
  for (std::size_t i = 0; i < ts.cliques.size(); ++i) {
    double w = 1.0;
    for (int v : set_vertices(ts.cliques[i])) w *= q[v];
    ts.weight[i] = w;
    ts.csize[i] = set_size(ts.cliques[i]);
    for (std::size_t j = 0; j < ts.cliques.size(); ++j)
      if (layer_transition(g, ts.cliques[i], ts.cliques[j]))
        ts.succ[i].push_back(static_cast<int>(j));
  }
  return ts;
}

}  // namespace detail

// Layer-weighted sums via the clique transfer system. With q identically 1
// the weighted column must match growth_counts_bfs exactly.
inline GrowthTable growth_counts_transfer(const SimpleGraph& g, int max_len,
                                          const std::vector<double>& q) {
  if (max_len < 0) throw input_error("negative length bound");
  if (static_cast<int>(q.size()) != g.size())
    throw input_error("weight vector size mismatch");
  for (double v : q)
    if (!(v > 0.0) || v > 1.0) throw input_error("weights must lie in (0,1]");
  GrowthTable t;
  t.weighted.assign(max_len + 1, 0.0);
  t.weighted[0] = 1.0;
  detail::TransferSystem ts = detail::build_transfer(g, q);
  // sum[len][i] = weighted number of layer sequences of total size len
  // ending in clique i
  std::vector<std::vector<double>> sum(max_len + 1,
                                       std::vector<double>(ts.cliques.size(), 0.0));
  for (std::size_t i = 0; i < ts.cliques.size(); ++i)
    if (ts.csize[i] <= max_len) sum[ts.csize[i]][i] += ts.weight[i];
  for (int len = 1; len <= max_len; ++len)
    for (std::size_t i = 0; i < ts.cliques.size(); ++i) {
      double cur = sum[len][i];
      if (cur == 0.0) continue;
      t.weighted[len] += cur;
      for (int j : ts.succ[i])
        if (len + ts.csize[j] <= max_len)
          sum[len + ts.csize[j]][j] += cur * ts.weight[j];
    }
  return t;
}

inline GrowthTable growth_counts_transfer(const SimpleGraph& g, int max_len) {
  return growth_counts_transfer(g, max_len, std::vector<double>(g.size(), 1.0));
}

namespace detail {

// Perron root of the non-negative transfer matrix; power iteration on A + I
// (the shift makes every class aperiodic, so the iteration settles).
inline double transfer_spectral_radius(const TransferSystem& ts) {
  std::size_t n = ts.cliques.size();
  if (n == 0) return 0.0;
  std::vector<double> x(n, 1.0), y(n);
  double lambda = 1.0;
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t j = 0; j < n; ++j) y[j] = x[j];  // identity shift
    for (std::size_t i = 0; i < n; ++i)
      for (int j : ts.succ[i]) y[j] += ts.weight[j] * x[i];
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, v);
    double next = norm;
    for (std::size_t j = 0; j < n; ++j) x[j] = y[j] / norm;
    if (std::abs(next - lambda) < 1e-14 && it > 10) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - 1.0;
}

// Exact divergence certificate: a cycle of layers whose letters all carry
// weight exactly 1 contributes infinitely many words of weight 1.
inline bool weight_one_cycle(const TransferSystem& ts,
                             const std::vector<double>& q,
                             const SimpleGraph& g) {
  std::vector<int> nodes;
  for (std::size_t i = 0; i < ts.cliques.size(); ++i) {
    bool all_one = true;
    for (int v : set_vertices(ts.cliques[i])) all_one &= (q[v] == 1.0);
    if (all_one) nodes.push_back(static_cast<int>(i));
  }
  (void)g;
  std::vector<int> state(ts.cliques.size(), 0);  // 0 new, 1 open, 2 done
  std::vector<bool> eligible(ts.cliques.size(), false);
  for (int i : nodes) eligible[i] = true;
  // iterative DFS with back-edge detection
  for (int root : nodes) {
    if (state[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < ts.succ[node].size()) {
        int to = ts.succ[node][next++];
        if (!eligible[to]) continue;
        if (state[to] == 1) return true;
        if (state[to] == 0) {
          state[to] = 1;
          stack.emplace_back(to, 0);
        }
      } else {
        state[node] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace detail

// Convergence of the weighted series over the whole group. Spectral radius
// of the transfer matrix below 1 means convergence, above 1 divergence; at
// the boundary the series still diverges whenever the weight-1 letters span
// an infinite sub-Coxeter group (exact cycle certificate), otherwise the
// verdict is left Unknown within a 1e-9 band.
inline TriState hecke_sum_converges(const SimpleGraph& g,
                                    const std::vector<double>& q) {
  if (static_cast<int>(q.size()) != g.size())
    throw input_error("weight vector size mismatch");
  for (double v : q)
    if (!(v > 0.0) || v > 1.0) throw input_error("weights must lie in (0,1]");
  if (g.size() == 0) return TriState::yes("empty graph: sum is 1");
  detail::TransferSystem ts = detail::build_transfer(g, q);
  if (detail::weight_one_cycle(ts, q, g))
    return TriState::no(
        "diverges: infinitely many words of weight 1 (weight-1 layer cycle)");
  double rho = detail::transfer_spectral_radius(ts);
  const double band = 1e-9;
  if (rho < 1.0 - band)
    return TriState::yes("transfer spectral radius " + std::to_string(rho) +
                         " < 1");
  if (rho > 1.0 + band)
    return TriState::no("transfer spectral radius " + std::to_string(rho) +
                        " > 1");
  return TriState::unknown("transfer spectral radius within 1e-9 of 1");
}

}  // namespace gpf
