#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpfactor/errors.hpp"

namespace gpf {

// Vertex subsets are bitmasks over the graph's vertex indices.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline VertexSet vbit(int v) { return VertexSet{1} << v; }
inline bool has_vertex(VertexSet s, int v) { return (s >> v) & 1; }
inline int set_size(VertexSet s) { return std::popcount(s); }

// Ascending vertex indices of a mask.
inline std::vector<int> set_vertices(VertexSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

// Finite simple graph with string-labelled vertices. Vertices are stored
// sorted by id; adjacency as per-vertex bitmasks. Immutable after
// construction.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  SimpleGraph(std::vector<std::string> ids,
              const std::vector<std::pair<std::string, std::string>>& edges) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i) {
      if (ids[i] == ids[i - 1])
        throw input_error("duplicate vertex id '" + ids[i] + "'");
    }
    if (static_cast<int>(ids.size()) > kMaxVertices)
      throw input_error("graph exceeds the " + std::to_string(kMaxVertices) +
                        "-vertex limit");
    ids_ = std::move(ids);
    adj_.assign(ids_.size(), 0);
    for (const auto& [a, b] : edges) {
      int u = index_of(a);
      int v = index_of(b);
      if (u == v) throw input_error("self-edge at vertex '" + a + "'");
      adj_[u] |= vbit(v);
      adj_[v] |= vbit(u);
    }
  }

  static SimpleGraph complete(int n) { return family(n, [](int, int) { return true; }); }
  static SimpleGraph edgeless(int n) { return family(n, [](int, int) { return false; }); }
  // Cyclic graph: i~j iff |i-j| = 1 or {i,j} = {first,last}. For n = 2 this
  // is a single edge, for n = 3 a triangle.
  static SimpleGraph cycle(int n) {
    return family(n, [n](int i, int j) {
      int d = j - i;
      return d == 1 || (d == n - 1 && n > 2);
    });
  }
  static SimpleGraph path(int n) { return family(n, [](int i, int j) { return j - i == 1; }); }

  int size() const { return static_cast<int>(ids_.size()); }
  VertexSet all() const {
    return size() == kMaxVertices ? ~VertexSet{0} : (vbit(size()) - 1);
  }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(int v) const { return ids_[v]; }

  int index_of(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
      throw input_error("unknown vertex id '" + id + "'");
    return static_cast<int>(it - ids_.begin());
  }

  bool adjacent(int u, int v) const { return has_vertex(adj_[u], v); }
  VertexSet neighbors(int v) const { return adj_[v]; }

  void check_subset(VertexSet s) const {
    if (s & ~all()) throw input_error("vertex subset outside the graph");
  }

  // Link of a set: intersection of the neighbor sets, Link(emptyset) = all.
  VertexSet link(VertexSet s) const {
    check_subset(s);
    VertexSet r = all();
    for (int v : set_vertices(s)) r &= adj_[v];
    return r;
  }
  VertexSet link(int v) const { return adj_[v]; }
  VertexSet star(int v) const { return adj_[v] | vbit(v); }

  bool is_clique(VertexSet s) const {
    check_subset(s);
    for (int v : set_vertices(s))
      if (s & ~(adj_[v] | vbit(v))) return false;
    return true;
  }
  bool is_complete() const { return is_clique(all()); }

  // Every vertex satisfies Link(Link(v)) = {v}. Empty graph: vacuously true.
  bool is_rigid() const {
    for (int v = 0; v < size(); ++v)
      if (link(adj_[v]) != vbit(v)) return false;
    return true;
  }

  // No partition into two non-empty parts with Link(part1) = part2.
  // Equivalent to connectedness of the non-commutation graph (complement
  // without loops); the 2^n subset sweep cross-checks this in the tests.
  bool is_irreducible() const {
    return static_cast<int>(complement_components().size()) <= 1;
  }

  bool is_connected() const {
    if (size() == 0) return true;
    return set_size(component_of(0, adj_)) == size();
  }

  // Maximal connected pieces, ordered by smallest member.
  std::vector<VertexSet> connected_components() const { return components(adj_); }

  // The finest partition into parts L_i with Link(L_i) = complement(L_i),
  // each irreducible: connected components of the complement graph.
  std::vector<VertexSet> irreducible_components() const {
    return complement_components();
  }

  // Induced subgraph; vertex ids are kept.
  SimpleGraph induced(VertexSet s) const {
    check_subset(s);
    SimpleGraph out;
    std::vector<int> verts = set_vertices(s);
    std::vector<int> pos(size(), -1);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      out.ids_.push_back(ids_[verts[i]]);
      pos[verts[i]] = static_cast<int>(i);
    }
    out.adj_.assign(verts.size(), 0);
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (int w : set_vertices(adj_[verts[i]] & s))
        out.adj_[i] |= vbit(pos[w]);
    return out;
  }

  std::vector<std::string> id_list(VertexSet s) const {
    std::vector<std::string> out;
    for (int v : set_vertices(s)) out.push_back(ids_[v]);
    return out;
  }

  std::vector<std::pair<std::string, std::string>> edge_list() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int u = 0; u < size(); ++u)
      for (int v : set_vertices(adj_[u]))
        if (u < v) out.emplace_back(ids_[u], ids_[v]);
    return out;
  }

  bool operator==(const SimpleGraph& o) const {
    return ids_ == o.ids_ && adj_ == o.adj_;
  }

 private:
  template <class Pred>
  static SimpleGraph family(int n, Pred edge) {
    if (n < 0) throw input_error("negative vertex count");
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> edges;
    auto name = [n](int i) {
      std::string s = std::to_string(i + 1);
      // zero-pad so that lexicographic id order matches numeric order
      std::string w = std::to_string(n);
      return std::string(w.size() - s.size(), '0') + s;
    };
    for (int i = 0; i < n; ++i) ids.push_back(name(i));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (edge(i, j)) edges.emplace_back(name(i), name(j));
    return SimpleGraph(std::move(ids), edges);
  }

  VertexSet component_of(int start, const std::vector<VertexSet>& adj) const {
    VertexSet seen = vbit(start);
    VertexSet frontier = seen;
    while (frontier) {
      VertexSet next = 0;
      for (int v : set_vertices(frontier)) next |= adj[v];
      frontier = next & ~seen;
      seen |= frontier;
    }
    return seen;
  }

  std::vector<VertexSet> components(const std::vector<VertexSet>& adj) const {
    std::vector<VertexSet> out;
    VertexSet left = all();
    while (left) {
      int v = std::countr_zero(left);
      VertexSet c = component_of(v, adj);
      out.push_back(c);
      left &= ~c;
    }
    return out;  // ordered by smallest member by construction
  }

  std::vector<VertexSet> complement_components() const {
    std::vector<VertexSet> cadj(size());
    for (int v = 0; v < size(); ++v) cadj[v] = all() & ~adj_[v] & ~vbit(v);
    return components(cadj);
  }

  std::vector<std::string> ids_;
  std::vector<VertexSet> adj_;
};

// Eccentricity-minimum over centers; 0 for the empty graph; nullopt encodes
// the infinite radius of a disconnected graph.
inline std::optional<int> radius(const SimpleGraph& g) {
  if (g.size() == 0) return 0;
  if (!g.is_connected()) return std::nullopt;
  int best = g.size();
  for (int s = 0; s < g.size(); ++s) {
    std::vector<int> dist(g.size(), -1);
    dist[s] = 0;
    std::vector<int> queue{s};
    int ecc = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int u = queue[q];
      ecc = std::max(ecc, dist[u]);
      for (int w : set_vertices(g.neighbors(u)))
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    best = std::min(best, ecc);
  }
  return best;
}

// Product graph: vertices (v,s) for v in pi and s in parts[v]; (v,s)~(w,t)
// iff v=w and s~t in parts[v], or v!=w and v~w in pi. Empty parts rejected.
inline SimpleGraph graph_product(const SimpleGraph& pi,
                                 const std::vector<SimpleGraph>& parts) {
  if (static_cast<int>(parts.size()) != pi.size())
    throw input_error("graph product needs one part per vertex");
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> edges;
  auto name = [&](int v, int s) { return pi.id(v) + "." + parts[v].id(s); };
  for (int v = 0; v < pi.size(); ++v) {
    if (parts[v].size() == 0)
      throw input_error("empty part graph at vertex '" + pi.id(v) + "'");
    for (int s = 0; s < parts[v].size(); ++s) ids.push_back(name(v, s));
  }
  for (int v = 0; v < pi.size(); ++v) {
    for (int s = 0; s < parts[v].size(); ++s)
      for (int t = s + 1; t < parts[v].size(); ++t)
        if (parts[v].adjacent(s, t)) edges.emplace_back(name(v, s), name(v, t));
    for (int w = v + 1; w < pi.size(); ++w)
      if (pi.adjacent(v, w))
        for (int s = 0; s < parts[v].size(); ++s)
          for (int t = 0; t < parts[w].size(); ++t)
            edges.emplace_back(name(v, s), name(w, t));
  }
  return SimpleGraph(std::move(ids), edges);
}

// Product is rigid iff every part is rigid and every base vertex v has
// Link(Link(v)) = {v} or a part of size >= 2. Must agree with
// is_rigid(graph_product(...)).
inline bool rigid_product_criterion(const SimpleGraph& pi,
                                    const std::vector<SimpleGraph>& parts) {
  if (static_cast<int>(parts.size()) != pi.size())
    throw input_error("graph product needs one part per vertex");
  for (int v = 0; v < pi.size(); ++v) {
    if (parts[v].size() == 0)
      throw input_error("empty part graph at vertex '" + pi.id(v) + "'");
    if (!parts[v].is_rigid()) return false;
    if (pi.link(pi.link(v)) != vbit(v) && parts[v].size() < 2) return false;
  }
  return true;
}

// Quotient by the equivalence Star(v) = Star(w). Classes are named after
// their smallest member; class_of maps each vertex index to its class index
// in the quotient graph.
struct CoreResult {
  SimpleGraph graph;
  std::vector<int> class_of;
};

inline CoreResult core(const SimpleGraph& g) {
  int n = g.size();
  std::vector<int> rep(n, -1);  // vertex -> representative vertex
  std::vector<int> reps;
  for (int v = 0; v < n; ++v) {
    for (int r : reps)
      if (g.star(r) == g.star(v)) {
        rep[v] = r;
        break;
      }
    if (rep[v] < 0) {
      rep[v] = v;
      reps.push_back(v);
    }
  }
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int r : reps) ids.push_back(g.id(r));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      if (g.adjacent(reps[i], reps[j]))
        edges.emplace_back(g.id(reps[i]), g.id(reps[j]));
  CoreResult out{SimpleGraph(std::move(ids), edges), std::vector<int>(n)};
  for (int v = 0; v < n; ++v) out.class_of[v] = out.graph.index_of(g.id(rep[v]));
  return out;
}

// Edge-preserving bijections. map[v] = image of vertex v.
struct GraphIsomorphism {
  std::vector<int> map;
};

inline bool is_isomorphism(const SimpleGraph& g1, const SimpleGraph& g2,
                           const GraphIsomorphism& iso) {
  if (g1.size() != g2.size()) return false;
  if (static_cast<int>(iso.map.size()) != g1.size()) return false;
  std::vector<bool> hit(g2.size(), false);
  for (int v : iso.map) {
    if (v < 0 || v >= g2.size() || hit[v]) return false;
    hit[v] = true;
  }
  for (int u = 0; u < g1.size(); ++u)
    for (int v = u + 1; v < g1.size(); ++v)
      if (g1.adjacent(u, v) != g2.adjacent(iso.map[u], iso.map[v])) return false;
  return true;
}

namespace detail {

template <class Emit>
inline bool iso_backtrack(const SimpleGraph& g1, const SimpleGraph& g2,
                          std::vector<int>& map, std::vector<bool>& used,
                          int depth, const Emit& emit) {
  if (depth == g1.size()) return emit(map);
  for (int cand = 0; cand < g2.size(); ++cand) {
    if (used[cand]) continue;
    if (set_size(g1.neighbors(depth)) != set_size(g2.neighbors(cand))) continue;
    bool ok = true;
    for (int prev = 0; prev < depth && ok; ++prev)
      ok = g1.adjacent(prev, depth) == g2.adjacent(map[prev], cand);
    if (!ok) continue;
    map[depth] = cand;
    used[cand] = true;
    if (iso_backtrack(g1, g2, map, used, depth + 1, emit)) return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace detail

// Degree-pruned backtracking; deterministic given the vertex orderings.
inline std::optional<GraphIsomorphism> find_isomorphism(const SimpleGraph& g1,
                                                        const SimpleGraph& g2) {
  if (g1.size() != g2.size()) return std::nullopt;
  std::vector<int> map(g1.size(), -1);
  std::vector<bool> used(g2.size(), false);
  std::optional<GraphIsomorphism> out;
  detail::iso_backtrack(g1, g2, map, used, 0, [&](const std::vector<int>& m) {
    out = GraphIsomorphism{m};
    return true;
  });
  return out;
}

// All isomorphisms in deterministic order, stopping after `cap` of them.
inline std::vector<GraphIsomorphism> find_all_isomorphisms(
    const SimpleGraph& g1, const SimpleGraph& g2, std::size_t cap) {
  std::vector<GraphIsomorphism> out;
  if (g1.size() != g2.size() || cap == 0) return out;
  std::vector<int> map(g1.size(), -1);
  std::vector<bool> used(g2.size(), false);
  detail::iso_backtrack(g1, g2, map, used, 0, [&](const std::vector<int>& m) {
    out.push_back(GraphIsomorphism{m});
    return out.size() >= cap;
  });
  return out;
}

// Reconstruction over the core: base = core graph, parts = complete graphs
// on the members of each class. The witness maps every vertex of g to a
// product vertex id and is validated by the caller through is_isomorphism
// on the product graph.
struct CoreReconstruction {
  SimpleGraph base;
  std::vector<SimpleGraph> parts;       // indexed like base vertices
  SimpleGraph product;                  // graph_product(base, parts)
  GraphIsomorphism witness;             // g -> product
};

inline CoreReconstruction core_reconstruction(const SimpleGraph& g) {
  CoreResult c = core(g);
  std::vector<std::vector<std::string>> members(c.graph.size());
  for (int v = 0; v < g.size(); ++v) members[c.class_of[v]].push_back(g.id(v));
  std::vector<SimpleGraph> parts;
  for (int k = 0; k < c.graph.size(); ++k) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < members[k].size(); ++i)
      for (std::size_t j = i + 1; j < members[k].size(); ++j)
        edges.emplace_back(members[k][i], members[k][j]);
    parts.emplace_back(members[k], edges);
  }
  SimpleGraph prod = graph_product(c.graph, parts);
  GraphIsomorphism w;
  w.map.resize(g.size());
  for (int v = 0; v < g.size(); ++v) {
    std::string pid = c.graph.id(c.class_of[v]) + "." + g.id(v);
    w.map[v] = prod.index_of(pid);
  }
  return CoreReconstruction{c.graph, std::move(parts), std::move(prod), std::move(w)};
}

}  // namespace gpf
