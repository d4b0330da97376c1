#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpfactor/errors.hpp"
#include "gpfactor/graph.hpp"
#include "gpfactor/growth.hpp"
#include "gpfactor/tri_state.hpp"
#include "gpfactor/vertex_algebra.hpp"
#include "gpfactor/word.hpp"

namespace gpf {

// A graph together with one vertex-algebra descriptor per vertex: the input
// of every classification theorem.
struct GraphAlgebra {
  SimpleGraph graph;
  std::vector<VertexAlgebra> alg;  // indexed like graph vertices
  bool assume_II1_factor = false;
  int sweep_cap = 16;  // subgraph sweeps are 2^|graph|

  GraphAlgebra() = default;
  GraphAlgebra(SimpleGraph g, std::vector<VertexAlgebra> a)
      : graph(std::move(g)), alg(std::move(a)) {
    if (alg.size() != static_cast<std::size_t>(graph.size()))
      throw input_error("one descriptor per vertex required");
  }

  GraphAlgebra restricted(VertexSet s) const {
    GraphAlgebra out;
    out.graph = graph.induced(s);
    for (int v : set_vertices(s)) out.alg.push_back(alg[v]);
    out.assume_II1_factor = false;
    out.sweep_cap = sweep_cap;
    return out;
  }
};

inline std::string join_ids(const SimpleGraph& g, VertexSet s) {
  std::string out;
  for (int v : set_vertices(s)) {
    if (!out.empty()) out += ",";
    out += g.id(v);
  }
  return out;
}

namespace detail {

inline bool all_hecke(const GraphAlgebra& ga, VertexSet s) {
  for (int v : set_vertices(s))
    if (!ga.alg[v].hecke_q) return false;
  return true;
}

// Tri-state scan over a subset; the first offending vertex is named in the
// provenance.
inline TriState every(const GraphAlgebra& ga, VertexSet s,
                      TriState VertexAlgebra::*flag, const std::string& what) {
  for (int v : set_vertices(s))
    if ((ga.alg[v].*flag).is_no())
      return TriState::no("vertex '" + ga.graph.id(v) + "' is not " + what);
  for (int v : set_vertices(s))
    if ((ga.alg[v].*flag).is_unknown())
      return TriState::unknown("vertex '" + ga.graph.id(v) + "': " + what +
                               " is unknown");
  return TriState::yes("every vertex is " + what);
}

}  // namespace detail

// Amenability of the graph product over the induced subgraph `s`:
// every vertex amenable, and every non-adjacent pair v != w is
// 2-dimensional with Link({v,w}) = s \ {v,w}.
inline TriState amenable_graph_product(const GraphAlgebra& ga, VertexSet s) {
  ga.graph.check_subset(s);
  const SimpleGraph& g = ga.graph;
  for (int v : set_vertices(s))
    for (int w : set_vertices(s & ~(vbit(v) | (vbit(v) - 1))))
      if (!g.adjacent(v, w)) {
        if (!ga.alg[v].dimension || *ga.alg[v].dimension != 2 ||
            !ga.alg[w].dimension || *ga.alg[w].dimension != 2)
          return TriState::no("non-adjacent pair '" + g.id(v) + "','" + g.id(w) +
                              "' is not 2-dimensional x 2-dimensional");
        if ((g.link(vbit(v) | vbit(w)) & s) != (s & ~(vbit(v) | vbit(w))))
          return TriState::no("non-adjacent pair '" + g.id(v) + "','" + g.id(w) +
                              "' has Link != complement");
      }
  TriState vertices_amenable = detail::every(ga, s, &VertexAlgebra::amenable, "amenable");
  if (!vertices_amenable.is_yes()) return vertices_amenable;
  return TriState::yes("all vertices amenable; every non-adjacent pair is "
                       "2-dim with full link");
}

// Atomic iff the subgraph is complete and every vertex algebra is atomic.
inline TriState atomic_graph_product(const GraphAlgebra& ga, VertexSet s) {
  ga.graph.check_subset(s);
  if (!ga.graph.is_clique(s))
    return TriState::no("graph is not complete: a free-product piece is not atomic");
  TriState va = detail::every(ga, s, &VertexAlgebra::atomic, "atomic");
  if (va.is_yes()) return TriState::yes("complete graph, all vertices atomic");
  return va;
}

// Partial decision procedure for diffuseness: trace-zero unitaries plus an
// incomplete graph or a diffuse vertex decide Yes; the all-Hecke case is an
// iff via the weighted growth series; complete graphs reduce to tensor
// products. Everything else is Unknown.
inline TriState diffuse_graph_product(const GraphAlgebra& ga, VertexSet s) {
  ga.graph.check_subset(s);
  int n = set_size(s);
  if (n == 0) return TriState::no("empty product is the scalars");
  if (n == 1) {
    const VertexAlgebra& a = ga.alg[set_vertices(s)[0]];
    return {a.diffuse.verdict, "single vertex: " + a.diffuse.why};
  }
  bool complete = ga.graph.is_clique(s);
  if (detail::all_hecke(ga, s)) {
    std::vector<double> q;
    for (int v : set_vertices(s)) q.push_back(*ga.alg[v].hecke_q);
    TriState conv = hecke_sum_converges(ga.graph.induced(s), q);
    if (conv.is_yes())
      return TriState::no("Hecke product: weighted growth series converges (" +
                          conv.why + ")");
    if (conv.is_no())
      return TriState::yes("Hecke product: weighted growth series diverges (" +
                           conv.why + ")");
    return TriState::unknown("Hecke product: " + conv.why);
  }
  TriState tz = detail::every(ga, s, &VertexAlgebra::has_trace_zero_unitary,
                              "equipped with a trace-zero unitary");
  bool some_diffuse = false;
  for (int v : set_vertices(s)) some_diffuse |= ga.alg[v].diffuse.is_yes();
  if (tz.is_yes() && (some_diffuse || !complete))
    return TriState::yes(some_diffuse
                             ? "trace-zero unitaries and a diffuse vertex"
                             : "trace-zero unitaries and an incomplete graph");
  if (complete && some_diffuse)
    return TriState::yes("tensor product with a diffuse factor");
  if (complete) {
    TriState at = detail::every(ga, s, &VertexAlgebra::atomic, "atomic");
    if (at.is_yes())
      return TriState::no("tensor product of atomic algebras is atomic");
  }
  return TriState::unknown(
      "outside the classified diffuseness cases (no trace-zero unitaries / "
      "mixed vertex kinds)");
}

// Whether the graph product is a II1 factor, from the derivable sufficient
// conditions; assume_II1_factor is the user's escape hatch.
inline TriState is_II1_factor_graph(const GraphAlgebra& ga, VertexSet s) {
  ga.graph.check_subset(s);
  int n = set_size(s);
  if (n == 0) return TriState::no("empty product is the scalars");
  if (n == 1) {
    const VertexAlgebra& a = ga.alg[set_vertices(s)[0]];
    return {a.is_II1_factor.verdict, "single vertex: " + a.is_II1_factor.why};
  }
  TriState all_II1 =
      detail::every(ga, s, &VertexAlgebra::is_II1_factor, "a II1 factor");
  if (all_II1.is_yes())
    return TriState::yes("graph product of II1 factors is a II1 factor");
  TriState tz = detail::every(ga, s, &VertexAlgebra::has_trace_zero_unitary,
                              "equipped with a trace-zero unitary");
  if (ga.graph.induced(s).is_irreducible() && n >= 3 && tz.is_yes())
    return TriState::yes(
        "irreducible graph on >= 3 vertices with trace-zero unitaries");
  if (ga.assume_II1_factor && s == ga.graph.all())
    return TriState::yes("assume_II1_factor set on the input");
  // componentwise: II1 or finite-dimensional matrix factors, at least one II1
  std::vector<VertexSet> comps = ga.graph.induced(s).irreducible_components();
  if (comps.size() > 1) {
    bool some_II1 = false;
    bool all_ok = true;
    bool unknown = false;
    const SimpleGraph ind = ga.graph.induced(s);
    std::vector<int> back = set_vertices(s);
    for (VertexSet c : comps) {
      VertexSet cm = 0;
      for (int v : set_vertices(c)) cm |= vbit(back[v]);
      TriState t = is_II1_factor_graph(ga, cm);
      if (t.is_yes()) {
        some_II1 = true;
        continue;
      }
      if (set_size(cm) == 1) {
        const VertexAlgebra& a = ga.alg[set_vertices(cm)[0]];
        if (a.finite_dimensional() && a.is_factor.is_yes()) continue;
        if (a.is_factor.is_no())
          return TriState::no("tensor component '" +
                              ga.graph.id(set_vertices(cm)[0]) +
                              "' has non-trivial center");
      }
      all_ok = false;
      unknown = true;
      break;
    }
    if (all_ok && some_II1)
      return TriState::yes(
          "tensor product of II1 and finite-dimensional matrix factors");
    if (unknown)
      return TriState::unknown("a tensor component is not known to be a factor");
  }
  return TriState::unknown("II1-factor hypothesis not derivable from the flags");
}

// Strong solidity of the graph product: every vertex algebra strongly
// solid; no subgraph with non-amenable product has a diffuse link product;
// and such subgraphs that are moreover diffuse have atomic link products.
inline TriState strongly_solid_graph_product(const GraphAlgebra& ga, VertexSet s) {
  ga.graph.check_subset(s);
  if (set_size(s) > ga.sweep_cap)
    throw resource_error("subgraph sweep limited to " +
                         std::to_string(ga.sweep_cap) + " vertices");
  TriState c1 = detail::every(ga, s, &VertexAlgebra::strongly_solid,
                              "strongly solid");
  if (c1.is_no()) return c1;
  TriState pending = c1;  // first Unknown seen, if any
  std::vector<int> verts = set_vertices(s);
  int k = static_cast<int>(verts.size());
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << k); ++pick) {
    VertexSet lam = 0;
    for (int i = 0; i < k; ++i)
      if ((pick >> i) & 1) lam |= vbit(verts[i]);
    TriState am = amenable_graph_product(ga, lam);
    if (am.is_yes()) continue;  // both conditions are vacuous
    VertexSet lnk = ga.graph.link(lam) & s;
    TriState link_diffuse = diffuse_graph_product(ga, lnk);
    TriState lam_diffuse = diffuse_graph_product(ga, lam);
    TriState link_atomic = atomic_graph_product(ga, lnk);
    // condition: amenable(lam) or not diffuse(link)
    if (am.is_no() && link_diffuse.is_yes())
      return TriState::no("subgraph {" + join_ids(ga.graph, lam) +
                          "} is non-amenable with diffuse link product");
    bool c2_settled = link_diffuse.is_no();
    // condition: amenable(lam) or not diffuse(lam) or atomic(link)
    if (am.is_no() && lam_diffuse.is_yes() && link_atomic.is_no())
      return TriState::no("subgraph {" + join_ids(ga.graph, lam) +
                          "} is non-amenable and diffuse with non-atomic "
                          "link product");
    bool c3_settled = lam_diffuse.is_no() || link_atomic.is_yes();
    if (pending.is_yes()) {
      if (!c2_settled)
        pending = TriState::unknown(
            "subgraph {" + join_ids(ga.graph, lam) + "}: " +
            (am.is_unknown() ? "amenability" : "link diffuseness") +
            " undecided");
      else if (!c3_settled)
        pending = TriState::unknown("subgraph {" + join_ids(ga.graph, lam) +
                                    "}: diffuseness/link atomicity undecided");
    }
  }
  if (pending.is_yes())
    return TriState::yes("vertices strongly solid; all subgraph conditions hold");
  return pending;
}

// Primeness of an irreducible piece.
namespace detail {

inline TriState prime_irreducible(const GraphAlgebra& ga, VertexSet s) {
  int n = set_size(s);
  if (n == 1) {
    const VertexAlgebra& a = ga.alg[set_vertices(s)[0]];
    return {a.prime.verdict, "single vertex: " + a.prime.why};
  }
  TriState all_II1 = every(ga, s, &VertexAlgebra::is_II1_factor, "a II1 factor");
  if (all_II1.is_yes())
    return TriState::yes("irreducible graph product of II1 factors");
  TriState tz = every(ga, s, &VertexAlgebra::has_trace_zero_unitary,
                      "equipped with a trace-zero unitary");
  if (n >= 3 && tz.is_yes())
    return TriState::yes(
        "irreducible graph on >= 3 vertices with trace-zero unitaries");
  return TriState::unknown("primeness hypotheses not derivable for this piece");
}

}  // namespace detail

// Primeness of the graph product.
inline TriState prime_graph_product(const GraphAlgebra& ga) {
  const SimpleGraph& g = ga.graph;
  int n = g.size();
  if (n == 0)
    return TriState::unknown("empty graph: the scalars are not a II1 factor");
  if (n == 1)
    return {ga.alg[0].prime.verdict, "single vertex: " + ga.alg[0].prime.why};
  TriState all_II1 =
      detail::every(ga, g.all(), &VertexAlgebra::is_II1_factor, "a II1 factor");
  if (all_II1.is_yes()) {
    if (g.is_irreducible())
      return TriState::yes("graph product of II1 factors over an irreducible graph");
    return TriState::no("graph product of II1 factors over a reducible graph "
                        "splits as a tensor product");
  }
  if (g.is_irreducible()) {
    TriState tz = detail::every(ga, g.all(), &VertexAlgebra::has_trace_zero_unitary,
                                "equipped with a trace-zero unitary");
    if (n >= 3 && tz.is_yes())
      return TriState::yes(
          "irreducible graph on >= 3 vertices with trace-zero unitaries");
  }
  TriState f = is_II1_factor_graph(ga, g.all());
  if (!f.is_yes())
    return TriState::unknown("cannot establish that the product is a II1 factor (" +
                             f.why + ")");
  // general criterion: one prime irreducible component, all others
  // finite-dimensional
  std::vector<VertexSet> comps = g.irreducible_components();
  std::vector<bool> fin(comps.size());
  int infinite = 0, candidate = -1;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    fin[i] = set_size(comps[i]) == 1 &&
             ga.alg[set_vertices(comps[i])[0]].finite_dimensional();
    if (!fin[i]) {
      ++infinite;
      candidate = static_cast<int>(i);
    }
  }
  if (infinite == 0)
    return TriState::no("finite-dimensional product");
  if (infinite >= 2)
    return TriState::no("two irreducible components are infinite-dimensional: "
                        "a tensor split with both parts diffuse");
  TriState p = detail::prime_irreducible(ga, comps[candidate]);
  if (p.is_yes())
    return TriState::yes("irreducible component {" + join_ids(g, comps[candidate]) +
                         "} is prime, complement is finite-dimensional");
  if (p.is_no())
    return TriState::no("the only infinite-dimensional component is not prime");
  return p;
}

// Free indecomposability: for II1-factor vertices with separable preduals
// the product splits as a tracial free product of II1 factors iff the graph
// is disconnected.
inline TriState freely_indecomposable(const GraphAlgebra& ga) {
  const SimpleGraph& g = ga.graph;
  if (g.size() < 2)
    return TriState::unknown("|graph| >= 2 hypothesis unmet");
  TriState all_II1 =
      detail::every(ga, g.all(), &VertexAlgebra::is_II1_factor, "a II1 factor");
  TriState sep = detail::every(ga, g.all(), &VertexAlgebra::separable_predual,
                               "of separable predual");
  if (!all_II1.is_yes() || !sep.is_yes())
    return TriState::unknown("hypothesis gap: " +
                             (all_II1.is_yes() ? sep.why : all_II1.why));
  if (g.is_connected())
    return TriState::yes("connected graph: no tracial free product splitting");
  return TriState::no("disconnected graph splits along any connected component");
}

// Absence of a Cartan subalgebra (one-directional).
inline TriState cartan_absence(const GraphAlgebra& ga) {
  std::optional<int> r = radius(ga.graph);
  bool big = !r.has_value() || *r >= 3;  // infinite radius counts
  if (!big)
    return TriState::unknown("radius " + std::to_string(*r) +
                             " < 3: the criterion is silent");
  TriState all_II1 = detail::every(ga, ga.graph.all(),
                                   &VertexAlgebra::is_II1_factor, "a II1 factor");
  if (all_II1.is_yes())
    return TriState::yes("radius >= 3 with II1-factor vertices");
  return TriState::unknown("radius >= 3 but II1-factor hypothesis unmet (" +
                           all_II1.why + ")");
}

// Class membership of the whole product: rigid non-empty graph with every
// vertex in the vertex class.
inline TriState in_class_rigid(const GraphAlgebra& ga) {
  if (ga.graph.size() == 0) return TriState::no("empty graph");
  if (!ga.graph.is_rigid()) return TriState::no("graph is not rigid");
  TriState cv = detail::every(ga, ga.graph.all(), &VertexAlgebra::in_C_vertex,
                              "in the vertex class");
  if (cv.is_yes()) return TriState::yes("rigid graph, vertex-class vertices");
  return {cv.verdict, cv.why};
}

struct FactorizationEntry {
  VertexSet part;
  TriState property;  // prime / freely indecomposable verdict of the piece
  std::string note;
};

struct Factorization {
  std::vector<FactorizationEntry> parts;
  std::string provenance;
};

// Tensor factorization along irreducible components, each tagged prime.
// Uniqueness (up to permutation and amplification) is asserted only inside
// the rigid class.
inline Factorization prime_factorization(const GraphAlgebra& ga) {
  Factorization out;
  TriState rigid_class = in_class_rigid(ga);
  out.provenance =
      rigid_class.is_yes()
          ? "unique prime factorization: components are pairwise stably "
            "isomorphic under any other factorization"
          : "outside the rigid class (" + rigid_class.why +
                ") - uniqueness not asserted";
  for (VertexSet comp : ga.graph.irreducible_components()) {
    GraphAlgebra sub = ga.restricted(comp);
    FactorizationEntry e;
    e.part = comp;
    e.property = prime_graph_product(sub);
    e.note = sub.graph.is_irreducible() ? "irreducible component" : "component";
    out.parts.push_back(std::move(e));
  }
  return out;
}

// Free factorization along connected components, each tagged freely
// indecomposable; uniqueness up to unitary conjugacy inside the rigid class
// with at least two vertices.
inline Factorization free_product_decomposition(const GraphAlgebra& ga) {
  Factorization out;
  TriState rigid_class = in_class_rigid(ga);
  bool unique = rigid_class.is_yes() && ga.graph.size() >= 2;
  out.provenance =
      unique ? "unique free product decomposition: components are pairwise "
               "unitarily conjugate under any other splitting"
             : "uniqueness not asserted (" +
                   (rigid_class.is_yes() ? std::string("single vertex")
                                         : rigid_class.why) +
                   ")";
  for (VertexSet comp : ga.graph.connected_components()) {
    GraphAlgebra sub = ga.restricted(comp);
    FactorizationEntry e;
    e.part = comp;
    e.property = freely_indecomposable(sub);
    e.note = sub.graph.is_rigid() ? "connected component"
                                  : "connected component (not rigid)";
    out.parts.push_back(std::move(e));
  }
  return out;
}

// Graph-level (non-)isomorphism obstruction for products over rigid graphs
// with vertex-class vertices: no graph isomorphism forces the products to
// be non-isomorphic; otherwise every isomorphism pins the vertex algebras
// up to amplification.
struct IsoObstruction {
  std::string verdict;  // "not isomorphic" | "no obstruction" | "inapplicable"
  std::string provenance;
  std::vector<GraphIsomorphism> isomorphisms;
  bool truncated = false;
};

inline IsoObstruction isomorphism_obstruction(const GraphAlgebra& a,
                                              const GraphAlgebra& b,
                                              std::size_t cap = 100) {
  IsoObstruction out;
  TriState ca = in_class_rigid(a);
  TriState cb = in_class_rigid(b);
  if (!ca.is_yes() || !cb.is_yes()) {
    out.verdict = "inapplicable";
    out.provenance = "rigid-class hypothesis unmet: " +
                     (ca.is_yes() ? cb.why : ca.why);
    return out;
  }
  out.isomorphisms = find_all_isomorphisms(a.graph, b.graph, cap);
  out.truncated = out.isomorphisms.size() >= cap;
  if (out.isomorphisms.empty()) {
    out.verdict = "not isomorphic";
    out.provenance =
        "no graph isomorphism exists, so the graph products are not isomorphic";
  } else {
    out.verdict = "no obstruction";
    out.provenance =
        "graph isomorphisms exist; any product isomorphism induces one and "
        "matches vertex algebras up to amplification";
  }
  return out;
}

// Aggregate report over one input.
struct StructureReport {
  int vertex_count = 0;
  bool rigid = false;
  bool irreducible = false;
  bool connected = false;
  std::optional<int> graph_radius;  // nullopt = infinite
  int core_size = 0;
  std::vector<VertexSet> connected_parts;
  std::vector<VertexSet> irreducible_parts;
  TriState amenable, atomic, diffuse, strongly_solid, II1_factor, prime,
      freely_indecomp, cartan_free, class_rigid;
  Factorization tensor_factorization;
  Factorization free_factorization;
};

inline StructureReport full_report(const GraphAlgebra& ga) {
  StructureReport r;
  const SimpleGraph& g = ga.graph;
  r.vertex_count = g.size();
  r.rigid = g.is_rigid();
  r.irreducible = g.is_irreducible();
  r.connected = g.is_connected();
  r.graph_radius = radius(g);
  r.core_size = core(g).graph.size();
  r.connected_parts = g.connected_components();
  r.irreducible_parts = g.irreducible_components();
  r.amenable = amenable_graph_product(ga, g.all());
  r.atomic = atomic_graph_product(ga, g.all());
  r.diffuse = diffuse_graph_product(ga, g.all());
  r.strongly_solid = strongly_solid_graph_product(ga, g.all());
  r.II1_factor = is_II1_factor_graph(ga, g.all());
  r.prime = prime_graph_product(ga);
  r.freely_indecomp = freely_indecomposable(ga);
  r.cartan_free = cartan_absence(ga);
  r.class_rigid = in_class_rigid(ga);
  r.tensor_factorization = prime_factorization(ga);
  r.free_factorization = free_product_decomposition(ga);
  return r;
}

}  // namespace gpf
