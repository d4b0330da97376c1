#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpfactor/classify.hpp"
#include "gpfactor/errors.hpp"
#include "gpfactor/graph.hpp"
#include "gpfactor/version.hpp"
#include "gpfactor/vertex_algebra.hpp"

namespace gpf {

using Json = nlohmann::json;

// Configurable limits; the environment variable GPFACTOR_CAPS and the input
// document's options block both override the defaults.
struct Caps {
  std::size_t enumeration = 1000000;
  long long fock_dimension = 20000;
  int sweep_vertices = 16;
};

inline Caps parse_caps_string(const std::string& text, Caps base) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eq = text.find('=', pos);
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    if (eq == std::string::npos || eq > end)
      throw input_error("malformed caps string (want key=value,...)");
    std::string key = text.substr(pos, eq - pos);
    long long value = 0;
    try {
      value = std::stoll(text.substr(eq + 1, end - eq - 1));
    } catch (...) {
      throw input_error("malformed caps value for '" + key + "'");
    }
    if (value <= 0) throw input_error("caps must be positive");
    if (key == "enumeration")
      base.enumeration = static_cast<std::size_t>(value);
    else if (key == "fock_dimension")
      base.fock_dimension = value;
    else if (key == "sweep_vertices")
      base.sweep_vertices = static_cast<int>(value);
    else
      throw input_error("unknown cap '" + key + "'");
    pos = end + (end < text.size() ? 1 : 0);
  }
  return base;
}

namespace io_detail {

inline TriState parse_flag(const Json& j, const std::string& field) {
  std::string s = j.get<std::string>();
  if (s == "yes") return TriState::yes("declared");
  if (s == "no") return TriState::no("declared");
  if (s == "unknown") return TriState::unknown("declared unknown");
  throw input_error("field '" + field + "' must be yes|no|unknown");
}

inline void apply_flags(VertexAlgebra& a, const Json& obj) {
  static const std::vector<std::pair<const char*, TriState VertexAlgebra::*>> kFlags = {
      {"amenable", &VertexAlgebra::amenable},
      {"atomic", &VertexAlgebra::atomic},
      {"diffuse", &VertexAlgebra::diffuse},
      {"strongly_solid", &VertexAlgebra::strongly_solid},
      {"is_factor", &VertexAlgebra::is_factor},
      {"II1", &VertexAlgebra::is_II1_factor},
      {"prime", &VertexAlgebra::prime},
      {"trace_zero_unitary", &VertexAlgebra::has_trace_zero_unitary},
      {"separable_predual", &VertexAlgebra::separable_predual},
      {"strong_AO", &VertexAlgebra::strong_AO},
      {"in_C_vertex", &VertexAlgebra::in_C_vertex},
  };
  for (const auto& [name, member] : kFlags)
    if (obj.contains(name)) a.*member = parse_flag(obj.at(name), name);
}

}  // namespace io_detail

inline VertexAlgebra parse_algebra(const Json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind"))
    throw input_error(where + ": algebra descriptor with a 'kind' required");
  std::string kind = obj.at("kind").get<std::string>();
  VertexAlgebra a;
  if (kind == "hecke") {
    if (!obj.contains("q")) throw input_error(where + ": hecke needs 'q'");
    a.hecke_q = obj.at("q").get<double>();
    if (!(*a.hecke_q > 0.0) || *a.hecke_q > 1.0)
      throw input_error(where + ": hecke q must lie in (0,1]");
  } else if (kind == "two_dim") {
    if (!obj.contains("alpha")) throw input_error(where + ": two_dim needs 'alpha'");
    double alpha = obj.at("alpha").get<double>();
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw input_error(where + ": two_dim alpha must lie in (0,1)");
    a.two_dim_alpha = alpha;
  } else if (kind == "matrix") {
    if (!obj.contains("n")) throw input_error(where + ": matrix needs 'n'");
    int n = obj.at("n").get<int>();
    if (n < 2) throw input_error(where + ": matrix size must be >= 2 (no scalars)");
    a = VertexAlgebra::matrix(n);
  } else if (kind == "II1") {
    a.is_II1_factor = TriState::yes("declared II1 factor");
    a.separable_predual = TriState::yes("assumed for declared II1 factors");
    io_detail::apply_flags(a, obj);
  } else if (kind == "custom") {
    io_detail::apply_flags(a, obj);
    if (obj.contains("dimension")) {
      const Json& d = obj.at("dimension");
      if (d.is_string() && d.get<std::string>() == "infinite") {
        // infinite dimension: leave unset
      } else if (d.is_number_integer()) {
        a.dimension = d.get<long long>();
        if (*a.dimension < 2)
          throw input_error(where + ": dimension must be >= 2 (no scalars)");
      } else {
        throw input_error(where + ": dimension must be an integer or \"infinite\"");
      }
    } else if (!a.is_II1_factor.is_yes() && !a.diffuse.is_yes() &&
               !a.in_C_vertex.is_yes()) {
      throw input_error(where +
                        ": custom descriptor missing fields: need 'dimension' "
                        "or a flag implying infinite dimension (II1/diffuse/"
                        "in_C_vertex = yes)");
    }
  } else {
    throw input_error(where + ": unknown algebra kind '" + kind + "'");
  }
  try {
    a.derive();
  } catch (const input_error& e) {
    throw input_error(where + ": " + e.what());
  }
  return a;
}

struct InputDocument {
  GraphAlgebra ga;
  Caps caps;
  Json normalized;  // canonical form of the parsed document
};

inline InputDocument parse_input(const std::string& text, Caps base_caps) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw input_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices"))
    throw input_error("input document needs a 'vertices' array");
  std::vector<std::string> ids;
  std::vector<VertexAlgebra> algs_by_order;
  std::vector<std::string> order;
  for (const Json& v : j.at("vertices")) {
    if (!v.is_object() || !v.contains("id"))
      throw input_error("every vertex needs an 'id'");
    std::string id = v.at("id").get<std::string>();
    if (!v.contains("algebra"))
      throw input_error("vertex '" + id + "': missing 'algebra' descriptor");
    ids.push_back(id);
    order.push_back(id);
    algs_by_order.push_back(parse_algebra(v.at("algebra"), "vertex '" + id + "'"));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("edges"))
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw input_error("edges must be pairs of vertex ids");
      edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
  SimpleGraph g(ids, edges);  // validates duplicates, self-edges, dangling ids
  std::vector<VertexAlgebra> algs(g.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    algs[g.index_of(order[i])] = algs_by_order[i];
  InputDocument doc;
  doc.ga = GraphAlgebra(std::move(g), std::move(algs));
  doc.caps = base_caps;
  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (o.contains("assume_II1_factor"))
      doc.ga.assume_II1_factor = o.at("assume_II1_factor").get<bool>();
    if (o.contains("caps")) {
      const Json& c = o.at("caps");
      if (c.contains("enumeration"))
        doc.caps.enumeration = c.at("enumeration").get<std::size_t>();
      if (c.contains("fock_dimension"))
        doc.caps.fock_dimension = c.at("fock_dimension").get<long long>();
      if (c.contains("sweep_vertices"))
        doc.caps.sweep_vertices = c.at("sweep_vertices").get<int>();
    }
  }
  doc.ga.sweep_cap = doc.caps.sweep_vertices;
  // canonical re-serialization of the document model
  Json norm;
  Json verts = Json::array();
  for (const std::string& id : doc.ga.graph.ids()) {
    for (const Json& v : j.at("vertices"))
      if (v.at("id").get<std::string>() == id) {
        Json nv;
        nv["id"] = id;
        nv["algebra"] = v.at("algebra");
        verts.push_back(nv);
        break;
      }
  }
  norm["vertices"] = verts;
  Json es = Json::array();
  for (const auto& [a, b] : doc.ga.graph.edge_list()) es.push_back(Json::array({a, b}));
  norm["edges"] = es;
  if (j.contains("options")) norm["options"] = j.at("options");
  doc.normalized = norm;
  return doc;
}

// FNV-1a over the canonical serialization.
inline std::string digest(const Json& j) {
  std::string bytes = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Canonical emission: sorted keys (nlohmann object maps are ordered), two
// space indent, trailing newline, shortest round-trip reals.
inline std::string emit(const Json& report) { return report.dump(2) + "\n"; }

inline Json tri_json(const TriState& t) {
  Json j;
  j["verdict"] = to_string(t.verdict);
  j["provenance"] = t.why;
  return j;
}

inline Json factorization_json(const SimpleGraph& g, const Factorization& f,
                               const std::string& property) {
  Json j;
  j["provenance"] = f.provenance;
  Json parts = Json::array();
  for (const FactorizationEntry& e : f.parts) {
    Json p;
    p["vertices"] = g.id_list(e.part);
    p[property] = tri_json(e.property);
    p["note"] = e.note;
    parts.push_back(p);
  }
  j["parts"] = parts;
  return j;
}

inline Json report_header(const Json& normalized_input) {
  Json j;
  j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  j["input_digest"] = digest(normalized_input);
  return j;
}

inline Json structure_report_json(const GraphAlgebra& ga, const StructureReport& r) {
  const SimpleGraph& g = ga.graph;
  Json j;
  Json graph;
  graph["vertices"] = g.ids();
  Json edges = Json::array();
  for (const auto& [a, b] : g.edge_list()) edges.push_back(Json::array({a, b}));
  graph["edges"] = edges;
  graph["rigid"] = r.rigid;
  graph["irreducible"] = r.irreducible;
  graph["connected"] = r.connected;
  if (r.graph_radius)
    graph["radius"] = *r.graph_radius;
  else
    graph["radius"] = "infinite";
  graph["core_size"] = r.core_size;
  Json cparts = Json::array();
  for (VertexSet s : r.connected_parts) cparts.push_back(g.id_list(s));
  graph["connected_components"] = cparts;
  Json iparts = Json::array();
  for (VertexSet s : r.irreducible_parts) iparts.push_back(g.id_list(s));
  graph["irreducible_components"] = iparts;
  j["graph"] = graph;
  Json verdicts;
  verdicts["amenable"] = tri_json(r.amenable);
  verdicts["atomic"] = tri_json(r.atomic);
  verdicts["diffuse"] = tri_json(r.diffuse);
  verdicts["strongly_solid"] = tri_json(r.strongly_solid);
  verdicts["II1_factor"] = tri_json(r.II1_factor);
  verdicts["prime"] = tri_json(r.prime);
  verdicts["freely_indecomposable"] = tri_json(r.freely_indecomp);
  verdicts["cartan_free"] = tri_json(r.cartan_free);
  verdicts["in_class_rigid"] = tri_json(r.class_rigid);
  j["verdicts"] = verdicts;
  j["prime_factorization"] = factorization_json(g, r.tensor_factorization, "prime");
  j["free_product_decomposition"] =
      factorization_json(g, r.free_factorization, "freely_indecomposable");
  return j;
}

}  // namespace gpf
