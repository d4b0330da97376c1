#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpfactor/classify.hpp"
#include "gpfactor/fock.hpp"
#include "gpfactor/fock_verify.hpp"
#include "gpfactor/growth.hpp"
#include "gpfactor/io.hpp"
#include "gpfactor/version.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw gpf::input_error("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

gpf::Caps env_caps() {
  gpf::Caps caps;
  if (const char* e = std::getenv("GPFACTOR_CAPS"))
    caps = gpf::parse_caps_string(e, caps);
  return caps;
}

gpf::VertexSet parse_subset(const gpf::SimpleGraph& g, const std::string& csv) {
  gpf::VertexSet s = 0;
  std::size_t pos = 0;
  while (pos <= csv.size() && !csv.empty()) {
    std::size_t end = csv.find(',', pos);
    if (end == std::string::npos) end = csv.size();
    s |= gpf::vbit(g.index_of(csv.substr(pos, end - pos)));
    pos = end + 1;
    if (end == csv.size()) break;
  }
  return s;
}

// Finite-dimensional models for the fock commands; infinite descriptors are
// rejected.
std::vector<gpf::VertexModel> models_from(const gpf::GraphAlgebra& ga) {
  std::vector<gpf::VertexModel> out;
  for (int v = 0; v < ga.graph.size(); ++v) {
    const gpf::VertexAlgebra& a = ga.alg[v];
    if (a.two_dim_alpha) {
      double al = *a.two_dim_alpha;
      out.push_back(gpf::VertexModel::commutative({al, 1.0 - al}));
    } else if (a.dimension) {
      // matrix descriptors carry dimension n^2
      long long d = *a.dimension;
      long long n = 2;
      while (n * n < d) ++n;
      if (n * n == d && a.is_factor.is_yes()) {
        if (n > 3)
          throw gpf::input_error("matrix models supported up to size 3 for '" +
                                 ga.graph.id(v) + "'");
        out.push_back(gpf::VertexModel::matrix_tracial(static_cast<int>(n)));
      } else {
        throw gpf::input_error("no finite-dimensional model for vertex '" +
                               ga.graph.id(v) + "'");
      }
    } else {
      throw gpf::input_error(
          "fock verification needs finite-dimensional vertex models; vertex '" +
          ga.graph.id(v) + "' is infinite-dimensional");
    }
  }
  return out;
}

gpf::Json verify_json(const gpf::VerifyReport& r) {
  gpf::Json j;
  j["identity"] = r.identity;
  j["trials"] = r.trials;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tol;
  j["seed"] = r.seed;
  j["dimension"] = r.dimension;
  j["depth"] = r.depth;
  j["pass"] = r.pass();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure analysis of graph products of von Neumann algebras"};
  app.set_version_flag("--version", std::string(gpf::kToolVersion));
  app.require_subcommand(1);

  std::string input_path = "-";
  std::string input_b;
  int max_len = 10;
  std::string q_file;
  int depth = 2, trials = 50;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::string g1_csv, g2_csv;

  CLI::App* analyze = app.add_subcommand("analyze", "full structure report");
  analyze->add_option("input", input_path, "input document (or - for stdin)");

  CLI::App* rigid = app.add_subcommand("rigid", "rigidity of the graph");
  rigid->add_option("input", input_path, "input document");

  CLI::App* core_cmd = app.add_subcommand("core", "core quotient and reconstruction");
  core_cmd->add_option("input", input_path, "input document");

  CLI::App* comps = app.add_subcommand("components",
                                       "connected and irreducible components");
  comps->add_option("input", input_path, "input document");

  CLI::App* growth = app.add_subcommand("hecke-growth",
                                        "growth table and weighted series");
  growth->add_option("input", input_path, "input document");
  growth->add_option("--max-len", max_len, "table length (default 10)");
  growth->add_option("--q-file", q_file, "JSON map vertex id -> q override");

  CLI::App* fock = app.add_subcommand("fock-verify",
                                      "numerical verification on the truncated space");
  fock->add_option("input", input_path, "input document");
  fock->add_option("--depth", depth, "truncation depth (default 2)");
  fock->add_option("--trials", trials, "trials per identity (default 50)");
  fock->add_option("--seed", seed, "random seed (default 1)");
  fock->add_option("--tol", tol, "residual tolerance (default 1e-10)");
  fock->add_option("--g1", g1_csv, "first subgraph as comma-separated ids");
  fock->add_option("--g2", g2_csv, "second subgraph as comma-separated ids");

  CLI::App* iso = app.add_subcommand("isocheck",
                                     "graph-level isomorphism obstruction");
  iso->add_option("inputA", input_path, "first input document")->required();
  iso->add_option("inputB", input_b, "second input document")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    gpf::Caps caps = env_caps();
    gpf::Json out;

    if (iso->parsed()) {
      gpf::InputDocument a = gpf::parse_input(read_input(input_path), caps);
      gpf::InputDocument b = gpf::parse_input(read_input(input_b), caps);
      gpf::IsoObstruction r = gpf::isomorphism_obstruction(a.ga, b.ga);
      out = gpf::report_header(a.normalized);
      out["input_digest_b"] = gpf::digest(b.normalized);
      out["verdict"] = r.verdict;
      out["provenance"] = r.provenance;
      gpf::Json isos = gpf::Json::array();
      for (const gpf::GraphIsomorphism& m : r.isomorphisms) {
        gpf::Json pairs = gpf::Json::array();
        for (int v = 0; v < a.ga.graph.size(); ++v)
          pairs.push_back(gpf::Json::array(
              {a.ga.graph.id(v), b.ga.graph.id(m.map[v])}));
        isos.push_back(pairs);
      }
      out["isomorphisms"] = isos;
      out["isomorphism_list_truncated"] = r.truncated;
      std::cout << gpf::emit(out);
      return 0;
    }

    gpf::InputDocument doc = gpf::parse_input(read_input(input_path), caps);
    const gpf::SimpleGraph& g = doc.ga.graph;
    out = gpf::report_header(doc.normalized);

    if (analyze->parsed()) {
      gpf::StructureReport r = gpf::full_report(doc.ga);
      gpf::Json body = gpf::structure_report_json(doc.ga, r);
      out.update(body);
    } else if (rigid->parsed()) {
      out["rigid"] = g.is_rigid();
      gpf::Json witness = gpf::Json::array();
      for (int v = 0; v < g.size(); ++v) {
        gpf::Json w;
        w["vertex"] = g.id(v);
        w["link_of_link"] = g.id_list(g.link(g.link(v)));
        w["ok"] = g.link(g.link(v)) == gpf::vbit(v);
        witness.push_back(w);
      }
      out["witness"] = witness;
    } else if (core_cmd->parsed()) {
      gpf::CoreReconstruction r = gpf::core_reconstruction(g);
      out["core_vertices"] = r.base.ids();
      gpf::Json ce = gpf::Json::array();
      for (const auto& [x, y] : r.base.edge_list())
        ce.push_back(gpf::Json::array({x, y}));
      out["core_edges"] = ce;
      gpf::Json classes = gpf::Json::array();
      gpf::CoreResult c = gpf::core(g);
      for (int k = 0; k < c.graph.size(); ++k) {
        gpf::VertexSet members = 0;
        for (int v = 0; v < g.size(); ++v)
          if (c.class_of[v] == k) members |= gpf::vbit(v);
        classes.push_back(g.id_list(members));
      }
      out["classes"] = classes;
      out["reconstruction_valid"] = gpf::is_isomorphism(g, r.product, r.witness);
      out["core_rigid"] = r.base.is_rigid();
    } else if (comps->parsed()) {
      gpf::Json cc = gpf::Json::array();
      for (gpf::VertexSet s : g.connected_components()) cc.push_back(g.id_list(s));
      out["connected_components"] = cc;
      gpf::Json ic = gpf::Json::array();
      for (gpf::VertexSet s : g.irreducible_components()) ic.push_back(g.id_list(s));
      out["irreducible_components"] = ic;
      out["connected"] = g.is_connected();
      out["irreducible"] = g.is_irreducible();
    } else if (growth->parsed()) {
      gpf::GrowthTable bfs = gpf::growth_counts_bfs(g, max_len, doc.caps.enumeration);
      out["counts"] = bfs.counts;
      std::vector<double> q(g.size(), 1.0);
      bool have_q = true;
      for (int v = 0; v < g.size(); ++v) {
        if (doc.ga.alg[v].hecke_q)
          q[v] = *doc.ga.alg[v].hecke_q;
        else
          have_q = false;
      }
      if (!q_file.empty()) {
        gpf::Json qj = gpf::Json::parse(read_input(q_file));
        for (auto it = qj.begin(); it != qj.end(); ++it)
          q[g.index_of(it.key())] = it.value().get<double>();
        have_q = true;
      }
      gpf::GrowthTable tr = gpf::growth_counts_transfer(g, max_len, q);
      out["q"] = q;
      out["q_from_descriptors_or_file"] = have_q;
      out["weighted"] = tr.weighted;
      out["converges"] = gpf::tri_json(gpf::hecke_sum_converges(g, q));
    } else if (fock->parsed()) {
      std::vector<gpf::VertexModel> models = models_from(doc.ga);
      if (g.size() == 0) throw gpf::input_error("fock-verify needs a non-empty graph");
      gpf::TruncatedFockSpace space(g, models, depth, doc.caps.fock_dimension);
      // default subgraphs: first and last vertex, which keeps the admissible
      // word sets rich
      gpf::VertexSet g1 = g1_csv.empty() ? gpf::vbit(0) : parse_subset(g, g1_csv);
      gpf::VertexSet g2 = g2_csv.empty() ? gpf::vbit(g.size() - 1)
                                         : parse_subset(g, g2_csv);
      gpf::Json checks = gpf::Json::array();
      checks.push_back(verify_json(
          gpf::verify_expectation_triple(space, g1, g2, trials, seed, tol)));
      checks.push_back(verify_json(
          gpf::verify_iterated_expectation(space, g1, g2, trials, seed, tol)));
      bool all_pass = true;
      for (int v = 0; v < g.size(); ++v) {
        gpf::VerifyReport r = gpf::verify_commutator_star(
            space, v, std::max(1, trials / g.size()), seed + 1 + v, tol);
        r.identity += " @" + g.id(v);
        checks.push_back(verify_json(r));
      }
      for (const gpf::Json& c : checks) all_pass = all_pass && c.at("pass").get<bool>();
      out["subgraph_1"] = g.id_list(g1);
      out["subgraph_2"] = g.id_list(g2);
      out["dimension"] = space.dim();
      out["checks"] = checks;
      out["pass"] = all_pass;
    }

    std::cout << gpf::emit(out);
    return 0;
  } catch (const gpf::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const gpf::resource_error& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
