#include "mapperloss/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mapperloss::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(where) + ": missing \"" + key + "\"");
  return *it;
}

int as_int(const Json& j, const char* where) {
  if (!j.is_number_integer()) bad(std::string(where) + ": expected an integer");
  return j.get<int>();
}

std::string as_string(const Json& j, const char* where) {
  if (!j.is_string()) bad(std::string(where) + ": expected a string");
  return j.get<std::string>();
}

}  // namespace

Json cell_to_json(const Cell& c) {
  Json out = Json::array();
  for (const auto& iv : c.intervals())
    out.push_back(Json{{iv.kind == IntervalKind::Degenerate ? "deg" : "nondeg", iv.index}});
  return out;
}

Cell cell_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("cell: expected a nonempty list");
  std::vector<Interval> iv;
  for (const auto& e : j) {
    if (!e.is_object() || e.size() != 1) bad("cell: each entry must be {\"deg\": l} or {\"nondeg\": l}");
    if (e.contains("deg"))
      iv.push_back(Interval::deg(as_int(e["deg"], "cell")));
    else if (e.contains("nondeg"))
      iv.push_back(Interval::nondeg(as_int(e["nondeg"], "cell")));
    else
      bad("cell: each entry must be {\"deg\": l} or {\"nondeg\": l}");
  }
  return Cell(std::move(iv));
}

Json grid_to_json(const GridSpec& g) { return Json{{"d", g.d}, {"delta", g.delta}, {"L", g.L}}; }

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.d = as_int(field(j, "d", "grid"), "grid.d");
  const Json& delta = field(j, "delta", "grid");
  if (!delta.is_number()) bad("grid.delta: expected a number");
  g.delta = delta.get<double>();
  g.L = as_int(field(j, "L", "grid"), "grid.L");
  g.validate();
  return g;
}

Json cosheaf_to_json(const CosheafGraph& F) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < F.node_count(); ++i) {
    const auto x = static_cast<NodeIndex>(i);
    nodes.push_back(Json{{"id", F.id(x)}, {"cell", cell_to_json(F.cell(x))}});
  }
  Json links = Json::array();
  for (const auto& [c, p] : F.links()) links.push_back(Json::array({F.id(c), F.id(p)}));
  return Json{{"grid", grid_to_json(F.grid())}, {"nodes", nodes}, {"links", links}};
}

CosheafGraph cosheaf_from_json(const Json& j) {
  const GridSpec grid = grid_from_json(field(j, "grid", "cosheaf"));
  const Json& nodes = field(j, "nodes", "cosheaf");
  if (!nodes.is_array()) bad("cosheaf.nodes: expected a list");
  std::vector<CosheafNode> ns;
  for (const auto& n : nodes) {
    Cell c = cell_from_json(field(n, "cell", "node"));
    if (static_cast<int>(c.d()) != grid.d) bad("node cell has the wrong dimension");
    ns.push_back({as_string(field(n, "id", "node"), "node.id"), std::move(c)});
  }
  std::vector<std::pair<std::string, std::string>> links;
  if (j.contains("links")) {
    for (const auto& l : j["links"]) {
      if (!l.is_array() || l.size() != 2) bad("cosheaf.links: each link is [child, parent]");
      links.emplace_back(as_string(l[0], "link"), as_string(l[1], "link"));
    }
  }
  return CosheafGraph(grid, std::move(ns), links);
}

Json graph_to_json(const GeometricGraph& g) {
  Json vs = Json::array();
  for (const auto& v : g.vertices) vs.push_back(Json{{"id", v.id}, {"f", v.f}});
  Json es = Json::array();
  for (const auto& [a, b] : g.edges) es.push_back(Json::array({a, b}));
  return Json{{"d", g.d}, {"vertices", vs}, {"edges", es}};
}

GeometricGraph graph_from_json(const Json& j) {
  GeometricGraph g;
  g.d = as_int(field(j, "d", "graph"), "graph.d");
  const Json& vs = field(j, "vertices", "graph");
  if (!vs.is_array()) bad("graph.vertices: expected a list");
  for (const auto& v : vs) {
    GeometricVertex gv;
    gv.id = as_string(field(v, "id", "vertex"), "vertex.id");
    const Json& f = field(v, "f", "vertex");
    if (f.is_number()) {
      gv.f.push_back(f.get<double>());
    } else if (f.is_array()) {
      for (const auto& x : f) {
        if (!x.is_number()) bad("vertex '" + gv.id + "': values must be numbers");
        gv.f.push_back(x.get<double>());
      }
    } else {
      bad("vertex '" + gv.id + "': f must be a list of numbers");
    }
    g.vertices.push_back(std::move(gv));
  }
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) bad("graph.edges: each edge is [u, v]");
      g.edges.emplace_back(as_string(e[0], "edge"), as_string(e[1], "edge"));
    }
  }
  g.validate();
  return g;
}

Json assignment_to_json(const Assignment& a, const CosheafGraph& F, const CosheafGraph& G) {
  Json phi = Json::object(), psi = Json::object();
  for (std::size_t i = 0; i < a.phi.size(); ++i)
    if (a.phi[i] != kNoNode) phi[F.id(static_cast<NodeIndex>(i))] = G.id(a.phi[i]);
  for (std::size_t i = 0; i < a.psi.size(); ++i)
    if (a.psi[i] != kNoNode) psi[G.id(static_cast<NodeIndex>(i))] = F.id(a.psi[i]);
  return Json{{"n", a.n}, {"phi", phi}, {"psi", psi}};
}

Assignment assignment_from_json(const Json& j, const CosheafGraph& F, const CosheafGraph& G) {
  Assignment a;
  const Json& n = field(j, "n", "assignment");
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0))
    bad("assignment.n: expected a nonnegative integer");
  a.n = n.get<std::size_t>();
  a.phi.assign(F.node_count(), kNoNode);
  a.psi.assign(G.node_count(), kNoNode);
  auto read = [&](const char* key, const CosheafGraph& X, const CosheafGraph& Y, std::vector<NodeIndex>& out) {
    const Json& m = field(j, key, "assignment");
    if (!m.is_object()) bad(std::string("assignment.") + key + ": expected an object");
    for (auto it = m.begin(); it != m.end(); ++it) {
      auto x = X.find(it.key());
      if (!x) bad(std::string("assignment.") + key + ": unknown source node '" + it.key() + "'");
      auto y = Y.find(as_string(it.value(), key));
      if (!y) bad(std::string("assignment.") + key + ": unknown target node '" + it.value().get<std::string>() + "'");
      out[*x] = *y;
    }
  };
  read("phi", F, G, a.phi);
  read("psi", G, F, a.psi);
  return a;
}

Json extended_to_json(ExtendedNat v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

Json witness_to_json(const Witness& w) {
  return Json{{"kind", std::string(to_string(w.kind))},
              {"sigma", cell_to_json(w.sigma)},
              {"tau", w.tau ? cell_to_json(*w.tau) : Json(nullptr)},
              {"element", w.element_id},
              {"lhs", w.lhs_id},
              {"rhs", w.rhs_id}};
}

Json loss_result_to_json(const LossResult& r) {
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(witness_to_json(w));
  Json reeb = nullptr;
  if (r.reeb) reeb = std::isinf(*r.reeb) ? Json("inf") : Json(*r.reeb);
  return Json{{"n", r.n},
              {"L_B", extended_to_json(r.L_B)},
              {"bound", extended_to_json(r.bound)},
              {"reeb_bound", reeb},
              {"witnesses", ws}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string to_dot(const CosheafGraph& F) {
  std::ostringstream os;
  os << "graph cosheaf {\n";
  for (std::size_t i = 0; i < F.node_count(); ++i) {
    const auto x = static_cast<NodeIndex>(i);
    os << "  n" << i << " [label=" << Json(F.id(x) + "@" + F.cell(x).to_string()).dump() << "];\n";
  }
  for (const auto& [c, p] : F.links()) os << "  n" << c << " -- n" << p << ";\n";
  os << "}\n";
  return os.str();
}

Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) bad("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(p.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace mapperloss::io
