#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fixtures {

Traced trace_ingest(GeometricGraph g, const GridSpec& grid) {
  Traced t;
  t.F = build_cosheaf(g, grid, &t.trace);
  t.g = std::move(g);
  return t;
}

NodeIndex Traced::at_vertex(const Cell& c, const std::string& v) const {
  for (NodeIndex x : F.nodes_at(c)) {
    const auto& vs = trace.vertices[x];
    if (std::find(vs.begin(), vs.end(), v) != vs.end()) return x;
  }
  throw std::logic_error("no node over " + c.to_string() + " contains vertex " + v);
}

NodeIndex Traced::at_edge(const Cell& c, const std::string& u, const std::string& v) const {
  std::size_t e = 0;
  for (; e < g.edges.size(); ++e)
    if ((g.edges[e].first == u && g.edges[e].second == v) || (g.edges[e].first == v && g.edges[e].second == u)) break;
  if (e == g.edges.size()) throw std::logic_error("no edge " + u + "-" + v);
  for (NodeIndex x : F.nodes_at(c)) {
    const auto& es = trace.edges[x];
    if (std::find(es.begin(), es.end(), e) != es.end()) return x;
  }
  throw std::logic_error("no node over " + c.to_string() + " meets edge " + u + "-" + v);
}

GeometricGraph path_graph(int d, const std::vector<std::pair<std::string, std::vector<double>>>& pts,
                          const std::vector<std::pair<std::string, std::string>>& edges) {
  GeometricGraph g;
  g.d = d;
  for (const auto& [id, f] : pts) g.vertices.push_back({id, f});
  g.edges = edges;
  return g;
}

const std::vector<ListedVertex>& listed_rows() {
  static const std::vector<ListedVertex> rows = {
      {14, {13}, 10},        {13, {11, 14}, 9},       {12, {10}, 9},     {11, {9, 13}, 8},  {10, {9, 12}, 8},
      {9, {7, 8, 10, 11}, 7}, {8, {5, 6, 9}, 6},      {7, {5, 9}, 6},    {6, {4, 8}, 5},    {5, {3, 7, 8}, 5},
      {4, {6}, 4},           {3, {5, 2}, 4},          {2, {3, 1}, 3},    {1, {2}, 2},
  };
  return rows;
}

CosheafGraph listed_cosheaf() {
  GridSpec grid{1, 1.0, 11};
  std::vector<CosheafNode> nodes;
  std::vector<std::pair<std::string, std::string>> links;
  std::vector<int> height(15, 0);
  for (const auto& r : listed_rows()) height[r.v] = r.height;
  for (const auto& r : listed_rows()) nodes.push_back({"v" + std::to_string(r.v), sig(r.height)});
  for (const auto& r : listed_rows()) {
    for (int w : r.nbrs) {
      if (w < r.v) continue;  // each undirected edge once
      const int lo = std::min(height[r.v], height[w]);
      const std::string e = "v" + std::to_string(r.v) + "-v" + std::to_string(w);
      nodes.push_back({e, tau(lo)});
      links.emplace_back(e, "v" + std::to_string(r.v));
      links.emplace_back(e, "v" + std::to_string(w));
    }
  }
  return CosheafGraph(grid, std::move(nodes), links);
}

GeometricGraph listed_reeb() {
  GeometricGraph g;
  g.d = 1;
  for (const auto& r : listed_rows()) g.vertices.push_back({"v" + std::to_string(r.v), {double(r.height)}});
  for (const auto& r : listed_rows())
    for (int w : r.nbrs)
      if (w > r.v) g.edges.emplace_back("v" + std::to_string(r.v), "v" + std::to_string(w));
  return g;
}

GeometricGraph band_graph() {
  return path_graph(2,
                    {{"a", {0, -0.5}},
                     {"p", {1.5, -0.5}},
                     {"q", {1.5, 0.5}},
                     {"b", {0, 0.5}},
                     {"w", {-2.5, 2.5}},
                     {"s", {-2.5, -0.5}},
                     {"t", {-1.5, -0.5}},
                     {"z", {-1.5, 2.5}},
                     {"c1", {1.5, -3.5}},
                     {"c2", {-2.5, -3.5}}},
                    {{"a", "p"}, {"p", "q"}, {"q", "b"}, {"w", "s"}, {"s", "t"}, {"t", "z"},
                     {"p", "c1"}, {"c1", "c2"}, {"c2", "s"}});
}

GeometricGraph strands_X() { return path_graph(1, {{"a", {0}}, {"top", {3.5}}, {"b", {2.5}}}, {{"a", "top"}, {"top", "b"}}); }
GeometricGraph strands_Y() { return path_graph(1, {{"w", {0}}, {"top", {3}}, {"z", {0.5}}}, {{"w", "top"}, {"top", "z"}}); }
GridSpec strands_grid() { return GridSpec{1, 1.0, 4}; }

namespace {

void map_strand(const Traced& X, const Traced& Y, const std::string& xu, const std::string& xv, const std::string& yu,
                const std::string& yv, std::vector<NodeIndex>& map) {
  for (std::size_t i = 0; i < X.F.node_count(); ++i) {
    const auto x = static_cast<NodeIndex>(i);
    if (map[i] != kNoNode) continue;
    try {
      if (X.at_edge(X.F.cell(x), xu, xv) != x) continue;
      map[i] = Y.at_edge(X.F.cell(x), yu, yv);
    } catch (const std::logic_error&) {
    }
  }
}

}  // namespace

Assignment strands_assignment(const Traced& X, const Traced& Y) {
  Assignment a{1, std::vector<NodeIndex>(X.F.node_count(), kNoNode), std::vector<NodeIndex>(Y.F.node_count(), kNoNode)};
  // Stated at sigma_0: A -> W', W -> A', Z -> A'.
  a.phi[X.at_vertex(sig(0), "a")] = Y.at_vertex(sig(0), "w");
  a.psi[Y.at_vertex(sig(0), "w")] = X.at_vertex(sig(0), "a");
  a.psi[Y.at_vertex(sig(0), "z")] = X.at_vertex(sig(0), "a");
  // Z' -> B'': the z strand above sigma_0 goes to the b strand of X.
  a.psi[Y.at_edge(tau(1), "top", "z")] = X.at_edge(tau(2), "top", "b");
  a.psi[Y.at_edge(sig(1), "top", "z")] = X.at_edge(sig(2), "top", "b");
  a.psi[Y.at_edge(sig(2), "top", "z")] = X.at_edge(sig(2), "top", "b");
  a.psi[Y.at_edge(tau(2), "top", "z")] = X.at_edge(tau(2), "top", "b");
  // Elsewhere each rising strand follows the other one, cell by cell.
  map_strand(X, Y, "a", "top", "w", "top", a.phi);
  map_strand(Y, X, "w", "top", "a", "top", a.psi);
  complete_assignment(X.F, Y.F, a);
  return a;
}

GeometricGraph split_F() {
  return path_graph(1, {{"a1", {-1.5}}, {"a2", {0.5}}, {"b1", {-0.5}}, {"b2", {1.5}}}, {{"a1", "a2"}, {"b1", "b2"}});
}
GeometricGraph split_G() {
  return path_graph(1, {{"w1", {-1.5}}, {"w2", {0.5}}, {"w3", {-0.5}}, {"w4", {1.5}}},
                    {{"w1", "w2"}, {"w2", "w3"}, {"w3", "w4"}});
}
GridSpec split_grid() { return GridSpec{1, 1.0, 2}; }

GeometricGraph late_merge_F() {
  return path_graph(1, {{"a", {-1}}, {"b", {0}}, {"c", {1}}, {"d", {2}}, {"e", {3}}},
                    {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}});
}
GeometricGraph late_merge_G() {
  return path_graph(1,
                    {{"x", {-1}}, {"y", {0}}, {"w", {1}}, {"q", {2}}, {"p", {3.5}}, {"u", {0}}, {"v", {1}}, {"z", {2}}},
                    {{"x", "y"}, {"y", "w"}, {"w", "q"}, {"q", "p"}, {"u", "v"}, {"v", "z"}, {"z", "p"}});
}
GridSpec late_merge_grid() { return GridSpec{1, 1.0, 4}; }

Assignment late_merge_assignment(const Traced& F, const Traced& G) {
  Assignment a{1, std::vector<NodeIndex>(F.F.node_count(), kNoNode), std::vector<NodeIndex>(G.F.node_count(), kNoNode)};
  a.phi[F.at_vertex(sig(-1), "a")] = G.at_vertex(sig(-1), "x");
  a.phi[F.at_vertex(sig(0), "b")] = G.at_vertex(sig(1), "w");
  a.phi[F.at_vertex(sig(1), "c")] = G.at_vertex(sig(2), "z");
  a.phi[F.at_edge(tau(-1), "a", "b")] = G.at_edge(tau(-1), "x", "y");
  a.phi[F.at_edge(tau(0), "b", "c")] = G.at_edge(tau(0), "u", "v");
  a.psi[G.at_vertex(sig(-1), "x")] = F.at_vertex(sig(0), "b");
  a.psi[G.at_vertex(sig(1), "w")] = F.at_vertex(sig(1), "c");
  complete_assignment(F.F, G.F, a);
  return a;
}

namespace {

// Nodes of G over cells of the radius-n box around `c`.
template <class Fn>
void for_each_in_box(const CosheafGraph& G, const Cell& c, std::size_t n, Fn&& fn) {
  const GridSpec& grid = G.grid();
  const CellBox box = star_box(grid, c, n);
  std::vector<int> h(box.lo);
  while (true) {
    for (NodeIndex y : G.nodes_at(id_from_halves(grid, h))) fn(y);
    std::size_t a = 0;
    while (a < h.size() && ++h[a] > box.hi[a]) h[a] = box.lo[a], ++a;
    if (a == h.size()) return;
  }
}

void complete_side(const CosheafGraph& X, const CosheafGraph& Y, std::size_t n, std::vector<NodeIndex>& map) {
  for (std::size_t i = 0; i < X.node_count(); ++i) {
    if (map[i] != kNoNode) continue;
    const auto x = static_cast<NodeIndex>(i);
    NodeIndex best = kNoNode;
    for_each_in_box(Y, X.cell(x), n, [&](NodeIndex y) {
      const bool same = Y.cell_id(y) == X.cell_id(x);
      const bool best_same = best != kNoNode && Y.cell_id(best) == X.cell_id(x);
      if (best == kNoNode || (same && !best_same) || (same == best_same && y < best)) best = y;
    });
    map[i] = best;
  }
}

std::optional<std::vector<NodeIndex>> random_side(const CosheafGraph& X, const CosheafGraph& Y, std::size_t n,
                                                  std::mt19937_64& rng) {
  std::vector<NodeIndex> out(X.node_count(), kNoNode);
  std::vector<NodeIndex> cand;
  for (std::size_t i = 0; i < X.node_count(); ++i) {
    cand.clear();
    for_each_in_box(Y, X.cell(static_cast<NodeIndex>(i)), n, [&](NodeIndex y) { cand.push_back(y); });
    if (cand.empty()) return std::nullopt;
    out[i] = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
  }
  return out;
}

}  // namespace

void complete_assignment(const CosheafGraph& F, const CosheafGraph& G, Assignment& a) {
  complete_side(F, G, a.n, a.phi);
  complete_side(G, F, a.n, a.psi);
}

std::optional<Assignment> random_assignment(const CosheafGraph& F, const CosheafGraph& G, std::size_t n,
                                            std::mt19937_64& rng) {
  auto phi = random_side(F, G, n, rng);
  if (!phi) return std::nullopt;
  auto psi = random_side(G, F, n, rng);
  if (!psi) return std::nullopt;
  return Assignment{n, std::move(*phi), std::move(*psi)};
}

std::size_t min_feasible_n(const CosheafGraph& F, const CosheafGraph& G) {
  for (std::size_t n = 0;; ++n) {
    Assignment a{n, std::vector<NodeIndex>(F.node_count(), kNoNode), std::vector<NodeIndex>(G.node_count(), kNoNode)};
    complete_assignment(F, G, a);
    if (validate_assignment(F, G, a).empty()) return n;
    if (n > 4 * static_cast<std::size_t>(F.grid().L) + 4) throw std::logic_error("min_feasible_n: an input is empty");
  }
}

Assignment identity_assignment(const CosheafGraph& F) {
  Assignment a{0, {}, {}};
  for (std::size_t i = 0; i < F.node_count(); ++i) {
    a.phi.push_back(static_cast<NodeIndex>(i));
    a.psi.push_back(static_cast<NodeIndex>(i));
  }
  return a;
}

GeometricGraph random_graph(std::mt19937_64& rng, int d, int L, std::size_t vertices, std::size_t edges) {
  GeometricGraph g;
  g.d = d;
  std::uniform_int_distribution<int> coord(-4 * L + 1, 4 * L - 1);
  for (std::size_t i = 0; i < vertices; ++i) {
    std::vector<double> f;
    for (int a = 0; a < d; ++a) f.push_back(coord(rng) / 4.0);
    g.vertices.push_back({"v" + std::to_string(i), std::move(f)});
  }
  if (vertices >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, vertices - 1);
    for (std::size_t e = 0; e < edges; ++e) {
      std::size_t u = pick(rng), v = pick(rng);
      if (u == v) continue;
      g.edges.emplace_back(g.vertices[u].id, g.vertices[v].id);
    }
  }
  return g;
}

Traced random_tiny(std::mt19937_64& rng, const GridSpec& grid, std::size_t max_nodes) {
  std::uniform_int_distribution<std::size_t> nv(1, 3), ne(0, 2);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    // Keep values near the middle of the box so slices differ across centers.
    const int span = std::max(1, grid.L - 1);
    Traced t = trace_ingest(random_graph(rng, grid.d, span, nv(rng), ne(rng)), grid);
    if (t.F.node_count() <= max_nodes) return t;
  }
  throw std::logic_error("random_tiny: no instance under the node cap");
}

namespace {

std::vector<NodeIndex> traced_side(const Traced& X, const Traced& Y, std::size_t n) {
  std::vector<std::vector<NodeIndex>> by_edge(Y.g.edges.size());
  for (std::size_t y = 0; y < Y.F.node_count(); ++y)
    for (std::size_t e : Y.trace.edges[y]) by_edge[e].push_back(static_cast<NodeIndex>(y));
  std::vector<NodeIndex> out(X.F.node_count(), kNoNode);
  for (std::size_t i = 0; i < X.F.node_count(); ++i) {
    const auto x = static_cast<NodeIndex>(i);
    if (X.trace.edges[i].empty()) continue;
    const CellBox box = star_box(X.F.grid(), X.F.cell(x), n);
    NodeIndex best = kNoNode;
    for (NodeIndex y : by_edge[X.trace.edges[i].front()]) {
      if (!box.contains_halves(Y.F.halves(y))) continue;
      if (best == kNoNode || (Y.F.cell_id(y) == X.F.cell_id(x) && Y.F.cell_id(best) != X.F.cell_id(x))) best = y;
    }
    out[i] = best;
  }
  return out;
}

}  // namespace

Assignment traced_assignment(const Traced& F, const Traced& G, std::size_t n) {
  Assignment a{n, traced_side(F, G, n), traced_side(G, F, n)};
  complete_assignment(F.F, G.F, a);
  return a;
}

GeometricGraph jitter(const GeometricGraph& g, double eps, int L, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-eps, eps);
  GeometricGraph out = g;
  for (auto& v : out.vertices)
    for (auto& x : v.f) x = std::round(std::clamp(x + d(rng), -L + 0.001, L - 0.001) * 1000.0) / 1000.0;
  return out;
}

GeometricGraph random_chain_graph(std::mt19937_64& rng, int L, std::size_t size) {
  // Short chains of nearby values: many components per cell, few crossings per edge.
  GeometricGraph g;
  g.d = 1;
  std::uniform_real_distribution<double> start(-L + 0.5, L - 0.5);
  std::uniform_real_distribution<double> step(-0.4, 0.4);
  const std::size_t chain = 8;
  std::size_t idx = 0;
  while (g.vertices.size() + g.edges.size() + 2 * chain <= size) {
    double v = start(rng);
    for (std::size_t i = 0; i < chain; ++i) {
      v = std::clamp(v + step(rng), -L + 0.01, L - 0.01);
      // Rounded so exact decimal parsing stays cheap.
      const double r = std::round(v * 1000.0) / 1000.0;
      g.vertices.push_back({"v" + std::to_string(idx), {r}});
      if (i > 0) g.edges.emplace_back("v" + std::to_string(idx - 1), "v" + std::to_string(idx));
      ++idx;
    }
  }
  return g;
}

}  // namespace fixtures
