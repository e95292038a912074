#include "mapperloss/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mapperloss/disjoint_set.hpp"
#include "mapperloss/exact.hpp"

namespace mapperloss {

void GeometricGraph::validate() const {
  if (d < 1) throw std::invalid_argument("graph: d must be >= 1");
  std::unordered_set<std::string> ids;
  for (const auto& v : vertices) {
    if (!ids.insert(v.id).second) throw std::invalid_argument("graph: duplicate vertex id '" + v.id + "'");
    if (static_cast<int>(v.f.size()) != d)
      throw std::invalid_argument("graph: vertex '" + v.id + "' has " + std::to_string(v.f.size()) +
                                  " coordinates, expected " + std::to_string(d));
    for (double x : v.f)
      if (!std::isfinite(x)) throw std::invalid_argument("graph: vertex '" + v.id + "' has a non-finite value");
  }
  for (const auto& [a, b] : edges) {
    if (!ids.count(a)) throw std::invalid_argument("graph: edge names unknown vertex '" + a + "'");
    if (!ids.count(b)) throw std::invalid_argument("graph: edge names unknown vertex '" + b + "'");
    if (a == b) throw std::invalid_argument("graph: self-loop at vertex '" + a + "'");
  }
}

GridSpec fit_grid(std::span<const GeometricGraph> graphs, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("fit_grid: delta must be positive");
  const Rational dq = exact_decimal(delta);
  int d = 0;
  bool any = false;
  Integer L = 1;
  for (const auto& g : graphs) {
    g.validate();
    if (d != 0 && g.d != d) throw std::invalid_argument("fit_grid: graphs have different dimensions");
    d = g.d;
    for (const auto& v : g.vertices) {
      any = true;
      for (double x : v.f) {
        Rational u = abs(exact_decimal(x) / dq);
        Integer need = floor_of(u) + 1;
        if (need > L) L = need;
      }
    }
  }
  if (!any) throw std::invalid_argument("fit_grid: no vertices");
  if (L > 1 << 22) throw std::invalid_argument("fit_grid: delta too small for the data range");
  GridSpec grid{d, delta, static_cast<int>(L)};
  grid.validate();
  return grid;
}

namespace {

struct Piece {
  CellId carrier;
  std::int32_t a = -1;  // endpoints, for segments
  std::int32_t b = -1;
  std::int32_t edge = -1;  // input edge, for pieces inside one
};

int half_of_point(const Rational& u, int L) {
  Integer f = floor_of(u);
  int h = 2 * (static_cast<int>(f) + L);
  return is_integer(u) ? h : h + 1;
}

}  // namespace

CosheafGraph build_cosheaf(const GeometricGraph& g, const GridSpec& grid, IngestTrace* trace) {
  g.validate();
  grid.validate();
  if (g.d != grid.d) throw std::invalid_argument("graph dimension does not match the grid");
  const int d = grid.d;
  const Rational dq = exact_decimal(grid.delta);

  std::unordered_map<std::string, std::int32_t> vindex;
  std::vector<std::vector<Rational>> u(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    vindex.emplace(v.id, static_cast<std::int32_t>(i));
    u[i].reserve(d);
    for (double x : v.f) {
      Rational q = exact_decimal(x) / dq;
      if (q > grid.L || q < -grid.L)
        throw std::invalid_argument("vertex '" + v.id + "' has a value outside the grid box");
      u[i].push_back(std::move(q));
    }
  }

  std::vector<Piece> pieces;
  std::vector<int> h(d);
  auto point_carrier = [&](const std::vector<Rational>& p) {
    for (int a = 0; a < d; ++a) h[a] = half_of_point(p[a], grid.L);
    return id_from_halves(grid, h);
  };
  for (const auto& p : u) pieces.push_back({point_carrier(p)});

  std::vector<Rational> ts;
  std::vector<Rational> pt(d);
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& [ia, ib] = g.edges[ei];
    const auto edge_tag = static_cast<std::int32_t>(ei);
    const auto A = vindex.at(ia);
    const auto B = vindex.at(ib);
    const auto& P = u[A];
    const auto& Q = u[B];
    ts.clear();
    for (int a = 0; a < d; ++a) {
      if (P[a] == Q[a]) continue;
      const Rational& lo = P[a] < Q[a] ? P[a] : Q[a];
      const Rational& hi = P[a] < Q[a] ? Q[a] : P[a];
      const Rational diff = Q[a] - P[a];
      for (Integer l = floor_of(lo) + 1; l < hi; ++l) ts.push_back((Rational(l) - P[a]) / diff);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    // Segment carriers come from the midpoint between consecutive breaks.
    std::int32_t prev = A;
    Rational t_prev = 0;
    auto emit_segment = [&](const Rational& t0, const Rational& t1, std::int32_t end) {
      const Rational mid = (t0 + t1) / 2;
      for (int a = 0; a < d; ++a) pt[a] = P[a] + mid * (Q[a] - P[a]);
      pieces.push_back({point_carrier(pt), prev, end, edge_tag});
    };
    for (const auto& t : ts) {
      const auto idx = static_cast<std::int32_t>(pieces.size() + 1);
      emit_segment(t_prev, t, idx);
      for (int a = 0; a < d; ++a) pt[a] = P[a] + t * (Q[a] - P[a]);
      pieces.push_back({point_carrier(pt), -1, -1, edge_tag});
      prev = idx;
      t_prev = t;
    }
    emit_segment(t_prev, Rational(1), B);
  }

  // Bucket each piece into every face of its carrier: piece p lies over U_sigma iff sigma <= carrier(p).
  const std::size_t ncell = grid.cell_count();
  std::vector<std::uint32_t> off(ncell + 1, 0);
  std::vector<std::vector<int>> opts(d);
  auto for_each_face = [&](CellId c, auto&& fn) {
    cell_halves(grid, c, h);
    for (int a = 0; a < d; ++a) {
      if (h[a] % 2 == 1)
        opts[a] = {h[a] - 1, h[a], h[a] + 1};
      else
        opts[a] = {h[a]};
    }
    std::vector<std::size_t> pos(d, 0);
    std::vector<int> g2(d);
    while (true) {
      for (int a = 0; a < d; ++a) g2[a] = opts[a][pos[a]];
      fn(id_from_halves(grid, g2));
      int a = 0;
      while (a < d && ++pos[a] == opts[a].size()) pos[a++] = 0;
      if (a == d) return;
    }
  };
  for (const auto& p : pieces) for_each_face(p.carrier, [&](CellId f) { ++off[f + 1]; });
  for (std::size_t c = 0; c < ncell; ++c) off[c + 1] += off[c];
  std::vector<std::int32_t> bucket(off[ncell]);
  {
    std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for_each_face(pieces[i].carrier, [&](CellId f) { bucket[fill[f]++] = static_cast<std::int32_t>(i); });
  }

  std::vector<CellId> cells_used;
  for (CellId c = 0; c < ncell; ++c)
    if (off[c + 1] > off[c]) cells_used.push_back(c);
  std::vector<Cell> cell_objs;
  cell_objs.reserve(cells_used.size());
  for (CellId c : cells_used) cell_objs.push_back(cell_from_id(grid, c));
  std::vector<std::size_t> order(cells_used.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cell_objs[x] < cell_objs[y]; });

  // Per cell: components of the bucket under shared-endpoint adjacency.
  std::vector<CosheafNode> nodes;
  std::vector<std::int32_t> slot_node(bucket.size(), -1);
  std::vector<std::int32_t> node_rep;
  std::vector<CellId> node_cell;
  std::vector<std::int32_t> local(pieces.size(), -1);
  DisjointSet dsu;
  for (std::size_t oi : order) {
    const CellId c = cells_used[oi];
    const std::uint32_t b0 = off[c];
    const std::uint32_t b1 = off[c + 1];
    const std::size_t m = b1 - b0;
    for (std::uint32_t s = b0; s < b1; ++s) local[bucket[s]] = static_cast<std::int32_t>(s - b0);
    dsu.reset(m);
    for (std::uint32_t s = b0; s < b1; ++s) {
      const Piece& p = pieces[bucket[s]];
      if (p.a < 0) continue;
      if (local[p.a] >= 0) dsu.unite(s - b0, static_cast<std::size_t>(local[p.a]));
      if (local[p.b] >= 0) dsu.unite(s - b0, static_cast<std::size_t>(local[p.b]));
    }
    std::vector<std::int32_t> root_node(m, -1);
    int ordinal = 0;
    for (std::uint32_t s = b0; s < b1; ++s) {
      const std::size_t r = dsu.find(s - b0);
      if (root_node[r] < 0) {
        root_node[r] = static_cast<std::int32_t>(nodes.size());
        nodes.push_back({cell_objs[oi].to_string() + "#" + std::to_string(ordinal++), cell_objs[oi]});
        node_rep.push_back(bucket[s]);
        node_cell.push_back(c);
      }
      slot_node[s] = root_node[r];
    }
    for (std::uint32_t s = b0; s < b1; ++s) local[bucket[s]] = -1;
  }

  if (trace) {
    trace->vertices.assign(nodes.size(), {});
    trace->edges.assign(nodes.size(), {});
    for (std::size_t s = 0; s < bucket.size(); ++s) {
      const auto p = static_cast<std::size_t>(bucket[s]);
      const auto x = static_cast<std::size_t>(slot_node[s]);
      if (p < g.vertices.size()) trace->vertices[x].push_back(g.vertices[p].id);
      if (pieces[p].edge >= 0) trace->edges[x].push_back(static_cast<std::size_t>(pieces[p].edge));
    }
    for (auto& e : trace->edges) e.erase(std::unique(e.begin(), e.end()), e.end());
  }

  // Face links follow the representative piece into each codimension-1 face.
  std::vector<std::pair<NodeIndex, NodeIndex>> links;
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    cell_halves(grid, node_cell[x], h);
    for (int a = 0; a < d; ++a) {
      if (h[a] % 2 == 0) continue;
      for (int delta : {-1, 1}) {
        std::vector<int> fh = h;
        fh[a] += delta;
        const CellId f = id_from_halves(grid, fh);
        auto first = bucket.begin() + off[f];
        auto last = bucket.begin() + off[f + 1];
        auto it = std::lower_bound(first, last, node_rep[x]);
        if (it == last || *it != node_rep[x]) throw std::logic_error("ingest: representative missing from face");
        links.emplace_back(static_cast<NodeIndex>(x), slot_node[static_cast<std::size_t>(it - bucket.begin())]);
      }
    }
  }
  return CosheafGraph(grid, std::move(nodes), std::move(links));
}

}  // namespace mapperloss
