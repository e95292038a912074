#include "mapperloss/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mapperloss/disjoint_set.hpp"
#include "mapperloss/exact.hpp"

namespace mapperloss {

void require_tiny(const CosheafGraph& F, const CosheafGraph& G, const OracleCaps& caps) {
  if (!(F.grid() == G.grid())) throw std::invalid_argument("cosheaves live on different grids");
  if (F.grid().L > caps.max_L)
    throw CapExceeded("grid L = " + std::to_string(F.grid().L) + " exceeds the cap " + std::to_string(caps.max_L));
  if (F.node_count() > caps.max_nodes || G.node_count() > caps.max_nodes)
    throw CapExceeded("instance has " + std::to_string(F.node_count()) + " + " + std::to_string(G.node_count()) +
                      " nodes, cap is " + std::to_string(caps.max_nodes) + " per side");
}

// ---------------------------------------------------------------- geometric pi0

namespace {

// The cell containing a point, read off coordinate by coordinate.
CellId point_cell(const GridSpec& grid, const std::vector<Rational>& p, std::vector<int>& scratch) {
  for (int a = 0; a < grid.d; ++a) {
    const Integer fl = floor_of(p[a]);
    const int l = static_cast<int>(fl);
    scratch[a] = is_integer(p[a]) ? 2 * (l + grid.L) : 2 * (l + grid.L) + 1;
  }
  return id_from_halves(grid, scratch);
}

std::string show_rational(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

Pi0Result geometric_pi0(const GeometricGraph& g, const GridSpec& grid, const OpenCellSet& S) {
  g.validate();
  if (!(S.grid() == grid)) throw std::invalid_argument("open set lives on a different grid");
  if (g.d != grid.d) throw std::invalid_argument("graph dimension does not match the grid");
  const Rational dq = exact_decimal(grid.delta);
  const int d = grid.d;
  std::vector<int> scratch(d);

  std::unordered_map<std::string, std::size_t> vidx;
  std::vector<std::vector<Rational>> val(g.vertices.size());
  std::vector<bool> vin(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    vidx[g.vertices[i].id] = i;
    for (double x : g.vertices[i].f) val[i].push_back(exact_decimal(x) / dq);
    for (const auto& q : val[i])
      if (q > grid.L || q < -grid.L) throw std::invalid_argument("vertex '" + g.vertices[i].id + "' outside the box");
    vin[i] = S.contains_id(point_cell(grid, val[i], scratch));
  }

  // Elements: vertices first, then runs of edge parameters that stay inside |S|.
  DisjointSet dsu(g.vertices.size());
  std::vector<std::string> names;
  for (const auto& v : g.vertices) names.push_back(v.id);
  std::vector<bool> alive(vin.begin(), vin.end());

  for (const auto& [ia, ib] : g.edges) {
    const std::size_t A = vidx.at(ia), B = vidx.at(ib);
    const auto& P = val[A];
    const auto& Q = val[B];
    std::vector<Rational> cuts{Rational(0), Rational(1)};
    for (int a = 0; a < d; ++a) {
      if (P[a] == Q[a]) continue;
      Integer lo = floor_of(P[a] < Q[a] ? P[a] : Q[a]);
      Integer hi = floor_of(P[a] < Q[a] ? Q[a] : P[a]) + 1;
      for (Integer l = lo; l <= hi; ++l) {
        Rational t = (Rational(l) - P[a]) / (Q[a] - P[a]);
        if (t > 0 && t < 1) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto inside_at = [&](const Rational& t) {
      std::vector<Rational> p(d);
      for (int a = 0; a < d; ++a) p[a] = P[a] + t * (Q[a] - P[a]);
      return S.contains_id(point_cell(grid, p, scratch));
    };
    // Walk cut, open piece, cut, ..., cut; consecutive members form a run.
    std::size_t run = static_cast<std::size_t>(-1);
    auto extend = [&](bool inside, const Rational& t) {
      if (!inside) {
        run = static_cast<std::size_t>(-1);
        return;
      }
      if (run == static_cast<std::size_t>(-1)) {
        run = dsu.add();
        names.push_back(ia + "-" + ib + "@" + show_rational(t));
        alive.push_back(true);
      }
    };
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const bool in_pt = i == 0 ? vin[A] : i + 1 == cuts.size() ? vin[B] : inside_at(cuts[i]);
      extend(in_pt, cuts[i]);
      if (i == 0 && in_pt) dsu.unite(A, run);
      if (i + 1 == cuts.size()) {
        if (in_pt) dsu.unite(B, run);
        break;
      }
      const Rational mid = (cuts[i] + cuts[i + 1]) / 2;
      extend(inside_at(mid), mid);
    }
  }

  Pi0Result out;
  std::vector<bool> seen(dsu.size(), false);
  for (std::size_t i = 0; i < dsu.size(); ++i) {
    if (!alive[i]) continue;
    const std::size_t r = dsu.find(i);
    if (seen[r]) continue;
    seen[r] = true;
    ++out.count;
    out.representatives.push_back(names[i]);
  }
  return out;
}

// ---------------------------------------------------------------- opens

std::vector<OpenCellSet> enumerate_opens(const GridSpec& grid, std::size_t cap) {
  grid.validate();
  std::vector<Cell> cells;
  for (CellId id = 0; id < grid.cell_count(); ++id) cells.push_back(cell_from_id(grid, id));
  // Higher dimensions first, so every coface is decided before its faces.
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.dim() > b.dim(); });
  std::vector<std::vector<CellId>> up(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (const Cell& t : cofaces(grid, cells[i])) up[i].push_back(cell_id(grid, t));

  std::vector<OpenCellSet> out;
  CellSet cur(grid);
  std::vector<CellId> ids(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) ids[i] = cell_id(grid, cells[i]);

  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == cells.size()) {
      if (out.size() >= cap) throw CapExceeded("more than " + std::to_string(cap) + " open sets");
      out.push_back(OpenCellSet::from(cur));
      return;
    }
    go(i + 1);
    if (std::all_of(up[i].begin(), up[i].end(), [&](CellId t) { return cur.contains_id(t); })) {
      CellSet saved = cur;
      cur.insert_id(ids[i]);
      go(i + 1);
      cur = std::move(saved);
    }
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------- labelings

namespace {

// Canonical node order: (dim, cell order, index).
std::vector<int> node_ranks(const CosheafGraph& X) {
  std::vector<NodeIndex> order(X.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    if (X.cell(a).dim() != X.cell(b).dim()) return X.cell(a).dim() < X.cell(b).dim();
    if (X.cell(a) != X.cell(b)) return X.cell(a) < X.cell(b);
    return a < b;
  });
  std::vector<int> rank(X.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  return rank;
}

struct Lab {
  std::vector<int> label;     // -1 outside
  std::vector<NodeIndex> rep;  // per component, smallest rank
  std::size_t count = 0;
};

template <class In>
Lab label_on(const CosheafGraph& X, const std::vector<int>& rank, In&& in) {
  const std::size_t n = X.node_count();
  DisjointSet dsu(n);
  std::vector<bool> mem(n);
  for (std::size_t i = 0; i < n; ++i) mem[i] = in(static_cast<NodeIndex>(i));
  for (const auto& [c, p] : X.links())
    if (mem[c] && mem[p]) dsu.unite(c, p);
  Lab L;
  L.label.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!mem[i]) continue;
    const std::size_t r = dsu.find(i);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<int>(L.count++);
      L.rep.push_back(static_cast<NodeIndex>(i));
    }
    const int l = root_label[r];
    L.label[i] = l;
    if (rank[i] < rank[L.rep[l]]) L.rep[l] = static_cast<NodeIndex>(i);
  }
  return L;
}

Lab label_box(const CosheafGraph& X, const std::vector<int>& rank, const Cell& center, std::size_t r) {
  const CellBox box = star_box(X.grid(), center, r);
  return label_on(X, rank, [&](NodeIndex x) { return box.contains_halves(X.halves(x)); });
}

Lab label_set(const CosheafGraph& X, const std::vector<int>& rank, const CellSet& s) {
  return label_on(X, rank, [&](NodeIndex x) { return s.contains_id(X.cell_id(x)); });
}

// Labelings of X over S^0, S^1, ... until thickening stops changing.
struct Tower {
  std::vector<Lab> labs;
  const Lab& at(std::size_t r) const { return labs[std::min(r, labs.size() - 1)]; }
};

ExtendedNat tower_distance(const Tower& t, std::size_t m, NodeIndex u, NodeIndex v) {
  if (t.at(m).label[u] < 0 || t.at(m).label[v] < 0) throw std::logic_error("oracle: element outside its open set");
  for (std::size_t r = m;; ++r) {
    if (t.at(r).label[u] == t.at(r).label[v]) return r - m;
    if (r + 1 >= t.labs.size()) return ExtendedNat::infinite();
  }
}

ExtendedNat half_up(ExtendedNat d) {
  if (d.is_infinite()) return d;
  return (d.value() + 1) / 2;
}

bool basis_parallelograms_commute(const CosheafGraph& X, const CosheafGraph& Y, const std::vector<NodeIndex>& map,
                                  std::size_t level, const std::vector<int>& rankY) {
  const GridSpec& grid = X.grid();
  for (CellId sid : X.occupied_cells()) {
    const Cell sigma = cell_from_id(grid, sid);
    const Lab lab = label_box(Y, rankY, sigma, level);
    for (const Cell& tau : cofaces(grid, sigma)) {
      for (NodeIndex x : X.nodes_at(tau)) {
        const NodeIndex y = X.face_image(x, sid);
        if (y == kNoNode) throw std::invalid_argument("oracle: cosheaf lacks a face image");
        if (lab.label[map[x]] < 0 || lab.label[map[y]] < 0) throw std::logic_error("oracle: radius constraint broken");
        if (lab.label[map[x]] != lab.label[map[y]]) return false;
      }
    }
  }
  return true;
}

// Bit-packed copy of a cell set for fast inclusion tests.
std::vector<std::uint64_t> pack(const CellSet& s) {
  std::vector<std::uint64_t> w((s.grid().cell_count() + 63) / 64, 0);
  for (CellId id : s.ids()) w[id / 64] |= std::uint64_t{1} << (id % 64);
  return w;
}

bool packed_subset(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

}  // namespace

FullLossResult full_loss(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a, const OracleCaps& caps) {
  require_tiny(F, G, caps);
  if (!validate_assignment(F, G, a).empty()) throw std::invalid_argument("full_loss: invalid assignment");
  const GridSpec& grid = F.grid();
  const std::vector<int> rankF = node_ranks(F), rankG = node_ranks(G);

  FullLossResult res;
  const std::size_t kmax = 2 * static_cast<std::size_t>(grid.L);
  std::size_t kp = 0;
  while (!(basis_parallelograms_commute(F, G, a.phi, a.n + kp, rankG) &&
           basis_parallelograms_commute(G, F, a.psi, a.n + kp, rankF))) {
    if (++kp > kmax) {
      res.loss = ExtendedNat::infinite();
      res.level = a.n;
      return res;
    }
  }
  const std::size_t N = a.n + kp;
  res.promoted_by = kp;
  res.level = N;

  const std::vector<OpenCellSet> opens = enumerate_opens(grid, caps.max_opens);
  std::vector<Tower> TF(opens.size()), TG(opens.size());
  std::vector<std::vector<std::uint64_t>> packed(opens.size());
  for (std::size_t i = 0; i < opens.size(); ++i) {
    packed[i] = pack(opens[i].cells());
    OpenCellSet cur = opens[i];
    while (true) {
      TF[i].labs.push_back(label_set(F, rankF, cur.cells()));
      TG[i].labs.push_back(label_set(G, rankG, cur.cells()));
      OpenCellSet next = thicken(cur, 1);
      if (next == cur) break;
      cur = std::move(next);
    }
  }

  // phi_S(alpha) is the component of phi(rep(alpha)) in G(S^N); it is well
  // defined when every node of alpha lands in that same component.
  res.extension_consistent = true;
  for (std::size_t i = 0; i < opens.size() && res.extension_consistent; ++i) {
    auto consistent = [&](const Tower& src, const Tower& dst, const std::vector<NodeIndex>& map) {
      const Lab& s = src.at(0);
      const Lab& t = dst.at(N);
      for (std::size_t x = 0; x < s.label.size(); ++x) {
        if (s.label[x] < 0) continue;
        const int want = t.label[map[s.rep[s.label[x]]]];
        if (want < 0 || t.label[map[x]] != want) return false;
      }
      return true;
    };
    res.extension_consistent = consistent(TF[i], TG[i], a.phi) && consistent(TG[i], TF[i], a.psi);
  }

  ExtendedNat loss = 0;
  auto parallelogram = [&](const Lab& s0, const Lab& t0, const Tower& targetT, const std::vector<NodeIndex>& map) {
    for (std::size_t c = 0; c < s0.count; ++c) {
      const NodeIndex r = s0.rep[c];
      const NodeIndex r2 = t0.rep[t0.label[r]];
      loss = max(loss, tower_distance(targetT, N, map[r2], map[r]));
    }
  };
  auto triangle = [&](const Tower& self, const Tower& other, const std::vector<NodeIndex>& map,
                      const std::vector<NodeIndex>& back) {
    const Lab& s0 = self.at(0);
    const Lab& oN = other.at(N);
    for (std::size_t c = 0; c < s0.count; ++c) {
      const NodeIndex r = s0.rep[c];
      const NodeIndex mid = oN.rep[oN.label[map[r]]];
      loss = max(loss, half_up(tower_distance(self, 2 * N, r, back[mid])));
    }
  };
  for (std::size_t i = 0; i < opens.size(); ++i) {
    triangle(TF[i], TG[i], a.phi, a.psi);
    triangle(TG[i], TF[i], a.psi, a.phi);
    for (std::size_t j = 0; j < opens.size(); ++j) {
      if (i == j || !packed_subset(packed[i], packed[j])) continue;
      parallelogram(TF[i].at(0), TF[j].at(0), TG[j], a.phi);
      parallelogram(TG[i].at(0), TG[j].at(0), TF[j], a.psi);
    }
  }
  // Back to units of level n: a nonzero loss at level N is that much plus kp at
  // level n, and minimality of kp means some basis diagram already needs kp.
  res.loss = ExtendedNat(kp) + loss;
  return res;
}

// ---------------------------------------------------------------- exhaustive d_I

namespace {

// Every natural basis map X => Y^n, one pointer per node naming the
// representative of the chosen component.
std::vector<std::vector<NodeIndex>> natural_maps(const CosheafGraph& X, const CosheafGraph& Y, std::size_t n,
                                                 const std::vector<int>& rankY, std::size_t cap) {
  const std::size_t nx = X.node_count();
  std::vector<Lab> labs(nx);
  std::unordered_map<CellId, std::size_t> by_cell;
  for (std::size_t i = 0; i < nx; ++i) {
    auto [it, fresh] = by_cell.emplace(X.cell_id(static_cast<NodeIndex>(i)), i);
    labs[i] = fresh ? label_box(Y, rankY, X.cell(static_cast<NodeIndex>(i)), n) : labs[it->second];
  }
  std::vector<std::vector<NodeIndex>> up(nx);
  for (std::size_t z = 0; z < nx; ++z)
    for (NodeIndex p : X.face_links(static_cast<NodeIndex>(z))) up[p].push_back(static_cast<NodeIndex>(z));
  std::vector<NodeIndex> order(nx);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return X.cell(a).dim() > X.cell(b).dim(); });

  std::vector<std::vector<NodeIndex>> out;
  std::vector<NodeIndex> map(nx, kNoNode);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == nx) {
      if (out.size() >= cap) throw CapExceeded("more than " + std::to_string(cap) + " natural maps");
      out.push_back(map);
      return;
    }
    const NodeIndex x = order[i];
    const Lab& lab = labs[x];
    // Naturality against every coface element already placed pins the component.
    int forced = -1;
    for (NodeIndex z : up[x]) {
      const int c = lab.label[map[z]];
      if (c < 0) throw std::logic_error("oracle: coface image outside the face slice");
      if (forced >= 0 && c != forced) return;
      forced = c;
    }
    for (std::size_t c = 0; c < lab.count; ++c) {
      if (forced >= 0 && static_cast<int>(c) != forced) continue;
      map[x] = lab.rep[c];
      go(i + 1);
    }
    map[x] = kNoNode;
  };
  go(0);
  return out;
}

bool triangles_commute(const CosheafGraph& X, const std::vector<NodeIndex>& map, const std::vector<NodeIndex>& back,
                       const std::unordered_map<CellId, Lab>& wide) {
  for (std::size_t i = 0; i < X.node_count(); ++i) {
    const Lab& lab = wide.at(X.cell_id(static_cast<NodeIndex>(i)));
    const NodeIndex round = back[map[i]];
    if (lab.label[i] < 0 || lab.label[round] < 0) throw std::logic_error("oracle: triangle leaves its slice");
    if (lab.label[i] != lab.label[round]) return false;
  }
  return true;
}

}  // namespace

ExtendedNat exhaustive_interleaving(const CosheafGraph& F, const CosheafGraph& G, std::size_t n_max,
                                    const OracleCaps& caps) {
  require_tiny(F, G, caps);
  const std::vector<int> rankF = node_ranks(F), rankG = node_ranks(G);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto phis = natural_maps(F, G, n, rankG, caps.max_candidates);
    const auto psis = natural_maps(G, F, n, rankF, caps.max_candidates);
    if (phis.empty() || psis.empty()) continue;
    if (phis.size() * psis.size() > caps.max_candidates)
      throw CapExceeded(std::to_string(phis.size()) + " x " + std::to_string(psis.size()) +
                        " candidate pairs at n = " + std::to_string(n));
    std::unordered_map<CellId, Lab> wideF, wideG;
    for (CellId c : F.occupied_cells()) wideF.emplace(c, label_box(F, rankF, cell_from_id(F.grid(), c), 2 * n));
    for (CellId c : G.occupied_cells()) wideG.emplace(c, label_box(G, rankG, cell_from_id(G.grid(), c), 2 * n));
    for (const auto& phi : phis)
      for (const auto& psi : psis)
        if (triangles_commute(F, phi, psi, wideF) && triangles_commute(G, psi, phi, wideG)) return n;
  }
  return ExtendedNat::infinite();
}

}  // namespace mapperloss
