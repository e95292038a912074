#include "mapperloss/assignment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mapperloss {

std::string_view to_string(DiagramKind kind) {
  switch (kind) {
    case DiagramKind::ParallelogramLeft: return "parallelogram_left";
    case DiagramKind::ParallelogramRight: return "parallelogram_right";
    case DiagramKind::TriangleDown: return "triangle_down";
    case DiagramKind::TriangleUp: return "triangle_up";
  }
  return "?";
}

bool witness_less(const Witness& a, const Witness& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.sigma != b.sigma) return a.sigma < b.sigma;
  if (a.tau != b.tau) return a.tau < b.tau;
  return a.element < b.element;
}

namespace {

std::string node_ref(const CosheafGraph& X, NodeIndex x) { return "'" + X.id(x) + "'@" + X.cell(x).to_string(); }

void check_side(const CosheafGraph& X, const CosheafGraph& Y, const std::vector<NodeIndex>& map, std::size_t n,
                const char* name, std::vector<std::string>& out) {
  if (map.size() != X.node_count()) {
    out.push_back("totality: " + std::string(name) + " has " + std::to_string(map.size()) + " entries for " +
                  std::to_string(X.node_count()) + " nodes");
    return;
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto x = static_cast<NodeIndex>(i);
    const NodeIndex y = map[i];
    if (y == kNoNode) {
      out.push_back("totality: " + std::string(name) + " is undefined on node " + node_ref(X, x));
      continue;
    }
    if (y < 0 || static_cast<std::size_t>(y) >= Y.node_count()) {
      out.push_back("totality: " + std::string(name) + " sends node " + node_ref(X, x) + " to a nonexistent node");
      continue;
    }
    if (!star_box(X.grid(), X.cell(x), n).contains_halves(Y.halves(y)))
      out.push_back("radius: " + std::string(name) + "(" + node_ref(X, x) + ") = " + node_ref(Y, y) +
                    " lies outside the " + std::to_string(n) + "-thickened star of " + X.cell(x).to_string());
  }
}

void require_valid(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a) {
  auto v = validate_assignment(F, G, a);
  if (v.empty()) return;
  std::string msg = "invalid assignment:";
  for (const auto& s : v) msg += "\n  " + s;
  throw std::invalid_argument(msg);
}

// Collects witnesses, keeping at most `cap` per kind (0 = all).
struct Sink {
  std::size_t cap = 0;
  bool stop_at_first = false;
  bool failed = false;
  std::array<std::size_t, 4> per_kind{};
  std::vector<Witness> witnesses;

  void add(const CosheafGraph& X, const CosheafGraph& Y, DiagramKind kind, const Cell& sigma,
           const std::optional<Cell>& tau, NodeIndex element, NodeIndex lhs, NodeIndex rhs,
           bool lhs_in_x) {
    failed = true;
    if (stop_at_first) return;
    auto& c = per_kind[static_cast<std::size_t>(kind)];
    if (cap != 0 && c >= cap) return;
    ++c;
    const CosheafGraph& L = lhs_in_x ? X : Y;
    witnesses.push_back({kind, sigma, tau, element, lhs, rhs, X.id(element), L.id(lhs), L.id(rhs)});
  }
  bool done() const { return stop_at_first && failed; }
};

std::int32_t member_label(const SliceLabeling& sl, NodeIndex x) {
  const std::int32_t l = sl.label[x];
  if (l < 0) throw std::logic_error("assignment target outside the slice; radius constraint broken");
  return l;
}

// Elements over tau pushed down to sigma then mapped, versus mapped directly;
// both land in `target`, a slice of Y around sigma.
void chase_parallelogram(const CosheafGraph& X, const CosheafGraph& Y, const std::vector<NodeIndex>& map,
                         const SliceLabeling& target, const Cell& sigma, std::span<const int> sigma_halves,
                         const Cell& tau, CellId tau_id, DiagramKind kind, Sink& sink) {
  for (NodeIndex x : X.nodes_at(tau_id)) {
    const NodeIndex down = X.face_image(x, sigma_halves);
    if (down == kNoNode) throw std::invalid_argument("cosheaf has no face image for node " + node_ref(X, x));
    const NodeIndex lhs = map[down];
    const NodeIndex rhs = map[x];
    if (member_label(target, lhs) != member_label(target, rhs)) {
      sink.add(X, Y, kind, sigma, tau, x, lhs, rhs, false);
      if (sink.done()) return;
    }
  }
}

// x against back(map(x)) inside `target`, a slice of X around sigma at twice the radius.
void chase_triangle(const CosheafGraph& X, const CosheafGraph& Y, const std::vector<NodeIndex>& map,
                    const std::vector<NodeIndex>& back, const SliceLabeling& target, const Cell& sigma, CellId sigma_id,
                    DiagramKind kind, Sink& sink) {
  for (NodeIndex x : X.nodes_at(sigma_id)) {
    const NodeIndex round = back[map[x]];
    if (member_label(target, x) != member_label(target, round)) {
      sink.add(X, Y, kind, sigma, std::nullopt, x, x, round, true);
      if (sink.done()) return;
    }
  }
}

struct CenterPlan {
  Cell sigma;
  CellId id;
  std::vector<int> halves;
  std::vector<std::pair<Cell, CellId>> cofaces;
};

CenterPlan plan_center(const GridSpec& grid, CellId id) {
  CenterPlan p{cell_from_id(grid, id), id, std::vector<int>(grid.d), {}};
  cell_halves(grid, id, p.halves);
  for (Cell& t : cofaces(grid, p.sigma)) {
    CellId tid = cell_id(grid, t);
    p.cofaces.emplace_back(std::move(t), tid);
  }
  return p;
}

void evaluate_center(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a, CellId center,
                     std::size_t k, Sink& sink) {
  const CenterPlan p = plan_center(F.grid(), center);
  const std::size_t r1 = a.n + k;
  const std::size_t r2 = 2 * (a.n + k);
  auto has_star = [&](const CosheafGraph& X) {
    return std::any_of(p.cofaces.begin(), p.cofaces.end(),
                       [&](const auto& t) { return !X.nodes_at(t.second).empty(); });
  };
  if (has_star(F)) {
    const SliceLabeling sG = slice(G, p.sigma, r1);
    for (const auto& [tau, tid] : p.cofaces) {
      chase_parallelogram(F, G, a.phi, sG, p.sigma, p.halves, tau, tid, DiagramKind::ParallelogramLeft, sink);
      if (sink.done()) return;
    }
  }
  if (has_star(G)) {
    const SliceLabeling sF = slice(F, p.sigma, r1);
    for (const auto& [tau, tid] : p.cofaces) {
      chase_parallelogram(G, F, a.psi, sF, p.sigma, p.halves, tau, tid, DiagramKind::ParallelogramRight, sink);
      if (sink.done()) return;
    }
  }
  if (!F.nodes_at(center).empty()) {
    const SliceLabeling tF = slice(F, p.sigma, r2);
    chase_triangle(F, G, a.phi, a.psi, tF, p.sigma, center, DiagramKind::TriangleDown, sink);
    if (sink.done()) return;
  }
  if (!G.nodes_at(center).empty()) {
    const SliceLabeling tG = slice(G, p.sigma, r2);
    chase_triangle(G, F, a.psi, a.phi, tG, p.sigma, center, DiagramKind::TriangleUp, sink);
  }
}

CheckOutcome finish(Sink& sink, std::size_t cap) {
  CheckOutcome out;
  out.passed = !sink.failed;
  out.witnesses = std::move(sink.witnesses);
  std::sort(out.witnesses.begin(), out.witnesses.end(), witness_less);
  if (cap != 0 && out.witnesses.size() > cap) out.witnesses.resize(cap);
  return out;
}

std::vector<CellId> centers_of(const CosheafGraph& F, const CosheafGraph& G) {
  std::vector<Cell> cells;
  for (CellId c : F.occupied_cells()) cells.push_back(cell_from_id(F.grid(), c));
  for (CellId c : G.occupied_cells()) cells.push_back(cell_from_id(G.grid(), c));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<CellId> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back(cell_id(F.grid(), c));
  return out;
}

void require_face_pair(const GridSpec& grid, const Cell& sigma, const Cell& tau) {
  if (!valid_cell(grid, sigma) || !valid_cell(grid, tau)) throw std::invalid_argument("cell outside the grid");
  if (sigma == tau || !is_face(sigma, tau))
    throw std::invalid_argument(sigma.to_string() + " is not a proper face of " + tau.to_string());
}

}  // namespace

std::vector<std::string> validate_assignment(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a) {
  if (!(F.grid() == G.grid())) throw std::invalid_argument("cosheaves live on different grids");
  std::vector<std::string> out;
  check_side(F, G, a.phi, a.n, "phi", out);
  check_side(G, F, a.psi, a.n, "psi", out);
  return out;
}

CheckOutcome check_parallelogram_left(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                      const Cell& sigma, const Cell& tau, std::size_t k) {
  require_valid(F, G, a);
  require_face_pair(F.grid(), sigma, tau);
  Sink sink;
  const SliceLabeling sG = slice(G, sigma, a.n + k);
  std::vector<int> h(F.grid().d);
  cell_halves(F.grid(), cell_id(F.grid(), sigma), h);
  chase_parallelogram(F, G, a.phi, sG, sigma, h, tau, cell_id(F.grid(), tau), DiagramKind::ParallelogramLeft, sink);
  return finish(sink, 0);
}

CheckOutcome check_parallelogram_right(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                       const Cell& sigma, const Cell& tau, std::size_t k) {
  require_valid(F, G, a);
  require_face_pair(F.grid(), sigma, tau);
  Sink sink;
  const SliceLabeling sF = slice(F, sigma, a.n + k);
  std::vector<int> h(F.grid().d);
  cell_halves(F.grid(), cell_id(F.grid(), sigma), h);
  chase_parallelogram(G, F, a.psi, sF, sigma, h, tau, cell_id(F.grid(), tau), DiagramKind::ParallelogramRight, sink);
  return finish(sink, 0);
}

CheckOutcome check_triangle_down(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                                 const Cell& sigma, std::size_t k) {
  require_valid(F, G, a);
  if (!valid_cell(F.grid(), sigma)) throw std::invalid_argument("cell outside the grid");
  Sink sink;
  const SliceLabeling tF = slice(F, sigma, 2 * (a.n + k));
  chase_triangle(F, G, a.phi, a.psi, tF, sigma, cell_id(F.grid(), sigma), DiagramKind::TriangleDown, sink);
  return finish(sink, 0);
}

CheckOutcome check_triangle_up(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a,
                               const Cell& sigma, std::size_t k) {
  require_valid(F, G, a);
  if (!valid_cell(F.grid(), sigma)) throw std::invalid_argument("cell outside the grid");
  Sink sink;
  const SliceLabeling tG = slice(G, sigma, 2 * (a.n + k));
  chase_triangle(G, F, a.psi, a.phi, tG, sigma, cell_id(F.grid(), sigma), DiagramKind::TriangleUp, sink);
  return finish(sink, 0);
}

CheckOutcome loss_at(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a, std::size_t k,
                     const LossOptions& opts) {
  require_valid(F, G, a);
  const std::vector<CellId> centers = centers_of(F, G);
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(centers.size())));

  std::vector<Sink> sinks(jobs);
  for (auto& s : sinks) {
    s.cap = opts.max_witnesses;
    s.stop_at_first = opts.stop_at_first;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&](Sink& sink) {
    try {
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= centers.size()) return;
        evaluate_center(F, G, a, centers[i], k, sink);
        if (sink.done()) stop = true;
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };
  if (jobs == 1) {
    worker(sinks[0]);
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker, std::ref(sinks[j]));
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  Sink merged;
  for (auto& s : sinks) {
    merged.failed = merged.failed || s.failed;
    for (auto& w : s.witnesses) merged.witnesses.push_back(std::move(w));
  }
  return finish(merged, opts.max_witnesses);
}

std::size_t loss_saturation(const CosheafGraph& F, const CosheafGraph& G) {
  std::size_t k = 0;
  for (CellId c : centers_of(F, G)) k = std::max(k, star_saturation(F.grid(), cell_from_id(F.grid(), c)));
  return k;
}

LossResult basis_loss(const CosheafGraph& F, const CosheafGraph& G, const Assignment& a, const LossOptions& opts) {
  require_valid(F, G, a);
  const std::size_t K = loss_saturation(F, G);
  if (K > 2 * static_cast<std::size_t>(F.grid().L))
    throw std::logic_error("saturation exceeds 2L; thickening is broken");

  LossOptions verdict = opts;
  verdict.stop_at_first = true;
  auto passes = [&](std::size_t k) { return loss_at(F, G, a, k, verdict).passed; };

  LossResult r;
  r.n = a.n;
  LossOptions report = opts;
  report.stop_at_first = false;
  if (!passes(K)) {
    r.L_B = ExtendedNat::infinite();
    r.witnesses = loss_at(F, G, a, K, report).witnesses;
  } else {
    std::size_t lo = 0, hi = K;  // answer in [lo, hi], passes(hi)
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (passes(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    r.L_B = hi;
    if (hi > 0) r.witnesses = loss_at(F, G, a, hi - 1, report).witnesses;
  }
  r.bound = ExtendedNat(a.n) + r.L_B;
  if (F.grid().d == 1) r.reeb = reeb_bound(r, F.grid());
  return r;
}

Assignment promote(const Assignment& a, std::size_t k) {
  Assignment b = a;
  b.n = a.n + k;
  return b;
}

double reeb_bound(const LossResult& r, const GridSpec& grid) {
  if (grid.d != 1) throw std::invalid_argument("reeb_bound is defined for d = 1 only");
  if (r.L_B.is_infinite()) return std::numeric_limits<double>::infinity();
  return grid.delta * static_cast<double>(r.n + r.L_B.value() + 1);
}

}  // namespace mapperloss
