#include "mapperloss/cosheaf.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace mapperloss {

namespace {

std::string node_ref(const CosheafGraph& F, NodeIndex x) { return "'" + F.id(x) + "'@" + F.cell(x).to_string(); }

bool proper_face_halves(std::span<const int> s, std::span<const int> t) {
  return halves_leq(s, t) && !std::equal(s.begin(), s.end(), t.begin(), t.end());
}

}  // namespace

CosheafGraph::CosheafGraph(GridSpec grid, std::vector<CosheafNode> nodes,
                           const std::vector<std::pair<std::string, std::string>>& links)
    : grid_(grid) {
  std::unordered_map<std::string, NodeIndex> idx;
  for (std::size_t i = 0; i < nodes.size(); ++i) idx.emplace(nodes[i].id, static_cast<NodeIndex>(i));
  std::vector<std::pair<NodeIndex, NodeIndex>> li;
  li.reserve(links.size());
  for (const auto& [c, p] : links) {
    auto ic = idx.find(c);
    if (ic == idx.end()) throw std::invalid_argument("link names unknown node '" + c + "'");
    auto ip = idx.find(p);
    if (ip == idx.end()) throw std::invalid_argument("link names unknown node '" + p + "'");
    li.emplace_back(ic->second, ip->second);
  }
  build(std::move(nodes), std::move(li));
}

CosheafGraph::CosheafGraph(GridSpec grid, std::vector<CosheafNode> nodes,
                           std::vector<std::pair<NodeIndex, NodeIndex>> links)
    : grid_(grid) {
  build(std::move(nodes), std::move(links));
}

void CosheafGraph::build(std::vector<CosheafNode> nodes, std::vector<std::pair<NodeIndex, NodeIndex>> links) {
  grid_.validate();
  const std::size_t n = nodes.size();
  if (n > static_cast<std::size_t>(std::numeric_limits<NodeIndex>::max()))
    throw std::invalid_argument("too many nodes");
  const std::size_t d = static_cast<std::size_t>(grid_.d);
  ids_.reserve(n);
  cells_.reserve(n);
  cell_ids_.reserve(n);
  halves_.resize(n * d);
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = nodes[i];
    if (!valid_cell(grid_, node.cell))
      throw std::invalid_argument("node '" + node.id + "' has cell " + node.cell.to_string() + " outside the grid");
    if (!index_.emplace(node.id, static_cast<NodeIndex>(i)).second)
      throw std::invalid_argument("duplicate node id '" + node.id + "'");
    CellId cid = mapperloss::cell_id(grid_, node.cell);
    cell_halves(grid_, cid, std::span<int>(halves_.data() + i * d, d));
    ids_.push_back(std::move(node.id));
    cells_.push_back(std::move(node.cell));
    cell_ids_.push_back(cid);
  }

  const std::size_t cells = grid_.cell_count();
  cell_off_.assign(cells + 1, 0);
  for (CellId c : cell_ids_) ++cell_off_[c + 1];
  for (std::size_t c = 0; c < cells; ++c) cell_off_[c + 1] += cell_off_[c];
  by_cell_.resize(n);
  {
    std::vector<std::uint32_t> fill(cell_off_.begin(), cell_off_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) by_cell_[fill[cell_ids_[i]]++] = static_cast<NodeIndex>(i);
  }
  std::vector<NodeIndex> firsts;
  for (std::size_t c = 0; c < cells; ++c)
    if (cell_off_[c + 1] > cell_off_[c]) firsts.push_back(by_cell_[cell_off_[c]]);
  std::sort(firsts.begin(), firsts.end(), [&](NodeIndex a, NodeIndex b) { return cells_[a] < cells_[b]; });
  occupied_.reserve(firsts.size());
  for (NodeIndex x : firsts) occupied_.push_back(cell_ids_[x]);

  for (const auto& [c, p] : links) {
    if (c < 0 || p < 0 || static_cast<std::size_t>(c) >= n || static_cast<std::size_t>(p) >= n)
      throw std::invalid_argument("link endpoint out of range");
  }
  links_ = std::move(links);

  adj_off_.assign(n + 1, 0);
  down_off_.assign(n + 1, 0);
  auto well_formed = [&](NodeIndex c, NodeIndex p) {
    return proper_face_halves(halves(p), halves(c)) && cells_[c].dim() - cells_[p].dim() == 1;
  };
  for (const auto& [c, p] : links_) {
    ++adj_off_[c + 1];
    ++adj_off_[p + 1];
    if (well_formed(c, p)) ++down_off_[c + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    adj_off_[i + 1] += adj_off_[i];
    down_off_[i + 1] += down_off_[i];
  }
  adj_.resize(adj_off_[n]);
  down_.resize(down_off_[n]);
  std::vector<std::size_t> fa(adj_off_.begin(), adj_off_.end() - 1);
  std::vector<std::size_t> fd(down_off_.begin(), down_off_.end() - 1);
  for (const auto& [c, p] : links_) {
    adj_[fa[c]++] = p;
    adj_[fa[p]++] = c;
    if (well_formed(c, p)) down_[fd[c]++] = p;
  }
}

std::optional<NodeIndex> CosheafGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex CosheafGraph::index_of(std::string_view id) const {
  auto r = find(id);
  if (!r) throw std::invalid_argument("unknown node '" + std::string(id) + "'");
  return *r;
}

std::span<const NodeIndex> CosheafGraph::nodes_at(CellId c) const {
  if (c + 1 >= cell_off_.size()) return {};
  return {by_cell_.data() + cell_off_[c], static_cast<std::size_t>(cell_off_[c + 1] - cell_off_[c])};
}

std::span<const NodeIndex> CosheafGraph::nodes_at(const Cell& c) const {
  if (!valid_cell(grid_, c)) return {};
  return nodes_at(mapperloss::cell_id(grid_, c));
}

NodeIndex CosheafGraph::face_image(NodeIndex x, std::span<const int> th) const {
  if (!halves_leq(th, halves(x))) return kNoNode;
  NodeIndex cur = x;
  while (true) {
    auto h = halves(cur);
    if (std::equal(h.begin(), h.end(), th.begin(), th.end())) return cur;
    NodeIndex next = kNoNode;
    for (NodeIndex p : face_links(cur)) {
      if (halves_leq(th, halves(p))) {
        next = p;
        break;
      }
    }
    if (next == kNoNode) return kNoNode;
    cur = next;
  }
}

NodeIndex CosheafGraph::face_image(NodeIndex x, CellId face) const {
  std::vector<int> th(grid_.d);
  cell_halves(grid_, face, th);
  return face_image(x, th);
}

std::vector<std::string> validate(const CosheafGraph& F) {
  std::vector<std::string> out;
  const GridSpec& grid = F.grid();
  for (std::size_t i = 0; i < F.links().size(); ++i) {
    auto [c, p] = F.links()[i];
    std::string what = "link " + node_ref(F, c) + " -> " + node_ref(F, p);
    if (c == p) {
      out.push_back("self link: " + what);
    } else if (F.cell_id(c) == F.cell_id(p)) {
      out.push_back("same cell: " + what);
    } else if (halves_leq(F.halves(c), F.halves(p))) {
      out.push_back("wrong direction: " + what + " points from a face to a coface");
    } else if (!halves_leq(F.halves(p), F.halves(c))) {
      out.push_back("incomparable cells: " + what);
    } else if (F.cell(c).dim() - F.cell(p).dim() != 1) {
      out.push_back("not codimension-1: " + what);
    }
  }

  for (std::size_t xi = 0; xi < F.node_count(); ++xi) {
    const auto x = static_cast<NodeIndex>(xi);
    const Cell& cx = F.cell(x);
    const int dim = cx.dim();
    std::vector<Cell> codim1, codim2;
    for (const Cell& f : faces(grid, cx)) {
      if (f.dim() == dim - 1) codim1.push_back(f);
      if (f.dim() == dim - 2) codim2.push_back(f);
    }
    // Unique image on each codimension-1 face, if any.
    std::vector<NodeIndex> img(codim1.size(), kNoNode);
    for (std::size_t j = 0; j < codim1.size(); ++j) {
      CellId fid = cell_id(grid, codim1[j]);
      int count = 0;
      for (NodeIndex p : F.face_links(x)) {
        if (F.cell_id(p) == fid) {
          ++count;
          img[j] = p;
        }
      }
      if (count == 0) {
        if (F.nodes_at(fid).empty())
          out.push_back("missing face image: node " + node_ref(F, x) + " at face " + codim1[j].to_string() +
                        ", which carries no elements");
        else
          out.push_back("missing face image: node " + node_ref(F, x) + " has no link to face " +
                        codim1[j].to_string());
      } else if (count > 1) {
        out.push_back("multiple face images: node " + node_ref(F, x) + " has " + std::to_string(count) +
                      " links to face " + codim1[j].to_string());
      }
    }
    // Both routes around each square must agree.
    for (const Cell& s : codim2) {
      CellId sid = cell_id(grid, s);
      NodeIndex seen = kNoNode;
      bool conflict = false;
      for (std::size_t j = 0; j < codim1.size(); ++j) {
        if (img[j] == kNoNode || !is_face(s, codim1[j])) continue;
        NodeIndex down = kNoNode;
        for (NodeIndex p : F.face_links(img[j]))
          if (F.cell_id(p) == sid) down = p;
        if (down == kNoNode) continue;
        if (seen == kNoNode)
          seen = down;
        else if (seen != down)
          conflict = true;
      }
      if (conflict)
        out.push_back("incompatible face images: node " + node_ref(F, x) + " reaches face " + s.to_string() +
                      " at different elements");
    }
  }
  return out;
}

std::int32_t ComponentLabeling::component_of(NodeIndex x) const {
  if (!contains(x)) throw std::invalid_argument("node " + std::to_string(x) + " is not a member of the slice");
  return label[x];
}

namespace {

template <class IsMember>
void label_components(const CosheafGraph& F, IsMember&& is_member, ComponentLabeling& out) {
  const std::size_t n = F.node_count();
  out.label.assign(n, -1);
  out.members.clear();
  out.components = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (is_member(static_cast<NodeIndex>(i))) out.members.push_back(static_cast<NodeIndex>(i));
  // Mark members with -2 until labeled.
  for (NodeIndex x : out.members) out.label[x] = -2;
  std::vector<NodeIndex> queue;
  for (NodeIndex s : out.members) {
    if (out.label[s] != -2) continue;
    const auto comp = static_cast<std::int32_t>(out.components++);
    out.label[s] = comp;
    queue.assign(1, s);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (NodeIndex y : F.neighbors(queue[q])) {
        if (out.label[y] == -2) {
          out.label[y] = comp;
          queue.push_back(y);
        }
      }
    }
  }
}

}  // namespace

SliceLabeling slice(const CosheafGraph& F, const Cell& center, std::size_t radius) {
  const CellBox box = star_box(F.grid(), center, radius);
  SliceLabeling out;
  out.center = center;
  out.radius = radius;
  label_components(F, [&](NodeIndex x) { return box.contains_halves(F.halves(x)); }, out);
  return out;
}

ComponentLabeling set_at(const CosheafGraph& F, const OpenCellSet& S) {
  if (!(S.grid() == F.grid())) throw std::invalid_argument("set_at: open set lives on a different grid");
  ComponentLabeling out;
  label_components(F, [&](NodeIndex x) { return S.contains_id(F.cell_id(x)); }, out);
  return out;
}

std::shared_ptr<const SliceLabeling> SliceCache::get(const Cell& center, std::size_t radius) {
  const CellId cid = cell_id(F_.grid(), center);
  std::size_t sat;
  {
    std::shared_lock lock(mu_);
    auto it = saturation_.find(cid);
    sat = it == saturation_.end() ? static_cast<std::size_t>(-1) : it->second;
  }
  if (sat == static_cast<std::size_t>(-1)) {
    sat = star_saturation(F_.grid(), center);
    std::unique_lock lock(mu_);
    saturation_.emplace(cid, sat);
  }
  const std::pair<CellId, std::size_t> key{cid, std::min(radius, sat)};
  {
    std::shared_lock lock(mu_);
    auto it = slices_.find(key);
    if (it != slices_.end()) return it->second;
  }
  auto fresh = std::make_shared<const SliceLabeling>(slice(F_, center, key.second));
  std::unique_lock lock(mu_);
  return slices_.emplace(key, std::move(fresh)).first->second;
}

namespace {

using SlicePtr = std::shared_ptr<const SliceLabeling>;

// Smallest k in [1, K] with merged(k), given merged(0) is false; infinite if merged(K) is false.
// Relies on merged being monotone in k.
ExtendedNat first_merge(std::size_t K, const std::function<bool(std::size_t)>& merged) {
  if (K == 0) return ExtendedNat::infinite();
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t step = 1; step < K; step *= 2) {
    if (merged(step)) {
      hi = step;
      break;
    }
    lo = step;
  }
  if (hi == 0) {
    if (!merged(K)) return ExtendedNat::infinite();
    hi = K;
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (merged(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

SlicePtr fetch(const CosheafGraph& F, const Cell& center, std::size_t r, SliceCache* cache) {
  if (cache) {
    if (&cache->graph() != &F) throw std::invalid_argument("slice cache belongs to another graph");
    return cache->get(center, r);
  }
  return std::make_shared<const SliceLabeling>(slice(F, center, r));
}

}  // namespace

ExtendedNat distance(const CosheafGraph& F, const Cell& center, std::size_t m, NodeIndex x, NodeIndex y,
                     SliceCache* cache) {
  SlicePtr base = fetch(F, center, m, cache);
  if (!base->contains(x) || !base->contains(y))
    throw std::invalid_argument("distance: both elements must belong to the slice at radius " + std::to_string(m));
  if (base->label[x] == base->label[y]) return 0;
  const std::size_t sat = star_saturation(F.grid(), center);
  const std::size_t K = sat > m ? sat - m : 0;
  return first_merge(K, [&](std::size_t k) {
    SlicePtr s = fetch(F, center, m + k, cache);
    return s->label[x] == s->label[y];
  });
}

ExtendedNat diameter(const CosheafGraph& F, const Cell& center, std::size_t m, SliceCache* cache) {
  SlicePtr base = fetch(F, center, m, cache);
  if (base->components <= 1) return 0;
  const std::size_t sat = star_saturation(F.grid(), center);
  const std::size_t K = sat > m ? sat - m : 0;
  return first_merge(K, [&](std::size_t k) {
    SlicePtr s = fetch(F, center, m + k, cache);
    const std::int32_t c0 = s->label[base->members.front()];
    return std::all_of(base->members.begin(), base->members.end(),
                       [&](NodeIndex z) { return s->label[z] == c0; });
  });
}

}  // namespace mapperloss
