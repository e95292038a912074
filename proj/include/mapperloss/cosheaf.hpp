#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mapperloss/extended_nat.hpp"
#include "mapperloss/grid.hpp"

namespace mapperloss {

using NodeIndex = std::int32_t;
inline constexpr NodeIndex kNoNode = -1;

struct CosheafNode {
  std::string id;
  Cell cell;
};

// Every element of F(S_sigma), for every cell sigma, is a node carried by sigma.
// A link (child, parent) records the face map into a codimension-1 face:
// parent = F[S_child ⊆ S_face](child).
class CosheafGraph {
 public:
  CosheafGraph() = default;

  // Throws std::invalid_argument for duplicate ids, unknown link endpoints or
  // cells outside the grid. Semantic problems are left to validate().
  CosheafGraph(GridSpec grid, std::vector<CosheafNode> nodes,
               const std::vector<std::pair<std::string, std::string>>& links);
  CosheafGraph(GridSpec grid, std::vector<CosheafNode> nodes,
               std::vector<std::pair<NodeIndex, NodeIndex>> links);

  const GridSpec& grid() const { return grid_; }
  std::size_t node_count() const { return ids_.size(); }

  const std::string& id(NodeIndex x) const { return ids_[x]; }
  const Cell& cell(NodeIndex x) const { return cells_[x]; }
  CellId cell_id(NodeIndex x) const { return cell_ids_[x]; }
  std::span<const int> halves(NodeIndex x) const {
    return {halves_.data() + static_cast<std::size_t>(x) * grid_.d, static_cast<std::size_t>(grid_.d)};
  }

  std::optional<NodeIndex> find(std::string_view id) const;
  // Like find, but throws std::invalid_argument naming the id.
  NodeIndex index_of(std::string_view id) const;

  std::span<const NodeIndex> nodes_at(CellId c) const;
  std::span<const NodeIndex> nodes_at(const Cell& c) const;

  // Cells carrying at least one node, in canonical cell order.
  const std::vector<CellId>& occupied_cells() const { return occupied_; }

  const std::vector<std::pair<NodeIndex, NodeIndex>>& links() const { return links_; }
  std::span<const NodeIndex> neighbors(NodeIndex x) const {
    return {adj_.data() + adj_off_[x], adj_off_[x + 1] - adj_off_[x]};
  }
  // Parents reached through well-formed codimension-1 links.
  std::span<const NodeIndex> face_links(NodeIndex x) const {
    return {down_.data() + down_off_[x], down_off_[x + 1] - down_off_[x]};
  }

  // F[S_cell(x) ⊆ S_face](x), by composing codimension-1 links. Returns x for
  // face == cell(x) and kNoNode when face is not a face of cell(x) or the chain breaks.
  NodeIndex face_image(NodeIndex x, CellId face) const;
  NodeIndex face_image(NodeIndex x, std::span<const int> face_halves) const;

 private:
  void build(std::vector<CosheafNode> nodes, std::vector<std::pair<NodeIndex, NodeIndex>> links);

  GridSpec grid_;
  std::vector<std::string> ids_;
  std::vector<Cell> cells_;
  std::vector<CellId> cell_ids_;
  std::vector<int> halves_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::uint32_t> cell_off_;
  std::vector<NodeIndex> by_cell_;
  std::vector<CellId> occupied_;
  std::vector<std::pair<NodeIndex, NodeIndex>> links_;
  std::vector<std::size_t> adj_off_;
  std::vector<NodeIndex> adj_;
  std::vector<std::size_t> down_off_;
  std::vector<NodeIndex> down_;
};

// Empty iff every structural invariant holds. Each entry names the rule.
std::vector<std::string> validate(const CosheafGraph& F);

// Connected components of the subgraph on member nodes, using only links with
// both endpoints members. Component ids follow the smallest member index.
struct ComponentLabeling {
  std::vector<std::int32_t> label;  // -1 for non-members
  std::vector<NodeIndex> members;   // ascending
  std::size_t components = 0;

  bool contains(NodeIndex x) const { return x >= 0 && static_cast<std::size_t>(x) < label.size() && label[x] >= 0; }
  // Throws std::invalid_argument when x is not a member.
  std::int32_t component_of(NodeIndex x) const;
};

struct SliceLabeling : ComponentLabeling {
  Cell center;
  std::size_t radius = 0;
};

// Realizes F(thicken(basic_open(center), radius)).
SliceLabeling slice(const CosheafGraph& F, const Cell& center, std::size_t radius);

// Realizes F(S) for an arbitrary open S.
ComponentLabeling set_at(const CosheafGraph& F, const OpenCellSet& S);

// Thread-safe memo of slices for one graph. Radii past saturation share an entry.
class SliceCache {
 public:
  explicit SliceCache(const CosheafGraph& F) : F_(F) {}
  std::shared_ptr<const SliceLabeling> get(const Cell& center, std::size_t radius);
  const CosheafGraph& graph() const { return F_; }

 private:
  const CosheafGraph& F_;
  std::shared_mutex mu_;
  std::map<std::pair<CellId, std::size_t>, std::shared_ptr<const SliceLabeling>> slices_;
  std::unordered_map<CellId, std::size_t> saturation_;
};

// Smallest k with x and y in one component of slice(center, m + k); infinite if
// they never meet. Throws unless both are members of slice(center, m).
ExtendedNat distance(const CosheafGraph& F, const Cell& center, std::size_t m, NodeIndex x, NodeIndex y,
                     SliceCache* cache = nullptr);

// Largest pairwise distance among members of slice(center, m). Since the
// distance is an ultrametric this is the first k merging all of them.
ExtendedNat diameter(const CosheafGraph& F, const Cell& center, std::size_t m, SliceCache* cache = nullptr);

}  // namespace mapperloss
