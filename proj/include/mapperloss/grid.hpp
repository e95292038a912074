#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mapperloss {

// The cubical complex K on [-L*delta, L*delta]^d.
struct GridSpec {
  int d = 1;
  double delta = 1.0;
  int L = 1;

  // Throws std::invalid_argument unless d >= 1, L >= 1 and delta > 0.
  void validate() const;

  // Elementary intervals per axis: 2L+1 degenerate, 2L nondegenerate.
  int extent() const { return 4 * L + 1; }
  std::uint64_t cell_count() const;

  bool operator==(const GridSpec&) const = default;
};

enum class IntervalKind : std::uint8_t { Degenerate, NonDegenerate };

// Degenerate(l) is the point l*delta, NonDegenerate(l) the open interval (l*delta, (l+1)*delta).
struct Interval {
  IntervalKind kind = IntervalKind::Degenerate;
  int index = 0;

  static Interval deg(int l) { return {IntervalKind::Degenerate, l}; }
  static Interval nondeg(int l) { return {IntervalKind::NonDegenerate, l}; }

  auto operator<=>(const Interval&) const = default;
};

// An elementary open cube. Ordering is lexicographic on (axis, kind, index).
class Cell {
 public:
  Cell() = default;
  explicit Cell(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  static Cell vertex(std::initializer_list<int> coords);

  std::size_t d() const { return intervals_.size(); }
  int dim() const;
  const Interval& operator[](std::size_t axis) const { return intervals_[axis]; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  // "D3" in d=1, "N2,D-1" in d=2.
  std::string to_string() const;

  auto operator<=>(const Cell&) const = default;

 private:
  std::vector<Interval> intervals_;
};

// Cells are addressed internally by a mixed-radix id over per-axis half-indices
// h = 2(l+L) (+1 when nondegenerate), so h in [0, 4L] and even h means degenerate.
using CellId = std::uint64_t;

bool valid_cell(const GridSpec& grid, const Cell& c);
CellId cell_id(const GridSpec& grid, const Cell& c);
Cell cell_from_id(const GridSpec& grid, CellId id);
void cell_halves(const GridSpec& grid, CellId id, std::span<int> out);
CellId id_from_halves(const GridSpec& grid, std::span<const int> halves);

// sigma <= tau, i.e. sigma lies in the closure of tau.
bool is_face(const Cell& sigma, const Cell& tau);
bool halves_leq(std::span<const int> sigma, std::span<const int> tau);

// Proper faces and proper cofaces (clipped to the box), in canonical order.
std::vector<Cell> faces(const GridSpec& grid, const Cell& c);
std::vector<Cell> cofaces(const GridSpec& grid, const Cell& c);

class CellSet {
 public:
  explicit CellSet(const GridSpec& grid);
  static CellSet all(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }

  void insert(const Cell& c);
  void insert_id(CellId id);
  bool contains(const Cell& c) const;
  bool contains_id(CellId id) const { return bits_[id]; }

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool full() const { return count_ == bits_.size(); }

  std::vector<CellId> ids() const;
  std::vector<Cell> cells() const;

  bool subset_of(const CellSet& other) const;
  bool operator==(const CellSet& other) const { return grid_ == other.grid_ && bits_ == other.bits_; }
  std::size_t hash() const { return std::hash<std::vector<bool>>{}(bits_); }

 private:
  GridSpec grid_;
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

// True iff the set is coface-closed.
bool is_open(const CellSet& cells);

// A coface-closed cell set: an open set of the cover's Alexandroff topology.
class OpenCellSet {
 public:
  // Throws std::invalid_argument when `cells` is not coface-closed.
  static OpenCellSet from(CellSet cells);
  static OpenCellSet all(const GridSpec& grid) { return OpenCellSet(CellSet::all(grid)); }
  static OpenCellSet none(const GridSpec& grid) { return OpenCellSet(CellSet(grid)); }

  const CellSet& cells() const { return cells_; }
  const GridSpec& grid() const { return cells_.grid(); }
  bool contains(const Cell& c) const { return cells_.contains(c); }
  bool contains_id(CellId id) const { return cells_.contains_id(id); }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  bool full() const { return cells_.full(); }
  bool subset_of(const OpenCellSet& other) const { return cells_.subset_of(other.cells_); }

  bool operator==(const OpenCellSet& other) const { return cells_ == other.cells_; }

 private:
  explicit OpenCellSet(CellSet cells) : cells_(std::move(cells)) {}
  friend OpenCellSet basic_open(const GridSpec&, const Cell&);
  friend OpenCellSet thicken(const OpenCellSet&, std::size_t);
  friend OpenCellSet open_union(const OpenCellSet&, const OpenCellSet&);
  friend struct CellBox;
  CellSet cells_;
};

// {tau | tau >= sigma}.
OpenCellSet basic_open(const GridSpec& grid, const Cell& sigma);

// n rounds of: add all faces, then add all cofaces.
OpenCellSet thicken(const OpenCellSet& s, std::size_t n);

OpenCellSet open_union(const OpenCellSet& a, const OpenCellSet& b);

// Smallest m with thicken(s, m) equal to the whole complex. Throws on empty s.
std::size_t saturation_steps(const OpenCellSet& s);

// Axis-aligned box of half-indices. thicken(basic_open(c), r) is always such a box,
// which is how slices test membership without materializing cell sets.
struct CellBox {
  std::vector<int> lo;
  std::vector<int> hi;

  bool contains_halves(std::span<const int> h) const;
  bool full(const GridSpec& grid) const;
  std::uint64_t volume() const;
  OpenCellSet to_open_set(const GridSpec& grid) const;
};

CellBox star_box(const GridSpec& grid, const Cell& center, std::size_t radius);

// saturation_steps(basic_open(center)), by iterating the box thickening.
std::size_t star_saturation(const GridSpec& grid, const Cell& center);

}  // namespace mapperloss
