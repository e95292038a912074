#include "mapperloss/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mapperloss {

namespace {

int half_of(const Interval& iv, int L) {
  return 2 * (iv.index + L) + (iv.kind == IntervalKind::NonDegenerate ? 1 : 0);
}

Interval interval_of_half(int h, int L) {
  int l = h / 2 - L;
  return (h % 2 == 0) ? Interval::deg(l) : Interval::nondeg(l);
}

// Calls fn(halves) for every element of the product options[0] x ... x options[d-1].
template <class Fn>
void for_each_product(const std::vector<std::vector<int>>& options, Fn&& fn) {
  const std::size_t d = options.size();
  for (const auto& o : options)
    if (o.empty()) return;
  std::vector<std::size_t> pos(d, 0);
  std::vector<int> h(d);
  while (true) {
    for (std::size_t a = 0; a < d; ++a) h[a] = options[a][pos[a]];
    fn(std::span<const int>(h));
    std::size_t a = 0;
    while (a < d && ++pos[a] == options[a].size()) pos[a++] = 0;
    if (a == d) return;
  }
}

std::vector<std::vector<int>> face_options(std::span<const int> h) {
  std::vector<std::vector<int>> opts(h.size());
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (h[a] % 2 == 1)
      opts[a] = {h[a] - 1, h[a], h[a] + 1};
    else
      opts[a] = {h[a]};
  }
  return opts;
}

std::vector<std::vector<int>> coface_options(std::span<const int> h, int extent) {
  std::vector<std::vector<int>> opts(h.size());
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (h[a] % 2 == 0) {
      if (h[a] - 1 >= 0) opts[a].push_back(h[a] - 1);
      opts[a].push_back(h[a]);
      if (h[a] + 1 < extent) opts[a].push_back(h[a] + 1);
    } else {
      opts[a] = {h[a]};
    }
  }
  return opts;
}

std::vector<Cell> sorted_cells(const GridSpec& grid, std::vector<CellId> ids) {
  std::vector<Cell> out;
  out.reserve(ids.size());
  for (CellId id : ids) out.push_back(cell_from_id(grid, id));
  std::sort(out.begin(), out.end());
  return out;
}

// Adds every face (closure=false: coface) of every member.
CellSet close_under(const CellSet& s, bool faces_not_cofaces) {
  const GridSpec& grid = s.grid();
  CellSet out = s;
  std::vector<int> h(grid.d);
  for (CellId id : s.ids()) {
    cell_halves(grid, id, h);
    auto opts = faces_not_cofaces ? face_options(h) : coface_options(h, grid.extent());
    for_each_product(opts, [&](std::span<const int> g) { out.insert_id(id_from_halves(grid, g)); });
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
  if (L < 1) throw std::invalid_argument("grid: L must be >= 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("grid: delta must be a positive finite number");
  // Cell sets and per-cell tables are dense, so keep the complex modest.
  double cells = std::pow(static_cast<double>(extent()), d);
  if (cells > static_cast<double>(1u << 24)) throw std::invalid_argument("grid: more than 2^24 cells");
}

std::uint64_t GridSpec::cell_count() const {
  std::uint64_t n = 1;
  for (int a = 0; a < d; ++a) n *= static_cast<std::uint64_t>(extent());
  return n;
}

Cell Cell::vertex(std::initializer_list<int> coords) {
  std::vector<Interval> iv;
  for (int c : coords) iv.push_back(Interval::deg(c));
  return Cell(std::move(iv));
}

int Cell::dim() const {
  return static_cast<int>(std::count_if(intervals_.begin(), intervals_.end(),
                                        [](const Interval& i) { return i.kind == IntervalKind::NonDegenerate; }));
}

std::string Cell::to_string() const {
  std::string s;
  for (std::size_t a = 0; a < intervals_.size(); ++a) {
    if (a) s += ',';
    s += intervals_[a].kind == IntervalKind::Degenerate ? 'D' : 'N';
    s += std::to_string(intervals_[a].index);
  }
  return s;
}

bool valid_cell(const GridSpec& grid, const Cell& c) {
  if (static_cast<int>(c.d()) != grid.d) return false;
  for (const auto& iv : c.intervals()) {
    if (iv.index < -grid.L) return false;
    if (iv.kind == IntervalKind::Degenerate && iv.index > grid.L) return false;
    if (iv.kind == IntervalKind::NonDegenerate && iv.index > grid.L - 1) return false;
  }
  return true;
}

CellId cell_id(const GridSpec& grid, const Cell& c) {
  if (!valid_cell(grid, c)) throw std::invalid_argument("cell " + c.to_string() + " is not a cell of the grid");
  CellId id = 0;
  const CellId e = static_cast<CellId>(grid.extent());
  for (int a = grid.d - 1; a >= 0; --a) id = id * e + static_cast<CellId>(half_of(c[a], grid.L));
  return id;
}

void cell_halves(const GridSpec& grid, CellId id, std::span<int> out) {
  const CellId e = static_cast<CellId>(grid.extent());
  for (int a = 0; a < grid.d; ++a) {
    out[a] = static_cast<int>(id % e);
    id /= e;
  }
}

CellId id_from_halves(const GridSpec& grid, std::span<const int> halves) {
  CellId id = 0;
  const CellId e = static_cast<CellId>(grid.extent());
  for (int a = grid.d - 1; a >= 0; --a) id = id * e + static_cast<CellId>(halves[a]);
  return id;
}

Cell cell_from_id(const GridSpec& grid, CellId id) {
  std::vector<int> h(grid.d);
  cell_halves(grid, id, h);
  std::vector<Interval> iv(grid.d);
  for (int a = 0; a < grid.d; ++a) iv[a] = interval_of_half(h[a], grid.L);
  return Cell(std::move(iv));
}

bool halves_leq(std::span<const int> s, std::span<const int> t) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (s[a] == t[a]) continue;
    if (s[a] % 2 == 0 && t[a] % 2 == 1 && (t[a] - s[a] == 1 || s[a] - t[a] == 1)) continue;
    return false;
  }
  return true;
}

bool is_face(const Cell& sigma, const Cell& tau) {
  if (sigma.d() != tau.d()) return false;
  for (std::size_t a = 0; a < sigma.d(); ++a) {
    const Interval& s = sigma[a];
    const Interval& t = tau[a];
    if (s == t) continue;
    if (s.kind == IntervalKind::Degenerate && t.kind == IntervalKind::NonDegenerate &&
        (s.index == t.index || s.index == t.index + 1))
      continue;
    return false;
  }
  return true;
}

std::vector<Cell> faces(const GridSpec& grid, const Cell& c) {
  const CellId self = cell_id(grid, c);
  std::vector<int> h(grid.d);
  cell_halves(grid, self, h);
  std::vector<CellId> ids;
  for_each_product(face_options(h), [&](std::span<const int> g) {
    CellId id = id_from_halves(grid, g);
    if (id != self) ids.push_back(id);
  });
  return sorted_cells(grid, std::move(ids));
}

std::vector<Cell> cofaces(const GridSpec& grid, const Cell& c) {
  const CellId self = cell_id(grid, c);
  std::vector<int> h(grid.d);
  cell_halves(grid, self, h);
  std::vector<CellId> ids;
  for_each_product(coface_options(h, grid.extent()), [&](std::span<const int> g) {
    CellId id = id_from_halves(grid, g);
    if (id != self) ids.push_back(id);
  });
  return sorted_cells(grid, std::move(ids));
}

CellSet::CellSet(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  bits_.assign(grid_.cell_count(), false);
}

CellSet CellSet::all(const GridSpec& grid) {
  CellSet s(grid);
  s.bits_.assign(s.bits_.size(), true);
  s.count_ = s.bits_.size();
  return s;
}

void CellSet::insert(const Cell& c) { insert_id(cell_id(grid_, c)); }

void CellSet::insert_id(CellId id) {
  if (!bits_[id]) {
    bits_[id] = true;
    ++count_;
  }
}

bool CellSet::contains(const Cell& c) const { return valid_cell(grid_, c) && bits_[cell_id(grid_, c)]; }

std::vector<CellId> CellSet::ids() const {
  std::vector<CellId> out;
  out.reserve(count_);
  for (CellId i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

std::vector<Cell> CellSet::cells() const { return sorted_cells(grid_, ids()); }

bool CellSet::subset_of(const CellSet& other) const {
  if (!(grid_ == other.grid_)) return false;
  for (CellId i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

bool is_open(const CellSet& cells) {
  const GridSpec& grid = cells.grid();
  std::vector<int> h(grid.d);
  for (CellId id : cells.ids()) {
    cell_halves(grid, id, h);
    bool ok = true;
    for_each_product(coface_options(h, grid.extent()), [&](std::span<const int> g) {
      if (!cells.contains_id(id_from_halves(grid, g))) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

OpenCellSet OpenCellSet::from(CellSet cells) {
  if (!is_open(cells)) throw std::invalid_argument("cell set is not coface-closed");
  return OpenCellSet(std::move(cells));
}

OpenCellSet basic_open(const GridSpec& grid, const Cell& sigma) {
  CellSet s(grid);
  const CellId id = cell_id(grid, sigma);
  std::vector<int> h(grid.d);
  cell_halves(grid, id, h);
  for_each_product(coface_options(h, grid.extent()), [&](std::span<const int> g) { s.insert_id(id_from_halves(grid, g)); });
  return OpenCellSet(std::move(s));
}

OpenCellSet thicken(const OpenCellSet& s, std::size_t n) {
  CellSet cur = s.cells();
  for (std::size_t i = 0; i < n && !cur.full(); ++i) cur = close_under(close_under(cur, true), false);
  return OpenCellSet(std::move(cur));
}

OpenCellSet open_union(const OpenCellSet& a, const OpenCellSet& b) {
  CellSet u = a.cells();
  for (CellId id : b.cells().ids()) u.insert_id(id);
  return OpenCellSet(std::move(u));
}

std::size_t saturation_steps(const OpenCellSet& s) {
  if (s.empty()) throw std::invalid_argument("saturation_steps: empty set never saturates");
  std::size_t m = 0;
  OpenCellSet cur = s;
  while (!cur.full()) {
    OpenCellSet next = thicken(cur, 1);
    if (next.size() == cur.size()) throw std::logic_error("saturation_steps: thickening stalled");
    cur = std::move(next);
    ++m;
  }
  return m;
}

bool CellBox::contains_halves(std::span<const int> h) const {
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (h[a] < lo[a] || h[a] > hi[a]) return false;
  return true;
}

bool CellBox::full(const GridSpec& grid) const {
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (lo[a] > 0 || hi[a] < grid.extent() - 1) return false;
  return true;
}

std::uint64_t CellBox::volume() const {
  std::uint64_t v = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) v *= static_cast<std::uint64_t>(hi[a] - lo[a] + 1);
  return v;
}

OpenCellSet CellBox::to_open_set(const GridSpec& grid) const {
  CellSet s(grid);
  std::vector<std::vector<int>> opts(grid.d);
  for (int a = 0; a < grid.d; ++a)
    for (int h = lo[a]; h <= hi[a]; ++h) opts[a].push_back(h);
  for_each_product(opts, [&](std::span<const int> g) { s.insert_id(id_from_halves(grid, g)); });
  return OpenCellSet(std::move(s));
}

CellBox star_box(const GridSpec& grid, const Cell& center, std::size_t radius) {
  const CellId id = cell_id(grid, center);
  std::vector<int> h(grid.d);
  cell_halves(grid, id, h);
  CellBox box{std::vector<int>(grid.d), std::vector<int>(grid.d)};
  // Each round grows an odd-ended interval by two half-steps per side.
  const long long grow = 2LL * static_cast<long long>(std::min<std::size_t>(radius, static_cast<std::size_t>(grid.extent())));
  const long long top = grid.extent() - 1;
  for (int a = 0; a < grid.d; ++a) {
    long long base = (h[a] % 2 == 0) ? 1 : 0;
    box.lo[a] = static_cast<int>(std::max(0LL, h[a] - base - grow));
    box.hi[a] = static_cast<int>(std::min(top, h[a] + base + grow));
  }
  return box;
}

std::size_t star_saturation(const GridSpec& grid, const Cell& center) {
  std::size_t r = 0;
  while (!star_box(grid, center, r).full(grid)) ++r;
  return r;
}

}  // namespace mapperloss
