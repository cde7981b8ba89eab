#include "aodep/cell_list.hpp"

#include <algorithm>
#include <cmath>

#include "aodep/random.hpp"

namespace aodep {

CellList::CellList(const PointSet& points, double cell_size) {
  rebuild(points, cell_size);
}

std::uint64_t CellList::key_of(std::span<const std::int64_t> cell) const noexcept {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::int64_t c : cell) h = mix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

void CellList::rebuild(const PointSet& points, double cell_size) {
  if (!(cell_size > 0.0)) throw ParameterError("cell size must be > 0");
  dim_ = points.dim();
  cell_size_ = cell_size;
  entries_.clear();
  entries_.reserve(points.size());
  std::vector<std::int64_t> cell(static_cast<std::size_t>(dim_));
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int c = 0; c < dim_; ++c)
      cell[c] = static_cast<std::int64_t>(std::floor(points[k][c] / cell_size_));
    entries_.push_back({key_of(cell), k});
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.key != b.key ? a.key < b.key : a.index < b.index;
  });
}

void CellList::for_each_candidate(std::span<const double> x, double radius,
                                  const std::function<void(std::size_t)>& fn) const {
  if (entries_.empty()) return;
  const auto d = static_cast<std::size_t>(dim_);
  std::vector<std::int64_t> lo(d), hi(d), cell(d);
  for (std::size_t c = 0; c < d; ++c) {
    lo[c] = static_cast<std::int64_t>(std::floor((x[c] - radius) / cell_size_));
    hi[c] = static_cast<std::int64_t>(std::floor((x[c] + radius) / cell_size_));
    cell[c] = lo[c];
  }
  // Odometer over the cell box [lo, hi].
  while (true) {
    const std::uint64_t key = key_of(cell);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const Entry& e, std::uint64_t k) { return e.key < k; });
    for (; it != entries_.end() && it->key == key; ++it) fn(it->index);
    std::size_t c = 0;
    while (c < d && cell[c] == hi[c]) {
      cell[c] = lo[c];
      ++c;
    }
    if (c == d) break;
    ++cell[c];
  }
}

}  // namespace aodep
