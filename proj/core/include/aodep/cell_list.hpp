#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aodep/model.hpp"

namespace aodep {

/// Uniform grid over a point set. Cells are kept as a sorted (key, index)
/// array so neighbor iteration order is deterministic.
class CellList {
 public:
  CellList() = default;
  CellList(const PointSet& points, double cell_size);

  void rebuild(const PointSet& points, double cell_size);

  /// Calls fn(k) for every point k whose cell touches the cube of half-width
  /// `radius` around x. Callers filter by exact distance.
  void for_each_candidate(std::span<const double> x, double radius,
                          const std::function<void(std::size_t)>& fn) const;

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    std::uint64_t key;
    std::size_t index;
  };

  std::uint64_t key_of(std::span<const std::int64_t> cell) const noexcept;

  int dim_ = 0;
  double cell_size_ = 1.0;
  std::vector<Entry> entries_;
};

}  // namespace aodep
