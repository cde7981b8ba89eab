#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "aodep/model.hpp"

namespace aodep {

/// Sphere pairs at contact distance 2 r_sphere (1 + tolerance).
struct ContactGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
  double tolerance = kExactContactTolerance;

  std::size_t edge_count() const noexcept { return edges.size(); }
  std::vector<std::size_t> degrees() const;
};

ContactGraph contact_graph(const PointSet& spheres, const ModelParams& params,
                           double eps_c = kExactContactTolerance);

/// Number of sphere pairs with |x_i - x_j| <= 2 r_sphere (1 + eps_c).
std::size_t contact_number(const PointSet& spheres, const ModelParams& params,
                           double eps_c = kExactContactTolerance);

/// Harborth's planar maximum floor(3n - sqrt(12n - 3)). Requires n >= 2.
long max_contact_number_2d(long n);

struct KnownContactValue {
  long value;
  bool exact;  // false: largest known value, a lower bound on the maximum
};

/// Tabulated maximal contact numbers in R^3 for 2 <= n <= 9.
std::optional<KnownContactValue> known_contact_values_3d(long n);

/// Maximal contact number c(n, d) for d = 2 (any n) or d = 3 (tabulated n).
/// Throws ParameterError naming the missing constant otherwise.
long max_contact_number(long n, int d);

}  // namespace aodep
