#include "aodep/contacts.hpp"

#include <array>
#include <cmath>
#include <string>

namespace aodep {

std::vector<std::size_t> ContactGraph::degrees() const {
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

ContactGraph contact_graph(const PointSet& spheres, const ModelParams& params,
                           double eps_c) {
  require_dimension(spheres, params);
  ContactGraph g;
  g.n = spheres.size();
  g.tolerance = eps_c;
  const double reach = 2.0 * params.r_sphere * (1.0 + eps_c);
  const double reach2 = reach * reach;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j)
      if (squared_distance(spheres[i], spheres[j]) <= reach2)
        g.edges.emplace_back(i, j);
  return g;
}

std::size_t contact_number(const PointSet& spheres, const ModelParams& params,
                           double eps_c) {
  return contact_graph(spheres, params, eps_c).edge_count();
}

long max_contact_number_2d(long n) {
  if (n < 2) throw ParameterError("max_contact_number_2d requires n >= 2");
  // floor(3n - sqrt(12n - 3)) in integers: the largest c with
  // (3n - c)^2 >= 12n - 3, so no floating-point rounding can bite.
  const long target = 12 * n - 3;
  long s = static_cast<long>(std::sqrt(static_cast<double>(target)));
  while (s * s > target) --s;
  while ((s + 1) * (s + 1) <= target) ++s;
  // s = floor(sqrt(target)); 3n - sqrt(target) has floor 3n - s - 1 unless
  // target is a perfect square.
  return s * s == target ? 3 * n - s : 3 * n - s - 1;
}

std::optional<KnownContactValue> known_contact_values_3d(long n) {
  static constexpr std::array<long, 8> table = {1, 3, 6, 9, 12, 15, 18, 21};
  if (n < 2 || n > 9) return std::nullopt;
  return KnownContactValue{table[static_cast<std::size_t>(n - 2)], n <= 5};
}

long max_contact_number(long n, int d) {
  if (n < 2) return 0;
  if (d == 2) return max_contact_number_2d(n);
  if (d == 3) {
    if (auto v = known_contact_values_3d(n)) return v->value;
    throw ParameterError("c(" + std::to_string(n) +
                         ",3) is not tabulated (known for 2 <= n <= 9)");
  }
  throw ParameterError("maximal contact numbers are tabulated only for d = 2, 3");
}

}  // namespace aodep
