#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "aodep/error.hpp"

namespace aodep {

/// Default relative overlap tolerance accepted by admissibility checks.
inline constexpr double kDefaultOverlapTolerance = 1e-9;

/// Relative contact tolerances: analytic configurations and annealer output.
inline constexpr double kExactContactTolerance = 1e-6;
inline constexpr double kAnnealContactTolerance = 1e-2;

/// Physical parameters of the two-size model.
struct ModelParams {
  int d = 2;
  double r_sphere = 1.0;
  double r_particle = 0.1;
  double z_dot = 0.0;
  double sigma_sphere = 1.0;
  double sigma_particle = 1.0;

  /// Size ratio r_particle / r_sphere.
  double rho() const noexcept { return r_particle / r_sphere; }

  /// Radius of the depletion ball around a sphere center, r_sphere + r_particle.
  double r_depletion() const noexcept { return r_sphere + r_particle; }

  /// Throws ParameterError when the parameters leave the model's domain.
  void validate() const;
};

/// An ordered set of points in R^d stored as one flat array. Point i occupies
/// the half-open range [i*d, (i+1)*d); the coordinate index varies fastest.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim, std::size_t count = 0)
      : dim_(dim), data_(static_cast<std::size_t>(dim) * count, 0.0) {}
  PointSet(int dim, std::vector<double> flat);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept {
    return dim_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(dim_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> operator[](std::size_t i) noexcept {
    return {data_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> p);
  void clear() noexcept { data_.clear(); }

  std::span<const double> flat() const noexcept { return data_; }
  std::span<double> flat() noexcept { return data_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

/// Hard-sphere centers and particle centers sharing one dimension.
struct Configuration {
  PointSet spheres;
  PointSet particles;

  Configuration() = default;
  explicit Configuration(int d) : spheres(d), particles(d) {}
  Configuration(PointSet s, PointSet p)
      : spheres(std::move(s)), particles(std::move(p)) {}

  int dim() const noexcept { return spheres.dim(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline double distance(std::span<const double> a,
                       std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

inline double norm(std::span<const double> a) noexcept {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// Throws DimensionError unless every point set in cfg has dimension params.d.
void require_dimension(const Configuration& cfg, const ModelParams& params);
void require_dimension(const PointSet& points, const ModelParams& params);

/// True iff sphere gaps are >= 2 r_sphere (1 - tol) and sphere-particle gaps
/// are >= r_depletion (1 - tol).
bool is_admissible(const Configuration& cfg, const ModelParams& params,
                   double tol = kDefaultOverlapTolerance);

/// Sphere-only variant of is_admissible.
bool is_admissible(const PointSet& spheres, const ModelParams& params,
                   double tol = kDefaultOverlapTolerance);

}  // namespace aodep
