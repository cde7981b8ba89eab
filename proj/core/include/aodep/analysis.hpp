#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aodep/dynamics.hpp"
#include "aodep/model.hpp"

namespace aodep {

/// Fixed-edge histogram. Values outside [edges.front(), edges.back()) are
/// tallied in `underflow` / `overflow` and excluded from `total`.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  Histogram() = default;
  explicit Histogram(std::vector<double> edges);

  /// Edges lo, lo + width, ... up to the first edge >= hi.
  static Histogram uniform(double lo, double hi, double width);

  std::size_t bins() const noexcept { return counts.size(); }
  void add(double value);

  /// Same data on coarser edges, which must be a subset of the current edges.
  Histogram rebinned(const std::vector<double>& coarser) const;
};

/// Histogram of |x_i - x_j| over a stream of sphere configurations.
Histogram pair_distance_histogram(std::span<const PointSet> stream, std::size_t i,
                                  std::size_t j, const std::vector<double>& edges);
Histogram pair_distance_histogram(std::span<const Snapshot> stream, std::size_t i,
                                  std::size_t j, const std::vector<double>& edges);

/// Default bin width (2 r_dep - 2 r_sphere) / 50.
double default_bin_width(const ModelParams& params);

/// Largest absolute difference of the normalised cumulative counts.
double ks_statistic(const Histogram& a, const Histogram& b);

/// Two-sample KS critical value sqrt(-ln(alpha/2)/2) sqrt((n1+n2)/(n1 n2)).
double ks_critical_value(double alpha, double n1, double n2);

/// Integrated autocorrelation time by Geyer's initial positive sequence
/// estimator; 1 for an uncorrelated series.
double integrated_autocorrelation_time(std::span<const double> series);

/// series.size() / integrated_autocorrelation_time(series).
double effective_sample_size(std::span<const double> series);

/// sup |f(t) - f(s)| over grid pairs with |t - s| < delta, for a path sampled
/// at spacing `grid_step`. Throws if delta does not exceed grid_step.
double modulus_of_continuity(const PointSet& path, double grid_step, double delta);

/// Pairwise energy of each configuration.
std::vector<double> energy_trace(std::span<const PointSet> stream, const ModelParams& params);
std::vector<double> energy_trace(std::span<const Snapshot> stream, const ModelParams& params);

std::vector<double> running_minimum(std::span<const double> series);

}  // namespace aodep
