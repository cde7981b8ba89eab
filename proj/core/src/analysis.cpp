#include "aodep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aodep/geometry.hpp"

namespace aodep {

Histogram::Histogram(std::vector<double> e) : edges(std::move(e)) {
  if (edges.size() < 2) throw ParameterError("histogram needs at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw ParameterError("histogram edges must increase");
  counts.assign(edges.size() - 1, 0);
}

Histogram Histogram::uniform(double lo, double hi, double width) {
  if (!(width > 0.0) || !(hi > lo)) throw ParameterError("invalid histogram range");
  std::vector<double> e;
  const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));
  for (std::size_t k = 0; k <= bins; ++k) e.push_back(lo + width * static_cast<double>(k));
  return Histogram(std::move(e));
}

void Histogram::add(double value) {
  if (value < edges.front()) {
    ++underflow;
    return;
  }
  if (value >= edges.back()) {
    ++overflow;
    return;
  }
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  ++total;
}

Histogram Histogram::rebinned(const std::vector<double>& coarser) const {
  Histogram out(coarser);
  out.underflow = underflow;
  out.overflow = overflow;
  for (double e : coarser)
    if (!std::binary_search(edges.begin(), edges.end(), e))
      throw ParameterError("coarser edges must be a subset of the histogram edges");
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double left = edges[b];
    if (left < coarser.front()) {
      out.underflow += counts[b];
    } else if (left >= coarser.back()) {
      out.overflow += counts[b];
    } else {
      const auto it = std::upper_bound(coarser.begin(), coarser.end(), left);
      out.counts[static_cast<std::size_t>(it - coarser.begin()) - 1] += counts[b];
      out.total += counts[b];
    }
  }
  return out;
}

namespace {

void check_pair(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j) throw ParameterError("pair_distance_histogram requires i != j");
  if (i >= n || j >= n)
    throw ParameterError("sphere index out of range for pair_distance_histogram");
}

}  // namespace

Histogram pair_distance_histogram(std::span<const PointSet> stream, std::size_t i,
                                  std::size_t j, const std::vector<double>& edges) {
  if (stream.empty()) throw ParameterError("pair_distance_histogram: empty stream");
  Histogram h(edges);
  for (const auto& s : stream) {
    check_pair(s.size(), i, j);
    h.add(distance(s[i], s[j]));
  }
  return h;
}

Histogram pair_distance_histogram(std::span<const Snapshot> stream, std::size_t i,
                                  std::size_t j, const std::vector<double>& edges) {
  if (stream.empty()) throw ParameterError("pair_distance_histogram: empty stream");
  Histogram h(edges);
  for (const auto& s : stream) {
    check_pair(s.cfg.spheres.size(), i, j);
    h.add(distance(s.cfg.spheres[i], s.cfg.spheres[j]));
  }
  return h;
}

double default_bin_width(const ModelParams& params) {
  return (2.0 * params.r_depletion() - 2.0 * params.r_sphere) / 50.0;
}

double ks_statistic(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw ParameterError("ks_statistic: bin edges differ");
  if (a.total == 0 || b.total == 0) throw ParameterError("ks_statistic: empty histogram");
  double ca = 0.0, cb = 0.0, worst = 0.0;
  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  for (std::size_t k = 0; k < a.counts.size(); ++k) {
    ca += static_cast<double>(a.counts[k]) / na;
    cb += static_cast<double>(b.counts[k]) / nb;
    worst = std::max(worst, std::abs(ca - cb));
  }
  return worst;
}

double ks_critical_value(double alpha, double n1, double n2) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) * std::sqrt((n1 + n2) / (n1 * n2));
}

double integrated_autocorrelation_time(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) return 1.0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (series[t] - mean) * (series[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return 1.0;
  // Sum consecutive lag pairs while they stay positive.
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return std::max(tau, 1.0);
}

double effective_sample_size(std::span<const double> series) {
  if (series.empty()) return 0.0;
  return static_cast<double>(series.size()) / integrated_autocorrelation_time(series);
}

double modulus_of_continuity(const PointSet& path, double grid_step, double delta) {
  if (!(grid_step > 0.0)) throw ParameterError("grid step must be > 0");
  if (!(delta > grid_step))
    throw ParameterError("delta must exceed the path's grid resolution");
  // Grid pairs with |t - s| < delta are at most `window` cells apart.
  const auto window = static_cast<std::size_t>(std::ceil(delta / grid_step)) - 1;
  double worst2 = 0.0;
  for (std::size_t a = 0; a < path.size(); ++a)
    for (std::size_t b = a + 1; b < path.size() && b - a <= window; ++b)
      worst2 = std::max(worst2, squared_distance(path[a], path[b]));
  return std::sqrt(worst2);
}

std::vector<double> energy_trace(std::span<const PointSet> stream, const ModelParams& params) {
  std::vector<double> out;
  out.reserve(stream.size());
  for (const auto& s : stream) out.push_back(energy_pairwise(s, params));
  return out;
}

std::vector<double> energy_trace(std::span<const Snapshot> stream, const ModelParams& params) {
  std::vector<double> out;
  out.reserve(stream.size());
  for (const auto& s : stream) out.push_back(energy_pairwise(s.cfg.spheres, params));
  return out;
}

std::vector<double> running_minimum(std::span<const double> series) {
  std::vector<double> out;
  out.reserve(series.size());
  double m = INFINITY;
  for (double v : series) {
    m = std::min(m, v);
    out.push_back(m);
  }
  return out;
}

}  // namespace aodep
