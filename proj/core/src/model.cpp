#include "aodep/model.hpp"

#include <sstream>
#include <string>

namespace aodep {

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw ParameterError(what); };
  if (d < 2) fail("d must be >= 2");
  if (!(r_sphere > 0.0)) fail("r_sphere must be > 0");
  if (!(r_particle >= 0.0)) fail("r_particle must be >= 0");
  if (!(r_particle < r_sphere))
    fail("rho = r_particle / r_sphere must lie in [0, 1)");
  if (!(z_dot >= 0.0)) fail("z_dot must be >= 0");
  if (!(sigma_sphere >= 0.0)) fail("sigma_sphere must be >= 0");
  if (!(sigma_particle >= 0.0)) fail("sigma_particle must be >= 0");
}

PointSet::PointSet(int dim, std::vector<double> flat)
    : dim_(dim), data_(std::move(flat)) {
  if (dim_ <= 0 || data_.size() % static_cast<std::size_t>(dim_) != 0)
    throw DimensionError("flat coordinate array is not a multiple of d");
}

void PointSet::push_back(std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(dim_))
    throw DimensionError("point dimension does not match point set");
  data_.insert(data_.end(), p.begin(), p.end());
}

void require_dimension(const PointSet& points, const ModelParams& params) {
  if (points.empty()) return;
  if (points.dim() != params.d) {
    std::ostringstream os;
    os << "point dimension " << points.dim() << " does not match d = "
       << params.d;
    throw DimensionError(os.str());
  }
}

void require_dimension(const Configuration& cfg, const ModelParams& params) {
  require_dimension(cfg.spheres, params);
  require_dimension(cfg.particles, params);
}

bool is_admissible(const PointSet& spheres, const ModelParams& params,
                   double tol) {
  require_dimension(spheres, params);
  const double min_ss = 2.0 * params.r_sphere * (1.0 - tol);
  const double min_ss2 = min_ss * min_ss;
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (std::size_t j = i + 1; j < spheres.size(); ++j)
      if (squared_distance(spheres[i], spheres[j]) < min_ss2) return false;
  return true;
}

bool is_admissible(const Configuration& cfg, const ModelParams& params,
                   double tol) {
  require_dimension(cfg, params);
  if (!is_admissible(cfg.spheres, params, tol)) return false;
  const double min_sp = params.r_depletion() * (1.0 - tol);
  const double min_sp2 = min_sp * min_sp;
  for (std::size_t i = 0; i < cfg.spheres.size(); ++i)
    for (std::size_t k = 0; k < cfg.particles.size(); ++k)
      if (squared_distance(cfg.spheres[i], cfg.particles[k]) < min_sp2)
        return false;
  return true;
}

}  // namespace aodep
