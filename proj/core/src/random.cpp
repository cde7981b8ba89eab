#include "aodep/random.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

namespace aodep {

double CounterRng::normal() {
  // Phi^{-1}(p) = -sqrt(2) erfc^{-1}(2p); erfc_inv keeps full relative
  // accuracy in both tails. Evaluated in double, not long double.
  using Policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform(), Policy());
}

}  // namespace aodep
