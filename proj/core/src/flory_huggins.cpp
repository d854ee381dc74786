#include "blendnet/thermo/flory_huggins.hpp"

#include <cmath>

#include "blendnet/error.hpp"

namespace blendnet::thermo {

void FloryHugginsInput::validate() const {
  if (!(phi1 > 0.0) || !(phi1 < 1.0) || !(phi2 > 0.0) || !(phi2 < 1.0)) {
    throw Error(Errc::DomainError, "volume fractions must lie strictly inside (0, 1)");
  }
  if (std::abs(phi1 + phi2 - 1.0) > 1e-9) {
    throw Error(Errc::DomainError, "volume fractions must sum to 1");
  }
  if (n1 < 0.0 || n2 < 0.0) {
    throw Error(Errc::DomainError, "mole counts must be non-negative");
  }
}

double flory_huggins_dg(const FloryHugginsInput& input) {
  input.validate();
  return input.n1 * std::log(input.phi1) + input.n2 * std::log(input.phi2) +
         input.n1 * input.phi2 * input.chi12;
}

}  // namespace blendnet::thermo
