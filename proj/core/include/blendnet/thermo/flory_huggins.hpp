#pragma once

namespace blendnet::thermo {

struct FloryHugginsInput {
  double n1 = 0.0;    // moles of component 1
  double n2 = 0.0;    // moles of component 2
  double phi1 = 0.5;  // volume fraction of component 1
  double phi2 = 0.5;  // volume fraction of component 2
  double chi12 = 0.0; // interaction parameter, dimensionless

  void validate() const;
};

// Mixing free energy over RT:
//   dG_M/RT = n1 ln(phi1) + n2 ln(phi2) + n1 phi2 chi12.
// Note the interaction term is written with n1 and phi2 specifically, so
// the literal formula is not symmetric under swapping the components.
double flory_huggins_dg(const FloryHugginsInput& input);

}  // namespace blendnet::thermo
