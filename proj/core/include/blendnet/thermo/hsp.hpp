#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blendnet/data/dataset.hpp"

namespace blendnet::thermo {

// Solubility-parameter record for one polymer. delta is the Hildebrand
// parameter in (cal/cm^3)^(1/2); density (g/cm^3) and the repeat-unit
// molar mass (g/mol) are only needed for the heat-of-mixing classifier.
struct HspRecord {
  std::string polymer_name;
  double delta = 0.0;
  std::optional<double> density;
  std::optional<double> molar_mass_repeat;
};

// CSV `polymer_name,delta,density,molar_mass_repeat`; empty density or
// molar mass cells stay unset, '#' lines are comments.
std::vector<HspRecord> load_hsp_table(const std::filesystem::path& path);

// Finds a record by exact name.
const HspRecord& find_record(const std::vector<HspRecord>& table, const std::string& name);

enum class GasConstantUnits {
  Calorie,  // R = 1.98720 cal/(mol K), matches (cal/cm^3)^(1/2) deltas
  Si,       // R = 8.31446 J/(mol K), for deltas in MPa^(1/2) and v in m^3
};

inline constexpr double kGasConstantCal = 1.98720;
inline constexpr double kGasConstantSi = 8.31446;

// Interaction parameter from solubility parameters:
//   chi12 = v (d1 - d2)^2 / (R t)
// with v the segment volume and t the temperature.
double chi_from_hsp(double v, double t, double d1, double d2,
                    GasConstantUnits units = GasConstantUnits::Calorie);

// Schneier's heat of mixing for a binary blend at weight fraction x of
// polymer a (B. Schneier, J. Appl. Polym. Sci. 17, 3175 (1973)):
//   dH_m = x M_a rho_a (d_a - d_b)^2 * [ (1-x) / (x M_a rho_a + (1-x) M_b rho_b) ]^2
// in cal/mol for the unit conventions above.
double schneier_heat_of_mixing(const HspRecord& a, const HspRecord& b, double fraction_a);

struct HspVerdict {
  double heat_of_mixing = 0.0;  // cal/mol
  data::Label label = data::Label::Compatible;
};

inline constexpr double kDefaultHeatThreshold = 0.010;  // cal/mol

// Compatible iff the Schneier heat of mixing stays at or below the
// threshold. Both records must carry density and molar mass.
HspVerdict hsp_classify(const HspRecord& a, const HspRecord& b, double fraction_a,
                        double threshold = kDefaultHeatThreshold);

}  // namespace blendnet::thermo
