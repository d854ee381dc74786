#include "blendnet/thermo/hsp.hpp"

#include <fstream>

#include "blendnet/error.hpp"
#include "blendnet/text.hpp"

namespace blendnet::thermo {

std::vector<HspRecord> load_hsp_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::MissingFile, "cannot open HSP table " + path.string());
  }

  const std::string expected = "polymer_name,delta,density,molar_mass_repeat";
  std::string line;
  std::size_t row = 0;
  bool saw_header = false;
  std::vector<HspRecord> table;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (!saw_header) {
      if (stripped != expected) {
        throw Error(Errc::BadHeader, "HSP table header must be '" + expected + "'");
      }
      saw_header = true;
      continue;
    }

    const std::vector<std::string_view> fields = split_csv_line(stripped);
    if (fields.size() != 4) {
      throw Error(Errc::BadRow, "row " + std::to_string(row) + ": expected 4 fields, got " +
                                    std::to_string(fields.size()));
    }
    HspRecord r;
    r.polymer_name = std::string(trim(fields[0]));
    if (r.polymer_name.empty()) {
      throw Error(Errc::BadRow, "row " + std::to_string(row) + ": empty polymer name");
    }
    if (!parse_double(trim(fields[1]), r.delta) || !(r.delta > 0.0)) {
      throw Error(Errc::BadRow,
                  "row " + std::to_string(row) + ": delta must be a positive number");
    }
    for (int k = 2; k <= 3; ++k) {
      const std::string_view cell = trim(fields[static_cast<std::size_t>(k)]);
      if (cell.empty()) continue;
      double value = 0.0;
      if (!parse_double(cell, value) || !(value > 0.0)) {
        throw Error(Errc::BadRow, "row " + std::to_string(row) + ": field " + std::to_string(k + 1) +
                                      " must be a positive number or empty");
      }
      (k == 2 ? r.density : r.molar_mass_repeat) = value;
    }
    table.push_back(std::move(r));
  }
  if (!saw_header) {
    throw Error(Errc::BadHeader, "HSP table has no header row");
  }
  return table;
}

const HspRecord& find_record(const std::vector<HspRecord>& table, const std::string& name) {
  for (const HspRecord& r : table) {
    if (r.polymer_name == name) return r;
  }
  throw Error(Errc::MissingField, "polymer '" + name + "' is not in the table");
}

double chi_from_hsp(double v, double t, double d1, double d2, GasConstantUnits units) {
  if (!(v > 0.0) || !(t > 0.0)) {
    throw Error(Errc::DomainError, "segment volume and temperature must be positive");
  }
  const double r = units == GasConstantUnits::Calorie ? kGasConstantCal : kGasConstantSi;
  const double dd = d1 - d2;
  return v * dd * dd / (r * t);
}

double schneier_heat_of_mixing(const HspRecord& a, const HspRecord& b, double fraction_a) {
  if (!a.density || !a.molar_mass_repeat || !b.density || !b.molar_mass_repeat) {
    throw Error(Errc::MissingField,
                "heat of mixing needs density and molar mass for both polymers");
  }
  if (!(fraction_a >= 0.0) || !(fraction_a <= 1.0)) {
    throw Error(Errc::DomainError, "fraction must lie in [0, 1]");
  }
  const double x1 = fraction_a;
  const double x2 = 1.0 - fraction_a;
  const double m1r1 = *a.molar_mass_repeat * *a.density;
  const double m2r2 = *b.molar_mass_repeat * *b.density;
  const double dd = a.delta - b.delta;
  const double share = x2 / (x1 * m1r1 + x2 * m2r2);
  return x1 * m1r1 * dd * dd * share * share;
}

HspVerdict hsp_classify(const HspRecord& a, const HspRecord& b, double fraction_a,
                        double threshold) {
  if (!(threshold > 0.0)) {
    throw Error(Errc::DomainError, "threshold must be positive");
  }
  HspVerdict verdict;
  verdict.heat_of_mixing = schneier_heat_of_mixing(a, b, fraction_a);
  verdict.label = verdict.heat_of_mixing <= threshold ? data::Label::Compatible
                                                      : data::Label::Incompatible;
  return verdict;
}

}  // namespace blendnet::thermo
