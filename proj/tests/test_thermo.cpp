#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "blendnet/error.hpp"
#include "blendnet/thermo/flory_huggins.hpp"
#include "blendnet/thermo/hsp.hpp"

using namespace blendnet;
using namespace blendnet::thermo;

namespace {

namespace fs = std::filesystem;

fs::path temp_table(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

HspRecord record(const std::string& name, double delta, double density, double molar_mass) {
  HspRecord r;
  r.polymer_name = name;
  r.delta = delta;
  r.density = density;
  r.molar_mass_repeat = molar_mass;
  return r;
}

}  // namespace

TEST_CASE("mixing free energy matches the worked values") {
  FloryHugginsInput in;
  in.n1 = 1.0;
  in.n2 = 1.0;
  in.phi1 = 0.5;
  in.phi2 = 0.5;
  in.chi12 = 0.0;
  CHECK(flory_huggins_dg(in) == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-9));

  // 2 ln 0.6 + ln 0.4 + 2 * 0.4 * 0.5, evaluated independently
  in.n1 = 2.0;
  in.n2 = 1.0;
  in.phi1 = 0.6;
  in.phi2 = 0.4;
  in.chi12 = 0.5;
  CHECK(flory_huggins_dg(in) == doctest::Approx(-1.537941979406).epsilon(1e-6));
}

TEST_CASE("mixing free energy is linear and increasing in chi") {
  FloryHugginsInput in;
  in.n1 = 1.5;
  in.n2 = 0.5;
  in.phi1 = 0.3;
  in.phi2 = 0.7;

  in.chi12 = 0.0;
  const double base = flory_huggins_dg(in);
  in.chi12 = 1.0;
  const double raised = flory_huggins_dg(in);
  CHECK(raised - base == doctest::Approx(in.n1 * in.phi2).epsilon(1e-12));
  CHECK(raised > base);
}

TEST_CASE("the interaction term is asymmetric as written") {
  // The formula couples n1 with phi2; swapping both components changes the
  // interaction term from n1*phi2*chi to n2*phi1*chi.
  FloryHugginsInput fwd;
  fwd.n1 = 2.0;
  fwd.n2 = 1.0;
  fwd.phi1 = 0.6;
  fwd.phi2 = 0.4;
  fwd.chi12 = 0.5;

  FloryHugginsInput rev;
  rev.n1 = fwd.n2;
  rev.n2 = fwd.n1;
  rev.phi1 = fwd.phi2;
  rev.phi2 = fwd.phi1;
  rev.chi12 = fwd.chi12;

  const double gap = flory_huggins_dg(fwd) - flory_huggins_dg(rev);
  CHECK(gap == doctest::Approx(fwd.chi12 * (fwd.n1 * fwd.phi2 - fwd.n2 * fwd.phi1)).epsilon(1e-12));
  CHECK(flory_huggins_dg(fwd) != flory_huggins_dg(rev));
}

TEST_CASE("mixing free energy input validation") {
  FloryHugginsInput in;
  in.n1 = 1.0;
  in.n2 = 1.0;

  auto expect_domain_error = [](FloryHugginsInput bad) {
    try {
      flory_huggins_dg(bad);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DomainError);
    }
  };

  FloryHugginsInput bad = in;
  bad.phi1 = 0.0;
  bad.phi2 = 1.0;
  expect_domain_error(bad);

  bad = in;
  bad.phi1 = 1.2;
  bad.phi2 = -0.2;
  expect_domain_error(bad);

  bad = in;
  bad.phi1 = 0.4;
  bad.phi2 = 0.4;  // does not sum to 1
  expect_domain_error(bad);

  bad = in;
  bad.n1 = -1.0;
  expect_domain_error(bad);
}

TEST_CASE("interaction parameter from solubility parameters") {
  // 100 * 0.4^2 / (1.98720 * 298), evaluated independently
  CHECK(chi_from_hsp(100.0, 298.0, 9.4, 9.0) == doctest::Approx(0.027018556344).epsilon(1e-6));

  CHECK(chi_from_hsp(100.0, 298.0, 9.1, 9.1) == 0.0);

  // quadratic in the delta gap
  const double one = chi_from_hsp(80.0, 300.0, 9.0, 8.5);
  const double two = chi_from_hsp(80.0, 300.0, 9.0, 8.0);
  CHECK(two == doctest::Approx(4.0 * one).epsilon(1e-12));

  // never negative, independent of the sign of the gap
  CHECK(chi_from_hsp(80.0, 300.0, 8.5, 9.0) == doctest::Approx(one).epsilon(1e-15));
  CHECK(one > 0.0);

  // SI mode only swaps the gas constant
  const double cal = chi_from_hsp(1e-4, 298.0, 18.0, 16.0, GasConstantUnits::Calorie);
  const double si = chi_from_hsp(1e-4, 298.0, 18.0, 16.0, GasConstantUnits::Si);
  CHECK(cal / si == doctest::Approx(kGasConstantSi / kGasConstantCal).epsilon(1e-12));

  CHECK_THROWS_AS(chi_from_hsp(0.0, 298.0, 9.0, 8.0), Error);
  CHECK_THROWS_AS(chi_from_hsp(100.0, -5.0, 9.0, 8.0), Error);
}

TEST_CASE("gas constants carry the documented values") {
  CHECK(kGasConstantCal == 1.98720);
  CHECK(kGasConstantSi == 8.31446);
}

TEST_CASE("heat of mixing matches independently evaluated fixtures") {
  const HspRecord pvc = record("PVC", 9.5, 1.39, 62.5);
  const HspRecord ps = record("PS", 9.1, 1.05, 104.1);
  const HspRecord pe = record("PE", 7.9, 0.92, 28.1);
  const HspRecord pmma = record("PMMA", 9.3, 1.18, 100.1);

  CHECK(schneier_heat_of_mixing(pvc, ps, 0.5) ==
        doctest::Approx(0.000180582368212).epsilon(1e-9));
  CHECK(schneier_heat_of_mixing(pe, ps, 0.5) ==
        doctest::Approx(0.001018942218023).epsilon(1e-9));
  CHECK(schneier_heat_of_mixing(pvc, pmma, 0.3) ==
        doctest::Approx(0.000043196916778).epsilon(1e-9));

  // equal deltas mix with zero enthalpy no matter the other fields
  HspRecord pvc_like = record("X", 9.5, 1.05, 104.1);
  CHECK(schneier_heat_of_mixing(pvc, pvc_like, 0.4) == 0.0);

  // pure endpoints contribute nothing to mix
  CHECK(schneier_heat_of_mixing(pvc, ps, 0.0) == 0.0);
  CHECK(schneier_heat_of_mixing(pvc, ps, 1.0) == 0.0);
}

TEST_CASE("heat of mixing guards its inputs") {
  const HspRecord full = record("A", 9.0, 1.0, 50.0);
  HspRecord gap = full;
  gap.density.reset();

  try {
    schneier_heat_of_mixing(full, gap, 0.5);
    FAIL("expected MissingField");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingField);
  }

  try {
    schneier_heat_of_mixing(full, full, -0.1);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DomainError);
  }
}

TEST_CASE("classification is monotone in the delta gap and the threshold") {
  const HspRecord base = record("A", 9.0, 1.1, 60.0);

  // widening the gap never flips incompatible back to compatible
  double previous = -1.0;
  for (double db = 9.0; db <= 12.0; db += 0.25) {
    const HspRecord other = record("B", db, 1.0, 80.0);
    const HspVerdict v = hsp_classify(base, other, 0.5);
    CHECK(v.heat_of_mixing >= previous);
    previous = v.heat_of_mixing;
  }

  // raising the threshold never shrinks the compatible set
  const HspRecord other = record("B", 10.2, 1.0, 80.0);
  bool was_compatible = false;
  for (const double threshold : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const bool compatible =
        hsp_classify(base, other, 0.5, threshold).label == data::Label::Compatible;
    CHECK((compatible || !was_compatible));
    was_compatible = compatible;
  }

  // the default threshold sits at the documented 0.010 cal/mol
  const HspVerdict verdict = hsp_classify(base, base, 0.5);
  CHECK(verdict.heat_of_mixing == 0.0);
  CHECK(verdict.label == data::Label::Compatible);
  CHECK_THROWS_AS(hsp_classify(base, other, 0.5, 0.0), Error);
}

TEST_CASE("HSP tables load with comments and optional cells") {
  const fs::path path = temp_table("blendnet_hsp.csv",
                                   "# delta in (cal/cm^3)^(1/2), density g/cm^3, M g/mol\n"
                                   "polymer_name,delta,density,molar_mass_repeat\n"
                                   "polyethylene,7.9,0.92,28.1\n"
                                   "# mid-table comment\n"
                                   "polystyrene,9.1,,\n"
                                   "PVC,9.5,1.39,62.5\n");
  const std::vector<HspRecord> table = load_hsp_table(path);
  REQUIRE(table.size() == 3);
  CHECK(table[0].polymer_name == "polyethylene");
  CHECK(table[0].delta == 7.9);
  REQUIRE(table[0].density.has_value());
  CHECK(*table[0].density == 0.92);
  CHECK(!table[1].density.has_value());
  CHECK(!table[1].molar_mass_repeat.has_value());
  CHECK(table[2].polymer_name == "PVC");

  CHECK(find_record(table, "PVC").delta == 9.5);
  try {
    find_record(table, "nylon");
    FAIL("expected MissingField");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingField);
  }
}

TEST_CASE("HSP table loading rejects malformed input") {
  CHECK_THROWS_AS(load_hsp_table(fs::temp_directory_path() / "blendnet_no_table.csv"), Error);

  auto expect = [](const char* name, const std::string& body, Errc code) {
    try {
      load_hsp_table(temp_table(name, body));
      FAIL("expected error for ", name);
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  expect("blendnet_hsp_header.csv", "name,delta\nA,9.0\n", Errc::BadHeader);
  expect("blendnet_hsp_empty.csv", "# only a comment\n", Errc::BadHeader);
  expect("blendnet_hsp_fields.csv",
         "polymer_name,delta,density,molar_mass_repeat\nA,9.0,1.0\n", Errc::BadRow);
  expect("blendnet_hsp_delta.csv",
         "polymer_name,delta,density,molar_mass_repeat\nA,minus,1.0,50\n", Errc::BadRow);
  expect("blendnet_hsp_negative.csv",
         "polymer_name,delta,density,molar_mass_repeat\nA,9.0,-1.0,50\n", Errc::BadRow);
  expect("blendnet_hsp_noname.csv",
         "polymer_name,delta,density,molar_mass_repeat\n,9.0,1.0,50\n", Errc::BadRow);
}
