#include "blendnet/data/synthetic.hpp"

#include <set>
#include <utility>

#include "blendnet/chem/fingerprint.hpp"
#include "blendnet/chem/smiles.hpp"
#include "blendnet/error.hpp"
#include "blendnet/rng.hpp"
#include "blendnet/text.hpp"

namespace blendnet::data {

const std::vector<std::string>& default_unit_pool() {
  // Repeating units of familiar commodity polymers. The mix of plain
  // hydrocarbons, polar side groups, aromatics and halogens gives the
  // tanimoto rule a usable spread of similarities.
  static const std::vector<std::string> pool = {
      "*CC*",                    // polyethylene
      "*CC(C)*",                 // polypropylene
      "*CC(CC(C)C)*",            // poly(4-methyl-1-pentene)
      "*CC(c1ccccc1)*",          // polystyrene
      "*CC(Cl)*",                // poly(vinyl chloride)
      "*CC(F)*",                 // poly(vinyl fluoride)
      "*C(F)(F)C(F)(F)*",        // polytetrafluoroethylene
      "*CC(O)*",                 // poly(vinyl alcohol)
      "*CC(OC(C)=O)*",           // poly(vinyl acetate)
      "*CC(C)(C(=O)OC)*",        // poly(methyl methacrylate)
      "*CC(C(=O)OC)*",           // poly(methyl acrylate)
      "*CC(C#N)*",               // polyacrylonitrile
      "*CCO*",                   // poly(ethylene oxide)
      "*CC(C)O*",                // poly(propylene oxide)
      "*CC(c1ccc(C)cc1)*",       // poly(4-methylstyrene)
      "*CC(C(=O)O)*",            // poly(acrylic acid)
  };
  return pool;
}

bool synthetic_rule(double tanimoto_ab, double fraction_a, double t0, double alpha) {
  return tanimoto_ab > t0 - alpha * std::abs(fraction_a - 0.5);
}

std::vector<BlendEntry> gen_synthetic(const SyntheticSpec& spec) {
  const std::vector<std::string>& pool = spec.pool.empty() ? default_unit_pool() : spec.pool;

  // Parse and fingerprint the pool once up front; a bad unit is a caller
  // error, not a row to skip.
  std::vector<chem::Fingerprint> fps;
  fps.reserve(pool.size());
  std::set<std::string> distinct;
  for (const std::string& unit : pool) {
    chem::Molecule m = chem::parse_smiles(unit);
    fps.push_back(chem::ecfp_fingerprint(m, spec.fp.radius, spec.fp.width));
    distinct.insert(unit);
  }
  if (distinct.size() < 8) {
    throw Error(Errc::PoolTooSmall,
                "synthetic pool needs at least 8 distinct units, got " +
                    std::to_string(distinct.size()));
  }
  if (spec.n <= 0) {
    throw Error(Errc::EmptyResult, "synthetic entry count must be positive");
  }

  // Semicolon separator: source_id lives in a comma-separated CSV column.
  const std::string rule_tag = "synthetic:t0=" + format_double(spec.t0) +
                               ";alpha=" + format_double(spec.alpha);

  Rng rng(spec.seed);
  std::vector<BlendEntry> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int k = 0; k < spec.n; ++k) {
    std::size_t ia = rng.below(pool.size());
    std::size_t ib = rng.below(pool.size() - 1);
    if (ib >= ia) ++ib;  // distinct partners, uniform over the rest
    // Keep fractions off the exact endpoints so both components are present.
    double x = 0.05 + 0.90 * rng.real01();

    double t = chem::tanimoto(fps[ia], fps[ib]);
    BlendEntry e;
    e.smiles_a = pool[ia];
    e.smiles_b = pool[ib];
    e.fraction_a = x;
    e.label = synthetic_rule(t, x, spec.t0, spec.alpha) ? Label::Compatible
                                                        : Label::Incompatible;
    e.source_id = rule_tag;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace blendnet::data
