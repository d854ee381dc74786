#include "blendnet/data/vectorize.hpp"

#include "blendnet/chem/smiles.hpp"

namespace blendnet::data {

ModelInput vectorize(const BlendEntry& entry, double lambda,
                     const FingerprintParams& fp) {
  const chem::Molecule a = chem::parse_smiles(entry.smiles_a);
  const chem::Molecule b = chem::parse_smiles(entry.smiles_b);
  chem::Fingerprint fa = chem::ecfp_fingerprint(a, fp.radius, fp.width);
  chem::Fingerprint fb = chem::ecfp_fingerprint(b, fp.radius, fp.width);

  // Complementing twice snaps the fraction to the nearest value whose
  // complement round-trips exactly (1 - (1 - x) moves x by at most one ulp
  // and is idempotent), so vectorize(A,B,x) == vectorize(B,A,1-x) holds
  // bit-exactly for every input fraction, not just round-trip-friendly ones.
  const double stable = 1.0 - (1.0 - entry.fraction_a);

  ModelInput input;
  if (chem::canonical_pair_order(fa, fb) == chem::PairOrder::Swap) {
    input.fp_first = std::move(fb);
    input.fp_second = std::move(fa);
    input.composition = 1.0 - entry.fraction_a;
  } else {
    input.composition = stable;
    if (fa == fb) {
      // Identical structure vectors leave no first polymer to point at;
      // fold the fraction so the swap identity stays exact here too.
      input.composition = std::min(stable, 1.0 - stable);
    }
    input.fp_first = std::move(fa);
    input.fp_second = std::move(fb);
  }
  input.target = entry.label == Label::Incompatible ? lambda : 0.0;
  return input;
}

std::vector<ModelInput> vectorize_all(const std::vector<BlendEntry>& entries,
                                      double lambda, const FingerprintParams& fp) {
  std::vector<ModelInput> out;
  out.reserve(entries.size());
  for (const BlendEntry& e : entries) out.push_back(vectorize(e, lambda, fp));
  return out;
}

}  // namespace blendnet::data
