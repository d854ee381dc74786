#pragma once

#include <cstdint>
#include <vector>

#include "blendnet/chem/molecule.hpp"

namespace blendnet::chem {

// Fixed-width bit vector encoding hashed circular substructures.
class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(int width, int radius);

  int width() const { return width_; }
  int radius() const { return radius_; }

  void set(int bit);
  bool test(int bit) const;
  int popcount() const;

  // Bit positions in ascending order.
  std::vector<int> set_bits() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  int width_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

inline constexpr int kDefaultFingerprintWidth = 2048;
inline constexpr int kDefaultFingerprintRadius = 2;

// Initial per-atom environment codes: an FNV-1a hash of (element code,
// degree, formal charge, hydrogen count, ring membership, aromatic flag).
// Equal tuples give equal codes.
std::vector<std::uint64_t> atom_invariants(const Molecule& m);

// One hashed environment and where it came from, for the debug table.
struct BitOrigin {
  int bit = 0;
  int atom = 0;
  int radius = 0;
  std::uint64_t identifier = 0;
};

// Circular fingerprint: round 0 uses the atom invariants, each later round
// rehashes every atom code together with its sorted (bond order, neighbor
// code) pairs, and every identifier from every round sets bit
// (identifier mod width). Width must be a power of two.
Fingerprint ecfp_fingerprint(const Molecule& m, int radius = kDefaultFingerprintRadius,
                             int width = kDefaultFingerprintWidth);

// Same fingerprint plus the (atom, radius, identifier) -> bit table.
Fingerprint ecfp_fingerprint_explain(const Molecule& m, int radius, int width,
                                     std::vector<BitOrigin>& origins);

// |a AND b| / |a OR b|; 1.0 when both vectors are all-zero.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

enum class PairOrder { Keep, Swap };

// Canonical orientation of an unordered fingerprint pair: Swap iff b
// precedes a lexicographically (bit 0 first); ties keep.
PairOrder canonical_pair_order(const Fingerprint& a, const Fingerprint& b);

}  // namespace blendnet::chem
