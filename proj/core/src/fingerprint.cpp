#include "blendnet/chem/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "blendnet/error.hpp"
#include "blendnet/hash.hpp"

namespace blendnet::chem {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_same_width(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) {
    throw Error(Errc::WidthMismatch, std::to_string(a.width()) + " vs " +
                                         std::to_string(b.width()) + " bits");
  }
}

}  // namespace

Fingerprint::Fingerprint(int width, int radius)
    : width_(width), radius_(radius), words_((width + 63) / 64, 0) {
  if (!power_of_two(width)) {
    throw Error(Errc::DomainError, "fingerprint width must be a power of two");
  }
  if (radius < 0) {
    throw Error(Errc::DomainError, "fingerprint radius must be >= 0");
  }
}

void Fingerprint::set(int bit) { words_[bit >> 6] |= 1ULL << (bit & 63); }

bool Fingerprint::test(int bit) const {
  return (words_[bit >> 6] >> (bit & 63)) & 1ULL;
}

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::set_bits() const {
  std::vector<int> bits;
  for (int i = 0; i < width_; ++i) {
    if (test(i)) bits.push_back(i);
  }
  return bits;
}

std::vector<std::uint64_t> atom_invariants(const Molecule& m) {
  std::vector<std::uint64_t> codes;
  codes.reserve(m.atoms.size());
  for (int i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atoms[i];
    Fnv1a64 h;
    h.add_u32(static_cast<std::uint32_t>(element_code(a.element)))
        .add_u32(static_cast<std::uint32_t>(a.degree))
        .add_i32(a.formal_charge)
        .add_u32(static_cast<std::uint32_t>(m.hydrogen_count(i)))
        .add_u8(a.ring_member ? 1 : 0)
        .add_u8(a.aromatic ? 1 : 0);
    codes.push_back(h.digest());
  }
  return codes;
}

Fingerprint ecfp_fingerprint_explain(const Molecule& m, int radius, int width,
                                     std::vector<BitOrigin>& origins) {
  Fingerprint fp(width, radius);
  origins.clear();

  std::vector<std::uint64_t> codes = atom_invariants(m);
  const auto incident = m.incident_bonds();

  auto emit = [&](int atom, int round, std::uint64_t id) {
    const int bit = static_cast<int>(id % static_cast<std::uint64_t>(width));
    fp.set(bit);
    origins.push_back({bit, atom, round, id});
  };

  for (int a = 0; a < m.atom_count(); ++a) emit(a, 0, codes[a]);

  for (int round = 1; round <= radius; ++round) {
    std::vector<std::uint64_t> next(codes.size());
    for (int a = 0; a < m.atom_count(); ++a) {
      // (bond order, neighbor code) pairs, sorted for order independence.
      std::vector<std::pair<std::uint8_t, std::uint64_t>> env;
      env.reserve(incident[a].size());
      for (int bi : incident[a]) {
        const Bond& b = m.bonds[bi];
        env.emplace_back(static_cast<std::uint8_t>(b.order), codes[b.other(a)]);
      }
      std::sort(env.begin(), env.end());

      Fnv1a64 h;
      h.add_u64(codes[a]);
      for (const auto& [order, code] : env) h.add_u8(order).add_u64(code);
      next[a] = h.digest();
      emit(a, round, next[a]);
    }
    codes = std::move(next);
  }
  return fp;
}

Fingerprint ecfp_fingerprint(const Molecule& m, int radius, int width) {
  std::vector<BitOrigin> origins;
  return ecfp_fingerprint_explain(m, radius, width, origins);
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  require_same_width(a, b);
  int inter = 0;
  int uni = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    inter += std::popcount(a.words()[i] & b.words()[i]);
    uni += std::popcount(a.words()[i] | b.words()[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

PairOrder canonical_pair_order(const Fingerprint& a, const Fingerprint& b) {
  require_same_width(a, b);
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    const std::uint64_t wa = a.words()[i];
    const std::uint64_t wb = b.words()[i];
    if (wa == wb) continue;
    // Words store bit k of the vector at position (k mod 64) from the low
    // end, so the first differing vector bit is the lowest set bit of the
    // xor. The vector with 0 there sorts first.
    const int bit = std::countr_zero(wa ^ wb);
    return ((wb >> bit) & 1ULL) ? PairOrder::Keep : PairOrder::Swap;
  }
  return PairOrder::Keep;
}

}  // namespace blendnet::chem
