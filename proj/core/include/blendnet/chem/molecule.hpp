#pragma once

#include <string>
#include <vector>

namespace blendnet::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Atom {
  std::string element;    // symbol, or "*" for an attachment point
  bool aromatic = false;  // taken verbatim from lowercase / bracket notation
  int formal_charge = 0;
  int explicit_h = -1;    // bracket H count; -1 = unset (use valence rule)
  bool ring_member = false;
  int degree = 0;

  bool is_wildcard() const { return element == "*"; }
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::string source_text;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  // Indices of bonds incident to each atom, in bond order.
  std::vector<std::vector<int>> incident_bonds() const;

  // Hydrogen count an atom contributes: the bracket count when given,
  // otherwise the organic-subset valence rule (C:4 N:3 O:2 S:2 P:3 B:3
  // halogens:1) minus the bond-order sum, floored at zero. Wildcards carry
  // no hydrogens.
  int hydrogen_count(int atom_index) const;
};

// Atomic number used as the element code in hashes; wildcard maps to 0.
// Returns -1 for symbols outside the supported set.
int element_code(const std::string& symbol);

// Default valence for implicit-hydrogen filling; -1 if the element has none.
int default_valence(const std::string& symbol);

// Recomputes per-atom degree and ring membership from the bond list.
// Ring membership means the atom lies on some cycle (it touches a
// non-bridge bond).
void refresh_derived_atom_fields(Molecule& m);

// Returns a copy of `m` with the victim atoms and all incident bonds
// removed and the remaining atom indices compacted. Degrees and ring flags
// are recomputed for the surgered graph; notation-derived fields (aromatic
// flags, bracket H counts) are kept as-is.
Molecule delete_atoms(const Molecule& m, const std::vector<int>& victims);

}  // namespace blendnet::chem
