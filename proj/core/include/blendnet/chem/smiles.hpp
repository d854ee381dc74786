#pragma once

#include <string_view>

#include "blendnet/chem/molecule.hpp"

namespace blendnet::chem {

// Parses a SMILES subset into a molecular graph:
//   * organic-subset atoms B C N O P S F Cl Br I and the wildcard *
//   * aromatic lowercase b c n o p s
//   * bracket atoms [<symbol><Hn><charge>] (no isotopes, no chirality)
//   * bonds - = #, branches ( ), ring closures 0-9 and %nn
// A bond between two aromatic atoms with no explicit bond symbol is
// aromatic; everything else defaults to single. Throws ParseError with the
// character offset on malformed input.
Molecule parse_smiles(std::string_view text);

}  // namespace blendnet::chem
