#include "blendnet/chem/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "blendnet/error.hpp"

namespace blendnet::chem {

namespace {

const std::unordered_map<std::string, int>& element_table() {
  static const std::unordered_map<std::string, int> table = {
      {"*", 0},  {"B", 5},  {"C", 6},  {"N", 7},   {"O", 8},  {"F", 9},
      {"P", 15}, {"S", 16}, {"Cl", 17}, {"Br", 35}, {"I", 53},
  };
  return table;
}

// Tarjan bridge finding; bonds not reported as bridges lie on a cycle.
std::vector<bool> cycle_bonds(const Molecule& m) {
  const int n = m.atom_count();
  const auto incident = m.incident_bonds();
  std::vector<bool> on_cycle(m.bonds.size(), false);
  std::vector<int> disc(n, -1);
  std::vector<int> low(n, 0);
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int v, int parent_bond) {
    disc[v] = low[v] = timer++;
    for (int bi : incident[v]) {
      if (bi == parent_bond) continue;
      int u = m.bonds[bi].other(v);
      if (disc[u] == -1) {
        dfs(u, bi);
        low[v] = std::min(low[v], low[u]);
        if (low[u] <= disc[v]) on_cycle[bi] = true;
      } else {
        low[v] = std::min(low[v], disc[u]);
        on_cycle[bi] = true;  // back edge
      }
    }
  };

  for (int v = 0; v < n; ++v) {
    if (disc[v] == -1) dfs(v, -1);
  }
  return on_cycle;
}

double bond_order_sum(const Molecule& m, int atom_index) {
  double sum = 0.0;
  for (const Bond& b : m.bonds) {
    if (b.a != atom_index && b.b != atom_index) continue;
    switch (b.order) {
      case BondOrder::Single: sum += 1.0; break;
      case BondOrder::Double: sum += 2.0; break;
      case BondOrder::Triple: sum += 3.0; break;
      case BondOrder::Aromatic: sum += 1.5; break;
    }
  }
  return sum;
}

}  // namespace

int element_code(const std::string& symbol) {
  auto it = element_table().find(symbol);
  return it == element_table().end() ? -1 : it->second;
}

int default_valence(const std::string& symbol) {
  if (symbol == "C") return 4;
  if (symbol == "N" || symbol == "P" || symbol == "B") return 3;
  if (symbol == "O" || symbol == "S") return 2;
  if (symbol == "F" || symbol == "Cl" || symbol == "Br" || symbol == "I") return 1;
  return -1;  // wildcard and anything exotic: no implicit hydrogens
}

std::vector<std::vector<int>> Molecule::incident_bonds() const {
  std::vector<std::vector<int>> incident(atoms.size());
  for (int i = 0; i < bond_count(); ++i) {
    incident[bonds[i].a].push_back(i);
    incident[bonds[i].b].push_back(i);
  }
  return incident;
}

int Molecule::hydrogen_count(int atom_index) const {
  const Atom& atom = atoms[atom_index];
  if (atom.explicit_h >= 0) return atom.explicit_h;
  if (atom.is_wildcard()) return 0;
  const int valence = default_valence(atom.element);
  if (valence < 0) return 0;
  const int h = static_cast<int>(std::lround(valence - bond_order_sum(*this, atom_index)));
  return std::max(0, h);
}

void refresh_derived_atom_fields(Molecule& m) {
  for (Atom& a : m.atoms) {
    a.degree = 0;
    a.ring_member = false;
  }
  for (const Bond& b : m.bonds) {
    ++m.atoms[b.a].degree;
    ++m.atoms[b.b].degree;
  }
  const std::vector<bool> on_cycle = cycle_bonds(m);
  for (int i = 0; i < m.bond_count(); ++i) {
    if (on_cycle[i]) {
      m.atoms[m.bonds[i].a].ring_member = true;
      m.atoms[m.bonds[i].b].ring_member = true;
    }
  }
}

Molecule delete_atoms(const Molecule& m, const std::vector<int>& victims) {
  std::vector<bool> dead(m.atoms.size(), false);
  for (int v : victims) {
    if (v < 0 || v >= m.atom_count()) {
      throw Error(Errc::IndexOutOfRange,
                  "atom index " + std::to_string(v) + " outside 0.." +
                      std::to_string(m.atom_count() - 1));
    }
    dead[v] = true;
  }

  Molecule out;
  out.source_text = m.source_text;
  std::vector<int> remap(m.atoms.size(), -1);
  for (int i = 0; i < m.atom_count(); ++i) {
    if (dead[i]) continue;
    remap[i] = out.atom_count();
    out.atoms.push_back(m.atoms[i]);
  }
  if (out.atoms.empty()) {
    throw Error(Errc::EmptyResult, "deleting all atoms leaves no molecule");
  }
  for (const Bond& b : m.bonds) {
    if (dead[b.a] || dead[b.b]) continue;
    out.bonds.push_back({remap[b.a], remap[b.b], b.order});
  }
  refresh_derived_atom_fields(out);
  return out;
}

}  // namespace blendnet::chem
