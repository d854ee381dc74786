#include "blendnet/chem/smiles.hpp"

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "blendnet/error.hpp"

namespace blendnet::chem {

namespace {

bool is_aromatic_organic(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

struct PendingRing {
  int atom;
  std::size_t offset;          // where the closure digit appeared
  int order;                   // explicit bond symbol before the digit, 0 = none
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run() {
    if (text_.empty()) throw ParseError(Errc::EmptyInput, 0, "empty SMILES");
    while (pos_ < text_.size()) step();

    if (!branch_stack_.empty()) {
      throw ParseError(Errc::UnclosedBranch, branch_stack_.back().second,
                       "branch never closed");
    }
    if (!open_rings_.empty()) {
      const auto& [num, pending] = *open_rings_.begin();
      throw ParseError(Errc::UnpairedRingClosure, pending.offset,
                       "ring closure " + std::to_string(num) + " never paired");
    }
    if (pending_bond_ != 0) {
      throw ParseError(Errc::BadToken, pending_bond_offset_, "dangling bond symbol");
    }
    if (molecule_.atoms.empty()) {
      throw ParseError(Errc::EmptyInput, 0, "no atoms in input");
    }

    refresh_derived_atom_fields(molecule_);
    molecule_.source_text = std::string(text_);
    return molecule_;
  }

 private:
  void step() {
    const char c = text_[pos_];
    if (c == '(') {
      if (prev_atom_ < 0) {
        throw ParseError(Errc::BadToken, pos_, "branch before any atom");
      }
      branch_stack_.emplace_back(prev_atom_, pos_);
      ++pos_;
    } else if (c == ')') {
      if (branch_stack_.empty()) {
        throw ParseError(Errc::UnclosedBranch, pos_, "unmatched branch close");
      }
      prev_atom_ = branch_stack_.back().first;
      branch_stack_.pop_back();
      ++pos_;
    } else if (c == '-' || c == '=' || c == '#') {
      if (pending_bond_ != 0) {
        throw ParseError(Errc::BadToken, pos_, "two bond symbols in a row");
      }
      pending_bond_ = c;
      pending_bond_offset_ = pos_;
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      ring_closure(c - '0', pos_);
      ++pos_;
    } else if (c == '%') {
      if (pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        throw ParseError(Errc::BadToken, pos_, "% needs two digits");
      }
      ring_closure((text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0'), pos_);
      pos_ += 3;
    } else if (c == '[') {
      bracket_atom();
    } else {
      organic_atom();
    }
  }

  void organic_atom() {
    const std::size_t at = pos_;
    const char c = text_[pos_];
    Atom atom;
    if (c == '*') {
      atom.element = "*";
      ++pos_;
    } else if (is_aromatic_organic(c)) {
      atom.element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      atom.aromatic = true;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string symbol(1, c);
      // Cl and Br are the only two-letter organic-subset symbols.
      if (pos_ + 1 < text_.size() &&
          ((c == 'C' && text_[pos_ + 1] == 'l') || (c == 'B' && text_[pos_ + 1] == 'r'))) {
        symbol += text_[pos_ + 1];
        pos_ += 2;
      } else {
        ++pos_;
      }
      if (element_code(symbol) <= 0) {
        throw ParseError(Errc::UnknownElement, at, "unsupported element '" + symbol + "'");
      }
      atom.element = symbol;
    } else {
      throw ParseError(Errc::UnknownElement, at,
                       std::string("unexpected character '") + c + "'");
    }
    add_atom(atom, at);
  }

  void bracket_atom() {
    const std::size_t at = pos_;
    ++pos_;  // consume '['
    Atom atom;

    if (pos_ >= text_.size()) throw ParseError(Errc::BadToken, at, "unterminated bracket");
    const char c = text_[pos_];
    if (c == '*') {
      atom.element = "*";
      ++pos_;
    } else if (is_aromatic_organic(c)) {
      atom.element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      atom.aromatic = true;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string symbol(1, c);
      if (pos_ + 1 < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_ + 1])) &&
          element_code(symbol + text_[pos_ + 1]) > 0) {
        symbol += text_[pos_ + 1];
      }
      if (element_code(symbol) <= 0) {
        throw ParseError(Errc::UnknownElement, pos_,
                         "unsupported element '" + symbol + "'");
      }
      atom.element = symbol;
      pos_ += symbol.size();
    } else {
      throw ParseError(Errc::UnknownElement, pos_,
                       std::string("unexpected bracket content '") + c + "'");
    }

    atom.explicit_h = 0;
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      atom.explicit_h = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        atom.explicit_h = text_[pos_] - '0';
        ++pos_;
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const int sign = text_[pos_] == '+' ? 1 : -1;
      const char symbol = text_[pos_];
      ++pos_;
      int magnitude = 1;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        magnitude = text_[pos_] - '0';
        ++pos_;
      } else {
        while (pos_ < text_.size() && text_[pos_] == symbol) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = sign * magnitude;
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') {
      throw ParseError(Errc::BadToken, pos_ < text_.size() ? pos_ : text_.size() - 1,
                       "expected ']'");
    }
    ++pos_;

    if (atom.is_wildcard() && (atom.formal_charge != 0 || atom.aromatic)) {
      throw ParseError(Errc::UnknownElement, at,
                       "attachment wildcard cannot be charged or aromatic");
    }
    add_atom(atom, at);
  }

  void add_atom(Atom atom, std::size_t at) {
    const int index = molecule_.atom_count();
    molecule_.atoms.push_back(std::move(atom));
    if (prev_atom_ >= 0) {
      add_bond(prev_atom_, index, take_pending_bond(), at);
    } else if (pending_bond_ != 0) {
      throw ParseError(Errc::BadToken, pending_bond_offset_, "bond before any atom");
    }
    prev_atom_ = index;
  }

  // order 0 = no explicit symbol: aromatic between two aromatic atoms,
  // otherwise single.
  void add_bond(int a, int b, int order, std::size_t at) {
    if (a == b) throw ParseError(Errc::BadToken, at, "self bond");
    for (const Bond& existing : molecule_.bonds) {
      if ((existing.a == a && existing.b == b) || (existing.a == b && existing.b == a)) {
        throw ParseError(Errc::BadToken, at, "duplicate bond between atoms");
      }
    }
    BondOrder bo;
    if (order == 0) {
      bo = (molecule_.atoms[a].aromatic && molecule_.atoms[b].aromatic)
               ? BondOrder::Aromatic
               : BondOrder::Single;
    } else if (order == '-') {
      bo = BondOrder::Single;
    } else if (order == '=') {
      bo = BondOrder::Double;
    } else {
      bo = BondOrder::Triple;
    }
    molecule_.bonds.push_back({a, b, bo});
  }

  int take_pending_bond() {
    const int b = pending_bond_;
    pending_bond_ = 0;
    return b;
  }

  void ring_closure(int number, std::size_t at) {
    if (prev_atom_ < 0) {
      throw ParseError(Errc::UnpairedRingClosure, at, "ring closure before any atom");
    }
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_.emplace(number, PendingRing{prev_atom_, at, take_pending_bond()});
      return;
    }
    const PendingRing open = it->second;
    open_rings_.erase(it);
    int order = take_pending_bond();
    if (order == 0) order = open.order;
    add_bond(open.atom, prev_atom_, order, at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule molecule_;
  int prev_atom_ = -1;
  int pending_bond_ = 0;
  std::size_t pending_bond_offset_ = 0;
  std::vector<std::pair<int, std::size_t>> branch_stack_;  // (atom, '(' offset)
  std::map<int, PendingRing> open_rings_;
};

}  // namespace

Molecule parse_smiles(std::string_view text) { return Parser(text).run(); }

}  // namespace blendnet::chem
