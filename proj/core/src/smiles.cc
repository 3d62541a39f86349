//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "molxfer/molgraph.h"

namespace molxfer {
namespace {
// Two-letter symbols of real elements that may appear inside brackets. Used
// only to tell "unsupported element" apart from "aromatic second atom".
constexpr std::string_view kTwoLetterElements[] = {
  "He", "Li", "Be", "Ne", "Na", "Mg", "Al", "Si", "Cl", "Ar", "Ca", "Sc",
  "Ti", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se",
  "Br", "Kr", "Rb", "Sr", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
  "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
  "Ta", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At",
  "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "Np", "Pu", "Am", "Cm", "Bk", "Cf",
  "Es", "Fm", "Md", "No", "Lr",
};

bool is_two_letter_element(std::string_view sym) {
  return std::find(std::begin(kTwoLetterElements), std::end(kTwoLetterElements),
                   sym)
         != std::end(kTwoLetterElements);
}

std::optional<Element> aromatic_element(char c) {
  switch (c) {
  case 'b':
    return Element::kB;
  case 'c':
    return Element::kC;
  case 'n':
    return Element::kN;
  case 'o':
    return Element::kO;
  case 'p':
    return Element::kP;
  case 's':
    return Element::kS;
  default:
    return std::nullopt;
  }
}

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  MolecularGraph parse() {
    if (text_.empty())
      fail(SmilesErrorKind::kSyntax, "empty SMILES");

    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(') {
        if (prev_ < 0 || pending_)
          fail(SmilesErrorKind::kSyntax, "branch must follow an atom");
        branch_stack_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branch_stack_.empty())
          fail(SmilesErrorKind::kUnbalancedParenthesis, "unmatched ')'");
        if (pending_)
          fail(SmilesErrorKind::kSyntax, "bond symbol before ')'");
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
                 || c == '\\') {
        if (pending_)
          fail(SmilesErrorKind::kSyntax, "two consecutive bond symbols");
        if (prev_ < 0)
          fail(SmilesErrorKind::kSyntax, "bond symbol must follow an atom");
        pending_ = bond_from_symbol(c);
        ++pos_;
      } else if (c == '.') {
        fail(SmilesErrorKind::kMultiFragment,
             "dot-disconnected SMILES are not supported");
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        ring_closure();
      } else if (c == '[') {
        add_atom(bracket_atom());
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        add_atom(organic_atom());
      } else {
        fail(SmilesErrorKind::kSyntax,
             std::string("unexpected character '") + c + "'");
      }
    }

    if (!branch_stack_.empty())
      fail(SmilesErrorKind::kUnbalancedParenthesis, "unclosed '('");
    if (!open_rings_.empty())
      fail(SmilesErrorKind::kUnclosedRing,
           "ring bond " + std::to_string(open_rings_.begin()->first)
               + " is never closed");
    if (pending_)
      fail(SmilesErrorKind::kSyntax, "dangling bond symbol");

    return MolecularGraph::assemble(std::move(atoms_), std::move(bonds_),
                                    std::string(text_));
  }

private:
  [[noreturn]] void fail(SmilesErrorKind kind, const std::string &msg) const {
    throw SmilesError(kind, std::string(to_string(kind)) + ": " + msg
                                + " at position " + std::to_string(pos_)
                                + " in '" + std::string(text_) + "'");
  }

  static BondOrder bond_from_symbol(char c) {
    switch (c) {
    case '=':
      return BondOrder::kDouble;
    case '#':
      return BondOrder::kTriple;
    case ':':
      return BondOrder::kAromatic;
    default:
      return BondOrder::kSingle;
    }
  }

  BondOrder default_order(int a, int b) const {
    return (atoms_[a].is_aromatic && atoms_[b].is_aromatic)
               ? BondOrder::kAromatic
               : BondOrder::kSingle;
  }

  void add_atom(Atom atom) {
    atoms_.push_back(atom);
    int idx = static_cast<int>(atoms_.size()) - 1;
    if (prev_ >= 0) {
      BondOrder order = pending_.value_or(default_order(prev_, idx));
      bonds_.push_back({ prev_, idx, order, false });
    }
    pending_.reset();
    prev_ = idx;
  }

  Atom organic_atom() {
    Atom atom;
    char c = text_[pos_];
    if (auto arom = aromatic_element(c)) {
      atom.element = *arom;
      atom.is_aromatic = true;
      ++pos_;
      return atom;
    }
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      atom.element = Element::kCl;
      pos_ += 2;
      return atom;
    }
    if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      atom.element = Element::kBr;
      pos_ += 2;
      return atom;
    }
    auto elem = element_from_symbol(std::string_view(&text_[pos_], 1));
    if (!elem)
      fail(SmilesErrorKind::kUnsupportedElement,
           std::string("element '") + c + "' outside the supported set");
    atom.element = *elem;
    ++pos_;
    return atom;
  }

  int read_int() {
    int value = 0;
    bool any = false;
    while (pos_ < text_.size()
           && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
      any = true;
    }
    return any ? value : -1;
  }

  Atom bracket_atom() {
    std::size_t start = pos_;
    ++pos_;  // '['
    auto at_end = [&] { return pos_ >= text_.size(); };
    if (at_end())
      fail(SmilesErrorKind::kSyntax, "unterminated bracket atom");

    read_int();  // isotope, ignored

    Atom atom;
    if (at_end())
      fail(SmilesErrorKind::kSyntax, "unterminated bracket atom");
    char c = text_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string_view two =
          pos_ + 1 < text_.size() ? text_.substr(pos_, 2) : std::string_view();
      if (two == "se" || two == "as" || two == "te")
        fail(SmilesErrorKind::kUnsupportedElement,
             "aromatic '" + std::string(two) + "' outside the supported set");
      auto arom = aromatic_element(c);
      if (!arom)
        fail(SmilesErrorKind::kSyntax,
             std::string("bad aromatic symbol '") + c + "'");
      atom.element = *arom;
      atom.is_aromatic = true;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        std::string two = sym + text_[pos_ + 1];
        if (is_two_letter_element(two))
          sym = two;
      }
      pos_ += sym.size();
      auto elem = element_from_symbol(sym);
      if (!elem)
        fail(SmilesErrorKind::kUnsupportedElement,
             "element '" + sym + "' outside the supported set");
      atom.element = *elem;
    } else {
      fail(SmilesErrorKind::kSyntax, "bracket atom without element symbol");
    }

    // Chirality: @, @@, @TH1, @AL2, @SP3, @TB10, @OH25.
    while (!at_end() && text_[pos_] == '@') {
      ++pos_;
      std::string_view cls =
          pos_ + 2 <= text_.size() ? text_.substr(pos_, 2) : std::string_view();
      if (cls == "TH" || cls == "AL" || cls == "SP" || cls == "TB"
          || cls == "OH") {
        pos_ += 2;
        read_int();
      }
    }

    int h = 0;
    if (!at_end() && text_[pos_] == 'H') {
      ++pos_;
      int count = read_int();
      h = count < 0 ? 1 : count;
    }
    atom.explicit_h = h;

    int charge = 0;
    while (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      int sign = text_[pos_] == '+' ? 1 : -1;
      ++pos_;
      int mag = read_int();
      charge += sign * (mag < 0 ? 1 : mag);
    }
    atom.formal_charge = charge;

    if (!at_end() && text_[pos_] == ':') {  // atom class
      ++pos_;
      if (read_int() < 0)
        fail(SmilesErrorKind::kSyntax, "atom class without number");
    }
    if (at_end() || text_[pos_] != ']') {
      pos_ = start;
      fail(SmilesErrorKind::kSyntax, "malformed bracket atom");
    }
    ++pos_;
    return atom;
  }

  void ring_closure() {
    if (prev_ < 0)
      fail(SmilesErrorKind::kSyntax, "ring bond must follow an atom");
    int label;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size()
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        fail(SmilesErrorKind::kSyntax, "'%' must be followed by two digits");
      label = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      label = text_[pos_] - '0';
      ++pos_;
    }

    auto it = open_rings_.find(label);
    if (it == open_rings_.end()) {
      open_rings_[label] = { prev_, pending_ };
      pending_.reset();
      return;
    }

    auto [other, open_order] = it->second;
    open_rings_.erase(it);
    if (other == prev_)
      fail(SmilesErrorKind::kSyntax, "ring bond closes on the same atom");
    if (open_order && pending_ && *open_order != *pending_)
      fail(SmilesErrorKind::kSyntax, "conflicting ring bond symbols");
    BondOrder order = pending_ ? *pending_
                      : open_order ? *open_order
                                   : default_order(other, prev_);
    bonds_.push_back({ other, prev_, order, false });
    pending_.reset();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> branch_stack_;
  std::map<int, std::pair<int, std::optional<BondOrder>>> open_rings_;
  std::optional<BondOrder> pending_;
  int prev_ = -1;
};

std::string atom_token(const Atom &atom) {
  std::string sym(element_symbol(atom.element));
  if (atom.is_aromatic)
    sym[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[0])));
  if (!atom.is_bracket() && atom.formal_charge == 0)
    return sym;

  std::string out = "[" + sym;
  int h = atom.total_h();
  if (h > 0) {
    out += 'H';
    if (h > 1)
      out += std::to_string(h);
  }
  if (atom.formal_charge != 0) {
    out += atom.formal_charge > 0 ? '+' : '-';
    int mag = std::abs(atom.formal_charge);
    if (mag > 1)
      out += std::to_string(mag);
  }
  return out + "]";
}

std::string bond_token(const MolecularGraph &mol, const Bond &bond) {
  bool both_aromatic =
      mol.atom(bond.begin).is_aromatic && mol.atom(bond.end).is_aromatic;
  switch (bond.order) {
  case BondOrder::kSingle:
    return both_aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return both_aromatic ? "" : ":";
  }
  return "";
}

class SmilesWriter {
public:
  explicit SmilesWriter(const MolecularGraph &mol)
      : mol_(mol), visit_(mol.num_atoms(), -1), children_(mol.num_atoms()),
        ring_bonds_(mol.num_atoms()), is_tree_(mol.num_bonds(), 0),
        ring_label_(mol.num_bonds(), -1) { }

  std::string write(int root) {
    if (root < 0 || root >= mol_.num_atoms())
      throw ShapeError("to_smiles: root atom out of range");
    classify(root, -1);
    for (int b = 0; b < mol_.num_bonds(); ++b) {
      if (is_tree_[b])
        continue;
      const Bond &bond = mol_.bond(b);
      ring_bonds_[bond.begin].push_back(b);
      ring_bonds_[bond.end].push_back(b);
    }
    emit(root);
    return out_;
  }

private:
  void classify(int atom, int parent_bond) {
    visit_[atom] = counter_++;
    for (const Neighbor &nb: mol_.neighbors(atom)) {
      if (nb.bond == parent_bond || visit_[nb.atom] >= 0)
        continue;
      is_tree_[nb.bond] = 1;
      children_[atom].push_back(nb);
      classify(nb.atom, nb.bond);
    }
  }

  int take_label() {
    int label = 1;
    while (std::find(used_labels_.begin(), used_labels_.end(), label)
           != used_labels_.end())
      ++label;
    used_labels_.push_back(label);
    return label;
  }

  void emit_label(int label) {
    if (label < 10)
      out_ += static_cast<char>('0' + label);
    else
      out_ += "%" + std::to_string(label);
  }

  void emit(int atom) {
    out_ += atom_token(mol_.atom(atom));

    auto &rings = ring_bonds_[atom];
    std::sort(rings.begin(), rings.end());
    for (int b: rings) {
      const Bond &bond = mol_.bond(b);
      int other = bond.other(atom);
      if (visit_[other] > visit_[atom]) {
        int label = take_label();
        ring_label_[b] = label;
        out_ += bond_token(mol_, bond);
        emit_label(label);
      } else {
        int label = ring_label_[b];
        emit_label(label);
        used_labels_.erase(
            std::find(used_labels_.begin(), used_labels_.end(), label));
      }
    }

    const auto &kids = children_[atom];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      bool branch = k + 1 < kids.size();
      if (branch)
        out_ += '(';
      out_ += bond_token(mol_, mol_.bond(kids[k].bond));
      emit(kids[k].atom);
      if (branch)
        out_ += ')';
    }
  }

  const MolecularGraph &mol_;
  std::vector<int> visit_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> ring_bonds_;
  std::vector<char> is_tree_;
  std::vector<int> ring_label_;
  std::vector<int> used_labels_;
  std::string out_;
  int counter_ = 0;
};
}  // namespace

MolecularGraph parse_smiles(std::string_view smiles) {
  return SmilesParser(smiles).parse();
}

std::string to_smiles(const MolecularGraph &mol, int root) {
  return SmilesWriter(mol).write(root);
}

}  // namespace molxfer
