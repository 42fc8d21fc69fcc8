//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/core/elements.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "posekit/core/types.hpp"

namespace posekit {

namespace {

struct ElementEntry {
  const char *symbol;
  double vdw;       // Bondi 1964; Mantina 2009 for main-group gaps.
  double covalent;  // Cordero 2008 (high-spin values for Mn/Fe/Co).
  bool metal;
};

// Transition metals absent from Bondi/Mantina carry a conservative 2.00 A
// vdW placeholder; their contact checks use covalent radii, so the
// placeholder only affects the 0.5-scaled volume overlap.
constexpr std::array<ElementEntry, 66> kElements{{
    {"H", 1.20, 0.31, false},  {"He", 1.40, 0.28, false},
    {"Li", 1.81, 1.28, true},  {"Be", 1.53, 0.96, true},
    {"B", 1.92, 0.84, false},  {"C", 1.70, 0.76, false},
    {"N", 1.55, 0.71, false},  {"O", 1.52, 0.66, false},
    {"F", 1.47, 0.57, false},  {"Ne", 1.54, 0.58, false},
    {"Na", 2.27, 1.66, true},  {"Mg", 1.73, 1.41, true},
    {"Al", 1.84, 1.21, true},  {"Si", 2.10, 1.11, false},
    {"P", 1.80, 1.07, false},  {"S", 1.80, 1.05, false},
    {"Cl", 1.75, 1.02, false}, {"Ar", 1.88, 1.06, false},
    {"K", 2.75, 2.03, true},   {"Ca", 2.31, 1.76, true},
    {"Sc", 2.00, 1.70, true},  {"Ti", 2.00, 1.60, true},
    {"V", 2.00, 1.53, true},   {"Cr", 2.00, 1.39, true},
    {"Mn", 2.00, 1.61, true},  {"Fe", 2.00, 1.52, true},
    {"Co", 2.00, 1.50, true},  {"Ni", 1.63, 1.24, true},
    {"Cu", 1.40, 1.32, true},  {"Zn", 1.39, 1.22, true},
    {"Ga", 1.87, 1.22, true},  {"Ge", 2.11, 1.20, false},
    {"As", 1.85, 1.19, false}, {"Se", 1.90, 1.20, false},
    {"Br", 1.85, 1.20, false}, {"Kr", 2.02, 1.16, false},
    {"Rb", 3.03, 2.20, true},  {"Sr", 2.49, 1.95, true},
    {"Y", 2.00, 1.90, true},   {"Zr", 2.00, 1.75, true},
    {"Nb", 2.00, 1.64, true},  {"Mo", 2.00, 1.54, true},
    {"Tc", 2.00, 1.47, true},  {"Ru", 2.00, 1.46, true},
    {"Rh", 2.00, 1.42, true},  {"Pd", 1.63, 1.39, true},
    {"Ag", 1.72, 1.45, true},  {"Cd", 1.58, 1.44, true},
    {"In", 1.93, 1.42, true},  {"Sn", 2.17, 1.39, true},
    {"Sb", 2.06, 1.39, false}, {"Te", 2.06, 1.38, false},
    {"I", 1.98, 1.39, false},  {"Xe", 2.16, 1.40, false},
    {"Cs", 3.43, 2.44, true},  {"Ba", 2.68, 2.15, true},
    {"La", 2.00, 2.07, true},  {"W", 2.00, 1.62, true},
    {"Re", 2.00, 1.51, true},  {"Os", 2.00, 1.44, true},
    {"Ir", 2.00, 1.41, true},  {"Pt", 1.75, 1.36, true},
    {"Au", 1.66, 1.36, true},  {"Hg", 1.55, 1.32, true},
    {"Tl", 1.96, 1.45, true},  {"Pb", 2.02, 1.46, true},
}};

const std::unordered_map<std::string, const ElementEntry *> &element_index() {
  static const auto *index = [] {
    auto *m = new std::unordered_map<std::string, const ElementEntry *>;
    for (const auto &e : kElements)
      (*m)[e.symbol] = &e;
    return m;
  }();
  return *index;
}

const ElementEntry *lookup(const std::string &symbol) {
  auto it = element_index().find(symbol);
  return it == element_index().end() ? nullptr : it->second;
}

}  // namespace

bool is_known_element(const std::string &symbol) {
  return lookup(symbol) != nullptr;
}

bool is_metal(const std::string &symbol) {
  const ElementEntry *e = lookup(symbol);
  return e != nullptr && e->metal;
}

std::string normalize_element(const std::string &symbol) {
  std::string s;
  for (char c : symbol)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(c);
  if (s.empty())
    throw Error("empty element symbol");
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (std::size_t i = 1; i < s.size(); ++i)
    s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  if (!is_known_element(s))
    throw Error("unknown element symbol '" + symbol + "'");
  return s;
}

const RadiusTable &RadiusTable::standard() {
  static const RadiusTable table;
  return table;
}

double RadiusTable::vdw(const std::string &element) const {
  const ElementEntry *e = lookup(element);
  if (e == nullptr)
    throw Error("no vdW radius for element '" + element + "'");
  return e->vdw;
}

double RadiusTable::covalent(const std::string &element) const {
  const ElementEntry *e = lookup(element);
  if (e == nullptr)
    throw Error("no covalent radius for element '" + element + "'");
  return e->covalent;
}

std::string RadiusTable::to_csv() const {
  std::ostringstream out;
  out << "element,vdw,covalent\n";
  for (const auto &e : kElements)
    out << e.symbol << ',' << e.vdw << ',' << e.covalent << '\n';
  return out.str();
}

}  // namespace posekit
