//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/validity/bounds.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "posekit/core/elements.hpp"

namespace posekit {

namespace {

BondOrder order_from_name(const std::string &name) {
  if (name == "single") return BondOrder::Single;
  if (name == "double") return BondOrder::Double;
  if (name == "triple") return BondOrder::Triple;
  if (name == "aromatic") return BondOrder::Aromatic;
  throw Error("unknown bond order '" + name + "'");
}

std::string order_name(BondOrder o) {
  switch (o) {
  case BondOrder::Single: return "single";
  case BondOrder::Double: return "double";
  case BondOrder::Triple: return "triple";
  case BondOrder::Aromatic: return "aromatic";
  }
  return "?";
}

std::string hyb_name(Hybridization h) {
  switch (h) {
  case Hybridization::Sp: return "sp";
  case Hybridization::Sp2: return "sp2";
  case Hybridization::Sp3: return "sp3";
  }
  return "?";
}

Hybridization hyb_from_name(const std::string &name) {
  if (name == "sp") return Hybridization::Sp;
  if (name == "sp2") return Hybridization::Sp2;
  if (name == "sp3") return Hybridization::Sp3;
  throw Error("unknown hybridization '" + name + "'");
}

struct IdealBond {
  const char *a, *b;
  BondOrder order;
  double length;  // Angstrom
};

// Standard organic ideal lengths (Allen et al. tabulations, rounded).
constexpr IdealBond kIdealBonds[] = {
    {"C", "C", BondOrder::Single, 1.54},   {"C", "C", BondOrder::Double, 1.34},
    {"C", "C", BondOrder::Triple, 1.20},   {"C", "C", BondOrder::Aromatic, 1.39},
    {"C", "N", BondOrder::Single, 1.47},   {"C", "N", BondOrder::Double, 1.28},
    {"C", "N", BondOrder::Triple, 1.16},   {"C", "N", BondOrder::Aromatic, 1.35},
    {"C", "O", BondOrder::Single, 1.43},   {"C", "O", BondOrder::Double, 1.21},
    {"C", "O", BondOrder::Aromatic, 1.36}, {"C", "S", BondOrder::Single, 1.82},
    {"C", "S", BondOrder::Double, 1.60},   {"C", "S", BondOrder::Aromatic, 1.71},
    {"C", "F", BondOrder::Single, 1.35},   {"C", "Cl", BondOrder::Single, 1.77},
    {"C", "Br", BondOrder::Single, 1.94},  {"C", "I", BondOrder::Single, 2.14},
    {"C", "P", BondOrder::Single, 1.84},   {"N", "N", BondOrder::Single, 1.45},
    {"N", "N", BondOrder::Double, 1.25},   {"N", "N", BondOrder::Aromatic, 1.35},
    {"N", "O", BondOrder::Single, 1.40},   {"N", "O", BondOrder::Double, 1.21},
    {"N", "S", BondOrder::Single, 1.63},   {"N", "P", BondOrder::Single, 1.68},
    {"O", "O", BondOrder::Single, 1.48},   {"O", "P", BondOrder::Single, 1.63},
    {"O", "P", BondOrder::Double, 1.48},   {"O", "S", BondOrder::Single, 1.57},
    {"O", "S", BondOrder::Double, 1.44},   {"S", "S", BondOrder::Single, 2.05},
};

double fallback_scale(BondOrder order) {
  switch (order) {
  case BondOrder::Single: return 1.00;
  case BondOrder::Aromatic: return 0.93;
  case BondOrder::Double: return 0.87;
  case BondOrder::Triple: return 0.78;
  }
  return 1.0;
}

}  // namespace

BoundsTable BoundsTable::standard() {
  BoundsTable t;
  for (const auto &b : kIdealBonds) {
    std::string x(b.a), y(b.b);
    if (x > y)
      std::swap(x, y);
    t.bond_lengths_[{x, y, b.order}] = b.length;
  }
  t.angles_[Hybridization::Sp] = 180.0;
  t.angles_[Hybridization::Sp2] = 120.0;
  t.angles_[Hybridization::Sp3] = 109.471;
  return t;
}

double BoundsTable::ideal_bond_length(const std::string &elem_a,
                                      const std::string &elem_b,
                                      BondOrder order) const {
  std::string x = elem_a, y = elem_b;
  if (x > y)
    std::swap(x, y);
  auto it = bond_lengths_.find({x, y, order});
  if (it != bond_lengths_.end())
    return it->second;
  const RadiusTable &radii = RadiusTable::standard();
  return fallback_scale(order) * (radii.covalent(elem_a) + radii.covalent(elem_b));
}

double BoundsTable::ideal_angle(Hybridization h) const { return angles_.at(h); }

void BoundsTable::load_csv(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ','))
      fields.push_back(f);
    try {
      if (fields.size() == 5 && fields[0] == "bond") {
        std::string a = normalize_element(fields[1]);
        std::string b = normalize_element(fields[2]);
        if (a > b)
          std::swap(a, b);
        bond_lengths_[{a, b, order_from_name(fields[3])}] = std::stod(fields[4]);
      } else if (fields.size() == 3 && fields[0] == "angle") {
        angles_[hyb_from_name(fields[1])] = std::stod(fields[2]);
      } else if (fields[0] == "bond" || fields[0] == "angle") {
        throw Error("wrong field count");
      } else if (lineno == 1) {
        continue;  // tolerate a header row
      } else {
        throw Error("unknown record type '" + fields[0] + "'");
      }
    } catch (const std::exception &e) {
      throw ParseError("bounds CSV: " + std::string(e.what()), lineno);
    }
  }
}

std::string BoundsTable::to_csv() const {
  std::ostringstream out;
  for (const auto &[key, length] : bond_lengths_)
    out << "bond," << std::get<0>(key) << ',' << std::get<1>(key) << ','
        << order_name(std::get<2>(key)) << ',' << length << '\n';
  for (const auto &[h, deg] : angles_)
    out << "angle," << hyb_name(h) << ',' << deg << '\n';
  return out.str();
}

Hybridization infer_hybridization(const SmallMolecule &mol, int atom_index) {
  int doubles = 0, triples = 0, aromatic = 0;
  for (const auto &b : mol.bonds) {
    if (b.a != atom_index && b.b != atom_index)
      continue;
    switch (b.order) {
    case BondOrder::Double: ++doubles; break;
    case BondOrder::Triple: ++triples; break;
    case BondOrder::Aromatic: ++aromatic; break;
    default: break;
    }
  }
  if (triples > 0 || doubles >= 2)
    return Hybridization::Sp;
  if (doubles > 0 || aromatic > 0)
    return Hybridization::Sp2;
  return Hybridization::Sp3;
}

}  // namespace posekit
