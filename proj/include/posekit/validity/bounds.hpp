//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_VALIDITY_BOUNDS_HPP_
#define POSEKIT_VALIDITY_BOUNDS_HPP_

#include <map>
#include <string>
#include <tuple>

#include "posekit/core/types.hpp"

namespace posekit {

enum class Hybridization { Sp, Sp2, Sp3 };

// Ideal-geometry bounds standing in for distance-geometry bounds matrices:
// bond-length bounds are tabulated ideal +/- 0.10 A (covalent-radius-sum
// fallback for pairs not in the table), angle bounds are the hybridization
// ideal +/- 10 degrees.
class BoundsTable {
public:
  static BoundsTable standard();

  // Ideal length for an (element pair, order); falls back to the scaled
  // covalent-radius sum when the pair is not tabulated.
  double ideal_bond_length(const std::string &elem_a, const std::string &elem_b,
                           BondOrder order) const;

  double bond_lower(const std::string &a, const std::string &b, BondOrder o) const {
    return ideal_bond_length(a, b, o) - kBondMargin;
  }
  double bond_upper(const std::string &a, const std::string &b, BondOrder o) const {
    return ideal_bond_length(a, b, o) + kBondMargin;
  }

  double ideal_angle(Hybridization h) const;
  double angle_lower(Hybridization h) const { return ideal_angle(h) - kAngleMargin; }
  double angle_upper(Hybridization h) const { return ideal_angle(h) + kAngleMargin; }

  // CSV rows: "bond,<elem>,<elem>,<single|double|triple|aromatic>,<angstrom>"
  // or "angle,<sp|sp2|sp3>,<degrees>". Overrides merge into the table.
  void load_csv(const std::string &csv);
  std::string to_csv() const;

  static constexpr double kBondMargin = 0.10;   // Angstrom
  static constexpr double kAngleMargin = 10.0;  // degrees

private:
  using Key = std::tuple<std::string, std::string, BondOrder>;
  std::map<Key, double> bond_lengths_;
  std::map<Hybridization, double> angles_;
};

// Degree/order-based inference: triple bond or two doubles -> sp; any double
// or aromatic -> sp2; else sp3.
Hybridization infer_hybridization(const SmallMolecule &mol, int atom_index);

}  // namespace posekit

#endif  // POSEKIT_VALIDITY_BOUNDS_HPP_
