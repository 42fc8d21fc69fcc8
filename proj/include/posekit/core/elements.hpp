//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_CORE_ELEMENTS_HPP_
#define POSEKIT_CORE_ELEMENTS_HPP_

#include <string>

namespace posekit {

bool is_known_element(const std::string &symbol);
bool is_metal(const std::string &symbol);

// Canonical capitalization ("CL" -> "Cl"). Throws Error for unknown symbols.
std::string normalize_element(const std::string &symbol);

// Van der Waals and covalent radius tables, Angstrom.
//
// vdW radii follow the Bondi convention (Bondi 1964, plus the Mantina 2009
// main-group extension for elements Bondi did not list); covalent radii
// follow Cordero 2008. Values are embedded constants, dumpable as CSV for
// audit.
class RadiusTable {
public:
  static const RadiusTable &standard();

  double vdw(const std::string &element) const;       // throws on unknown
  double covalent(const std::string &element) const;  // throws on unknown

  // CSV dump: header "element,vdw,covalent", one row per supported element.
  std::string to_csv() const;
};

}  // namespace posekit

#endif  // POSEKIT_CORE_ELEMENTS_HPP_
