//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_RMSD_SYMMETRY_RMSD_HPP_
#define POSEKIT_RMSD_SYMMETRY_RMSD_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

// Heavy-atom view of a molecule: vertices are heavy atoms, edges carry bond
// orders (aromatic is its own label, never expanded to single/double).
struct HeavyGraph {
  std::vector<int> atom_index;       // heavy ordinal -> index into molecule.atoms
  std::vector<std::string> element;  // per heavy ordinal
  std::vector<Vec3> position;
  std::vector<std::vector<std::pair<int, BondOrder>>> adj;
  std::size_t edge_count = 0;

  static HeavyGraph from_molecule(const SmallMolecule &mol);

  std::size_t size() const { return element.size(); }
  bool connected() const;
  bool has_edge(int a, int b, BondOrder order) const;
};

// Bijection from predicted heavy ordinals to reference heavy ordinals that
// preserves element labels and bond orders.
using AtomCorrespondence = std::vector<int>;

class NotIsomorphicError : public Error {
public:
  explicit NotIsomorphicError(const std::string &msg) : Error(msg) {}
};

// All label-preserving isomorphisms from `pred` onto `ref`, by backtracking
// search with candidate pruning. Requires connected graphs. Errors when the
// count exceeds `cap` (default 10,000). Empty result means not isomorphic.
std::vector<AtomCorrespondence> enumerate_isomorphisms(const HeavyGraph &pred,
                                                       const HeavyGraph &ref,
                                                       std::size_t cap = 10000);

// Automorphism group of the heavy-atom graph (identity included).
std::vector<AtomCorrespondence> enumerate_automorphisms(const SmallMolecule &mol,
                                                        std::size_t cap = 10000);

struct SymmetryRmsdResult {
  double rmsd = 0.0;
  // The minimizing correspondence; among equal-RMSD candidates the
  // lexicographically smallest permutation, for deterministic chirality
  // checks downstream.
  AtomCorrespondence correspondence;
};

// Symmetry-corrected heavy-atom RMSD in a shared frame (no superposition).
// Throws NotIsomorphicError when the molecules do not share a labeled graph.
SymmetryRmsdResult symmetry_rmsd(const SmallMolecule &pred, const SmallMolecule &ref);

// Index-order heavy-atom RMSD, for comparison with the corrected value.
double naive_rmsd(const SmallMolecule &pred, const SmallMolecule &ref);

}  // namespace posekit

#endif  // POSEKIT_RMSD_SYMMETRY_RMSD_HPP_
