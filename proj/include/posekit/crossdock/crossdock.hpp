//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_CROSSDOCK_CROSSDOCK_HPP_
#define POSEKIT_CROSSDOCK_CROSSDOCK_HPP_

#include <string>

#include "posekit/core/types.hpp"
#include "posekit/geom/geom.hpp"

namespace posekit {

struct AlignmentResult {
  RigidTransform transform;  // candidate frame -> reference frame
  double ca_rmsd = 0.0;
  int matched_residue_pairs = 0;
};

// Residue correspondence by global sequence alignment (best chain pairing,
// identical-residue columns), then Kabsch over the matched C-alpha atoms.
// Errors when no chain pairing yields >= 3 matched residues, or the C-alpha
// geometry is degenerate. Structures above 4x4 chains must be pre-selected.
AlignmentResult align_to_reference(const ProteinStructure &candidate,
                                   const ProteinStructure &reference);

// Maps all atom positions by the alignment transform; the graph is untouched.
SmallMolecule transfer_ligand(const SmallMolecule &ligand,
                              const AlignmentResult &alignment);

ProteinStructure transform_structure(const ProteinStructure &protein,
                                     const RigidTransform &transform);

enum class FilterDecision { Accept, RejectAlignment, RejectLigandShift };

struct CandidateVerdict {
  FilterDecision decision = FilterDecision::Accept;
  std::string reason;  // empty on accept
};

// Rejection rules for cross-docking candidates: alignment C-alpha RMSD above
// 2.0 A, or transferred-ligand centroid displacement above 4.0 A.
CandidateVerdict candidate_filter(const AlignmentResult &alignment,
                                  double ligand_displacement,
                                  double max_ca_rmsd = 2.0,
                                  double max_displacement = 4.0);

}  // namespace posekit

#endif  // POSEKIT_CROSSDOCK_CROSSDOCK_HPP_
