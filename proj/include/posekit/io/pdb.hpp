//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_IO_PDB_HPP_
#define POSEKIT_IO_PDB_HPP_

#include <string>

#include "posekit/core/types.hpp"

namespace posekit {

// Fixed-column PDB reader. ATOM records build polymer chains; HETATM records
// are grouped by (chain, resname, resnum, icode) into hetero groups with an
// {organic, inorganic, water} tag. Only the first MODEL is read (flagged),
// and only the first alternate location of each atom is kept.
ProteinStructure parse_pdb(const std::string &text);

ProteinStructure parse_pdb_file(const std::string &path);

// Minimal writer: ATOM/HETATM/TER/END, enough to round-trip coordinates for
// relaxed or aligned structures.
std::string write_pdb(const ProteinStructure &protein);

void write_pdb_file(const ProteinStructure &protein, const std::string &path);

// Classification used for hetero groups: waters by residue name; inorganic
// when the group is a known ion name or a single metallic atom; organic
// otherwise.
HeteroClass classify_hetero(const std::string &resname, const SmallMolecule &mol);

}  // namespace posekit

#endif  // POSEKIT_IO_PDB_HPP_
