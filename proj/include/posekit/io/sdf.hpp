//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_IO_SDF_HPP_
#define POSEKIT_IO_SDF_HPP_

#include <string>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

// V2000 SDF reader. Multi-record files allowed; one molecule per record.
// Hydrogens are parsed and retained (downstream geometry skips them).
// Throws ParseError with a line number on malformed input.
std::vector<SmallMolecule> parse_sdf(const std::string &text);

// Convenience: first record of a file; error when the file holds none.
SmallMolecule parse_sdf_file(const std::string &path);
std::vector<SmallMolecule> parse_sdf_records_file(const std::string &path);

// V2000 writer. Round-trips through parse_sdf up to the format's 4-decimal
// coordinate quantization. Throws Error above 999 atoms or bonds.
std::string write_sdf(const SmallMolecule &mol);

void write_sdf_file(const SmallMolecule &mol, const std::string &path);

}  // namespace posekit

#endif  // POSEKIT_IO_SDF_HPP_
