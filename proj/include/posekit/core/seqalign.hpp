//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_CORE_SEQALIGN_HPP_
#define POSEKIT_CORE_SEQALIGN_HPP_

#include <string>
#include <utility>
#include <vector>

namespace posekit {

struct AlignmentScoring {
  int match = 1;
  int mismatch = -1;
  int gap = -2;
};

struct SequenceAlignment {
  int score = 0;
  // Columns where both sequences contribute a residue (match or mismatch),
  // as (index in a, index in b) pairs in sequence order.
  std::vector<std::pair<int, int>> aligned;
  int matches = 0;  // identical columns among `aligned`

  // identity = matches / alignment columns (aligned + gap columns).
  double identity = 0.0;
  // coverage = aligned columns / longer sequence length. With this scoring a
  // gap never appears in both sequences, so the shorter one is always fully
  // aligned and the longer sequence is the binding constraint (bidirectional
  // coverage).
  double coverage = 0.0;
};

// Global (Needleman-Wunsch) alignment with linear gap penalty and a
// deterministic traceback (diagonal preferred over gaps).
SequenceAlignment global_align(const std::string &a, const std::string &b,
                               const AlignmentScoring &scoring = {});

}  // namespace posekit

#endif  // POSEKIT_CORE_SEQALIGN_HPP_
