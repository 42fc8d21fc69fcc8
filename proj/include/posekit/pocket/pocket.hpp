//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_POCKET_POCKET_HPP_
#define POSEKIT_POCKET_POCKET_HPP_

#include <string>
#include <utility>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

struct Pocket {
  std::vector<Residue> residues;  // carry their source chain ids
  std::vector<Vec3> ca_coords;    // one per residue with a C-alpha
  std::vector<int> ca_residue;    // residue index for each ca_coords entry
  std::string source_entry;

  std::string sequence() const;
};

// Residues with any heavy atom within `cutoff` (inclusive) of any ligand
// heavy atom. Errors when nothing is in range.
Pocket extract_pocket(const ProteinStructure &protein, const SmallMolecule &ligand,
                      double cutoff = 10.0);

struct TmScoreParams {
  int l_ref = 0;
  double d0 = 0.0;

  // d0 = max(0.5, 1.24 * (L_ref - 15)^(1/3) - 1.8), the 0.5 floor keeping
  // tiny pockets defined.
  static TmScoreParams for_reference_length(int l_ref);
};

// TM-score of `query` against `reference`, normalized by the reference pocket
// length: residue correspondence by global sequence alignment, Kabsch over
// matched C-alphas, then (1/L_ref) * sum 1/(1 + (d_i/d0)^2). Asymmetric in
// its arguments by construction.
double pocket_tm_score(const Pocket &query, const Pocket &reference);

struct CorpusMatch {
  double score = 0.0;
  std::string best_match_id;
  int failed_comparisons = 0;
};

// Max TM-score of `query` against every corpus pocket; pairwise failures are
// skipped and counted. Ties go to the earliest corpus entry.
CorpusMatch max_similarity_vs_corpus(const Pocket &query,
                                     const std::vector<Pocket> &corpus);

struct Stratification {
  std::vector<std::pair<std::string, double>> similar;     // score >= threshold
  std::vector<std::pair<std::string, double>> dissimilar;  // score < threshold
};

Stratification stratify(const std::vector<std::pair<std::string, double>> &entries,
                        double threshold = 0.70);

}  // namespace posekit

#endif  // POSEKIT_POCKET_POCKET_HPP_
