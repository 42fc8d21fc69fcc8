//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/pocket/pocket.hpp"

#include <algorithm>
#include <cmath>

#include "posekit/core/seqalign.hpp"
#include "posekit/geom/geom.hpp"

namespace posekit {

std::string Pocket::sequence() const {
  std::string seq;
  seq.reserve(residues.size());
  for (const auto &r : residues)
    seq.push_back(residue_one_letter(r.name));
  return seq;
}

Pocket extract_pocket(const ProteinStructure &protein, const SmallMolecule &ligand,
                      double cutoff) {
  std::vector<Vec3> lig;
  for (const auto &a : ligand.atoms)
    if (!is_hydrogen(a.element))
      lig.push_back(a.position);
  if (lig.empty())
    throw Error("extract_pocket: ligand has no heavy atoms");

  Pocket pocket;
  const double cutoff2 = cutoff * cutoff;
  for (const auto &chain : protein.chains) {
    for (const auto &res : chain.residues) {
      bool in_range = false;
      for (const auto &a : res.atoms) {
        if (is_hydrogen(a.element))
          continue;
        for (const auto &l : lig) {
          if ((a.position - l).squared_norm() <= cutoff2) {
            in_range = true;
            break;
          }
        }
        if (in_range)
          break;
      }
      if (!in_range)
        continue;
      const Atom *ca = res.alpha_carbon();
      if (ca != nullptr) {
        pocket.ca_coords.push_back(ca->position);
        pocket.ca_residue.push_back(static_cast<int>(pocket.residues.size()));
      }
      pocket.residues.push_back(res);
    }
  }
  if (pocket.residues.empty())
    throw Error("extract_pocket: no residue within " + std::to_string(cutoff) +
                " A of the ligand");
  return pocket;
}

TmScoreParams TmScoreParams::for_reference_length(int l_ref) {
  if (l_ref < 1)
    throw Error("TM-score: reference length must be >= 1");
  const double raw = 1.24 * std::cbrt(static_cast<double>(l_ref) - 15.0) - 1.8;
  return {l_ref, std::max(0.5, raw)};
}

double pocket_tm_score(const Pocket &query, const Pocket &reference) {
  if (query.ca_coords.size() < 5 || reference.ca_coords.size() < 5)
    throw Error("pocket_tm_score: pockets need at least 5 C-alpha atoms");

  // C-alpha lookup per residue index (-1 when the residue has none).
  auto ca_of = [](const Pocket &p) {
    std::vector<int> map(p.residues.size(), -1);
    for (std::size_t k = 0; k < p.ca_residue.size(); ++k)
      map[p.ca_residue[k]] = static_cast<int>(k);
    return map;
  };
  const std::vector<int> qca = ca_of(query), rca = ca_of(reference);

  SequenceAlignment aln = global_align(query.sequence(), reference.sequence());
  std::vector<Vec3> moving, target;
  for (const auto &[qi, ri] : aln.aligned) {
    if (query.residues[qi].name != reference.residues[ri].name)
      continue;
    if (qca[qi] < 0 || rca[ri] < 0)
      continue;
    moving.push_back(query.ca_coords[qca[qi]]);
    target.push_back(reference.ca_coords[rca[ri]]);
  }
  if (moving.size() < 3)
    throw Error("pocket_tm_score: fewer than 3 matched residues");

  const RigidTransform tf = kabsch_superpose(moving, target).transform;
  const TmScoreParams params =
      TmScoreParams::for_reference_length(static_cast<int>(reference.residues.size()));

  double sum = 0.0;
  for (std::size_t i = 0; i < moving.size(); ++i) {
    const double d = distance(tf.apply(moving[i]), target[i]);
    sum += 1.0 / (1.0 + (d / params.d0) * (d / params.d0));
  }
  return sum / static_cast<double>(params.l_ref);
}

CorpusMatch max_similarity_vs_corpus(const Pocket &query,
                                     const std::vector<Pocket> &corpus) {
  if (corpus.empty())
    throw Error("max_similarity_vs_corpus: empty corpus");

  CorpusMatch best;
  bool any = false;
  for (const auto &candidate : corpus) {
    double score = 0.0;
    try {
      score = pocket_tm_score(query, candidate);
    } catch (const Error &) {
      ++best.failed_comparisons;
      continue;
    }
    if (!any || score > best.score) {
      any = true;
      best.score = score;
      best.best_match_id = candidate.source_entry;
    }
  }
  if (!any)
    throw Error("max_similarity_vs_corpus: every pairwise comparison failed");
  return best;
}

Stratification stratify(const std::vector<std::pair<std::string, double>> &entries,
                        double threshold) {
  Stratification out;
  for (const auto &e : entries) {
    if (e.second >= threshold)
      out.similar.push_back(e);
    else
      out.dissimilar.push_back(e);
  }
  return out;
}

}  // namespace posekit
