//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/crossdock/crossdock.hpp"

#include <algorithm>
#include <vector>

#include "posekit/core/seqalign.hpp"

namespace posekit {

namespace {

struct ChainPairing {
  int candidate_chain;
  int reference_chain;
  SequenceAlignment alignment;
};

// Greedy max-score assignment over all chain pairs; plenty for the <= 4x4
// assemblies this supports.
std::vector<ChainPairing> pair_chains(const ProteinStructure &candidate,
                                      const ProteinStructure &reference) {
  const int nc = static_cast<int>(candidate.chains.size());
  const int nr = static_cast<int>(reference.chains.size());
  if (nc == 0 || nr == 0)
    throw Error("align_to_reference: structure has no polymer chains");
  if (nc > 4 || nr > 4)
    throw Error("align_to_reference: more than 4 chains per structure; "
                "pre-select the chains to align");

  struct Scored {
    int c, r;
    SequenceAlignment aln;
  };
  std::vector<Scored> all;
  for (int c = 0; c < nc; ++c)
    for (int r = 0; r < nr; ++r)
      all.push_back({c, r, global_align(chain_sequence(candidate.chains[c]),
                                        chain_sequence(reference.chains[r]))});
  std::stable_sort(all.begin(), all.end(),
                   [](const Scored &a, const Scored &b) { return a.aln.score > b.aln.score; });

  std::vector<ChainPairing> pairing;
  std::vector<char> c_used(nc, 0), r_used(nr, 0);
  for (const auto &s : all) {
    if (c_used[s.c] || r_used[s.r])
      continue;
    c_used[s.c] = 1;
    r_used[s.r] = 1;
    pairing.push_back({s.c, s.r, s.aln});
  }
  return pairing;
}

}  // namespace

AlignmentResult align_to_reference(const ProteinStructure &candidate,
                                   const ProteinStructure &reference) {
  std::vector<Vec3> moving, target;
  for (const auto &p : pair_chains(candidate, reference)) {
    const auto &cres = candidate.chains[p.candidate_chain].residues;
    const auto &rres = reference.chains[p.reference_chain].residues;
    for (const auto &[ci, ri] : p.alignment.aligned) {
      if (cres[ci].name != rres[ri].name)
        continue;  // superpose on identical residues only
      const Atom *cca = cres[ci].alpha_carbon();
      const Atom *rca = rres[ri].alpha_carbon();
      if (cca == nullptr || rca == nullptr)
        continue;
      moving.push_back(cca->position);
      target.push_back(rca->position);
    }
  }
  if (moving.size() < 3)
    throw Error("align_to_reference: no correspondence (fewer than 3 matched "
                "residues between candidate and reference)");

  SuperposeResult sup = kabsch_superpose(moving, target);
  return {sup.transform, sup.rmsd, static_cast<int>(moving.size())};
}

SmallMolecule transfer_ligand(const SmallMolecule &ligand,
                              const AlignmentResult &alignment) {
  SmallMolecule out = ligand;
  for (auto &a : out.atoms)
    a.position = alignment.transform.apply(a.position);
  return out;
}

ProteinStructure transform_structure(const ProteinStructure &protein,
                                     const RigidTransform &transform) {
  ProteinStructure out = protein;
  for (auto &chain : out.chains)
    for (auto &res : chain.residues)
      for (auto &a : res.atoms)
        a.position = transform.apply(a.position);
  for (auto &h : out.hetero_groups)
    for (auto &a : h.molecule.atoms)
      a.position = transform.apply(a.position);
  return out;
}

CandidateVerdict candidate_filter(const AlignmentResult &alignment,
                                  double ligand_displacement, double max_ca_rmsd,
                                  double max_displacement) {
  if (alignment.ca_rmsd > max_ca_rmsd)
    return {FilterDecision::RejectAlignment,
            "alignment: ca_rmsd " + std::to_string(alignment.ca_rmsd) + " > " +
                std::to_string(max_ca_rmsd) + " A"};
  if (ligand_displacement > max_displacement)
    return {FilterDecision::RejectLigandShift,
            "ligand-shift: displacement " + std::to_string(ligand_displacement) +
                " > " + std::to_string(max_displacement) + " A"};
  return {FilterDecision::Accept, ""};
}

}  // namespace posekit
