//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <random>

#include "posekit/crossdock/crossdock.hpp"
#include "testutil.hpp"

using namespace posekit;
using namespace posekit::testing;

namespace {

ProteinStructure varied_chain(int n) {
  // Mixed residue names so sequence alignment has signal.
  const char *names[] = {"ALA", "GLY", "SER", "LEU", "VAL", "THR", "PHE", "LYS"};
  ProteinStructure p;
  Chain chain;
  chain.id = "A";
  for (int i = 0; i < n; ++i) {
    Residue r = backbone_residue("A", names[i % 8], i + 1,
                                 {3.8 * i, 1.5 * std::sin(i * 0.9), 0.8 * (i % 3)});
    chain.residues.push_back(std::move(r));
  }
  p.chains.push_back(std::move(chain));
  return p;
}

ProteinStructure apply_to_protein(const ProteinStructure &p, const RigidTransform &tf) {
  return transform_structure(p, tf);
}

}  // namespace

TEST_CASE("align_to_reference: identity on itself") {
  const ProteinStructure p = varied_chain(12);
  const AlignmentResult r = align_to_reference(p, p);
  CHECK(r.ca_rmsd < 1e-8);
  CHECK(r.matched_residue_pairs == 12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(r.transform.rotation[i][j] - (i == j ? 1.0 : 0.0)) < 1e-8);
  CHECK(r.transform.translation.norm() < 1e-8);
}

TEST_CASE("align_to_reference: recovers a 90-degree rotation") {
  const ProteinStructure ref = varied_chain(15);
  RigidTransform rot90;
  rot90.rotation = {{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
  rot90.translation = {5, -3, 2};
  const ProteinStructure candidate = apply_to_protein(ref, rot90);

  const AlignmentResult r = align_to_reference(candidate, ref);
  CHECK(r.ca_rmsd < 1e-8);
  // The recovered transform must be the inverse of rot90.
  const Vec3 probe{1.0, 2.0, 3.0};
  const Vec3 roundtrip = r.transform.apply(rot90.apply(probe));
  CHECK(distance(roundtrip, probe) < 1e-8);
}

TEST_CASE("align_to_reference: random rigid motions recovered") {
  std::mt19937 rng(11);
  const ProteinStructure ref = varied_chain(20);
  for (int trial = 0; trial < 10; ++trial) {
    const RigidTransform tf = random_rigid_transform(rng);
    const AlignmentResult r = align_to_reference(apply_to_protein(ref, tf), ref);
    CHECK(r.ca_rmsd < 1e-8);
    CHECK(r.matched_residue_pairs == 20);
  }
}

TEST_CASE("align_to_reference: disjoint sequences give no correspondence") {
  // Same fold, entirely different residue names: no identical columns.
  ProteinStructure a = varied_chain(10);
  ProteinStructure b = varied_chain(10);
  for (auto &res : b.chains[0].residues)
    res.name = "TRP";
  for (auto &res : a.chains[0].residues)
    res.name = "ASP";
  CHECK_THROWS_WITH_AS(align_to_reference(a, b),
                       doctest::Contains("no correspondence"), Error);
}

TEST_CASE("align_to_reference: too many chains is an error") {
  ProteinStructure a = varied_chain(5);
  for (char c = 'B'; c <= 'E'; ++c) {
    Chain extra = a.chains[0];
    extra.id = std::string(1, c);
    a.chains.push_back(extra);
  }
  CHECK_THROWS_AS(align_to_reference(a, a), Error);
}

TEST_CASE("align_to_reference: multi-chain pairing") {
  ProteinStructure ref = varied_chain(8);
  Chain second;
  second.id = "B";
  for (int i = 0; i < 6; ++i)
    second.residues.push_back(
        backbone_residue("B", "TRP", i + 1, {3.8 * i, 25.0, 0}));
  ref.chains.push_back(second);

  // Candidate with chains swapped and rigidly moved.
  RigidTransform tf;
  tf.rotation = {{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}};
  tf.translation = {1, 2, 3};
  ProteinStructure cand = apply_to_protein(ref, tf);
  std::swap(cand.chains[0], cand.chains[1]);

  const AlignmentResult r = align_to_reference(cand, ref);
  CHECK(r.ca_rmsd < 1e-8);
  CHECK(r.matched_residue_pairs == 14);
}

TEST_CASE("transfer_ligand: identity and translation") {
  const SmallMolecule lig = benzene();
  AlignmentResult identity;
  const SmallMolecule same = transfer_ligand(lig, identity);
  for (std::size_t i = 0; i < lig.atoms.size(); ++i)
    CHECK(distance(same.atoms[i].position, lig.atoms[i].position) == 0.0);

  AlignmentResult shift;
  shift.transform.translation = {1, 2, 3};
  const SmallMolecule moved = transfer_ligand(lig, shift);
  for (std::size_t i = 0; i < lig.atoms.size(); ++i) {
    CHECK(moved.atoms[i].position.x == doctest::Approx(lig.atoms[i].position.x + 1));
    CHECK(moved.atoms[i].position.y == doctest::Approx(lig.atoms[i].position.y + 2));
    CHECK(moved.atoms[i].position.z == doctest::Approx(lig.atoms[i].position.z + 3));
  }
}

TEST_CASE("transfer_ligand: any proper rigid transform is an isometry") {
  std::mt19937 rng(13);
  const SmallMolecule lig = benzene();
  for (int trial = 0; trial < 20; ++trial) {
    AlignmentResult aln;
    aln.transform = random_rigid_transform(rng);
    const SmallMolecule moved = transfer_ligand(lig, aln);
    CHECK(moved.bonds.size() == lig.bonds.size());
    for (std::size_t i = 0; i < lig.atoms.size(); ++i)
      for (std::size_t j = i + 1; j < lig.atoms.size(); ++j) {
        const double before = distance(lig.atoms[i].position, lig.atoms[j].position);
        const double after =
            distance(moved.atoms[i].position, moved.atoms[j].position);
        CHECK(std::abs(before - after) < 1e-9);
      }
  }
}

TEST_CASE("candidate_filter: paper thresholds") {
  AlignmentResult good;
  good.ca_rmsd = 1.0;
  AlignmentResult bad;
  bad.ca_rmsd = 2.5;

  // ca_rmsd 2.5 -> reject for alignment regardless of displacement.
  const auto r1 = candidate_filter(bad, 0.1);
  CHECK(r1.decision == FilterDecision::RejectAlignment);
  CHECK(r1.reason.find("alignment") != std::string::npos);

  // ca_rmsd fine but ligand moved 4.5 A -> reject for ligand shift.
  const auto r2 = candidate_filter(good, 4.5);
  CHECK(r2.decision == FilterDecision::RejectLigandShift);
  CHECK(r2.reason.find("ligand-shift") != std::string::npos);

  // Both under threshold -> accept.
  const auto r3 = candidate_filter(good, 1.0);
  CHECK(r3.decision == FilterDecision::Accept);
  CHECK(r3.reason.empty());

  // Boundary values are inclusive (rules use strict greater-than).
  CHECK(candidate_filter(AlignmentResult{{}, 2.0, 5}, 4.0).decision ==
        FilterDecision::Accept);
}

TEST_CASE("candidate_filter: decisions invariant under common rigid motion") {
  // The filter only sees (ca_rmsd, displacement); feeding identical numbers
  // from differently-framed alignments cannot change the outcome.
  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    AlignmentResult a;
    a.ca_rmsd = 1.7;
    a.transform = random_rigid_transform(rng);
    CHECK(candidate_filter(a, 3.9).decision == FilterDecision::Accept);
    CHECK(candidate_filter(a, 4.1).decision == FilterDecision::RejectLigandShift);
  }
}
