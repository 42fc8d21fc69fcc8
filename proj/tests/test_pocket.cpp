//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <random>

#include "posekit/pocket/pocket.hpp"
#include "testutil.hpp"

using namespace posekit;
using namespace posekit::testing;

namespace {

// Eight residues on cube corners, all C-alpha equidistant from the center.
Pocket cube_pocket(double side, double scale = 1.0, const std::string &id = "cube") {
  const char *names[] = {"ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY"};
  Pocket p;
  p.source_entry = id;
  int k = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) {
        Residue r;
        r.chain_id = "A";
        r.name = names[k];
        r.seq_number = ++k;
        Atom ca;
        ca.element = "C";
        ca.name = "CA";
        ca.position = {scale * sx * side / 2, scale * sy * side / 2,
                       scale * sz * side / 2};
        r.atoms.push_back(ca);
        p.ca_coords.push_back(ca.position);
        p.ca_residue.push_back(static_cast<int>(p.residues.size()));
        p.residues.push_back(std::move(r));
      }
  return p;
}

ProteinStructure residues_at(const std::vector<Vec3> &origins) {
  ProteinStructure p;
  Chain chain;
  chain.id = "A";
  const char *names[] = {"ALA", "GLY", "SER", "LEU", "VAL", "THR", "PHE", "LYS"};
  for (std::size_t i = 0; i < origins.size(); ++i)
    chain.residues.push_back(
        backbone_residue("A", names[i % 8], static_cast<int>(i) + 1, origins[i]));
  p.chains.push_back(std::move(chain));
  return p;
}

}  // namespace

TEST_CASE("extract_pocket: inclusive 10 A boundary") {
  const SmallMolecule lig = molecule("probe", {atom("C", 0, 0, 0)}, {});
  // Residue N atoms sit exactly at the stated distances (all other atoms
  // are farther from the origin by construction).
  const ProteinStructure prot = residues_at({{9.9, 0, 0}, {0, 0, 10.1}});
  const Pocket pocket = extract_pocket(prot, lig, 10.0);
  REQUIRE(pocket.residues.size() == 1);
  CHECK(pocket.residues[0].seq_number == 1);

  const Pocket exact = extract_pocket(residues_at({{10.0, 0, 0}}), lig, 10.0);
  CHECK(exact.residues.size() == 1);  // "within" is inclusive
}

TEST_CASE("extract_pocket: far ligand yields an empty-pocket error") {
  const SmallMolecule lig = molecule("probe", {atom("C", 50, 50, 50)}, {});
  CHECK_THROWS_AS(extract_pocket(residues_at({{0, 0, 0}}), lig, 10.0), Error);
}

TEST_CASE("extract_pocket: monotone in the cutoff") {
  const SmallMolecule lig = molecule("probe", {atom("C", 0, 0, 0)}, {});
  const ProteinStructure prot =
      residues_at({{3, 0, 0}, {6, 0, 0}, {9, 0, 0}, {12, 0, 0}, {15, 0, 0}});
  std::size_t prev = 0;
  for (double cutoff : {4.0, 7.0, 10.0, 13.0, 16.0}) {
    const Pocket p = extract_pocket(prot, lig, cutoff);
    CHECK(p.residues.size() >= prev);
    prev = p.residues.size();
  }
  CHECK(prev == 5);
}

TEST_CASE("TmScoreParams: d0 formula with the 0.5 floor") {
  CHECK(TmScoreParams::for_reference_length(85).d0 ==
        doctest::Approx(3.3103937717626106).epsilon(1e-12));
  // Small pockets bottom out at 0.5.
  CHECK(TmScoreParams::for_reference_length(8).d0 == 0.5);
  CHECK(TmScoreParams::for_reference_length(18).d0 == 0.5);
  CHECK(TmScoreParams::for_reference_length(1).d0 == 0.5);
  CHECK_THROWS_AS(TmScoreParams::for_reference_length(0), Error);
}

TEST_CASE("pocket_tm_score: self-similarity is exactly one") {
  const Pocket p = cube_pocket(10.0);
  CHECK(pocket_tm_score(p, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pocket_tm_score: all pairs at d0 gives one half") {
  // Radial scaling about the centroid leaves Kabsch with the identity
  // rotation, so every matched pair lands exactly d0 apart.
  const double side = 10.0;
  const double radius = side * std::sqrt(3.0) / 2.0;
  const double d0 = TmScoreParams::for_reference_length(8).d0;  // 0.5
  const Pocket reference = cube_pocket(side);
  const Pocket query = cube_pocket(side, 1.0 + d0 / radius, "scaled");
  CHECK(pocket_tm_score(query, reference) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pocket_tm_score: invariant under rigid motion of either pocket") {
  std::mt19937 rng(21);
  const Pocket reference = cube_pocket(10.0);
  const Pocket query = cube_pocket(10.0, 1.08, "scaled");
  const double base = pocket_tm_score(query, reference);
  for (int trial = 0; trial < 5; ++trial) {
    const RigidTransform tf = random_rigid_transform(rng);
    Pocket moved = query;
    for (auto &c : moved.ca_coords)
      c = tf.apply(c);
    for (auto &r : moved.residues)
      for (auto &a : r.atoms)
        a.position = tf.apply(a.position);
    CHECK(pocket_tm_score(moved, reference) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("pocket_tm_score: asymmetric normalization") {
  // Reference pocket larger than the query: swapping the arguments changes
  // L_ref and with it the score.
  const SmallMolecule lig = molecule("probe", {atom("C", 0, 0, 0)}, {});
  const ProteinStructure small_prot =
      residues_at({{3, 0, 0}, {5, 1, 0}, {4, -2, 1}, {6, 2, -1}, {2, 3, 2}});
  const ProteinStructure big_prot = residues_at({{3, 0, 0},
                                                 {5, 1, 0},
                                                 {4, -2, 1},
                                                 {6, 2, -1},
                                                 {2, 3, 2},
                                                 {7, -1, 2},
                                                 {8, 1, 1},
                                                 {9, 0, -2}});
  const Pocket small_p = extract_pocket(small_prot, lig, 12.0);
  const Pocket big_p = extract_pocket(big_prot, lig, 12.0);
  const double forward = pocket_tm_score(small_p, big_p);
  const double backward = pocket_tm_score(big_p, small_p);
  CHECK(forward != doctest::Approx(backward).epsilon(1e-6));
}

TEST_CASE("pocket_tm_score: too few C-alphas errors") {
  const Pocket tiny = cube_pocket(10.0);
  Pocket four = tiny;
  four.residues.resize(4);
  four.ca_coords.resize(4);
  four.ca_residue.resize(4);
  CHECK_THROWS_AS(pocket_tm_score(four, tiny), Error);
}

TEST_CASE("max_similarity_vs_corpus: exhaustive max with deterministic ties") {
  const Pocket query = cube_pocket(10.0, 1.0, "query");
  std::vector<Pocket> corpus{cube_pocket(10.0, 1.25, "far"),
                             cube_pocket(10.0, 1.0, "exact"),
                             cube_pocket(10.0, 1.1, "near")};
  const CorpusMatch match = max_similarity_vs_corpus(query, corpus);
  CHECK(match.score == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(match.best_match_id == "exact");
  CHECK(match.failed_comparisons == 0);

  // Brute-force max over the three pairwise scores.
  double best = 0;
  for (const auto &c : corpus)
    best = std::max(best, pocket_tm_score(query, c));
  CHECK(match.score == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("max_similarity_vs_corpus: failures are skipped and counted") {
  const Pocket query = cube_pocket(10.0, 1.0, "query");
  Pocket broken = cube_pocket(10.0, 1.0, "broken");
  broken.residues.resize(4);
  broken.ca_coords.resize(4);
  broken.ca_residue.resize(4);
  std::vector<Pocket> corpus{broken, cube_pocket(10.0, 1.05, "ok")};
  const CorpusMatch match = max_similarity_vs_corpus(query, corpus);
  CHECK(match.best_match_id == "ok");
  CHECK(match.failed_comparisons == 1);

  CHECK_THROWS_AS(max_similarity_vs_corpus(query, {broken}), Error);
  CHECK_THROWS_AS(max_similarity_vs_corpus(query, {}), Error);
}

TEST_CASE("stratify: inclusive 0.70 threshold") {
  const auto s = stratify({{"a", 0.70}, {"b", 0.69}, {"c", 0.95}, {"d", 0.0}});
  REQUIRE(s.similar.size() == 2);
  CHECK(s.similar[0].first == "a");  // 0.70 lands in the similar group
  CHECK(s.similar[1].first == "c");
  REQUIRE(s.dissimilar.size() == 2);
  CHECK(s.dissimilar[0].first == "b");
  CHECK(s.dissimilar[1].first == "d");
}

TEST_CASE("stratify: empty input gives two empty lists") {
  const auto s = stratify({});
  CHECK(s.similar.empty());
  CHECK(s.dissimilar.empty());
}
