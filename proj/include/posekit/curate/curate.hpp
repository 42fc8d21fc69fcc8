//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_CURATE_CURATE_HPP_
#define POSEKIT_CURATE_CURATE_HPP_

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

// One (pdb, ccd) pair with every pre-computed quantity the filter rows test.
struct ManifestEntry {
  std::string pdb_id;
  std::string ccd_id;
  std::optional<std::string> release_date;  // ISO yyyy-mm-dd
  std::optional<double> resolution;         // Angstrom
  std::optional<double> ligand_mw;          // Dalton
  std::optional<int> heavy_atom_count;
  std::optional<std::vector<std::string>> elements;
  std::optional<bool> covalently_bound;
  std::optional<double> rsr;
  std::optional<double> rscc;
  std::optional<double> completeness;  // percent
  std::optional<bool> stereo_errors;
  std::optional<bool> atomic_clashes;
  std::vector<std::string> sequences;
  std::optional<double> min_protein_distance;        // Angstrom
  std::optional<double> min_other_ligand_distance;   // Angstrom
  std::optional<double> min_symmetry_mate_distance;  // Angstrom

  std::string entry_id() const { return pdb_id + "_" + ccd_id; }
};

// JSON array of entries, snake_case field names as above.
std::vector<ManifestEntry> parse_manifest(const std::string &json_text);
std::vector<ManifestEntry> parse_manifest_file(const std::string &path);

enum class Pipeline { SelfDock, CrossDock };

struct FilterConfig {
  Pipeline pipeline = Pipeline::SelfDock;
  std::string release_from = "2022-01-01";   // inclusive
  std::string release_until = "2025-01-01";  // exclusive
  double max_resolution = 2.0;
  double min_ligand_mw = 100.0;
  double max_ligand_mw = 900.0;
  int min_heavy_atoms = 3;
  std::vector<std::string> allowed_elements = {"H", "C", "O", "N", "P", "S", "F", "Cl"};
  double max_rsr = 0.2;
  double min_rscc = 0.95;
  double min_completeness = 100.0;
  double min_protein_distance = 0.2;       // inclusive
  double min_other_distance_self = 0.2;    // inclusive
  double min_other_distance_cross = 5.0;   // inclusive
  double min_symmetry_mate_distance = 5.0; // strict >
  // Cross-dock candidate rejection thresholds (Table rules).
  double max_alignment_ca_rmsd = 2.0;
  double max_ligand_displacement = 4.0;
  // Clustering thresholds per pipeline.
  double identity_threshold_self = 0.0;
  double coverage_threshold_self = 1.0;
  double identity_threshold_cross = 0.90;
  double coverage_threshold_cross = 0.80;
};

struct FilterStep {
  std::string name;
  int survivors = 0;
  std::vector<std::string> rejected;  // entry ids, optionally "id (reason)"
};

struct FilterTrace {
  std::vector<FilterStep> steps;

  // CSV mirroring the construction-table row format: step,survivors.
  std::string to_csv() const;
};

// The sequential filter rows, applied in table order. Throws a configuration
// error naming the field when a required manifest field is absent.
std::pair<std::vector<ManifestEntry>, FilterTrace>
apply_filters(const std::vector<ManifestEntry> &entries, const FilterConfig &config);

struct BipartiteGraph {
  std::vector<std::string> left;   // pdb ids, in first-seen order
  std::vector<std::string> right;  // ccd ids
  std::vector<std::pair<int, int>> edges;  // (left index, right index)

  static BipartiteGraph from_pairs(
      const std::vector<std::pair<std::string, std::string>> &pairs);
};

// Maximum-cardinality matching; deterministic for a fixed input order.
std::vector<std::pair<std::string, std::string>> hopcroft_karp(const BipartiteGraph &g);

struct SequenceCluster {
  std::string representative;        // longest member, ties to lexicographic id
  std::vector<std::string> members;  // in processing order, centroid first
};

// Greedy centroid clustering, length-descending: a sequence joins the first
// centroid reaching both thresholds (identity = matches / alignment columns,
// coverage = aligned columns / shorter length), else founds a new cluster.
std::vector<SequenceCluster>
cluster_sequences(const std::vector<std::pair<std::string, std::string>> &seqs,
                  double identity_threshold, double coverage_threshold);

struct SelfDockResult {
  std::vector<ManifestEntry> selected;
  FilterTrace trace;
};

SelfDockResult build_self_dock_set(const std::vector<ManifestEntry> &manifest,
                                   const FilterConfig &config = {});

struct ComplexRecord {
  ProteinStructure protein;
  SmallMolecule ligand;
};

struct CrossPair {
  std::string structure_entry;
  std::string ligand_entry;
};

struct CrossCluster {
  std::string reference_entry;
  // Structures aligned into the reference frame and ligands transferred into
  // it, keyed by entry id; pairs exclude each ligand's native structure.
  std::vector<std::pair<std::string, ProteinStructure>> structures;
  std::vector<std::pair<std::string, SmallMolecule>> ligands;
  std::vector<CrossPair> pairs;
};

struct CrossDockResult {
  std::vector<CrossCluster> clusters;
  FilterTrace trace;
};

enum class ReferencePolicy { HighestResolution };

CrossDockResult
build_cross_dock_set(const std::vector<ManifestEntry> &manifest,
                     const std::unordered_map<std::string, ComplexRecord> &structures,
                     ReferencePolicy policy = ReferencePolicy::HighestResolution,
                     const FilterConfig &config = FilterConfig{Pipeline::CrossDock});

}  // namespace posekit

#endif  // POSEKIT_CURATE_CURATE_HPP_
