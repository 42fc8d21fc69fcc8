//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_VALIDITY_CHECKS_HPP_
#define POSEKIT_VALIDITY_CHECKS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posekit/core/elements.hpp"
#include "posekit/core/types.hpp"
#include "posekit/validity/bounds.hpp"

namespace posekit {

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::optional<double> measured;
  std::optional<double> threshold;
  std::string unit;    // "angstrom", "degree", "fraction", "ratio", or ""
  std::string detail;  // what was measured (worst pair, ring, ...)
};

struct ValidityReport {
  std::vector<CheckResult> chemistry;
  std::vector<CheckResult> intramolecular;
  std::vector<CheckResult> intermolecular;
  bool pb_valid = false;
  int skipped_count = 0;
};

// Optional plug-in for the energy-ratio check: pose energy of the molecule
// and the mean energy of a 50-conformer ensemble generated for it. Without a
// provider the check reports skipped.
class ConformerEnergyProvider {
public:
  virtual ~ConformerEnergyProvider() = default;
  virtual std::pair<double, double> energies(const SmallMolecule &mol) const = 0;
};

// Chemical validity and consistency against the reference ligand: formula,
// bonds (labeled-graph isomorphism), tetrahedral chirality, double-bond
// stereochemistry. Failures are results, never exceptions.
std::vector<CheckResult> check_chemistry(const SmallMolecule &pred,
                                         const SmallMolecule &ref);

std::vector<CheckResult>
check_intramolecular(const SmallMolecule &pred, const BoundsTable &bounds,
                     const ConformerEnergyProvider *energy_provider = nullptr);

std::vector<CheckResult> check_intermolecular(const SmallMolecule &pred,
                                              const ProteinStructure &protein,
                                              const RadiusTable &radii);

// True iff no check failed; skipped checks never block but are counted.
bool pb_valid(const ValidityReport &report);

ValidityReport build_report(std::vector<CheckResult> chemistry,
                            std::vector<CheckResult> intramolecular,
                            std::vector<CheckResult> intermolecular);

// Full suite in one call.
ValidityReport evaluate_validity(const SmallMolecule &pred, const SmallMolecule &ref,
                                 const ProteinStructure &protein,
                                 const BoundsTable &bounds = BoundsTable::standard(),
                                 const RadiusTable &radii = RadiusTable::standard(),
                                 const ConformerEnergyProvider *energy_provider = nullptr);

std::string report_to_json(const ValidityReport &report);

// Share of the ligand volume intersecting the other sphere set, on a
// deterministic cubic grid (0.25 A spacing). Radii already scaled.
double grid_overlap_fraction(const std::vector<std::pair<Vec3, double>> &ligand,
                             const std::vector<std::pair<Vec3, double>> &other,
                             double spacing = 0.25);

// All simple 5/6-cycles whose edges are all aromatic, as atom-index lists.
std::vector<std::vector<int>> aromatic_rings(const SmallMolecule &mol);

const char *check_status_name(CheckStatus s);

}  // namespace posekit

#endif  // POSEKIT_VALIDITY_CHECKS_HPP_
