//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_RELAX_RELAX_HPP_
#define POSEKIT_RELAX_RELAX_HPP_

#include <string>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

// All relax-internal quantities are nm and kJ/mol; the Angstrom <-> nm
// conversion happens exactly once at the module boundary.

struct PositionalRestraint {
  int atom = 0;
  Vec3 anchor;     // nm
  double k = 0.0;  // kJ/mol/nm^2
};

struct BondRestraint {
  int i = 0, j = 0;
  double target_length = 0.0;  // nm, from the input geometry
  double k_bond = 0.0;
};

struct SoftRepulsion {
  int i = 0, j = 0;
  double clash_distance = 0.0;  // nm, 0.75 * vdW-radius sum
  double k_rep = 0.0;
};

struct RelaxConfig {
  double k_backbone = 10.0;          // kJ/mol/nm^2 (paper value)
  double k_bond = 5000.0;            // stiff: covalent geometry dominates
  double k_rep = 1000.0;
  double gradient_tolerance = 10.0;  // kJ/mol/nm (paper value)
  int max_iterations = 2000;
  double repulsion_cutoff = 1.2;     // nm, pair enumeration radius
  // Repulsion activates this far beyond the clash distance. At the gradient
  // tolerance a quadratic term can rest up to ~2*tol/k_rep inside its
  // activation radius; the margin keeps that resting point strictly clear of
  // the 0.75 * vdW-sum validity threshold.
  double clash_margin = 0.03;        // nm
};

struct RelaxSystem {
  std::vector<Vec3> coords;  // nm; protein heavy atoms first, then ligand
  std::vector<PositionalRestraint> restraints;
  std::vector<BondRestraint> bonds;
  std::vector<SoftRepulsion> repulsions;
  int protein_atom_count = 0;

  // Frozen-topology back references into the source complex.
  struct ProteinRef {
    int chain, residue, atom;
  };
  std::vector<ProteinRef> protein_refs;
  std::vector<int> ligand_refs;  // ligand atom indices
};

struct EnergyGradient {
  double energy = 0.0;             // kJ/mol
  std::vector<Vec3> gradient;      // kJ/mol/nm per atom
  double max_atom_gradient = 0.0;  // max Euclidean norm over atoms
};

struct MinimizeResult {
  int iterations = 0;
  double final_energy = 0.0;
  double final_max_gradient = 0.0;
  bool converged = false;
  std::string diagnostic;
  std::vector<double> energy_trace;  // energy after each accepted step
};

struct RelaxStats {
  int clash_count_before = 0;
  int clash_count_after = 0;
  double backbone_rmsd_from_input = 0.0;   // Angstrom
  double backbone_mean_displacement = 0.0; // Angstrom
  double ligand_mean_displacement = 0.0;   // Angstrom
  MinimizeResult minimize;
};

struct RelaxedComplex {
  ProteinStructure protein;
  SmallMolecule ligand;
  RelaxStats stats;
};

// One positional restraint per backbone atom (CA, C, N, O), one bond
// restraint per covalent bond (ligand graph bonds; protein bonds from
// residue templates plus peptide links), and soft repulsion pairs between
// ligand and protein heavy atoms and ligand-internal non-bonded pairs,
// enumerated within the cutoff. Throws on unknown residue templates.
RelaxSystem build_system(const ProteinStructure &protein, const SmallMolecule &ligand,
                         const RelaxConfig &config = {});

// E = sum restraints 0.5 k |r-r0|^2 + sum bonds 0.5 k_bond (d-d0)^2
//   + sum repulsions [d < c] 0.5 k_rep (c-d)^2, with the exact analytic
// gradient.
EnergyGradient energy_gradient(const RelaxSystem &system,
                               const std::vector<Vec3> &coords);

// Gradient descent with Armijo backtracking (c = 1e-4, shrink 0.5); stops
// when the max per-atom gradient norm reaches the tolerance or the iteration
// budget runs out. Energy is non-increasing across accepted steps. Mutates
// system.coords.
MinimizeResult minimize(RelaxSystem &system, const RelaxConfig &config = {});

// Number of ligand-protein heavy pairs violating the minimum-distance rule
// (distance <= 0.75 * vdW sum). Inputs in Angstrom.
int count_ligand_protein_clashes(const ProteinStructure &protein,
                                 const SmallMolecule &ligand);

RelaxedComplex relax_complex(const ProteinStructure &protein,
                             const SmallMolecule &ligand,
                             const RelaxConfig &config = {});

}  // namespace posekit

#endif  // POSEKIT_RELAX_RELAX_HPP_
