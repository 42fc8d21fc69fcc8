//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/relax/relax.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "posekit/core/elements.hpp"
#include "posekit/geom/geom.hpp"
#include "posekit/rmsd/symmetry_rmsd.hpp"

namespace posekit {

namespace {

constexpr double kAngstromPerNm = 10.0;
constexpr double kClashScale = 0.75;  // of the vdW-radius sum
constexpr double kPeptideLinkMax = 0.20;  // nm, C(i)-N(i+1) sanity bound

// Heavy-atom connectivity templates for the standard residues. Bonds are
// added only when both named atoms are present.
const std::unordered_map<std::string, std::vector<std::pair<const char *, const char *>>> &
residue_templates() {
  using B = std::vector<std::pair<const char *, const char *>>;
  static const std::unordered_map<std::string, B> templates = [] {
    std::unordered_map<std::string, B> t;
    const B backbone = {{"N", "CA"}, {"CA", "C"}, {"C", "O"}, {"C", "OXT"}};
    auto add = [&](const std::string &name, B side) {
      B all = backbone;
      all.insert(all.end(), side.begin(), side.end());
      t[name] = std::move(all);
    };
    add("GLY", {});
    add("ALA", {{"CA", "CB"}});
    add("VAL", {{"CA", "CB"}, {"CB", "CG1"}, {"CB", "CG2"}});
    add("LEU", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD1"}, {"CG", "CD2"}});
    add("ILE", {{"CA", "CB"}, {"CB", "CG1"}, {"CB", "CG2"}, {"CG1", "CD1"}});
    add("PRO", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "N"}});
    add("PHE", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD1"}, {"CD1", "CE1"},
                {"CE1", "CZ"}, {"CZ", "CE2"}, {"CE2", "CD2"}, {"CD2", "CG"}});
    add("TYR", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD1"}, {"CD1", "CE1"},
                {"CE1", "CZ"}, {"CZ", "CE2"}, {"CE2", "CD2"}, {"CD2", "CG"},
                {"CZ", "OH"}});
    add("TRP", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD1"}, {"CD1", "NE1"},
                {"NE1", "CE2"}, {"CE2", "CD2"}, {"CD2", "CG"}, {"CE2", "CZ2"},
                {"CZ2", "CH2"}, {"CH2", "CZ3"}, {"CZ3", "CE3"}, {"CE3", "CD2"}});
    add("SER", {{"CA", "CB"}, {"CB", "OG"}});
    add("THR", {{"CA", "CB"}, {"CB", "OG1"}, {"CB", "CG2"}});
    add("CYS", {{"CA", "CB"}, {"CB", "SG"}});
    add("MET", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "SD"}, {"SD", "CE"}});
    add("MSE", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "SE"}, {"SE", "CE"}});
    add("ASP", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "OD1"}, {"CG", "OD2"}});
    add("GLU", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "OE1"}, {"CD", "OE2"}});
    add("ASN", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "OD1"}, {"CG", "ND2"}});
    add("GLN", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "OE1"}, {"CD", "NE2"}});
    add("LYS", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "CE"}, {"CE", "NZ"}});
    add("ARG", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "NE"}, {"NE", "CZ"},
                {"CZ", "NH1"}, {"CZ", "NH2"}});
    add("HIS", {{"CA", "CB"}, {"CB", "CG"}, {"CG", "ND1"}, {"ND1", "CE1"},
                {"CE1", "NE2"}, {"NE2", "CD2"}, {"CD2", "CG"}});
    for (const char *alias : {"HID", "HIE", "HIP"})
      t[alias] = t.at("HIS");
    t["CYX"] = t.at("CYS");
    t["ASH"] = t.at("ASP");
    t["GLH"] = t.at("GLU");
    t["LYN"] = t.at("LYS");
    return t;
  }();
  return templates;
}

bool is_backbone_name(const std::string &name) {
  return name == "CA" || name == "C" || name == "N" || name == "O";
}

}  // namespace

RelaxSystem build_system(const ProteinStructure &protein, const SmallMolecule &ligand,
                         const RelaxConfig &config) {
  if (ligand.heavy_atom_count() == 0)
    throw Error("build_system: ligand has no heavy atoms");

  RelaxSystem sys;
  const RadiusTable &radii = RadiusTable::standard();
  std::vector<std::string> elements;

  // Protein heavy atoms, flattened; remember (chain, residue, atom name)
  // indices so bonds and restraints can be wired by name.
  for (int ci = 0; ci < static_cast<int>(protein.chains.size()); ++ci) {
    const Chain &chain = protein.chains[ci];
    std::unordered_map<std::string, int> prev_names;  // previous residue map
    int prev_residue = -1;
    for (int ri = 0; ri < static_cast<int>(chain.residues.size()); ++ri) {
      const Residue &res = chain.residues[ri];
      auto tmpl = residue_templates().find(res.name);
      if (tmpl == residue_templates().end())
        throw Error("build_system: unknown residue template '" + res.name + "'");

      std::unordered_map<std::string, int> names;
      for (int ai = 0; ai < static_cast<int>(res.atoms.size()); ++ai) {
        const Atom &a = res.atoms[ai];
        if (is_hydrogen(a.element))
          continue;
        const int idx = static_cast<int>(sys.coords.size());
        sys.coords.push_back(a.position / kAngstromPerNm);
        sys.protein_refs.push_back({ci, ri, ai});
        elements.push_back(a.element);
        names[a.name] = idx;
        if (is_backbone_name(a.name))
          sys.restraints.push_back({idx, sys.coords[idx], config.k_backbone});
      }

      for (const auto &[na, nb] : tmpl->second) {
        auto ia = names.find(na), ib = names.find(nb);
        if (ia == names.end() || ib == names.end())
          continue;
        const double d = distance(sys.coords[ia->second], sys.coords[ib->second]);
        sys.bonds.push_back({ia->second, ib->second, d, config.k_bond});
      }
      // Peptide link C(i-1) -> N(i), guarded against chain breaks.
      if (prev_residue == ri - 1) {
        auto ic = prev_names.find("C");
        auto in = names.find("N");
        if (ic != prev_names.end() && in != names.end()) {
          const double d = distance(sys.coords[ic->second], sys.coords[in->second]);
          if (d < kPeptideLinkMax)
            sys.bonds.push_back({ic->second, in->second, d, config.k_bond});
        }
      }
      prev_names = std::move(names);
      prev_residue = ri;
    }
  }
  sys.protein_atom_count = static_cast<int>(sys.coords.size());

  // Ligand heavy atoms and their graph bonds.
  HeavyGraph lig_graph = HeavyGraph::from_molecule(ligand);
  std::unordered_map<int, int> lig_sys;  // ligand atom index -> system index
  for (std::size_t k = 0; k < lig_graph.atom_index.size(); ++k) {
    const int ai = lig_graph.atom_index[k];
    const int idx = static_cast<int>(sys.coords.size());
    sys.coords.push_back(ligand.atoms[ai].position / kAngstromPerNm);
    sys.ligand_refs.push_back(ai);
    elements.push_back(ligand.atoms[ai].element);
    lig_sys[ai] = idx;
  }
  for (const auto &b : ligand.bonds) {
    auto ia = lig_sys.find(b.a), ib = lig_sys.find(b.b);
    if (ia == lig_sys.end() || ib == lig_sys.end())
      continue;  // bond to hydrogen
    const double d = distance(sys.coords[ia->second], sys.coords[ib->second]);
    sys.bonds.push_back({ia->second, ib->second, d, config.k_bond});
  }

  auto repulsion_radius = [&](int i, int j) {
    return kClashScale * (radii.vdw(elements[i]) + radii.vdw(elements[j])) /
               kAngstromPerNm +
           config.clash_margin;
  };

  // Ligand-protein repulsion pairs within the cutoff.
  {
    std::vector<Vec3> lig_pos(sys.coords.begin() + sys.protein_atom_count,
                              sys.coords.end());
    std::vector<Vec3> prot_pos(sys.coords.begin(),
                               sys.coords.begin() + sys.protein_atom_count);
    if (!prot_pos.empty()) {
      for (const auto &[li, pi] : pairs_within(lig_pos, prot_pos, config.repulsion_cutoff)) {
        const int i = sys.protein_atom_count + static_cast<int>(li);
        const int j = static_cast<int>(pi);
        sys.repulsions.push_back({i, j, repulsion_radius(i, j), config.k_rep});
      }
    }
  }

  // Ligand internal non-bonded pairs (1-2 and 1-3 exempt).
  {
    const int n = static_cast<int>(lig_graph.size());
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
      std::vector<int> queue{s};
      dist[s][s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (const auto &[w, o] : lig_graph.adj[v]) {
          if (dist[s][w] < 0) {
            dist[s][w] = dist[s][v] + 1;
            queue.push_back(w);
          }
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const int sep = dist[a][b];
        if (sep >= 1 && sep <= 2)
          continue;
        const int i = lig_sys.at(lig_graph.atom_index[a]);
        const int j = lig_sys.at(lig_graph.atom_index[b]);
        if (distance(sys.coords[i], sys.coords[j]) > config.repulsion_cutoff)
          continue;
        sys.repulsions.push_back({i, j, repulsion_radius(i, j), config.k_rep});
      }
    }
  }

  const EnergyGradient init = energy_gradient(sys, sys.coords);
  if (!std::isfinite(init.energy))
    throw Error("build_system: non-finite energy at the input coordinates");
  return sys;
}

EnergyGradient energy_gradient(const RelaxSystem &system,
                               const std::vector<Vec3> &coords) {
  if (coords.size() != system.coords.size())
    throw Error("energy_gradient: coordinate count mismatch");
  for (const auto &c : coords)
    if (!c.finite())
      throw Error("energy_gradient: non-finite coordinate");

  EnergyGradient out;
  out.gradient.assign(coords.size(), Vec3{});

  for (const auto &r : system.restraints) {
    const Vec3 d = coords[r.atom] - r.anchor;
    out.energy += 0.5 * r.k * d.squared_norm();
    out.gradient[r.atom] += r.k * d;
  }
  for (const auto &b : system.bonds) {
    const Vec3 rij = coords[b.i] - coords[b.j];
    const double d = rij.norm();
    const double delta = d - b.target_length;
    out.energy += 0.5 * b.k_bond * delta * delta;
    if (d > 0) {
      const Vec3 g = (b.k_bond * delta / d) * rij;
      out.gradient[b.i] += g;
      out.gradient[b.j] -= g;
    }
  }
  for (const auto &p : system.repulsions) {
    const Vec3 rij = coords[p.i] - coords[p.j];
    const double d = rij.norm();
    if (d >= p.clash_distance)
      continue;
    const double gap = p.clash_distance - d;
    out.energy += 0.5 * p.k_rep * gap * gap;
    if (d > 0) {
      const Vec3 g = (-p.k_rep * gap / d) * rij;
      out.gradient[p.i] += g;
      out.gradient[p.j] -= g;
    }
  }

  for (const auto &g : out.gradient)
    out.max_atom_gradient = std::max(out.max_atom_gradient, g.norm());
  return out;
}

MinimizeResult minimize(RelaxSystem &system, const RelaxConfig &config) {
  constexpr double kArmijoC = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr double kGrow = 2.0;
  constexpr double kStepInit = 2e-4;  // nm^2 mol / kJ
  constexpr double kStepMax = 0.05;
  constexpr double kStepMin = 1e-16;

  MinimizeResult result;
  EnergyGradient eg = energy_gradient(system, system.coords);
  result.energy_trace.push_back(eg.energy);

  double step = kStepInit;
  std::vector<Vec3> trial(system.coords.size());

  while (true) {
    if (eg.max_atom_gradient <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iterations) {
      result.diagnostic = "iteration budget exhausted";
      break;
    }

    double g2 = 0.0;
    for (const auto &g : eg.gradient)
      g2 += g.squared_norm();

    // Backtracking line search along -gradient.
    double alpha = step;
    bool accepted = false;
    EnergyGradient trial_eg;
    while (alpha >= kStepMin) {
      for (std::size_t i = 0; i < trial.size(); ++i)
        trial[i] = system.coords[i] - alpha * eg.gradient[i];
      trial_eg = energy_gradient(system, trial);
      if (trial_eg.energy <= eg.energy - kArmijoC * alpha * g2) {
        accepted = true;
        break;
      }
      alpha *= kShrink;
    }
    if (!accepted) {
      result.diagnostic = "line search found no decreasing step at machine precision";
      break;
    }

    system.coords = trial;
    eg = std::move(trial_eg);
    result.energy_trace.push_back(eg.energy);
    ++result.iterations;
    step = std::min(alpha * kGrow, kStepMax);
  }

  result.final_energy = eg.energy;
  result.final_max_gradient = eg.max_atom_gradient;
  return result;
}

int count_ligand_protein_clashes(const ProteinStructure &protein,
                                 const SmallMolecule &ligand) {
  const RadiusTable &radii = RadiusTable::standard();
  std::vector<Vec3> lig_pos;
  std::vector<std::string> lig_elem;
  for (const auto &a : ligand.atoms) {
    if (!is_hydrogen(a.element)) {
      lig_pos.push_back(a.position);
      lig_elem.push_back(a.element);
    }
  }
  std::vector<Vec3> prot_pos;
  std::vector<std::string> prot_elem;
  for (const auto *a : protein.polymer_heavy_atoms()) {
    prot_pos.push_back(a->position);
    prot_elem.push_back(a->element);
  }
  if (lig_pos.empty() || prot_pos.empty())
    return 0;

  int clashes = 0;
  for (const auto &[i, j] : pairs_within(lig_pos, prot_pos, 6.0)) {
    const double thr = kClashScale * (radii.vdw(lig_elem[i]) + radii.vdw(prot_elem[j]));
    if (distance(lig_pos[i], prot_pos[j]) <= thr)
      ++clashes;
  }
  return clashes;
}

RelaxedComplex relax_complex(const ProteinStructure &protein,
                             const SmallMolecule &ligand, const RelaxConfig &config) {
  RelaxedComplex out{protein, ligand, {}};
  out.stats.clash_count_before = count_ligand_protein_clashes(protein, ligand);

  RelaxSystem sys = build_system(protein, ligand, config);
  const std::vector<Vec3> initial = sys.coords;
  out.stats.minimize = minimize(sys, config);

  // Write relaxed coordinates back (nm -> Angstrom); hydrogens and hetero
  // groups were not part of the system and stay at their input positions.
  for (int i = 0; i < sys.protein_atom_count; ++i) {
    const auto &ref = sys.protein_refs[i];
    out.protein.chains[ref.chain].residues[ref.residue].atoms[ref.atom].position =
        sys.coords[i] * kAngstromPerNm;
  }
  for (std::size_t k = 0; k < sys.ligand_refs.size(); ++k) {
    out.ligand.atoms[sys.ligand_refs[k]].position =
        sys.coords[sys.protein_atom_count + k] * kAngstromPerNm;
  }

  out.stats.clash_count_after = count_ligand_protein_clashes(out.protein, out.ligand);

  double backbone_ss = 0.0, backbone_sum = 0.0, ligand_sum = 0.0;
  int backbone_n = 0, ligand_n = 0;
  for (int i = 0; i < sys.protein_atom_count; ++i) {
    const auto &ref = sys.protein_refs[i];
    const Atom &a = out.protein.chains[ref.chain].residues[ref.residue].atoms[ref.atom];
    if (!is_backbone_name(a.name))
      continue;
    const double d = distance(sys.coords[i], initial[i]) * kAngstromPerNm;
    backbone_ss += d * d;
    backbone_sum += d;
    ++backbone_n;
  }
  for (std::size_t k = 0; k < sys.ligand_refs.size(); ++k) {
    const std::size_t i = sys.protein_atom_count + k;
    ligand_sum += distance(sys.coords[i], initial[i]) * kAngstromPerNm;
    ++ligand_n;
  }
  out.stats.backbone_rmsd_from_input =
      backbone_n > 0 ? std::sqrt(backbone_ss / backbone_n) : 0.0;
  out.stats.backbone_mean_displacement = backbone_n > 0 ? backbone_sum / backbone_n : 0.0;
  out.stats.ligand_mean_displacement = ligand_n > 0 ? ligand_sum / ligand_n : 0.0;
  return out;
}

}  // namespace posekit
