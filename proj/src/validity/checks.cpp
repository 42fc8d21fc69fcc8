//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/validity/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <functional>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "posekit/geom/geom.hpp"
#include "posekit/rmsd/symmetry_rmsd.hpp"

namespace posekit {

namespace {

constexpr double kContactScale = 0.75;     // of the radius sum
constexpr double kBoundsLowerScale = 0.75;  // of the lower geometry bound
constexpr double kBoundsUpperScale = 1.25;  // of the upper geometry bound
constexpr double kClashScale = 0.7;      // internal clash, of the vdW sum
constexpr double kPlanarityTol = 0.25;   // Angstrom
constexpr double kOverlapLimit = 0.075;  // fraction of ligand volume
constexpr double kEnergyRatioLimit = 100.0;
constexpr double kContactCutoff = 6.0;  // Angstrom, contact search radius

std::string formula_string(const SmallMolecule &mol) {
  std::map<std::string, int> counts;
  for (const auto &a : mol.atoms)
    if (!is_hydrogen(a.element))
      ++counts[a.element];
  std::ostringstream out;
  for (const auto &[elem, n] : counts) {
    out << elem;
    if (n > 1)
      out << n;
  }
  return out.str();
}

double signed_volume(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d) {
  return (b - a).dot((c - a).cross(d - a));
}

double dihedral_deg(const Vec3 &p1, const Vec3 &p2, const Vec3 &p3, const Vec3 &p4) {
  const Vec3 b1 = p2 - p1, b2 = p3 - p2, b3 = p4 - p3;
  const Vec3 n1 = b1.cross(b2), n2 = b2.cross(b3);
  const Vec3 m = n1.cross(b2 / b2.norm());
  const double x = n1.dot(n2);
  const double y = m.dot(n2);
  return std::atan2(y, x) * 180.0 / M_PI;
}

// Pairwise shortest path lengths (in bonds) over the heavy graph.
std::vector<std::vector<int>> graph_distances(const HeavyGraph &g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    dist[s][s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const auto &[w, order] : g.adj[v]) {
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][v] + 1;
          q.push(w);
        }
      }
    }
  }
  return dist;
}

struct ContactAtoms {
  std::vector<Vec3> pos;
  std::vector<std::string> elem;

  void add(const Atom &a) {
    if (!is_hydrogen(a.element)) {
      pos.push_back(a.position);
      elem.push_back(a.element);
    }
  }
  std::size_t size() const { return pos.size(); }
};

ContactAtoms ligand_atoms(const SmallMolecule &mol) {
  ContactAtoms c;
  for (const auto &a : mol.atoms)
    c.add(a);
  return c;
}

// Minimum-distance check with a per-pair threshold = scale * radius sum;
// passes iff every pair is strictly farther than its threshold.
CheckResult distance_check(const std::string &name, const ContactAtoms &lig,
                           const ContactAtoms &other, const RadiusTable &radii,
                           bool use_covalent, const std::string &absent_detail) {
  CheckResult r{name, CheckStatus::Pass, {}, {}, "angstrom", ""};
  if (other.size() == 0) {
    r.detail = absent_detail;
    return r;
  }
  auto radius = [&](const std::string &e) {
    return use_covalent ? radii.covalent(e) : radii.vdw(e);
  };
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_dist = 0, worst_thr = 0;
  std::string worst_pair;
  for (const auto &[i, j] : pairs_within(lig.pos, other.pos, kContactCutoff)) {
    const double thr = kContactScale * (radius(lig.elem[i]) + radius(other.elem[j]));
    const double d = distance(lig.pos[i], other.pos[j]);
    if (d - thr < worst_slack) {
      worst_slack = d - thr;
      worst_dist = d;
      worst_thr = thr;
      worst_pair = lig.elem[i] + "-" + other.elem[j];
    }
  }
  if (!std::isfinite(worst_slack)) {
    r.detail = "no contacts within " + std::to_string(kContactCutoff) + " A";
    return r;
  }
  r.measured = worst_dist;
  r.threshold = worst_thr;
  r.detail = "closest " + worst_pair + " contact";
  r.status = worst_dist > worst_thr ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

std::vector<std::pair<Vec3, double>> scaled_spheres(const ContactAtoms &atoms,
                                                    const RadiusTable &radii,
                                                    double scale) {
  std::vector<std::pair<Vec3, double>> out;
  out.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out.emplace_back(atoms.pos[i], scale * radii.vdw(atoms.elem[i]));
  return out;
}

CheckResult overlap_check(const std::string &name, const ContactAtoms &lig,
                          const ContactAtoms &other, const RadiusTable &radii,
                          double scale, const std::string &absent_detail) {
  CheckResult r{name, CheckStatus::Pass, {}, kOverlapLimit, "fraction", ""};
  if (other.size() == 0) {
    r.detail = absent_detail;
    r.threshold.reset();
    return r;
  }
  const double frac =
      grid_overlap_fraction(scaled_spheres(lig, radii, scale),
                            scaled_spheres(other, radii, scale));
  r.measured = frac;
  r.status = frac < kOverlapLimit ? CheckStatus::Pass : CheckStatus::Fail;
  r.detail = "radii scaled by " + std::to_string(scale).substr(0, 4);
  return r;
}

}  // namespace

std::vector<std::vector<int>> aromatic_rings(const SmallMolecule &mol) {
  HeavyGraph g = HeavyGraph::from_molecule(mol);
  const int n = static_cast<int>(g.size());

  std::vector<std::vector<int>> rings;  // heavy ordinals
  std::vector<int> path;
  std::vector<char> on_path(n, 0);

  // Cycles are enumerated with their smallest ordinal first and second
  // element smaller than the last, so each ring appears exactly once.
  std::function<void(int, int)> extend = [&](int start, int v) {
    if (path.size() > 6)
      return;
    for (const auto &[w, order] : g.adj[v]) {
      if (order != BondOrder::Aromatic)
        continue;
      if (w == start && path.size() >= 5) {
        if (path[1] < path.back())
          rings.push_back(path);
        continue;
      }
      if (w <= start || on_path[w])
        continue;
      path.push_back(w);
      on_path[w] = 1;
      extend(start, w);
      on_path[w] = 0;
      path.pop_back();
    }
  };

  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path.assign(n, 0);
    on_path[s] = 1;
    extend(s, s);
  }

  // Translate heavy ordinals back to molecule atom indices.
  for (auto &ring : rings)
    for (auto &v : ring)
      v = g.atom_index[v];
  return rings;
}

std::vector<CheckResult> check_chemistry(const SmallMolecule &pred,
                                         const SmallMolecule &ref) {
  std::vector<CheckResult> results;

  // Surrogates for toolkit load/sanitization: the parse already succeeded,
  // so these re-assert the structural invariants.
  CheckResult loads{"file_loads", CheckStatus::Pass, {}, {}, "", "parsed successfully"};
  CheckResult sanit{"graph_sanitization", CheckStatus::Pass, {}, {}, "", ""};
  try {
    SmallMolecule copy = pred;
    copy.validate();
    sanit.detail = "graph invariants hold";
  } catch (const Error &e) {
    sanit.status = CheckStatus::Fail;
    sanit.detail = e.what();
  }
  results.push_back(loads);
  results.push_back(sanit);

  // Molecular formula: heavy-atom element multisets.
  const std::string f_pred = formula_string(pred), f_ref = formula_string(ref);
  results.push_back({"molecular_formula",
                     f_pred == f_ref ? CheckStatus::Pass : CheckStatus::Fail,
                     {},
                     {},
                     "",
                     f_pred == f_ref ? f_pred : f_pred + " vs " + f_ref});

  // Bonds + the minimizing correspondence for the stereo checks.
  HeavyGraph gp = HeavyGraph::from_molecule(pred);
  HeavyGraph gr = HeavyGraph::from_molecule(ref);
  AtomCorrespondence correspondence;
  bool have_correspondence = false;
  CheckResult bonds{"bonds", CheckStatus::Pass, {}, {}, "", ""};
  try {
    SymmetryRmsdResult sr = symmetry_rmsd(pred, ref);
    correspondence = sr.correspondence;
    have_correspondence = true;
    bonds.detail = "labeled graphs isomorphic";
  } catch (const NotIsomorphicError &) {
    bonds.status = CheckStatus::Fail;
    bonds.detail = "no label-preserving isomorphism";
  } catch (const Error &e) {
    bonds.status = CheckStatus::Skipped;
    bonds.detail = e.what();
  }
  results.push_back(bonds);

  // Tetrahedral chirality: signed volume over the 4 heavy neighbors, in
  // reference neighbor order, under the minimizing correspondence.
  CheckResult chirality{"tetrahedral_chirality", CheckStatus::Pass, {}, {}, "", ""};
  CheckResult stereo{"double_bond_stereochemistry", CheckStatus::Pass, {}, {}, "", ""};
  if (!have_correspondence) {
    chirality.status = CheckStatus::Skipped;
    chirality.detail = "no atom correspondence";
    stereo.status = CheckStatus::Skipped;
    stereo.detail = "no atom correspondence";
  } else {
    std::vector<int> inverse(gr.size());
    for (std::size_t i = 0; i < correspondence.size(); ++i)
      inverse[correspondence[i]] = static_cast<int>(i);

    int centers = 0, flipped = 0;
    for (int v = 0; v < static_cast<int>(gr.size()); ++v) {
      if (gr.adj[v].size() != 4)
        continue;
      std::vector<int> nbr;
      for (const auto &[w, o] : gr.adj[v])
        nbr.push_back(w);
      std::sort(nbr.begin(), nbr.end());
      const double ref_vol = signed_volume(gr.position[nbr[0]], gr.position[nbr[1]],
                                           gr.position[nbr[2]], gr.position[nbr[3]]);
      const double pred_vol = signed_volume(
          gp.position[inverse[nbr[0]]], gp.position[inverse[nbr[1]]],
          gp.position[inverse[nbr[2]]], gp.position[inverse[nbr[3]]]);
      if (std::abs(ref_vol) < 1e-9 || std::abs(pred_vol) < 1e-9)
        continue;  // planar center, chirality unspecified
      ++centers;
      if ((ref_vol > 0) != (pred_vol > 0))
        ++flipped;
    }
    chirality.measured = flipped;
    chirality.threshold = 0;
    chirality.detail = std::to_string(centers) + " tetrahedral centers";
    chirality.status = flipped == 0 ? CheckStatus::Pass : CheckStatus::Fail;

    // Double-bond stereo: cis/trans over stereogenic C=C, classified by the
    // dihedral of the lowest-ordinal heavy substituents.
    int bonds_checked = 0, mismatched = 0;
    for (int v = 0; v < static_cast<int>(gr.size()); ++v) {
      for (const auto &[w, order] : gr.adj[v]) {
        if (order != BondOrder::Double || v >= w)
          continue;
        if (gr.element[v] != "C" || gr.element[w] != "C")
          continue;
        int sub_v = -1, sub_w = -1;
        for (const auto &[x, o2] : gr.adj[v])
          if (x != w && (sub_v < 0 || x < sub_v))
            sub_v = x;
        for (const auto &[x, o2] : gr.adj[w])
          if (x != v && (sub_w < 0 || x < sub_w))
            sub_w = x;
        if (sub_v < 0 || sub_w < 0)
          continue;  // terminal double bond, not stereogenic
        const double ref_dih = dihedral_deg(gr.position[sub_v], gr.position[v],
                                            gr.position[w], gr.position[sub_w]);
        const double pred_dih = dihedral_deg(
            gp.position[inverse[sub_v]], gp.position[inverse[v]],
            gp.position[inverse[w]], gp.position[inverse[sub_w]]);
        ++bonds_checked;
        const bool ref_cis = std::abs(ref_dih) < 90.0;
        const bool pred_cis = std::abs(pred_dih) < 90.0;
        if (ref_cis != pred_cis)
          ++mismatched;
      }
    }
    stereo.measured = mismatched;
    stereo.threshold = 0;
    stereo.detail = std::to_string(bonds_checked) + " stereogenic double bonds";
    stereo.status = mismatched == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  results.push_back(chirality);
  results.push_back(stereo);
  return results;
}

std::vector<CheckResult>
check_intramolecular(const SmallMolecule &pred, const BoundsTable &bounds,
                     const ConformerEnergyProvider *energy_provider) {
  std::vector<CheckResult> results;
  HeavyGraph g = HeavyGraph::from_molecule(pred);
  const RadiusTable &radii = RadiusTable::standard();

  // Bond lengths: each heavy bond within [0.75*lower, 1.25*upper].
  {
    CheckResult r{"bond_lengths", CheckStatus::Pass, {}, {}, "angstrom", ""};
    double worst_score = -std::numeric_limits<double>::infinity();
    int checked = 0;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
      for (const auto &[w, order] : g.adj[v]) {
        if (v >= w)
          continue;
        ++checked;
        const double len = distance(g.position[v], g.position[w]);
        const double lo =
            kBoundsLowerScale * bounds.bond_lower(g.element[v], g.element[w], order);
        const double hi =
            kBoundsUpperScale * bounds.bond_upper(g.element[v], g.element[w], order);
        const double score = std::max(lo - len, len - hi);
        if (score > worst_score) {
          worst_score = score;
          r.measured = len;
          r.threshold = (lo - len > len - hi) ? lo : hi;
          r.detail = g.element[v] + "-" + g.element[w] + " bond";
        }
      }
    }
    if (checked == 0) {
      r.detail = "no heavy-atom bonds";
    } else if (worst_score > 0) {
      r.status = CheckStatus::Fail;
    }
    results.push_back(r);
  }

  // Bond angles: hybridization ideal +/- 10 deg, same 0.75/1.25 scaling.
  {
    CheckResult r{"bond_angles", CheckStatus::Pass, {}, {}, "degree", ""};
    double worst_score = -std::numeric_limits<double>::infinity();
    int checked = 0;
    for (int j = 0; j < static_cast<int>(g.size()); ++j) {
      const auto &nbrs = g.adj[j];
      if (nbrs.size() < 2)
        continue;
      const Hybridization hyb = infer_hybridization(pred, g.atom_index[j]);
      const double lo = kBoundsLowerScale * bounds.angle_lower(hyb);
      const double hi = kBoundsUpperScale * bounds.angle_upper(hyb);
      for (std::size_t x = 0; x < nbrs.size(); ++x) {
        for (std::size_t y = x + 1; y < nbrs.size(); ++y) {
          ++checked;
          const Vec3 u = g.position[nbrs[x].first] - g.position[j];
          const Vec3 v = g.position[nbrs[y].first] - g.position[j];
          const double ang =
              std::atan2(u.cross(v).norm(), u.dot(v)) * 180.0 / M_PI;
          const double score = std::max(lo - ang, ang - hi);
          if (score > worst_score) {
            worst_score = score;
            r.measured = ang;
            r.threshold = (lo - ang > ang - hi) ? lo : hi;
            r.detail = "angle at " + g.element[j];
          }
        }
      }
    }
    if (checked == 0) {
      r.detail = "no bond angles";
    } else if (worst_score > 0) {
      r.status = CheckStatus::Fail;
    }
    results.push_back(r);
  }

  // Aromatic ring flatness.
  {
    CheckResult r{"aromatic_ring_flatness", CheckStatus::Pass, {}, kPlanarityTol,
                  "angstrom", ""};
    const auto rings = aromatic_rings(pred);
    if (rings.empty()) {
      r.detail = "no 5/6-membered aromatic rings";
      r.threshold.reset();
    } else {
      double worst = 0;
      for (const auto &ring : rings) {
        std::vector<Vec3> pts;
        for (int idx : ring)
          pts.push_back(pred.atoms[idx].position);
        worst = std::max(worst, fit_plane(pts).max_deviation);
      }
      r.measured = worst;
      r.detail = std::to_string(rings.size()) + " aromatic rings";
      r.status = worst <= kPlanarityTol ? CheckStatus::Pass : CheckStatus::Fail;
    }
    results.push_back(r);
  }

  // Double-bond flatness: C=C carbons plus their heavy neighbors.
  {
    CheckResult r{"double_bond_flatness", CheckStatus::Pass, {}, kPlanarityTol,
                  "angstrom", ""};
    double worst = -1;
    int checked = 0;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
      for (const auto &[w, order] : g.adj[v]) {
        if (v >= w || order != BondOrder::Double)
          continue;
        if (g.element[v] != "C" || g.element[w] != "C")
          continue;
        std::vector<Vec3> unit{g.position[v], g.position[w]};
        for (const auto &[x, o2] : g.adj[v])
          if (x != w)
            unit.push_back(g.position[x]);
        for (const auto &[x, o2] : g.adj[w])
          if (x != v)
            unit.push_back(g.position[x]);
        if (unit.size() < 3)
          continue;
        ++checked;
        worst = std::max(worst, fit_plane(unit).max_deviation);
      }
    }
    if (checked == 0) {
      r.detail = "no carbon-carbon double bonds";
      r.threshold.reset();
    } else {
      r.measured = worst;
      r.detail = std::to_string(checked) + " double-bond units";
      r.status = worst <= kPlanarityTol ? CheckStatus::Pass : CheckStatus::Fail;
    }
    results.push_back(r);
  }

  // Internal steric clash: pairs 1-4 or farther apart must be strictly
  // above 0.7 of the vdW-sum lower bound.
  {
    CheckResult r{"internal_steric_clash", CheckStatus::Pass, {}, {}, "angstrom", ""};
    const auto dist = graph_distances(g);
    double worst_slack = std::numeric_limits<double>::infinity();
    int checked = 0;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
      for (int w = v + 1; w < static_cast<int>(g.size()); ++w) {
        const int sep = dist[v][w];
        if (sep >= 1 && sep <= 2)
          continue;  // 1-2 and 1-3 pairs exempt
        ++checked;
        const double thr =
            kClashScale * (radii.vdw(g.element[v]) + radii.vdw(g.element[w]));
        const double d = distance(g.position[v], g.position[w]);
        if (d - thr < worst_slack) {
          worst_slack = d - thr;
          r.measured = d;
          r.threshold = thr;
          r.detail = g.element[v] + "..." + g.element[w] + " pair";
        }
      }
    }
    if (checked == 0) {
      r.detail = "no non-bonded pairs";
    } else {
      r.status = worst_slack > 0 ? CheckStatus::Pass : CheckStatus::Fail;
    }
    results.push_back(r);
  }

  // Energy ratio, when a provider is configured.
  {
    CheckResult r{"energy_ratio", CheckStatus::Skipped, {}, kEnergyRatioLimit, "ratio",
                  "no conformer energy provider configured"};
    if (energy_provider != nullptr) {
      const auto [pose, mean] = energy_provider->energies(pred);
      r.status = pose <= kEnergyRatioLimit * mean ? CheckStatus::Pass : CheckStatus::Fail;
      if (mean != 0.0)
        r.measured = pose / mean;
      r.detail = "pose vs 50-conformer ensemble mean";
    }
    results.push_back(r);
  }

  return results;
}

std::vector<CheckResult> check_intermolecular(const SmallMolecule &pred,
                                              const ProteinStructure &protein,
                                              const RadiusTable &radii) {
  ContactAtoms lig = ligand_atoms(pred);

  ContactAtoms prot, organic, inorganic;
  for (const auto *a : protein.polymer_heavy_atoms())
    prot.add(*a);
  for (const auto &h : protein.hetero_groups) {
    if (h.kind == HeteroClass::Water)
      continue;  // waters are not part of the Appendix-style checks
    for (const auto &a : h.molecule.atoms) {
      if (h.kind == HeteroClass::Organic)
        organic.add(a);
      else
        inorganic.add(a);
    }
  }

  std::vector<CheckResult> results;
  results.push_back(distance_check("min_distance_to_protein", lig, prot, radii,
                                   false, "no protein atoms"));
  results.push_back(distance_check("min_distance_to_organic_cofactors", lig, organic,
                                   radii, false, "no organic cofactors"));
  results.push_back(distance_check("min_distance_to_inorganic_cofactors", lig,
                                   inorganic, radii, true, "no inorganic cofactors"));
  results.push_back(overlap_check("volume_overlap_with_protein", lig, prot, radii, 0.8,
                                  "no protein atoms"));
  results.push_back(overlap_check("volume_overlap_with_organic_cofactors", lig,
                                  organic, radii, 0.8, "no organic cofactors"));
  results.push_back(overlap_check("volume_overlap_with_inorganic_cofactors", lig,
                                  inorganic, radii, 0.5, "no inorganic cofactors"));
  return results;
}

bool pb_valid(const ValidityReport &report) {
  for (const auto *group :
       {&report.chemistry, &report.intramolecular, &report.intermolecular})
    for (const auto &r : *group)
      if (r.status == CheckStatus::Fail)
        return false;
  return true;
}

ValidityReport build_report(std::vector<CheckResult> chemistry,
                            std::vector<CheckResult> intramolecular,
                            std::vector<CheckResult> intermolecular) {
  ValidityReport report;
  report.chemistry = std::move(chemistry);
  report.intramolecular = std::move(intramolecular);
  report.intermolecular = std::move(intermolecular);
  report.pb_valid = pb_valid(report);
  for (const auto *group :
       {&report.chemistry, &report.intramolecular, &report.intermolecular})
    for (const auto &r : *group)
      if (r.status == CheckStatus::Skipped)
        ++report.skipped_count;
  return report;
}

ValidityReport evaluate_validity(const SmallMolecule &pred, const SmallMolecule &ref,
                                 const ProteinStructure &protein,
                                 const BoundsTable &bounds, const RadiusTable &radii,
                                 const ConformerEnergyProvider *energy_provider) {
  return build_report(check_chemistry(pred, ref),
                      check_intramolecular(pred, bounds, energy_provider),
                      check_intermolecular(pred, protein, radii));
}

const char *check_status_name(CheckStatus s) {
  switch (s) {
  case CheckStatus::Pass: return "pass";
  case CheckStatus::Fail: return "fail";
  case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

std::string report_to_json(const ValidityReport &report) {
  nlohmann::ordered_json doc;
  auto dump_group = [](const std::vector<CheckResult> &group) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &r : group) {
      nlohmann::ordered_json item;
      item["name"] = r.name;
      item["status"] = check_status_name(r.status);
      item["measured"] = r.measured ? nlohmann::ordered_json(*r.measured)
                                    : nlohmann::ordered_json(nullptr);
      item["threshold"] = r.threshold ? nlohmann::ordered_json(*r.threshold)
                                      : nlohmann::ordered_json(nullptr);
      item["unit"] = r.unit;
      item["detail"] = r.detail;
      arr.push_back(item);
    }
    return arr;
  };
  doc["chemistry"] = dump_group(report.chemistry);
  doc["intramolecular"] = dump_group(report.intramolecular);
  doc["intermolecular"] = dump_group(report.intermolecular);
  doc["pb_valid"] = report.pb_valid;
  doc["skipped_count"] = report.skipped_count;
  return doc.dump(2) + "\n";
}

double grid_overlap_fraction(const std::vector<std::pair<Vec3, double>> &ligand,
                             const std::vector<std::pair<Vec3, double>> &other,
                             double spacing) {
  if (ligand.empty())
    throw Error("grid_overlap_fraction: no ligand spheres");
  if (spacing <= 0)
    throw Error("grid_overlap_fraction: spacing must be positive");

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = lo * -1.0;
  for (const auto &[c, r] : ligand) {
    lo = {std::min(lo.x, c.x - r), std::min(lo.y, c.y - r), std::min(lo.z, c.z - r)};
    hi = {std::max(hi.x, c.x + r), std::max(hi.y, c.y + r), std::max(hi.z, c.z + r)};
  }
  const int nx = static_cast<int>(std::floor((hi.x - lo.x) / spacing)) + 1;
  const int ny = static_cast<int>(std::floor((hi.y - lo.y) / spacing)) + 1;
  const int nz = static_cast<int>(std::floor((hi.z - lo.z) / spacing)) + 1;

  std::vector<char> inside(static_cast<std::size_t>(nx) * ny * nz, 0);
  auto index = [&](int ix, int iy, int iz) {
    return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
  };
  auto rasterize = [&](const Vec3 &c, double r, auto &&visit) {
    const int x0 = std::max(0, static_cast<int>(std::ceil((c.x - r - lo.x) / spacing)));
    const int x1 = std::min(nx - 1, static_cast<int>(std::floor((c.x + r - lo.x) / spacing)));
    const int y0 = std::max(0, static_cast<int>(std::ceil((c.y - r - lo.y) / spacing)));
    const int y1 = std::min(ny - 1, static_cast<int>(std::floor((c.y + r - lo.y) / spacing)));
    const int z0 = std::max(0, static_cast<int>(std::ceil((c.z - r - lo.z) / spacing)));
    const int z1 = std::min(nz - 1, static_cast<int>(std::floor((c.z + r - lo.z) / spacing)));
    const double r2 = r * r;
    for (int ix = x0; ix <= x1; ++ix) {
      for (int iy = y0; iy <= y1; ++iy) {
        for (int iz = z0; iz <= z1; ++iz) {
          const Vec3 p{lo.x + ix * spacing, lo.y + iy * spacing, lo.z + iz * spacing};
          if ((p - c).squared_norm() <= r2)
            visit(ix, iy, iz);
        }
      }
    }
  };

  for (const auto &[c, r] : ligand)
    rasterize(c, r, [&](int ix, int iy, int iz) { inside[index(ix, iy, iz)] = 1; });

  std::size_t inside_count = 0;
  for (char f : inside)
    inside_count += f;
  if (inside_count == 0)
    return 0.0;

  for (const auto &[c, r] : other)
    rasterize(c, r, [&](int ix, int iy, int iz) {
      auto &f = inside[index(ix, iy, iz)];
      if (f == 1)
        f = 2;
    });

  std::size_t overlap_count = 0;
  for (char f : inside)
    overlap_count += f == 2;
  return static_cast<double>(overlap_count) / static_cast<double>(inside_count);
}

}  // namespace posekit
