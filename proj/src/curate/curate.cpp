//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/curate/curate.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "posekit/core/seqalign.hpp"
#include "posekit/crossdock/crossdock.hpp"

namespace posekit {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json &obj, const char *key, std::optional<T> &out) {
  if (obj.contains(key) && !obj[key].is_null())
    out = obj[key].get<T>();
}

// The longest chain sequence stands in for the entry during clustering.
const std::string &clustering_sequence(const ManifestEntry &e) {
  if (e.sequences.empty())
    throw Error("manifest entry '" + e.entry_id() +
                "' has no sequences (required for clustering)");
  const std::string *best = &e.sequences[0];
  for (const auto &s : e.sequences)
    if (s.size() > best->size())
      best = &s;
  return *best;
}

struct Predicate {
  std::string step_name;
  std::string field;  // manifest field the predicate reads
  bool (*test)(const ManifestEntry &, const FilterConfig &);
  bool (*present)(const ManifestEntry &);
};

const std::vector<Predicate> &predicates(Pipeline pipeline) {
  static const std::vector<Predicate> common_head = {
      {"release_window", "release_date",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.release_date >= c.release_from && *e.release_date < c.release_until;
       },
       [](const ManifestEntry &e) { return e.release_date.has_value(); }},
      {"resolution", "resolution",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.resolution <= c.max_resolution;
       },
       [](const ManifestEntry &e) { return e.resolution.has_value(); }},
      {"ligand_weight", "ligand_mw",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.ligand_mw >= c.min_ligand_mw && *e.ligand_mw <= c.max_ligand_mw;
       },
       [](const ManifestEntry &e) { return e.ligand_mw.has_value(); }},
      {"heavy_atoms", "heavy_atom_count",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.heavy_atom_count >= c.min_heavy_atoms;
       },
       [](const ManifestEntry &e) { return e.heavy_atom_count.has_value(); }},
      {"allowed_elements", "elements",
       [](const ManifestEntry &e, const FilterConfig &c) {
         for (const auto &elem : *e.elements)
           if (std::find(c.allowed_elements.begin(), c.allowed_elements.end(), elem) ==
               c.allowed_elements.end())
             return false;
         return true;
       },
       [](const ManifestEntry &e) { return e.elements.has_value(); }},
      {"not_covalent", "covalently_bound",
       [](const ManifestEntry &e, const FilterConfig &) { return !*e.covalently_bound; },
       [](const ManifestEntry &e) { return e.covalently_bound.has_value(); }},
      {"rsr", "rsr",
       [](const ManifestEntry &e, const FilterConfig &c) { return *e.rsr <= c.max_rsr; },
       [](const ManifestEntry &e) { return e.rsr.has_value(); }},
      {"rscc", "rscc",
       [](const ManifestEntry &e, const FilterConfig &c) { return *e.rscc >= c.min_rscc; },
       [](const ManifestEntry &e) { return e.rscc.has_value(); }},
      {"completeness", "completeness",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.completeness >= c.min_completeness;
       },
       [](const ManifestEntry &e) { return e.completeness.has_value(); }},
      {"no_stereo_errors", "stereo_errors",
       [](const ManifestEntry &e, const FilterConfig &) { return !*e.stereo_errors; },
       [](const ManifestEntry &e) { return e.stereo_errors.has_value(); }},
      {"no_atomic_clashes", "atomic_clashes",
       [](const ManifestEntry &e, const FilterConfig &) { return !*e.atomic_clashes; },
       [](const ManifestEntry &e) { return e.atomic_clashes.has_value(); }},
      {"min_protein_distance", "min_protein_distance",
       [](const ManifestEntry &e, const FilterConfig &c) {
         return *e.min_protein_distance >= c.min_protein_distance;
       },
       [](const ManifestEntry &e) { return e.min_protein_distance.has_value(); }},
  };
  static const Predicate other_self = {
      "min_other_molecule_distance", "min_other_ligand_distance",
      [](const ManifestEntry &e, const FilterConfig &c) {
        return *e.min_other_ligand_distance >= c.min_other_distance_self;
      },
      [](const ManifestEntry &e) { return e.min_other_ligand_distance.has_value(); }};
  static const Predicate other_cross = {
      "min_other_ligand_distance", "min_other_ligand_distance",
      [](const ManifestEntry &e, const FilterConfig &c) {
        return *e.min_other_ligand_distance >= c.min_other_distance_cross;
      },
      [](const ManifestEntry &e) { return e.min_other_ligand_distance.has_value(); }};
  static const Predicate symmetry = {
      "symmetry_mate_distance", "min_symmetry_mate_distance",
      [](const ManifestEntry &e, const FilterConfig &c) {
        return *e.min_symmetry_mate_distance > c.min_symmetry_mate_distance;
      },
      [](const ManifestEntry &e) { return e.min_symmetry_mate_distance.has_value(); }};

  static const std::vector<Predicate> self_pipeline = [] {
    auto v = common_head;
    v.push_back(other_self);
    v.push_back(symmetry);
    return v;
  }();
  static const std::vector<Predicate> cross_pipeline = [] {
    auto v = common_head;
    v.push_back(other_cross);
    v.push_back(symmetry);
    return v;
  }();
  return pipeline == Pipeline::SelfDock ? self_pipeline : cross_pipeline;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ParseError("manifest: " + std::string(e.what()));
  }
  if (!doc.is_array())
    throw ParseError("manifest: expected a JSON array of entries");

  std::vector<ManifestEntry> entries;
  for (const auto &obj : doc) {
    if (!obj.is_object())
      throw ParseError("manifest: entry is not an object");
    ManifestEntry e;
    if (!obj.contains("pdb_id") || !obj.contains("ccd_id"))
      throw ParseError("manifest: entry missing pdb_id or ccd_id");
    e.pdb_id = obj["pdb_id"].get<std::string>();
    e.ccd_id = obj["ccd_id"].get<std::string>();
    try {
      read_field(obj, "release_date", e.release_date);
      read_field(obj, "resolution", e.resolution);
      read_field(obj, "ligand_mw", e.ligand_mw);
      read_field(obj, "heavy_atom_count", e.heavy_atom_count);
      read_field(obj, "elements", e.elements);
      read_field(obj, "covalently_bound", e.covalently_bound);
      read_field(obj, "rsr", e.rsr);
      read_field(obj, "rscc", e.rscc);
      read_field(obj, "completeness", e.completeness);
      read_field(obj, "stereo_errors", e.stereo_errors);
      read_field(obj, "atomic_clashes", e.atomic_clashes);
      if (obj.contains("sequences"))
        e.sequences = obj["sequences"].get<std::vector<std::string>>();
      read_field(obj, "min_protein_distance", e.min_protein_distance);
      read_field(obj, "min_other_ligand_distance", e.min_other_ligand_distance);
      read_field(obj, "min_symmetry_mate_distance", e.min_symmetry_mate_distance);
    } catch (const json::exception &ex) {
      throw ParseError("manifest entry '" + e.entry_id() + "': " + ex.what());
    }
    if (e.resolution && *e.resolution <= 0)
      throw ParseError("manifest entry '" + e.entry_id() + "': resolution must be > 0");
    if (e.completeness && (*e.completeness < 0 || *e.completeness > 100))
      throw ParseError("manifest entry '" + e.entry_id() +
                       "': completeness outside [0, 100]");
    if (e.rscc && (*e.rscc < -1 || *e.rscc > 1))
      throw ParseError("manifest entry '" + e.entry_id() + "': rscc outside [-1, 1]");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> parse_manifest_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open manifest '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

std::string FilterTrace::to_csv() const {
  std::ostringstream out;
  out << "step,survivors\n";
  for (const auto &s : steps)
    out << s.name << ',' << s.survivors << '\n';
  return out.str();
}

std::pair<std::vector<ManifestEntry>, FilterTrace>
apply_filters(const std::vector<ManifestEntry> &entries, const FilterConfig &config) {
  std::vector<ManifestEntry> survivors = entries;
  FilterTrace trace;

  for (const auto &pred : predicates(config.pipeline)) {
    FilterStep step{pred.step_name, 0, {}};
    std::vector<ManifestEntry> next;
    for (const auto &e : survivors) {
      if (!pred.present(e))
        throw Error("manifest entry '" + e.entry_id() + "' is missing field '" +
                    pred.field + "' required by filter '" + pred.step_name + "'");
      if (pred.test(e, config))
        next.push_back(e);
      else
        step.rejected.push_back(e.entry_id());
    }
    survivors = std::move(next);
    step.survivors = static_cast<int>(survivors.size());
    trace.steps.push_back(std::move(step));
  }
  return {survivors, trace};
}

BipartiteGraph BipartiteGraph::from_pairs(
    const std::vector<std::pair<std::string, std::string>> &pairs) {
  BipartiteGraph g;
  std::unordered_map<std::string, int> li, ri;
  std::set<std::pair<int, int>> seen;
  for (const auto &[l, r] : pairs) {
    auto lit = li.find(l);
    if (lit == li.end()) {
      lit = li.emplace(l, static_cast<int>(g.left.size())).first;
      g.left.push_back(l);
    }
    auto rit = ri.find(r);
    if (rit == ri.end()) {
      rit = ri.emplace(r, static_cast<int>(g.right.size())).first;
      g.right.push_back(r);
    }
    if (seen.insert({lit->second, rit->second}).second)
      g.edges.emplace_back(lit->second, rit->second);
  }
  return g;
}

std::vector<std::pair<std::string, std::string>> hopcroft_karp(const BipartiteGraph &g) {
  const int nl = static_cast<int>(g.left.size());
  const int nr = static_cast<int>(g.right.size());
  std::vector<std::vector<int>> adj(nl);
  for (const auto &[l, r] : g.edges) {
    if (l < 0 || l >= nl || r < 0 || r >= nr)
      throw Error("hopcroft_karp: edge references an undeclared vertex");
    adj[l].push_back(r);
  }

  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_l(nl, -1), match_r(nr, -1), dist(nl, 0);

  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 0; u < nl; ++u) {
      if (match_l[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        const int w = match_r[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::function<bool(int)> dfs = [&](int u) {
    for (int v : adj[u]) {
      const int w = match_r[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_l[u] = v;
        match_r[v] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };

  while (bfs())
    for (int u = 0; u < nl; ++u)
      if (match_l[u] < 0)
        dfs(u);

  std::vector<std::pair<std::string, std::string>> matching;
  for (int u = 0; u < nl; ++u)
    if (match_l[u] >= 0)
      matching.emplace_back(g.left[u], g.right[match_l[u]]);
  return matching;
}

std::vector<SequenceCluster>
cluster_sequences(const std::vector<std::pair<std::string, std::string>> &seqs,
                  double identity_threshold, double coverage_threshold) {
  for (const auto &[id, seq] : seqs)
    if (seq.empty())
      throw Error("cluster_sequences: empty sequence for '" + id + "'");

  std::vector<std::size_t> order(seqs.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (seqs[a].second.size() != seqs[b].second.size())
      return seqs[a].second.size() > seqs[b].second.size();
    return seqs[a].first < seqs[b].first;
  });

  struct Working {
    std::string centroid_seq;
    SequenceCluster cluster;
  };
  std::vector<Working> clusters;
  for (std::size_t idx : order) {
    const auto &[id, seq] = seqs[idx];
    Working *home = nullptr;
    for (auto &w : clusters) {
      const SequenceAlignment aln = global_align(seq, w.centroid_seq);
      if (aln.identity >= identity_threshold && aln.coverage >= coverage_threshold) {
        home = &w;
        break;
      }
    }
    if (home == nullptr) {
      clusters.push_back({seq, SequenceCluster{id, {id}}});
    } else {
      home->cluster.members.push_back(id);
    }
  }

  std::vector<SequenceCluster> out;
  out.reserve(clusters.size());
  for (auto &w : clusters)
    out.push_back(std::move(w.cluster));
  return out;
}

SelfDockResult build_self_dock_set(const std::vector<ManifestEntry> &manifest,
                                   const FilterConfig &config) {
  FilterConfig cfg = config;
  cfg.pipeline = Pipeline::SelfDock;
  auto [survivors, trace] = apply_filters(manifest, cfg);

  // Unique (pdb, ccd) selection by maximum matching.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto &e : survivors)
    pairs.emplace_back(e.pdb_id, e.ccd_id);
  const auto matching = hopcroft_karp(BipartiteGraph::from_pairs(pairs));

  std::vector<ManifestEntry> matched;
  std::set<std::pair<std::string, std::string>> matched_keys(matching.begin(),
                                                             matching.end());
  std::set<std::pair<std::string, std::string>> taken;
  for (const auto &e : survivors) {
    std::pair<std::string, std::string> key{e.pdb_id, e.ccd_id};
    if (matched_keys.count(key) && taken.insert(key).second)
      matched.push_back(e);
  }
  {
    FilterStep step{"unique_pairs_hopcroft_karp", static_cast<int>(matched.size()), {}};
    std::set<std::string> kept;
    for (const auto &e : matched)
      kept.insert(e.entry_id());
    for (const auto &e : survivors)
      if (!kept.count(e.entry_id()))
        step.rejected.push_back(e.entry_id());
    trace.steps.push_back(std::move(step));
  }

  // One representative per sequence cluster.
  SelfDockResult result;
  if (!matched.empty()) {
    std::vector<std::pair<std::string, std::string>> seqs;
    for (const auto &e : matched)
      seqs.emplace_back(e.entry_id(), clustering_sequence(e));
    const auto clusters = cluster_sequences(seqs, cfg.identity_threshold_self,
                                            cfg.coverage_threshold_self);
    std::set<std::string> representatives;
    for (const auto &c : clusters)
      representatives.insert(c.representative);
    for (const auto &e : matched)
      if (representatives.count(e.entry_id()))
        result.selected.push_back(e);
  }
  {
    FilterStep step{"sequence_clustering", static_cast<int>(result.selected.size()), {}};
    std::set<std::string> kept;
    for (const auto &e : result.selected)
      kept.insert(e.entry_id());
    for (const auto &e : matched)
      if (!kept.count(e.entry_id()))
        step.rejected.push_back(e.entry_id());
    trace.steps.push_back(std::move(step));
  }

  result.trace = std::move(trace);
  return result;
}

CrossDockResult
build_cross_dock_set(const std::vector<ManifestEntry> &manifest,
                     const std::unordered_map<std::string, ComplexRecord> &structures,
                     ReferencePolicy policy, const FilterConfig &config) {
  (void)policy;  // HighestResolution is the only policy
  FilterConfig cfg = config;
  cfg.pipeline = Pipeline::CrossDock;
  auto [survivors, trace] = apply_filters(manifest, cfg);

  std::unordered_map<std::string, const ManifestEntry *> by_id;
  for (const auto &e : survivors)
    by_id[e.entry_id()] = &e;

  // Cluster by sequence; singleton clusters contribute no cross pairs.
  std::vector<std::vector<std::string>> usable_clusters;
  std::vector<std::string> clustered_entries;
  if (!survivors.empty()) {
    std::vector<std::pair<std::string, std::string>> seqs;
    for (const auto &e : survivors)
      seqs.emplace_back(e.entry_id(), clustering_sequence(e));
    for (const auto &c :
         cluster_sequences(seqs, cfg.identity_threshold_cross, cfg.coverage_threshold_cross)) {
      if (c.members.size() < 2)
        continue;
      usable_clusters.push_back(c.members);
      clustered_entries.insert(clustered_entries.end(), c.members.begin(),
                               c.members.end());
    }
  }
  {
    FilterStep step{"sequence_clustering", static_cast<int>(clustered_entries.size()), {}};
    std::set<std::string> kept(clustered_entries.begin(), clustered_entries.end());
    for (const auto &e : survivors)
      if (!kept.count(e.entry_id()))
        step.rejected.push_back(e.entry_id() + " (singleton cluster)");
    trace.steps.push_back(std::move(step));
  }

  CrossDockResult result;
  FilterStep align_step{"reference_alignment", 0, {}};
  int aligned_survivors = 0;

  for (const auto &members : usable_clusters) {
    // Reference: highest resolution, ties to the lowest pdb id.
    std::string ref_id = members[0];
    for (const auto &id : members) {
      const ManifestEntry *e = by_id.at(id);
      const ManifestEntry *r = by_id.at(ref_id);
      if (*e->resolution < *r->resolution ||
          (*e->resolution == *r->resolution && e->pdb_id < r->pdb_id))
        ref_id = id;
    }

    auto record_of = [&](const std::string &id) -> const ComplexRecord & {
      auto it = structures.find(id);
      if (it == structures.end())
        throw Error("cross-dock: no structure files for entry '" + id + "'");
      return it->second;
    };

    CrossCluster cluster;
    cluster.reference_entry = ref_id;
    const ComplexRecord &ref = record_of(ref_id);
    cluster.structures.emplace_back(ref_id, ref.protein);
    cluster.ligands.emplace_back(ref_id, ref.ligand);
    ++aligned_survivors;

    const Vec3 ref_centroid = ref.ligand.heavy_atom_centroid();
    for (const auto &id : members) {
      if (id == ref_id)
        continue;
      const ComplexRecord &cand = record_of(id);
      try {
        const AlignmentResult aln = align_to_reference(cand.protein, ref.protein);
        const SmallMolecule moved = transfer_ligand(cand.ligand, aln);
        const double displacement =
            distance(moved.heavy_atom_centroid(), ref_centroid);
        const CandidateVerdict verdict =
            candidate_filter(aln, displacement, cfg.max_alignment_ca_rmsd,
                             cfg.max_ligand_displacement);
        if (verdict.decision == FilterDecision::RejectAlignment) {
          align_step.rejected.push_back(id + " (" + verdict.reason + ")");
          continue;
        }
        cluster.structures.emplace_back(id, transform_structure(cand.protein, aln.transform));
        if (verdict.decision == FilterDecision::RejectLigandShift) {
          // The structure stays usable; only its ligand is dropped.
          align_step.rejected.push_back(id + " ligand (" + verdict.reason + ")");
        } else {
          cluster.ligands.emplace_back(id, moved);
        }
        ++aligned_survivors;
      } catch (const Error &e) {
        align_step.rejected.push_back(id + " (" + e.what() + ")");
      }
    }

    for (const auto &[sid, prot] : cluster.structures)
      for (const auto &[lid, lig] : cluster.ligands)
        if (sid != lid)
          cluster.pairs.push_back({sid, lid});

    if (!cluster.pairs.empty())
      result.clusters.push_back(std::move(cluster));
  }

  align_step.survivors = aligned_survivors;
  trace.steps.push_back(std::move(align_step));
  result.trace = std::move(trace);
  return result;
}

}  // namespace posekit
