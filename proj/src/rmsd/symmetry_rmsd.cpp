//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/rmsd/symmetry_rmsd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace posekit {

HeavyGraph HeavyGraph::from_molecule(const SmallMolecule &mol) {
  HeavyGraph g;
  std::unordered_map<int, int> ordinal;
  for (int i = 0; i < static_cast<int>(mol.atoms.size()); ++i) {
    if (is_hydrogen(mol.atoms[i].element))
      continue;
    ordinal[i] = static_cast<int>(g.atom_index.size());
    g.atom_index.push_back(i);
    g.element.push_back(mol.atoms[i].element);
    g.position.push_back(mol.atoms[i].position);
  }
  if (g.atom_index.empty())
    throw Error("molecule '" + mol.name + "' has no heavy atoms");

  g.adj.resize(g.size());
  for (const auto &b : mol.bonds) {
    auto ia = ordinal.find(b.a), ib = ordinal.find(b.b);
    if (ia == ordinal.end() || ib == ordinal.end())
      continue;  // bond to hydrogen
    g.adj[ia->second].emplace_back(ib->second, b.order);
    g.adj[ib->second].emplace_back(ia->second, b.order);
    ++g.edge_count;
  }
  for (auto &nbrs : g.adj)
    std::sort(nbrs.begin(), nbrs.end());
  return g;
}

bool HeavyGraph::connected() const {
  if (size() == 0)
    return false;
  std::vector<char> visited(size(), 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto &[w, order] : adj[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == size();
}

bool HeavyGraph::has_edge(int a, int b, BondOrder order) const {
  for (const auto &[w, o] : adj[a])
    if (w == b)
      return o == order;
  return false;
}

namespace {

// (element, degree, sorted neighbor (element, order) multiset) signature used
// to prune candidates.
std::string vertex_signature(const HeavyGraph &g, int v) {
  std::vector<std::string> nbr;
  nbr.reserve(g.adj[v].size());
  for (const auto &[w, order] : g.adj[v])
    nbr.push_back(g.element[w] + ":" + std::to_string(static_cast<int>(order)));
  std::sort(nbr.begin(), nbr.end());
  std::string sig = g.element[v] + "/" + std::to_string(g.adj[v].size());
  for (const auto &s : nbr)
    sig += "|" + s;
  return sig;
}

// BFS order rooted at the vertex with the rarest signature; every vertex
// after the root is adjacent to at least one earlier vertex.
std::vector<int> search_order(const HeavyGraph &g,
                              const std::vector<std::string> &sigs,
                              const std::map<std::string, int> &sig_counts) {
  int root = 0;
  for (int v = 1; v < static_cast<int>(g.size()); ++v) {
    const int cv = sig_counts.at(sigs[v]);
    const int cr = sig_counts.at(sigs[root]);
    if (cv < cr || (cv == cr && g.adj[v].size() > g.adj[root].size()))
      root = v;
  }
  std::vector<int> order{root};
  std::vector<char> queued(g.size(), 0);
  queued[root] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto &[w, o] : g.adj[order[head]]) {
      if (!queued[w]) {
        queued[w] = 1;
        order.push_back(w);
      }
    }
  }
  return order;
}

struct IsoSearch {
  const HeavyGraph &pred, &ref;
  std::size_t cap;
  std::vector<int> order;                 // pred vertices in search order
  std::vector<std::string> pred_sig, ref_sig;
  std::vector<AtomCorrespondence> found;
  AtomCorrespondence mapping;             // pred ordinal -> ref ordinal or -1
  std::vector<char> used;                 // ref ordinal taken

  void run() {
    mapping.assign(pred.size(), -1);
    used.assign(ref.size(), 0);
    extend(0);
  }

  void extend(std::size_t depth) {
    if (depth == order.size()) {
      if (found.size() >= cap)
        throw Error("isomorphism count exceeds cap of " + std::to_string(cap));
      found.push_back(mapping);
      return;
    }
    const int u = order[depth];
    for (int v = 0; v < static_cast<int>(ref.size()); ++v) {
      if (used[v] || pred_sig[u] != ref_sig[v])
        continue;
      bool ok = true;
      for (const auto &[w, o] : pred.adj[u]) {
        if (mapping[w] >= 0 && !ref.has_edge(v, mapping[w], o)) {
          ok = false;
          break;
        }
      }
      if (!ok)
        continue;
      mapping[u] = v;
      used[v] = 1;
      extend(depth + 1);
      mapping[u] = -1;
      used[v] = 0;
    }
  }
};

}  // namespace

std::vector<AtomCorrespondence> enumerate_isomorphisms(const HeavyGraph &pred,
                                                       const HeavyGraph &ref,
                                                       std::size_t cap) {
  if (!pred.connected())
    throw Error("heavy-atom graph is disconnected; symmetry search requires a "
                "single connected component");
  if (pred.size() != ref.size() || pred.edge_count != ref.edge_count)
    return {};

  std::vector<std::string> psig(pred.size()), rsig(ref.size());
  std::map<std::string, int> pcount, rcount;
  for (int v = 0; v < static_cast<int>(pred.size()); ++v)
    ++pcount[psig[v] = vertex_signature(pred, v)];
  for (int v = 0; v < static_cast<int>(ref.size()); ++v)
    ++rcount[rsig[v] = vertex_signature(ref, v)];
  if (pcount != rcount)
    return {};

  IsoSearch search{pred, ref, cap, search_order(pred, psig, pcount), psig, rsig, {}, {}, {}};
  search.run();
  return search.found;
}

std::vector<AtomCorrespondence> enumerate_automorphisms(const SmallMolecule &mol,
                                                        std::size_t cap) {
  HeavyGraph g = HeavyGraph::from_molecule(mol);
  return enumerate_isomorphisms(g, g, cap);
}

SymmetryRmsdResult symmetry_rmsd(const SmallMolecule &pred, const SmallMolecule &ref) {
  HeavyGraph gp = HeavyGraph::from_molecule(pred);
  HeavyGraph gr = HeavyGraph::from_molecule(ref);

  std::vector<AtomCorrespondence> isos = enumerate_isomorphisms(gp, gr);
  if (isos.empty())
    throw NotIsomorphicError(
        "predicted and reference ligands are not graph-isomorphic "
        "(formula or bond mismatch)");

  const double inv_n = 1.0 / static_cast<double>(gp.size());
  double best_ss = -1.0;
  const AtomCorrespondence *best = nullptr;
  for (const auto &perm : isos) {
    double ss = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      ss += (gp.position[i] - gr.position[perm[i]]).squared_norm();
    if (best == nullptr || ss < best_ss || (ss == best_ss && perm < *best)) {
      best_ss = ss;
      best = &perm;
    }
  }
  return {std::sqrt(best_ss * inv_n), *best};
}

double naive_rmsd(const SmallMolecule &pred, const SmallMolecule &ref) {
  HeavyGraph gp = HeavyGraph::from_molecule(pred);
  HeavyGraph gr = HeavyGraph::from_molecule(ref);
  if (gp.size() != gr.size())
    throw Error("naive_rmsd: heavy-atom counts differ");
  double ss = 0.0;
  for (std::size_t i = 0; i < gp.size(); ++i)
    ss += (gp.position[i] - gr.position[i]).squared_norm();
  return std::sqrt(ss / static_cast<double>(gp.size()));
}

}  // namespace posekit
