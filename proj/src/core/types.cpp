//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/core/types.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace posekit {

bool is_hydrogen(const std::string &element) {
  return element == "H" || element == "D" || element == "T";
}

std::size_t SmallMolecule::heavy_atom_count() const {
  std::size_t n = 0;
  for (const auto &a : atoms)
    if (!is_hydrogen(a.element))
      ++n;
  return n;
}

std::vector<int> SmallMolecule::heavy_atom_indices() const {
  std::vector<int> idx;
  idx.reserve(atoms.size());
  for (int i = 0; i < static_cast<int>(atoms.size()); ++i)
    if (!is_hydrogen(atoms[i].element))
      idx.push_back(i);
  return idx;
}

Vec3 SmallMolecule::heavy_atom_centroid() const {
  Vec3 c;
  std::size_t n = 0;
  for (const auto &a : atoms) {
    if (!is_hydrogen(a.element)) {
      c += a.position;
      ++n;
    }
  }
  if (n == 0)
    throw Error("molecule '" + name + "' has no heavy atoms");
  return c / static_cast<double>(n);
}

void SmallMolecule::validate() {
  const int n = static_cast<int>(atoms.size());
  for (const auto &a : atoms) {
    if (!a.position.finite())
      throw Error("molecule '" + name + "': non-finite atom position");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto &b : bonds) {
    if (b.a < 0 || b.a >= n || b.b < 0 || b.b >= n)
      throw Error("molecule '" + name + "': bond index out of range");
    if (b.a == b.b)
      throw Error("molecule '" + name + "': self-bond");
    auto key = std::minmax(b.a, b.b);
    if (!seen.insert(key).second)
      throw Error("molecule '" + name + "': duplicate bond " +
                  std::to_string(key.first) + "-" + std::to_string(key.second));
  }
  if (heavy_atom_count() == 0)
    throw Error("molecule '" + name + "': no heavy atoms");

  // Connected components over heavy atoms (bonds through hydrogens ignored).
  std::vector<int> heavy = heavy_atom_indices();
  std::unordered_map<int, int> pos;
  for (std::size_t i = 0; i < heavy.size(); ++i)
    pos[heavy[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(heavy.size());
  for (const auto &b : bonds) {
    auto ia = pos.find(b.a), ib = pos.find(b.b);
    if (ia != pos.end() && ib != pos.end()) {
      adj[ia->second].push_back(ib->second);
      adj[ib->second].push_back(ia->second);
    }
  }
  std::vector<char> visited(heavy.size(), 0);
  int components = 0;
  for (std::size_t s = 0; s < heavy.size(); ++s) {
    if (visited[s])
      continue;
    ++components;
    std::vector<int> stack{static_cast<int>(s)};
    visited[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!visited[w]) {
          visited[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  connected_components = components;
}

const Atom *Residue::find_atom(const std::string &atom_name) const {
  for (const auto &a : atoms)
    if (a.name == atom_name)
      return &a;
  return nullptr;
}

std::size_t ProteinStructure::residue_count() const {
  std::size_t n = 0;
  for (const auto &c : chains)
    n += c.residues.size();
  return n;
}

std::size_t ProteinStructure::polymer_atom_count() const {
  std::size_t n = 0;
  for (const auto &c : chains)
    for (const auto &r : c.residues)
      n += r.atoms.size();
  return n;
}

std::vector<const Atom *> ProteinStructure::polymer_heavy_atoms() const {
  std::vector<const Atom *> out;
  out.reserve(polymer_atom_count());
  for (const auto &c : chains)
    for (const auto &r : c.residues)
      for (const auto &a : r.atoms)
        if (!is_hydrogen(a.element))
          out.push_back(&a);
  return out;
}

char residue_one_letter(const std::string &resname) {
  static const std::unordered_map<std::string, char> table = {
      {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"CYS", 'C'},
      {"GLN", 'Q'}, {"GLU", 'E'}, {"GLY", 'G'}, {"HIS", 'H'}, {"ILE", 'I'},
      {"LEU", 'L'}, {"LYS", 'K'}, {"MET", 'M'}, {"PHE", 'F'}, {"PRO", 'P'},
      {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'}, {"TYR", 'Y'}, {"VAL", 'V'},
      {"MSE", 'M'}, {"SEC", 'U'}, {"PYL", 'O'},
  };
  auto it = table.find(resname);
  return it == table.end() ? 'X' : it->second;
}

std::string chain_sequence(const Chain &chain) {
  std::string seq;
  seq.reserve(chain.residues.size());
  for (const auto &r : chain.residues)
    seq.push_back(residue_one_letter(r.name));
  return seq;
}

}  // namespace posekit
