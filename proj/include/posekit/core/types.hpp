//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_CORE_TYPES_HPP_
#define POSEKIT_CORE_TYPES_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace posekit {

// Base error for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 &operator+=(const Vec3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3 &operator-=(const Vec3 &o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }

  double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3 &o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double squared_norm() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(squared_norm()); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Atom {
  std::string element;       // periodic-table symbol, canonical case ("Cl")
  Vec3 position;             // Angstrom
  int formal_charge = 0;
  int serial = 0;            // index in the source file
  std::string name;          // PDB atom name; empty for plain ligand atoms
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

// Ligand (or hetero group): labeled graph plus 3D coordinates.
struct SmallMolecule {
  std::string name;
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  int connected_components = 0;  // over heavy atoms, set by parsers/builders

  std::size_t heavy_atom_count() const;
  std::vector<int> heavy_atom_indices() const;
  Vec3 heavy_atom_centroid() const;

  // Recomputes connected_components and checks the graph invariants
  // (simple graph, indices in range, >= 1 heavy atom). Throws Error.
  void validate();
};

enum class HeteroClass { Organic, Inorganic, Water };

struct HeteroGroup {
  SmallMolecule molecule;
  HeteroClass kind = HeteroClass::Organic;
  std::string chain_id;
  int seq_number = 0;
};

struct Residue {
  std::string chain_id;
  std::string name;          // 3-letter code
  int seq_number = 0;
  char insertion_code = ' ';
  std::vector<Atom> atoms;   // atom names unique within the residue

  const Atom *find_atom(const std::string &atom_name) const;
  const Atom *alpha_carbon() const { return find_atom("CA"); }
};

struct Chain {
  std::string id;
  std::vector<Residue> residues;
};

struct ProteinStructure {
  std::vector<Chain> chains;             // polymer chains, ATOM records
  std::vector<HeteroGroup> hetero_groups;
  bool multi_model = false;              // true when MODEL 2+ were discarded

  std::size_t residue_count() const;
  std::size_t polymer_atom_count() const;
  // All polymer heavy atoms, flattened in chain/residue order.
  std::vector<const Atom *> polymer_heavy_atoms() const;
};

bool is_hydrogen(const std::string &element);

// One-letter code for a 3-letter residue name; 'X' for anything unknown.
char residue_one_letter(const std::string &resname);

// Concatenated one-letter sequence of a chain.
std::string chain_sequence(const Chain &chain);

}  // namespace posekit

#endif  // POSEKIT_CORE_TYPES_HPP_
