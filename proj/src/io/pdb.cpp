//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/io/pdb.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "posekit/core/elements.hpp"

namespace posekit {

namespace {

std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string column(const std::string &line, std::size_t pos, std::size_t len) {
  if (pos >= line.size())
    return "";
  return line.substr(pos, std::min(len, line.size() - pos));
}

double parse_coord(const std::string &line, std::size_t pos, int lineno) {
  std::string field = trim(column(line, pos, 8));
  if (field.empty())
    throw ParseError("PDB: missing coordinate field", lineno);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception &) {
    throw ParseError("PDB: non-numeric coordinate '" + field + "'", lineno);
  }
  if (used != field.size() || !std::isfinite(v))
    throw ParseError("PDB: non-numeric coordinate '" + field + "'", lineno);
  return v;
}

// Element columns 77-78 when present, else derived from the atom name
// (element right-justified in columns 13-14 by convention).
std::string resolve_element(const std::string &line, const std::string &atom_name,
                            int lineno) {
  std::string elem = trim(column(line, 76, 2));
  if (!elem.empty()) {
    try {
      return normalize_element(elem);
    } catch (const Error &) {
      throw ParseError("PDB: unknown element '" + elem + "'", lineno);
    }
  }
  std::string head = column(line, 12, 2);
  std::string letters;
  for (char c : head)
    if (std::isalpha(static_cast<unsigned char>(c)))
      letters.push_back(c);
  if (letters.size() == 2) {
    try {
      return normalize_element(letters);
    } catch (const Error &) {
      // fall through to the single-letter guess
    }
  }
  if (!letters.empty()) {
    try {
      return normalize_element(std::string(1, letters[0]));
    } catch (const Error &) {
    }
  }
  throw ParseError("PDB: cannot determine element for atom '" + atom_name + "'", lineno);
}

const std::unordered_set<std::string> &water_names() {
  static const std::unordered_set<std::string> names = {"HOH", "WAT", "DOD", "H2O"};
  return names;
}

const std::unordered_set<std::string> &ion_names() {
  static const std::unordered_set<std::string> names = {
      "NA",  "K",   "MG",  "CA",  "ZN",  "MN", "FE",  "FE2", "CO",  "3CO",
      "NI",  "CU",  "CU1", "CD",  "HG",  "CL", "BR",  "IOD", "F",   "LI",
      "SR",  "CS",  "BA",  "AL",  "PB",  "PT", "AU",  "AG",  "MO",  "W",
      "V",   "CR",  "RB",  "TL",  "YB",  "GA", "IN",  "SB",  "OS",  "IR",
  };
  return names;
}

struct ResidueKey {
  std::string chain;
  int seq;
  char icode;
  std::string name;

  bool operator==(const ResidueKey &o) const {
    return chain == o.chain && seq == o.seq && icode == o.icode && name == o.name;
  }
};

}  // namespace

HeteroClass classify_hetero(const std::string &resname, const SmallMolecule &mol) {
  if (water_names().count(resname))
    return HeteroClass::Water;
  if (ion_names().count(resname))
    return HeteroClass::Inorganic;
  std::vector<int> heavy = mol.heavy_atom_indices();
  if (heavy.size() == 1 && is_metal(mol.atoms[heavy[0]].element))
    return HeteroClass::Inorganic;
  return HeteroClass::Organic;
}

ProteinStructure parse_pdb(const std::string &text) {
  if (trim(text).empty())
    throw ParseError("PDB: empty input");

  ProteinStructure protein;
  std::vector<Chain> &chains = protein.chains;
  std::map<std::string, std::size_t> chain_index;

  struct PendingHetero {
    ResidueKey key;
    SmallMolecule mol;
  };
  std::vector<PendingHetero> hetero;

  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  int model_count = 0;
  bool in_skipped_model = false;
  bool any_record = false;

  // (chain, seq, icode, atom name) already seen; first altloc wins.
  std::unordered_set<std::string> seen_atoms;

  while (std::getline(stream, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const std::string record = column(line, 0, 6);

    if (record.rfind("MODEL", 0) == 0) {
      ++model_count;
      if (model_count > 1) {
        protein.multi_model = true;
        in_skipped_model = true;
      }
      continue;
    }
    if (record.rfind("ENDMDL", 0) == 0) {
      in_skipped_model = false;
      continue;
    }
    if (in_skipped_model)
      continue;

    const bool is_atom = record == "ATOM  " || record == "ATOM";
    const bool is_het = record == "HETATM";
    if (!is_atom && !is_het)
      continue;
    any_record = true;

    if (line.size() < 54)
      throw ParseError("PDB: record too short for coordinates", lineno);

    Atom atom;
    atom.name = trim(column(line, 12, 4));
    std::string resname = trim(column(line, 17, 3));
    std::string chain_id = trim(column(line, 21, 1));
    std::string seq_field = trim(column(line, 22, 4));
    char icode = line.size() > 26 ? line[26] : ' ';
    if (icode == '\0')
      icode = ' ';

    int seq = 0;
    if (!seq_field.empty()) {
      try {
        seq = std::stoi(seq_field);
      } catch (const std::exception &) {
        throw ParseError("PDB: bad residue sequence number '" + seq_field + "'", lineno);
      }
    }
    std::string serial_field = trim(column(line, 6, 5));
    if (!serial_field.empty()) {
      try {
        atom.serial = std::stoi(serial_field);
      } catch (const std::exception &) {
        atom.serial = 0;
      }
    }

    atom.position = {parse_coord(line, 30, lineno), parse_coord(line, 38, lineno),
                     parse_coord(line, 46, lineno)};
    atom.element = resolve_element(line, atom.name, lineno);

    std::string atom_key = chain_id + '|' + std::to_string(seq) + '|' + icode + '|' +
                           resname + '|' + atom.name + '|' + (is_atom ? "A" : "H");
    if (!seen_atoms.insert(atom_key).second)
      continue;  // alternate location or duplicate: first one wins

    if (is_atom) {
      auto it = chain_index.find(chain_id);
      if (it == chain_index.end()) {
        chain_index.emplace(chain_id, chains.size());
        chains.push_back(Chain{chain_id, {}});
        it = chain_index.find(chain_id);
      }
      Chain &chain = chains[it->second];
      Residue *res = nullptr;
      if (!chain.residues.empty()) {
        Residue &last = chain.residues.back();
        if (last.seq_number == seq && last.insertion_code == icode && last.name == resname)
          res = &last;
      }
      if (res == nullptr) {
        chain.residues.push_back(Residue{chain_id, resname, seq, icode, {}});
        res = &chain.residues.back();
      }
      res->atoms.push_back(std::move(atom));
    } else {
      ResidueKey key{chain_id, seq, icode, resname};
      PendingHetero *group = nullptr;
      for (auto &h : hetero)
        if (h.key == key)
          group = &h;
      if (group == nullptr) {
        hetero.push_back({key, SmallMolecule{}});
        group = &hetero.back();
        group->mol.name = resname;
      }
      group->mol.atoms.push_back(std::move(atom));
    }
  }

  if (!any_record)
    throw ParseError("PDB: no ATOM or HETATM records found");

  for (auto &chain : chains) {
    std::stable_sort(chain.residues.begin(), chain.residues.end(),
                     [](const Residue &a, const Residue &b) {
                       if (a.seq_number != b.seq_number)
                         return a.seq_number < b.seq_number;
                       return a.insertion_code < b.insertion_code;
                     });
    bool has_ca = false;
    for (const auto &r : chain.residues)
      if (r.alpha_carbon() != nullptr)
        has_ca = true;
    if (!has_ca)
      throw ParseError("PDB: polymer chain '" + chain.id +
                       "' has no alpha carbons (non-protein polymer?)");
  }

  for (auto &h : hetero) {
    h.mol.validate();
    HeteroGroup group;
    group.kind = classify_hetero(h.key.name, h.mol);
    group.chain_id = h.key.chain;
    group.seq_number = h.key.seq;
    group.molecule = std::move(h.mol);
    protein.hetero_groups.push_back(std::move(group));
  }

  return protein;
}

ProteinStructure parse_pdb_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open PDB file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pdb(buf.str());
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {

void format_atom_line(std::ostringstream &out, const char *record, int serial,
                      const Atom &atom, const std::string &resname,
                      const std::string &chain_id, int seq, char icode) {
  char buf[96];
  std::string name = atom.name.empty() ? atom.element : atom.name;
  // Names shorter than 4 characters start in column 14.
  std::string padded = name.size() >= 4 ? name.substr(0, 4) : " " + name;
  std::string chain = chain_id.empty() ? " " : chain_id.substr(0, 1);
  std::string elem;
  for (char c : atom.element.substr(0, 2))
    elem.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  std::snprintf(buf, sizeof(buf),
                "%-6s%5d %-4s %-3s %1s%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n",
                record, serial, padded.c_str(), resname.c_str(), chain.c_str(), seq,
                icode, atom.position.x, atom.position.y, atom.position.z, 1.0, 0.0,
                elem.c_str());
  out << buf;
}

}  // namespace

std::string write_pdb(const ProteinStructure &protein) {
  std::ostringstream out;
  int serial = 0;
  for (const auto &chain : protein.chains) {
    for (const auto &res : chain.residues)
      for (const auto &atom : res.atoms)
        format_atom_line(out, "ATOM", ++serial, atom, res.name, chain.id,
                         res.seq_number, res.insertion_code);
    out << "TER\n";
  }
  for (const auto &h : protein.hetero_groups) {
    for (const auto &atom : h.molecule.atoms)
      format_atom_line(out, "HETATM", ++serial, atom, h.molecule.name, h.chain_id,
                       h.seq_number, ' ');
  }
  out << "END\n";
  return out.str();
}

void write_pdb_file(const ProteinStructure &protein, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write PDB file '" + path + "'");
  out << write_pdb(protein);
}

}  // namespace posekit
