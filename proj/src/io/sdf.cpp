//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/io/sdf.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

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

// Fixed-column numeric field; returns false when the field is blank.
bool parse_int_field(const std::string &line, std::size_t pos, std::size_t len,
                     int &out) {
  if (pos >= line.size())
    return false;
  std::string field = trim(line.substr(pos, len));
  if (field.empty())
    return false;
  std::size_t used = 0;
  try {
    out = std::stoi(field, &used);
  } catch (const std::exception &) {
    return false;
  }
  return used == field.size();
}

double parse_coord(const std::string &line, std::size_t pos, int lineno) {
  if (line.size() < pos + 10)
    throw ParseError("SDF: atom line too short", lineno);
  std::string field = trim(line.substr(pos, 10));
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception &) {
    throw ParseError("SDF: bad coordinate field '" + field + "'", lineno);
  }
  if (used != field.size() || !std::isfinite(v))
    throw ParseError("SDF: bad coordinate field '" + field + "'", lineno);
  return v;
}

// Atom-block charge code: 0 none, 1..3 -> +3..+1, 4 radical, 5..7 -> -1..-3.
int charge_from_code(int code) {
  switch (code) {
  case 1: return 3;
  case 2: return 2;
  case 3: return 1;
  case 5: return -1;
  case 6: return -2;
  case 7: return -3;
  default: return 0;
  }
}

SmallMolecule parse_record(const std::vector<std::string> &lines, int base_lineno) {
  if (lines.size() < 4)
    throw ParseError("SDF: record shorter than the 4 header lines", base_lineno + 1);

  SmallMolecule mol;
  mol.name = trim(lines[0]);

  const std::string &counts = lines[3];
  const int counts_lineno = base_lineno + 4;
  int natoms = 0, nbonds = 0;
  if (!parse_int_field(counts, 0, 3, natoms) || !parse_int_field(counts, 3, 3, nbonds) ||
      natoms < 0 || nbonds < 0)
    throw ParseError("SDF: malformed counts line '" + counts + "'", counts_lineno);

  const std::size_t need = 4 + static_cast<std::size_t>(natoms) + static_cast<std::size_t>(nbonds);
  if (lines.size() < need)
    throw ParseError("SDF: counts line declares " + std::to_string(natoms) + " atoms and " +
                         std::to_string(nbonds) + " bonds but the block is truncated",
                     counts_lineno);

  for (int i = 0; i < natoms; ++i) {
    const std::string &line = lines[4 + i];
    const int lineno = base_lineno + 5 + i;
    Atom atom;
    atom.position = {parse_coord(line, 0, lineno), parse_coord(line, 10, lineno),
                     parse_coord(line, 20, lineno)};
    if (line.size() < 34)
      throw ParseError("SDF: atom line too short", lineno);
    std::string sym = trim(line.substr(31, 3));
    if (sym.empty())
      throw ParseError("SDF: missing element symbol", lineno);
    try {
      atom.element = normalize_element(sym);
    } catch (const Error &e) {
      throw ParseError(std::string("SDF: ") + e.what(), lineno);
    }
    int chg_code = 0;
    if (parse_int_field(line, 36, 3, chg_code))
      atom.formal_charge = charge_from_code(chg_code);
    atom.serial = i + 1;
    mol.atoms.push_back(std::move(atom));
  }

  for (int i = 0; i < nbonds; ++i) {
    const std::string &line = lines[4 + natoms + i];
    const int lineno = base_lineno + 5 + natoms + i;
    int a = 0, b = 0, order = 0;
    if (!parse_int_field(line, 0, 3, a) || !parse_int_field(line, 3, 3, b) ||
        !parse_int_field(line, 6, 3, order))
      throw ParseError("SDF: malformed bond line '" + line + "'", lineno);
    if (a < 1 || a > natoms || b < 1 || b > natoms)
      throw ParseError("SDF: bond atom index out of range", lineno);
    if (order < 1 || order > 4)
      throw ParseError("SDF: unsupported bond order " + std::to_string(order), lineno);
    mol.bonds.push_back({a - 1, b - 1, static_cast<BondOrder>(order)});
  }

  // Property block: M CHG overrides atom-block charges.
  for (std::size_t li = need; li < lines.size(); ++li) {
    const std::string &line = lines[li];
    if (line.rfind("M  CHG", 0) == 0) {
      std::istringstream ss(line.substr(6));
      int n = 0;
      if (ss >> n) {
        for (int k = 0; k < n; ++k) {
          int idx = 0, chg = 0;
          if (!(ss >> idx >> chg) || idx < 1 || idx > natoms)
            throw ParseError("SDF: malformed M  CHG line",
                             base_lineno + static_cast<int>(li) + 1);
          mol.atoms[idx - 1].formal_charge = chg;
        }
      }
    } else if (line.rfind("M  END", 0) == 0) {
      break;
    }
  }

  try {
    mol.validate();
  } catch (const Error &e) {
    throw ParseError(std::string("SDF: ") + e.what(), base_lineno + 1);
  }
  return mol;
}

}  // namespace

std::vector<SmallMolecule> parse_sdf(const std::string &text) {
  if (trim(text).empty())
    throw ParseError("SDF: empty input");

  std::vector<SmallMolecule> mols;
  std::vector<std::string> record;
  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  int record_start = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (trim(line) == "$$$$") {
      if (!record.empty())
        mols.push_back(parse_record(record, record_start));
      record.clear();
      record_start = lineno;
      continue;
    }
    record.push_back(line);
  }
  // Trailing record without the $$$$ delimiter (single-record .mol files).
  bool has_content = false;
  for (const auto &l : record)
    if (!trim(l).empty())
      has_content = true;
  if (has_content)
    mols.push_back(parse_record(record, record_start));

  if (mols.empty())
    throw ParseError("SDF: no molecule records found");
  return mols;
}

std::vector<SmallMolecule> parse_sdf_records_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open SDF file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_sdf(buf.str());
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

SmallMolecule parse_sdf_file(const std::string &path) {
  return parse_sdf_records_file(path).front();
}

std::string write_sdf(const SmallMolecule &mol) {
  if (mol.atoms.size() > 999)
    throw Error("SDF V2000 cannot hold " + std::to_string(mol.atoms.size()) +
                " atoms (max 999)");
  if (mol.bonds.size() > 999)
    throw Error("SDF V2000 cannot hold " + std::to_string(mol.bonds.size()) +
                " bonds (max 999)");

  std::ostringstream out;
  out << mol.name << "\n  PoseKit\n\n";

  char buf[128];
  std::snprintf(buf, sizeof(buf), "%3d%3d  0  0  0  0  0  0  0  0999 V2000\n",
                static_cast<int>(mol.atoms.size()), static_cast<int>(mol.bonds.size()));
  out << buf;

  for (const auto &a : mol.atoms) {
    std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0\n",
                  a.position.x, a.position.y, a.position.z, a.element.c_str());
    out << buf;
  }
  for (const auto &b : mol.bonds) {
    std::snprintf(buf, sizeof(buf), "%3d%3d%3d  0\n", b.a + 1, b.b + 1,
                  static_cast<int>(b.order));
    out << buf;
  }
  for (std::size_t i = 0; i < mol.atoms.size(); ++i) {
    if (mol.atoms[i].formal_charge != 0) {
      std::snprintf(buf, sizeof(buf), "M  CHG  1 %3d %3d\n", static_cast<int>(i) + 1,
                    mol.atoms[i].formal_charge);
      out << buf;
    }
  }
  out << "M  END\n$$$$\n";
  return out.str();
}

void write_sdf_file(const SmallMolecule &mol, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write SDF file '" + path + "'");
  out << write_sdf(mol);
}

}  // namespace posekit
