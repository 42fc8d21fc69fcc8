//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>
#include <string>

#include "posekit/io/pdb.hpp"
#include "testutil.hpp"

using namespace posekit;

namespace {

const char *kGly =
    "ATOM      1  N   GLY A   1      11.104   6.134  -6.504  1.00  0.00           N\n"
    "ATOM      2  CA  GLY A   1      11.639   6.071  -5.147  1.00  0.00           C\n"
    "ATOM      3  C   GLY A   1      10.729   6.768  -4.123  1.00  0.00           C\n"
    "END\n";

}  // namespace

TEST_CASE("parse_pdb: one residue, three atoms") {
  const ProteinStructure p = parse_pdb(kGly);
  REQUIRE(p.chains.size() == 1);
  REQUIRE(p.chains[0].residues.size() == 1);
  const Residue &r = p.chains[0].residues[0];
  CHECK(r.name == "GLY");
  CHECK(r.seq_number == 1);
  CHECK(r.atoms.size() == 3);
  CHECK(r.alpha_carbon() != nullptr);
  CHECK(r.atoms[0].element == "N");
  CHECK(r.atoms[1].position.x == doctest::Approx(11.639));
}

TEST_CASE("parse_pdb: waters tagged") {
  std::string text = std::string(kGly).substr(0, std::string(kGly).rfind("END"));
  text +=
      "HETATM    4  O   HOH A 101      20.000  20.000  20.000  1.00  0.00           O\n"
      "END\n";
  const ProteinStructure p = parse_pdb(text);
  REQUIRE(p.hetero_groups.size() == 1);
  CHECK(p.hetero_groups[0].kind == HeteroClass::Water);
  CHECK(p.hetero_groups[0].molecule.name == "HOH");
}

TEST_CASE("parse_pdb: hetero classification by element and name table") {
  std::string text = std::string(kGly).substr(0, std::string(kGly).rfind("END"));
  text +=
      "HETATM    4 ZN    ZN A 101      20.000  20.000  20.000  1.00  0.00          ZN\n"
      "HETATM    5  C1  LIG A 102      24.000  20.000  20.000  1.00  0.00           C\n"
      "HETATM    6  O1  LIG A 102      25.300  20.000  20.000  1.00  0.00           O\n"
      "END\n";
  const ProteinStructure p = parse_pdb(text);
  REQUIRE(p.hetero_groups.size() == 2);
  CHECK(p.hetero_groups[0].kind == HeteroClass::Inorganic);
  CHECK(p.hetero_groups[1].kind == HeteroClass::Organic);
  CHECK(p.hetero_groups[1].molecule.atoms.size() == 2);
}

TEST_CASE("parse_pdb: non-numeric coordinate names the line") {
  std::string text =
      "ATOM      1  CA  GLY A   1         abc   6.071  -5.147  1.00  0.00           C\n";
  try {
    parse_pdb(text);
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("parse_pdb: empty input errors") {
  CHECK_THROWS_AS(parse_pdb(""), ParseError);
  CHECK_THROWS_AS(parse_pdb("\n\n"), ParseError);
}

TEST_CASE("parse_pdb: first altloc wins") {
  std::string text =
      "ATOM      1  N   GLY A   1       0.000   0.000   0.000  1.00  0.00           N\n"
      "ATOM      2  CA AGLY A   1       1.000   0.000   0.000  0.50  0.00           C\n"
      "ATOM      3  CA BGLY A   1       9.000   0.000   0.000  0.50  0.00           C\n"
      "END\n";
  const ProteinStructure p = parse_pdb(text);
  const Residue &r = p.chains[0].residues[0];
  REQUIRE(r.atoms.size() == 2);
  CHECK(r.alpha_carbon()->position.x == doctest::Approx(1.0));
}

TEST_CASE("parse_pdb: only the first MODEL is kept, flagged") {
  std::string text = "MODEL        1\n";
  text += kGly;
  text = text.substr(0, text.rfind("END"));
  text +=
      "ENDMDL\n"
      "MODEL        2\n"
      "ATOM      9  CA  GLY A   9      99.000  99.000  99.000  1.00  0.00           C\n"
      "ENDMDL\n"
      "END\n";
  const ProteinStructure p = parse_pdb(text);
  CHECK(p.multi_model);
  REQUIRE(p.chains.size() == 1);
  CHECK(p.chains[0].residues.size() == 1);
}

TEST_CASE("parse_pdb: residues ordered by seq number and insertion code") {
  std::string text =
      "ATOM      1  CA  GLY A   2       2.000   0.000   0.000  1.00  0.00           C\n"
      "ATOM      2  CA  ALA A   1       1.000   0.000   0.000  1.00  0.00           C\n"
      "ATOM      3  CA  SER A   2A      3.000   0.000   0.000  1.00  0.00           C\n"
      "END\n";
  const ProteinStructure p = parse_pdb(text);
  const auto &res = p.chains[0].residues;
  REQUIRE(res.size() == 3);
  CHECK(res[0].name == "ALA");
  CHECK(res[1].name == "GLY");
  CHECK(res[2].name == "SER");
  CHECK(res[2].insertion_code == 'A');
}

TEST_CASE("parse_pdb: polymer chain without alpha carbons is rejected") {
  std::string text =
      "ATOM      1  P     DA A  1       0.000   0.000   0.000  1.00  0.00           P\n"
      "END\n";
  CHECK_THROWS_AS(parse_pdb(text), ParseError);
}

TEST_CASE("pdb round-trip preserves structure") {
  const ProteinStructure p = testing::gly_chain(3);
  const ProteinStructure q = parse_pdb(write_pdb(p));
  REQUIRE(q.chains.size() == 1);
  REQUIRE(q.chains[0].residues.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const Residue &a = p.chains[0].residues[i];
    const Residue &b = q.chains[0].residues[i];
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t k = 0; k < a.atoms.size(); ++k) {
      CHECK(a.atoms[k].name == b.atoms[k].name);
      CHECK(std::abs(a.atoms[k].position.x - b.atoms[k].position.x) <= 1e-3);
    }
  }
}

TEST_CASE("parse_pdb: never crashes on fuzzed bytes") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = kGly;
    for (int k = 0; k < 5; ++k)
      text[rng() % text.size()] = static_cast<char>(byte(rng));
    try {
      parse_pdb(text);
    } catch (const ParseError &) {
    }
  }
}
