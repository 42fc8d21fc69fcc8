//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include "posekit/io/pdb.hpp"
#include "posekit/io/sdf.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace posekit;
using namespace posekit::testing;

namespace {

int run_cli(const std::string &args) {
  const std::string cmd = std::string(POSEKIT_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Workspace {
  fs::path root;

  Workspace() {
    root = fs::temp_directory_path() /
           ("posekit_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  fs::path p(const std::string &rel) const { return root / rel; }
};

ProteinStructure fixture_protein() {
  const char *names[] = {"ALA", "GLY", "SER", "LEU", "VAL", "THR"};
  ProteinStructure p;
  Chain chain;
  chain.id = "A";
  for (int i = 0; i < 6; ++i)
    chain.residues.push_back(backbone_residue("A", names[i], i + 1, {3.8 * i, 0, 0}));
  p.chains.push_back(std::move(chain));
  return p;
}

SmallMolecule fixture_ligand() {
  return molecule("LIG", {atom("C", 7, 6, 0), atom("O", 8.43, 6, 0)},
                  {{0, 1, BondOrder::Single}});
}

// Three-entry benchmark with hand-picked outcomes:
//   E1: pred == ref              -> rmsd 0,   pb_valid true
//   E2: pred shifted 3 A         -> rmsd 3,   pb_valid true   (rmsd failure)
//   E3: pred with squeezed bond  -> rmsd < 2, pb_valid false  (validity failure)
void write_benchmark(const Workspace &ws) {
  const ProteinStructure prot = fixture_protein();
  const SmallMolecule lig = fixture_ligand();

  auto entry = [&](const std::string &id, const SmallMolecule &pred) {
    const fs::path dir = ws.p("bench/" + id);
    fs::create_directories(dir);
    write_pdb_file(prot, (dir / "protein.pdb").string());
    write_sdf_file(lig, (dir / "ligand_ref.sdf").string());
    write_sdf_file(pred, (dir / "ligand_pred.sdf").string());
  };

  entry("E1_LIG", lig);

  SmallMolecule shifted = lig;
  for (auto &a : shifted.atoms)
    a.position.y += 3.0;
  entry("E2_LIG", shifted);

  SmallMolecule squeezed = lig;
  squeezed.atoms[1].position = {7.5, 6, 0};  // C-O bond at 0.5 A
  entry("E3_LIG", squeezed);
}

}  // namespace

TEST_CASE("cli: validate a clean fixture") {
  Workspace ws;
  const fs::path dir = ws.p("entry");
  fs::create_directories(dir);
  write_pdb_file(fixture_protein(), (dir / "protein.pdb").string());
  write_sdf_file(fixture_ligand(), (dir / "ligand_ref.sdf").string());
  write_sdf_file(fixture_ligand(), (dir / "ligand_pred.sdf").string());

  const int code = run_cli("validate --pred " + (dir / "ligand_pred.sdf").string() +
                           " --ref " + (dir / "ligand_ref.sdf").string() +
                           " --protein " + (dir / "protein.pdb").string() + " --out " +
                           ws.p("rep.json").string() + " 2> " +
                           ws.p("err.txt").string());
  CHECK(code == 0);
  const auto doc = nlohmann::json::parse(slurp(ws.p("rep.json")));
  CHECK(doc["pb_valid"] == true);
}

TEST_CASE("cli: unknown flag exits 2 with usage on stderr") {
  Workspace ws;
  const int code =
      run_cli("validate --frobnicate 2> " + ws.p("err.txt").string() + " > /dev/null");
  CHECK(code == 2);
  const std::string err = slurp(ws.p("err.txt"));
  CHECK(err.find("Usage") != std::string::npos);
}

TEST_CASE("cli: evaluate a 3-entry fixture with known outcomes") {
  Workspace ws;
  write_benchmark(ws);

  const int code = run_cli("evaluate --dir " + ws.p("bench").string() +
                           " --method demo --criterion rmsd_and_valid --out " +
                           ws.p("records.csv").string() + " > " +
                           ws.p("stdout.txt").string() + " 2> /dev/null");
  CHECK(code == 0);

  const std::string stdout_text = slurp(ws.p("stdout.txt"));
  CHECK(stdout_text.find("success_rate: 33.33%") != std::string::npos);

  const std::string csv = slurp(ws.p("records.csv"));
  int rows = 0;
  for (char c : csv)
    rows += c == '\n';
  CHECK(rows == 4);  // header + 3 entries
  CHECK(csv.find("E1_LIG,E1,demo,0,true") != std::string::npos);
  CHECK(csv.find("E2_LIG,E2,demo,3,true") != std::string::npos);
  CHECK(csv.find("E3_LIG,E3,demo,") != std::string::npos);
  CHECK(csv.find("false") != std::string::npos);  // E3 fails validity
}

TEST_CASE("cli: evaluate output is byte-identical across runs") {
  Workspace ws;
  write_benchmark(ws);
  const std::string base = "evaluate --dir " + ws.p("bench").string() +
                           " --method demo --jobs 2 --out ";
  CHECK(run_cli(base + ws.p("r1.csv").string() + " > /dev/null 2>&1") == 0);
  CHECK(run_cli(base + ws.p("r2.csv").string() + " > /dev/null 2>&1") == 0);
  CHECK(slurp(ws.p("r1.csv")) == slurp(ws.p("r2.csv")));
}

TEST_CASE("cli: per-entry failures do not abort the batch") {
  Workspace ws;
  write_benchmark(ws);
  fs::remove(ws.p("bench/E2_LIG/ligand_pred.sdf"));

  const int code = run_cli("evaluate --dir " + ws.p("bench").string() +
                           " --method demo --out " + ws.p("records.csv").string() +
                           " > /dev/null 2> " + ws.p("err.txt").string());
  CHECK(code == 1);

  const std::string csv = slurp(ws.p("records.csv"));
  CHECK(csv.find("E1_LIG") != std::string::npos);
  CHECK(csv.find("E3_LIG") != std::string::npos);
  CHECK(csv.find("E2_LIG") == std::string::npos);

  // The failure count equals the rows flagged in the error sidecar.
  const std::string errors = slurp(ws.p("records.csv.errors.csv"));
  int error_rows = -1;  // discount the header
  for (char c : errors)
    error_rows += c == '\n';
  CHECK(error_rows == 1);
  CHECK(errors.find("E2_LIG") != std::string::npos);
}

TEST_CASE("cli: relax writes outputs and stats") {
  Workspace ws;
  const fs::path dir = ws.p("entry");
  fs::create_directories(dir);
  const ProteinStructure prot = fixture_protein();
  // Ligand carbon shoved into the residue-2 backbone carbon.
  const Vec3 target = prot.chains[0].residues[1].atoms[2].position;
  const SmallMolecule lig =
      molecule("LIG", {atom("C", target.x, target.y, target.z + 0.7),
                       atom("C", target.x, target.y, target.z + 2.24)},
               {{0, 1, BondOrder::Single}});
  write_pdb_file(prot, (dir / "protein.pdb").string());
  write_sdf_file(lig, (dir / "ligand.sdf").string());

  const int code = run_cli(
      "relax --protein " + (dir / "protein.pdb").string() + " --ligand " +
      (dir / "ligand.sdf").string() + " --out-protein " + ws.p("out.pdb").string() +
      " --out-ligand " + ws.p("out.sdf").string() + " --stats " +
      ws.p("stats.json").string() + " 2> /dev/null");
  CHECK(code == 0);

  const auto stats = nlohmann::json::parse(slurp(ws.p("stats.json")));
  CHECK(stats["clash_count_before"].get<int>() > 0);
  CHECK(stats["clash_count_after"].get<int>() == 0);
  CHECK(stats["converged"] == true);

  const SmallMolecule relaxed = parse_sdf_file(ws.p("out.sdf").string());
  CHECK(relaxed.bonds.size() == lig.bonds.size());
  const ProteinStructure relaxed_prot = parse_pdb_file(ws.p("out.pdb").string());
  CHECK(relaxed_prot.residue_count() == prot.residue_count());
}

TEST_CASE("cli: report aggregates records") {
  Workspace ws;
  write_benchmark(ws);
  REQUIRE(run_cli("evaluate --dir " + ws.p("bench").string() + " --method demo --out " +
                  ws.p("records.csv").string() + " > /dev/null 2>&1") == 0);
  const int code = run_cli("report --records " + ws.p("records.csv").string() +
                           " --out-json " + ws.p("summary.json").string() +
                           " 2> /dev/null");
  CHECK(code == 0);
  const auto doc = nlohmann::json::parse(slurp(ws.p("summary.json")));
  CHECK(doc["record_count"] == 3);
  CHECK(doc["methods"].contains("demo"));
}

TEST_CASE("cli: crossdock emits the alignment report") {
  Workspace ws;
  const ProteinStructure prot = fixture_protein();
  const SmallMolecule lig = fixture_ligand();

  auto entry = [&](const std::string &rel, const ProteinStructure &p,
                   const SmallMolecule &l) {
    const fs::path dir = ws.p(rel);
    fs::create_directories(dir);
    write_pdb_file(p, (dir / "protein.pdb").string());
    write_sdf_file(l, (dir / "ligand_ref.sdf").string());
  };
  entry("ref", prot, lig);

  // Candidate 1: same complex translated; accepted with ca_rmsd ~ 0.
  ProteinStructure moved = prot;
  for (auto &c : moved.chains)
    for (auto &r : c.residues)
      for (auto &a : r.atoms)
        a.position += Vec3{5, -2, 1};
  SmallMolecule moved_lig = lig;
  for (auto &a : moved_lig.atoms)
    a.position += Vec3{5, -2, 1};
  entry("cands/C1_LIG", moved, moved_lig);

  // Candidate 2: ligand far from the reference pocket; rejected ligand-shift.
  SmallMolecule far_lig = lig;
  for (auto &a : far_lig.atoms)
    a.position += Vec3{0, 14, 0};
  entry("cands/C2_LIG", prot, far_lig);

  const int code = run_cli("crossdock --reference " + ws.p("ref").string() +
                           " --candidates " + ws.p("cands").string() + " --out-dir " +
                           ws.p("out").string() + " 2> /dev/null");
  CHECK(code == 0);

  const std::string report = slurp(ws.p("out/alignment_report.csv"));
  CHECK(report.find("candidate_id,ca_rmsd,displacement,decision,reason") == 0);
  CHECK(report.find("C1_LIG") != std::string::npos);
  CHECK(report.find("accept") != std::string::npos);
  CHECK(report.find("ligand-shift") != std::string::npos);
  CHECK(fs::exists(ws.p("out/C1_LIG/ligand_transferred.sdf")));
  CHECK(fs::exists(ws.p("out/C1_LIG/protein_aligned.pdb")));
  CHECK_FALSE(fs::exists(ws.p("out/C2_LIG/ligand_transferred.sdf")));
}

TEST_CASE("cli: pocket-sim against a small corpus") {
  Workspace ws;
  const ProteinStructure prot = fixture_protein();
  const SmallMolecule lig = fixture_ligand();

  const fs::path entry = ws.p("bench/Q1_LIG");
  fs::create_directories(entry);
  write_pdb_file(prot, (entry / "protein.pdb").string());
  write_sdf_file(lig, (entry / "ligand_ref.sdf").string());

  fs::create_directories(ws.p("corpus"));
  write_pdb_file(prot, ws.p("corpus/self.pdb").string());
  write_sdf_file(lig, ws.p("corpus/self.sdf").string());
  std::ofstream index(ws.p("corpus/index.csv"));
  index << "entry_id,protein_path,ligand_path,release_date\n";
  index << "SELF,self.pdb,self.sdf,2021-06-01\n";
  index.close();

  const int code = run_cli("pocket-sim --dir " + ws.p("bench").string() +
                           " --corpus " + ws.p("corpus").string() +
                           " --released-before 2022-01-01 --out " +
                           ws.p("sim.csv").string() + " 2> /dev/null");
  CHECK(code == 0);
  const std::string csv = slurp(ws.p("sim.csv"));
  CHECK(csv.find("Q1_LIG,SELF,1.000000,0") != std::string::npos);
}

TEST_CASE("cli: curate self pipeline over a manifest") {
  Workspace ws;
  std::ofstream manifest(ws.p("manifest.json"));
  manifest << R"([
    {"pdb_id": "P1", "ccd_id": "C1", "release_date": "2023-06-15",
     "resolution": 1.8, "ligand_mw": 350.0, "heavy_atom_count": 24,
     "elements": ["C","N","O"], "covalently_bound": false, "rsr": 0.15,
     "rscc": 0.97, "completeness": 100.0, "stereo_errors": false,
     "atomic_clashes": false, "sequences": ["MKVLAAGPTS"],
     "min_protein_distance": 1.0, "min_other_ligand_distance": 8.0,
     "min_symmetry_mate_distance": 7.5},
    {"pdb_id": "P2", "ccd_id": "C2", "release_date": "2023-06-15",
     "resolution": 1.8, "ligand_mw": 95.0, "heavy_atom_count": 24,
     "elements": ["C","N","O"], "covalently_bound": false, "rsr": 0.15,
     "rscc": 0.97, "completeness": 100.0, "stereo_errors": false,
     "atomic_clashes": false, "sequences": ["MKVLAAGPTS"],
     "min_protein_distance": 1.0, "min_other_ligand_distance": 8.0,
     "min_symmetry_mate_distance": 7.5}
  ])";
  manifest.close();

  const int code = run_cli("curate --manifest " + ws.p("manifest.json").string() +
                           " --pipeline self --out-dir " + ws.p("out").string() +
                           " > /dev/null 2>&1");
  CHECK(code == 0);
  const std::string trace = slurp(ws.p("out/trace.csv"));
  CHECK(trace.rfind("step,survivors", 0) == 0);
  CHECK(trace.find("ligand_weight,1") != std::string::npos);
  const auto selected = nlohmann::json::parse(slurp(ws.p("out/selected.json")));
  REQUIRE(selected.size() == 1);
  CHECK(selected[0] == "P1_C1");
}
