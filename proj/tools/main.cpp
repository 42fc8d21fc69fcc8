//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posekit/core/elements.hpp"
#include "posekit/crossdock/crossdock.hpp"
#include "posekit/curate/curate.hpp"
#include "posekit/io/pdb.hpp"
#include "posekit/io/sdf.hpp"
#include "posekit/metrics/metrics.hpp"
#include "posekit/pocket/pocket.hpp"
#include "posekit/relax/relax.hpp"
#include "posekit/rmsd/symmetry_rmsd.hpp"
#include "posekit/validity/checks.hpp"

namespace fs = std::filesystem;
using namespace posekit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEntryFailures = 1;
constexpr int kExitUsage = 2;

// Structured per-entry log line on stderr: "<level>\t<entry>\t<message>".
std::mutex g_log_mutex;
void log_entry(const std::string &level, const std::string &entry,
               const std::string &message) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << level << '\t' << entry << '\t' << message << '\n';
}

struct BenchmarkEntry {
  std::string id;
  fs::path dir;

  fs::path protein() const { return dir / "protein.pdb"; }
  fs::path ligand_ref() const { return dir / "ligand_ref.sdf"; }
  fs::path ligand_pred() const { return dir / "ligand_pred.sdf"; }
};

std::vector<BenchmarkEntry> scan_benchmark(const std::string &root) {
  if (!fs::is_directory(root))
    throw Error("benchmark directory '" + root + "' does not exist");
  std::vector<BenchmarkEntry> entries;
  for (const auto &item : fs::directory_iterator(root))
    if (item.is_directory())
      entries.push_back({item.path().filename().string(), item.path()});
  std::sort(entries.begin(), entries.end(),
            [](const BenchmarkEntry &a, const BenchmarkEntry &b) { return a.id < b.id; });
  if (entries.empty())
    throw Error("benchmark directory '" + root + "' has no entry subdirectories");
  return entries;
}

// target_id defaults to the text before the first underscore of the entry id
// (the PDB id in PDB_CCD naming); a targets CSV (entry_id,target_id) overrides.
std::map<std::string, std::string> load_target_map(const std::string &path) {
  std::map<std::string, std::string> map;
  if (path.empty())
    return map;
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open targets file '" + path + "'");
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error("targets file: expected 'entry_id,target_id' rows");
    if (first && line.rfind("entry_id", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    map[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return map;
}

std::string target_of(const std::string &entry_id,
                      const std::map<std::string, std::string> &overrides) {
  auto it = overrides.find(entry_id);
  if (it != overrides.end())
    return it->second;
  const auto underscore = entry_id.find('_');
  return underscore == std::string::npos ? entry_id : entry_id.substr(0, underscore);
}

void write_file(const fs::path &path, const std::string &content) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write '" + path.string() + "'");
  out << content;
}

// Runs fn(i) over [0, n) on `jobs` workers; exceptions are captured per index.
std::vector<std::optional<std::string>>
parallel_run(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> &fn) {
  std::vector<std::optional<std::string>> errors(n);
  if (jobs == 0)
    jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, n == 0 ? 1 : static_cast<unsigned>(n));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  return errors;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateOptions {
  std::string pred, ref, protein, out;
  std::string dir, out_dir;
  unsigned jobs = 0;
};

int run_validate(const ValidateOptions &opt) {
  if (!opt.dir.empty()) {
    const auto entries = scan_benchmark(opt.dir);
    const fs::path out_dir = opt.out_dir.empty() ? fs::path(opt.dir) : fs::path(opt.out_dir);
    const auto errors = parallel_run(entries.size(), opt.jobs, [&](std::size_t i) {
      const auto &e = entries[i];
      const SmallMolecule pred = parse_sdf_file(e.ligand_pred().string());
      const SmallMolecule ref = parse_sdf_file(e.ligand_ref().string());
      const ProteinStructure prot = parse_pdb_file(e.protein().string());
      const ValidityReport report = evaluate_validity(pred, ref, prot);
      write_file(out_dir / (e.id + ".validity.json"), report_to_json(report));
    });
    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (errors[i]) {
        ++failures;
        log_entry("error", entries[i].id, *errors[i]);
      }
    }
    return failures > 0 ? kExitEntryFailures : kExitOk;
  }

  const SmallMolecule pred = parse_sdf_file(opt.pred);
  const SmallMolecule ref = parse_sdf_file(opt.ref);
  const ProteinStructure prot = parse_pdb_file(opt.protein);
  const ValidityReport report = evaluate_validity(pred, ref, prot);
  const std::string json = report_to_json(report);
  if (opt.out.empty())
    std::cout << json;
  else
    write_file(opt.out, json);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rmsd
// ---------------------------------------------------------------------------

struct RmsdOptions {
  std::string pred, ref;
  std::string dir, out;
  bool naive = false;
  unsigned jobs = 0;
};

int run_rmsd(const RmsdOptions &opt) {
  auto compute = [&](const SmallMolecule &pred, const SmallMolecule &ref) {
    return opt.naive ? naive_rmsd(pred, ref) : symmetry_rmsd(pred, ref).rmsd;
  };

  if (!opt.dir.empty()) {
    const auto entries = scan_benchmark(opt.dir);
    std::vector<double> values(entries.size());
    const auto errors = parallel_run(entries.size(), opt.jobs, [&](std::size_t i) {
      const auto &e = entries[i];
      values[i] = compute(parse_sdf_file(e.ligand_pred().string()),
                          parse_sdf_file(e.ligand_ref().string()));
    });
    std::ostringstream csv;
    csv << "entry_id,rmsd\n";
    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (errors[i]) {
        ++failures;
        log_entry("error", entries[i].id, *errors[i]);
        continue;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", values[i]);
      csv << entries[i].id << ',' << buf << '\n';
    }
    if (opt.out.empty())
      std::cout << csv.str();
    else
      write_file(opt.out, csv.str());
    return failures > 0 ? kExitEntryFailures : kExitOk;
  }

  const double value = compute(parse_sdf_file(opt.pred), parse_sdf_file(opt.ref));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f\n", value);
  std::cout << buf;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// relax
// ---------------------------------------------------------------------------

struct RelaxOptions {
  std::string protein, ligand;
  std::string out_protein, out_ligand, stats;
  RelaxConfig config;
};

nlohmann::ordered_json relax_stats_json(const RelaxStats &stats) {
  nlohmann::ordered_json doc;
  doc["clash_count_before"] = stats.clash_count_before;
  doc["clash_count_after"] = stats.clash_count_after;
  doc["backbone_rmsd_from_input"] = stats.backbone_rmsd_from_input;
  doc["backbone_mean_displacement"] = stats.backbone_mean_displacement;
  doc["ligand_mean_displacement"] = stats.ligand_mean_displacement;
  doc["iterations"] = stats.minimize.iterations;
  doc["final_energy"] = stats.minimize.final_energy;
  doc["final_max_gradient"] = stats.minimize.final_max_gradient;
  doc["converged"] = stats.minimize.converged;
  if (!stats.minimize.diagnostic.empty())
    doc["diagnostic"] = stats.minimize.diagnostic;
  return doc;
}

int run_relax(const RelaxOptions &opt) {
  const ProteinStructure protein = parse_pdb_file(opt.protein);
  const SmallMolecule ligand = parse_sdf_file(opt.ligand);
  const RelaxedComplex out = relax_complex(protein, ligand, opt.config);
  write_pdb_file(out.protein, opt.out_protein);
  write_sdf_file(out.ligand, opt.out_ligand);
  if (!opt.stats.empty())
    write_file(opt.stats, relax_stats_json(out.stats).dump(2) + "\n");
  else
    std::cout << relax_stats_json(out.stats).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateOptions {
  std::string dir, out;
  std::string method = "unknown";
  std::string run_id;
  std::string criterion = "rmsd_only";
  std::string targets_csv;
  std::string similarities_csv;
  bool relax_first = false;
  double rmsd_threshold = 2.0;
  unsigned jobs = 0;
  RelaxConfig relax_config;
};

std::map<std::string, double> load_similarities(const std::string &path) {
  std::map<std::string, double> map;
  if (path.empty())
    return map;
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open similarities file '" + path + "'");
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      continue;
    if (first && line.rfind("entry_id", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    map[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return map;
}

int run_evaluate(const EvaluateOptions &opt) {
  const auto entries = scan_benchmark(opt.dir);
  const auto targets = load_target_map(opt.targets_csv);
  const auto similarities = load_similarities(opt.similarities_csv);

  std::vector<EvaluationRecord> records(entries.size());
  const auto errors = parallel_run(entries.size(), opt.jobs, [&](std::size_t i) {
    const auto &e = entries[i];
    SmallMolecule pred = parse_sdf_file(e.ligand_pred().string());
    const SmallMolecule ref = parse_sdf_file(e.ligand_ref().string());
    ProteinStructure prot = parse_pdb_file(e.protein().string());
    bool relaxed = false;
    if (opt.relax_first) {
      RelaxedComplex rc = relax_complex(prot, pred, opt.relax_config);
      pred = std::move(rc.ligand);
      prot = std::move(rc.protein);
      relaxed = true;
    }
    const double rmsd_value = symmetry_rmsd(pred, ref).rmsd;
    const ValidityReport report = evaluate_validity(pred, ref, prot);

    EvaluationRecord rec;
    rec.entry_id = e.id;
    rec.target_id = target_of(e.id, targets);
    rec.method_name = opt.method;
    rec.rmsd = rmsd_value;
    rec.pb_valid = report.pb_valid;
    rec.relaxed = relaxed;
    rec.run_id = opt.run_id;
    auto sim = similarities.find(e.id);
    if (sim != similarities.end())
      rec.pocket_similarity = sim->second;
    records[i] = std::move(rec);
  });

  std::vector<EvaluationRecord> ok_records;
  std::ostringstream errors_csv;
  errors_csv << "entry_id,error\n";
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (errors[i]) {
      ++failures;
      log_entry("error", entries[i].id, *errors[i]);
      std::string msg = *errors[i];
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      errors_csv << entries[i].id << ',' << msg << '\n';
    } else {
      ok_records.push_back(records[i]);
    }
  }

  if (opt.out.empty())
    throw CLI::ValidationError("--out is required for evaluate");
  write_file(opt.out, records_to_csv(ok_records));
  if (failures > 0)
    write_file(opt.out + ".errors.csv", errors_csv.str());

  // Sidecar run metadata (never inside the data artifact).
  nlohmann::ordered_json meta;
  meta["entries"] = entries.size();
  meta["failures"] = failures;
  meta["method"] = opt.method;
  meta["relaxed"] = opt.relax_first;
  meta["criterion"] = opt.criterion;
  meta["rmsd_threshold"] = opt.rmsd_threshold;
  write_file(opt.out + ".meta.json", meta.dump(2) + "\n");

  if (!ok_records.empty()) {
    const SuccessCriterion crit = opt.criterion == "rmsd_and_valid"
                                      ? SuccessCriterion::RmsdAndValid
                                      : SuccessCriterion::RmsdOnly;
    std::cout << "success_rate: "
              << format_percent(success_rate(ok_records, crit, opt.rmsd_threshold))
              << "%\n";
    std::cout << "target_level_success_rate: "
              << format_percent(
                     target_level_success(ok_records, crit, opt.rmsd_threshold))
              << "%\n";
  }
  return failures > 0 ? kExitEntryFailures : kExitOk;
}

// ---------------------------------------------------------------------------
// crossdock
// ---------------------------------------------------------------------------

struct CrossdockOptions {
  std::string reference, candidates, out_dir;
  double max_ca_rmsd = 2.0;
  double max_displacement = 4.0;
};

int run_crossdock(const CrossdockOptions &opt) {
  const BenchmarkEntry ref_entry{fs::path(opt.reference).filename().string(),
                                 fs::path(opt.reference)};
  const ProteinStructure ref_protein = parse_pdb_file(ref_entry.protein().string());
  const SmallMolecule ref_ligand = parse_sdf_file(ref_entry.ligand_ref().string());
  const Vec3 ref_centroid = ref_ligand.heavy_atom_centroid();

  const auto candidates = scan_benchmark(opt.candidates);
  std::ostringstream csv;
  csv << "candidate_id,ca_rmsd,displacement,decision,reason\n";
  int failures = 0;
  for (const auto &cand : candidates) {
    try {
      const ProteinStructure protein = parse_pdb_file(cand.protein().string());
      const SmallMolecule ligand = parse_sdf_file(cand.ligand_ref().string());
      const AlignmentResult aln = align_to_reference(protein, ref_protein);
      const SmallMolecule moved = transfer_ligand(ligand, aln);
      const double displacement = distance(moved.heavy_atom_centroid(), ref_centroid);
      const CandidateVerdict verdict =
          candidate_filter(aln, displacement, opt.max_ca_rmsd, opt.max_displacement);

      const char *decision = verdict.decision == FilterDecision::Accept ? "accept"
                             : verdict.decision == FilterDecision::RejectAlignment
                                 ? "reject"
                                 : "reject";
      const std::string reason =
          verdict.decision == FilterDecision::Accept ? ""
          : verdict.decision == FilterDecision::RejectAlignment ? "alignment"
                                                                : "ligand-shift";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f", aln.ca_rmsd, displacement);
      csv << cand.id << ',' << buf << ',' << decision << ',' << reason << '\n';

      if (verdict.decision == FilterDecision::Accept) {
        const fs::path dir = fs::path(opt.out_dir) / cand.id;
        write_pdb_file(transform_structure(protein, aln.transform),
                       (dir / "protein_aligned.pdb").string());
        write_sdf_file(moved, (dir / "ligand_transferred.sdf").string());
      }
    } catch (const std::exception &e) {
      ++failures;
      log_entry("error", cand.id, e.what());
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      csv << cand.id << ",,,error," << msg << '\n';
    }
  }
  write_file(fs::path(opt.out_dir) / "alignment_report.csv", csv.str());
  return failures > 0 ? kExitEntryFailures : kExitOk;
}

// ---------------------------------------------------------------------------
// pocket-sim
// ---------------------------------------------------------------------------

struct PocketSimOptions {
  std::string dir, corpus, out;
  std::string released_before;  // optional corpus date filter
  double cutoff = 10.0;
  unsigned jobs = 0;
};

std::vector<Pocket> load_corpus(const PocketSimOptions &opt) {
  const fs::path index = fs::path(opt.corpus) / "index.csv";
  std::ifstream in(index);
  if (!in)
    throw Error("corpus index '" + index.string() + "' not found");
  std::vector<Pocket> corpus;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ','))
      f.push_back(field);
    if (first && f.size() >= 1 && f[0] == "entry_id") {
      first = false;
      continue;
    }
    first = false;
    if (f.size() < 4)
      throw Error("corpus index: expected entry_id,protein_path,ligand_path,"
                  "release_date rows");
    if (!opt.released_before.empty() && f[3] >= opt.released_before)
      continue;
    const ProteinStructure prot =
        parse_pdb_file((fs::path(opt.corpus) / f[1]).string());
    const SmallMolecule lig = parse_sdf_file((fs::path(opt.corpus) / f[2]).string());
    Pocket pocket = extract_pocket(prot, lig, opt.cutoff);
    pocket.source_entry = f[0];
    corpus.push_back(std::move(pocket));
  }
  if (corpus.empty())
    throw Error("corpus is empty (after the date filter)");
  return corpus;
}

int run_pocket_sim(const PocketSimOptions &opt) {
  const auto corpus = load_corpus(opt);
  const auto entries = scan_benchmark(opt.dir);

  struct Row {
    double score = 0;
    std::string best;
    int failed = 0;
  };
  std::vector<Row> rows(entries.size());
  const auto errors = parallel_run(entries.size(), opt.jobs, [&](std::size_t i) {
    const auto &e = entries[i];
    const ProteinStructure prot = parse_pdb_file(e.protein().string());
    const SmallMolecule lig = parse_sdf_file(e.ligand_ref().string());
    Pocket pocket = extract_pocket(prot, lig, opt.cutoff);
    pocket.source_entry = e.id;
    const CorpusMatch match = max_similarity_vs_corpus(pocket, corpus);
    rows[i] = {match.score, match.best_match_id, match.failed_comparisons};
  });

  std::ostringstream csv;
  csv << "entry_id,best_match_id,pocket_similarity,failed_comparisons\n";
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (errors[i]) {
      ++failures;
      log_entry("error", entries[i].id, *errors[i]);
      continue;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", rows[i].score);
    csv << entries[i].id << ',' << rows[i].best << ',' << buf << ','
        << rows[i].failed << '\n';
  }
  if (opt.out.empty())
    std::cout << csv.str();
  else
    write_file(opt.out, csv.str());
  return failures > 0 ? kExitEntryFailures : kExitOk;
}

// ---------------------------------------------------------------------------
// curate
// ---------------------------------------------------------------------------

struct CurateOptions {
  std::string manifest, pipeline = "self", structures, out_dir;
};

int run_curate(const CurateOptions &opt) {
  const auto manifest = parse_manifest_file(opt.manifest);
  fs::create_directories(opt.out_dir);

  if (opt.pipeline == "self") {
    const SelfDockResult result = build_self_dock_set(manifest);
    write_file(fs::path(opt.out_dir) / "trace.csv", result.trace.to_csv());
    nlohmann::ordered_json selected = nlohmann::ordered_json::array();
    for (const auto &e : result.selected)
      selected.push_back(e.entry_id());
    write_file(fs::path(opt.out_dir) / "selected.json", selected.dump(2) + "\n");
    std::cout << "selected " << result.selected.size() << " entries\n";
    return kExitOk;
  }

  if (opt.pipeline != "cross")
    throw CLI::ValidationError("--pipeline must be 'self' or 'cross'");
  if (opt.structures.empty())
    throw CLI::ValidationError("--structures is required for the cross pipeline");

  // Structures live in benchmark layout keyed by entry id (PDB_CCD).
  std::unordered_map<std::string, ComplexRecord> structures;
  for (const auto &e : manifest) {
    const fs::path dir = fs::path(opt.structures) / e.entry_id();
    if (!fs::is_directory(dir))
      continue;  // filters may drop it; missing survivors error later
    structures[e.entry_id()] = {parse_pdb_file((dir / "protein.pdb").string()),
                                parse_sdf_file((dir / "ligand_ref.sdf").string())};
  }

  const CrossDockResult result = build_cross_dock_set(manifest, structures);
  write_file(fs::path(opt.out_dir) / "trace.csv", result.trace.to_csv());

  std::ostringstream pairs_csv;
  pairs_csv << "cluster_reference,structure_entry,ligand_entry\n";
  nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
  for (const auto &cluster : result.clusters) {
    nlohmann::ordered_json c;
    c["reference"] = cluster.reference_entry;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto &p : cluster.pairs) {
      pairs.push_back({{"structure", p.structure_entry}, {"ligand", p.ligand_entry}});
      pairs_csv << cluster.reference_entry << ',' << p.structure_entry << ','
                << p.ligand_entry << '\n';
    }
    c["pairs"] = pairs;
    clusters.push_back(c);

    for (const auto &[id, prot] : cluster.structures)
      write_pdb_file(prot, (fs::path(opt.out_dir) / "structures" / (id + ".pdb")).string());
    for (const auto &[id, lig] : cluster.ligands)
      write_sdf_file(lig, (fs::path(opt.out_dir) / "ligands" / (id + ".sdf")).string());
  }
  write_file(fs::path(opt.out_dir) / "cross_pairs.csv", pairs_csv.str());
  write_file(fs::path(opt.out_dir) / "clusters.json", clusters.dump(2) + "\n");
  std::cout << "clusters " << result.clusters.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string records, out_json, out_csv;
  bool stratify = false;
  double similarity_threshold = 0.70;
  double rmsd_threshold = 2.0;
  std::size_t ma_window = 0;
  std::string ma_out;
};

int run_report(const ReportOptions &opt) {
  std::ifstream in(opt.records);
  if (!in)
    throw Error("cannot open records '" + opt.records + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto records = records_from_csv(buf.str());

  ReportConfig config;
  config.stratify = opt.stratify;
  config.similarity_threshold = opt.similarity_threshold;
  config.rmsd_threshold = opt.rmsd_threshold;
  const Report report = generate_report(records, config);
  write_file(opt.out_json, report.summary_json);
  if (!opt.out_csv.empty())
    write_file(opt.out_csv, report.records_csv);

  if (opt.ma_window > 0) {
    if (opt.ma_out.empty())
      throw CLI::ValidationError("--ma-out is required with --ma-window");
    // Records sorted by pocket similarity, descending; trailing mean of rmsd.
    std::vector<EvaluationRecord> sorted;
    for (const auto &r : records) {
      if (!r.pocket_similarity)
        throw Error("record '" + r.entry_id + "' lacks pocket_similarity, required "
                    "for the moving-average series");
      sorted.push_back(r);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const EvaluationRecord &a, const EvaluationRecord &b) {
                       return *a.pocket_similarity > *b.pocket_similarity;
                     });
    std::vector<double> rmsds;
    for (const auto &r : sorted)
      rmsds.push_back(r.rmsd);
    const auto series = moving_average(rmsds, opt.ma_window);
    std::ostringstream csv;
    csv << "window_end_index,window_end_similarity,mean_rmsd\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const std::size_t end = i + opt.ma_window - 1;
      char buf2[96];
      std::snprintf(buf2, sizeof(buf2), "%zu,%.6f,%.6f", end,
                    *sorted[end].pocket_similarity, series[i]);
      csv << buf2 << '\n';
    }
    write_file(opt.ma_out, csv.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_relax_flags(CLI::App *cmd, RelaxConfig &config) {
  cmd->add_option("--k-backbone", config.k_backbone,
                  "Backbone positional restraint stiffness, kJ/mol/nm^2");
  cmd->add_option("--k-bond", config.k_bond, "Bond restraint stiffness");
  cmd->add_option("--k-rep", config.k_rep, "Soft repulsion stiffness");
  cmd->add_option("--gradient-tolerance", config.gradient_tolerance,
                  "Convergence threshold, kJ/mol/nm");
  cmd->add_option("--max-iterations", config.max_iterations, "Iteration budget");
  cmd->add_option("--clash-margin", config.clash_margin,
                  "Repulsion activation margin beyond the clash distance, nm");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Protein-ligand docking evaluation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  ValidateOptions validate_opt;
  auto *validate = app.add_subcommand("validate", "Structural-plausibility checks");
  validate->add_option("--pred", validate_opt.pred, "Predicted ligand SDF");
  validate->add_option("--ref", validate_opt.ref, "Reference ligand SDF");
  validate->add_option("--protein", validate_opt.protein, "Protein PDB");
  validate->add_option("--out", validate_opt.out, "Report JSON path");
  validate->add_option("--dir", validate_opt.dir, "Benchmark directory (batch mode)");
  validate->add_option("--out-dir", validate_opt.out_dir, "Batch report directory");
  validate->add_option("--jobs", validate_opt.jobs, "Worker threads (0 = cores)");

  RmsdOptions rmsd_opt;
  auto *rmsd_cmd = app.add_subcommand("rmsd", "Symmetry-corrected ligand RMSD");
  rmsd_cmd->add_option("--pred", rmsd_opt.pred, "Predicted ligand SDF");
  rmsd_cmd->add_option("--ref", rmsd_opt.ref, "Reference ligand SDF");
  rmsd_cmd->add_option("--dir", rmsd_opt.dir, "Benchmark directory (batch mode)");
  rmsd_cmd->add_option("--out", rmsd_opt.out, "Output CSV (batch mode)");
  rmsd_cmd->add_flag("--naive", rmsd_opt.naive, "Index-order RMSD, no symmetry correction");
  rmsd_cmd->add_option("--jobs", rmsd_opt.jobs, "Worker threads (0 = cores)");

  EvaluateOptions eval_opt;
  auto *evaluate = app.add_subcommand("evaluate", "RMSD + validity over a benchmark");
  evaluate->add_option("--dir", eval_opt.dir, "Benchmark directory")->required();
  evaluate->add_option("--out", eval_opt.out, "Output records CSV")->required();
  evaluate->add_option("--method", eval_opt.method, "Method name for the records");
  evaluate->add_option("--run-id", eval_opt.run_id, "Run id for multi-run aggregation");
  evaluate->add_option("--criterion", eval_opt.criterion,
                       "Success criterion: rmsd_only or rmsd_and_valid")
      ->check(CLI::IsMember({"rmsd_only", "rmsd_and_valid"}));
  evaluate->add_option("--targets", eval_opt.targets_csv,
                       "CSV entry_id,target_id overriding the id prefix rule");
  evaluate->add_option("--similarities", eval_opt.similarities_csv,
                       "CSV entry_id,score to annotate pocket similarity");
  evaluate->add_flag("--relax", eval_opt.relax_first, "Relax the pose first");
  evaluate->add_option("--rmsd-threshold", eval_opt.rmsd_threshold,
                       "Success threshold, Angstrom");
  evaluate->add_option("--jobs", eval_opt.jobs, "Worker threads (0 = cores)");
  add_relax_flags(evaluate, eval_opt.relax_config);

  RelaxOptions relax_opt;
  auto *relax_cmd = app.add_subcommand("relax", "Restrained relaxation of a complex");
  relax_cmd->add_option("--protein", relax_opt.protein, "Protein PDB")->required();
  relax_cmd->add_option("--ligand", relax_opt.ligand, "Ligand SDF")->required();
  relax_cmd->add_option("--out-protein", relax_opt.out_protein, "Relaxed protein PDB")
      ->required();
  relax_cmd->add_option("--out-ligand", relax_opt.out_ligand, "Relaxed ligand SDF")
      ->required();
  relax_cmd->add_option("--stats", relax_opt.stats, "Stats JSON path (default stdout)");
  add_relax_flags(relax_cmd, relax_opt.config);

  CrossdockOptions cross_opt;
  auto *crossdock = app.add_subcommand("crossdock", "Align candidates, transfer ligands");
  crossdock->add_option("--reference", cross_opt.reference,
                        "Reference entry directory (protein.pdb + ligand_ref.sdf)")
      ->required();
  crossdock->add_option("--candidates", cross_opt.candidates,
                        "Directory of candidate entry directories")
      ->required();
  crossdock->add_option("--out-dir", cross_opt.out_dir, "Output directory")->required();
  crossdock->add_option("--max-ca-rmsd", cross_opt.max_ca_rmsd,
                        "Alignment rejection threshold, Angstrom");
  crossdock->add_option("--max-displacement", cross_opt.max_displacement,
                        "Ligand displacement rejection threshold, Angstrom");

  PocketSimOptions pocket_opt;
  auto *pocket_sim = app.add_subcommand("pocket-sim", "Pocket similarity vs a corpus");
  pocket_sim->add_option("--dir", pocket_opt.dir, "Benchmark directory")->required();
  pocket_sim->add_option("--corpus", pocket_opt.corpus,
                         "Corpus directory with index.csv")
      ->required();
  pocket_sim->add_option("--out", pocket_opt.out, "Output CSV");
  pocket_sim->add_option("--cutoff", pocket_opt.cutoff, "Pocket cutoff, Angstrom");
  pocket_sim->add_option("--released-before", pocket_opt.released_before,
                         "Keep corpus entries released strictly before this date");
  pocket_sim->add_option("--jobs", pocket_opt.jobs, "Worker threads (0 = cores)");

  CurateOptions curate_opt;
  auto *curate = app.add_subcommand("curate", "Dataset construction pipelines");
  curate->add_option("--manifest", curate_opt.manifest, "Manifest JSON")->required();
  curate->add_option("--pipeline", curate_opt.pipeline, "self or cross")
      ->check(CLI::IsMember({"self", "cross"}));
  curate->add_option("--structures", curate_opt.structures,
                     "Structure directory (cross pipeline)");
  curate->add_option("--out-dir", curate_opt.out_dir, "Output directory")->required();

  ReportOptions report_opt;
  auto *report = app.add_subcommand("report", "Aggregate evaluation records");
  report->add_option("--records", report_opt.records, "Records CSV")->required();
  report->add_option("--out-json", report_opt.out_json, "Summary JSON")->required();
  report->add_option("--out-csv", report_opt.out_csv, "Canonical records CSV");
  report->add_flag("--stratify", report_opt.stratify,
                   "Split by pocket similarity threshold");
  report->add_option("--similarity-threshold", report_opt.similarity_threshold,
                     "Stratification threshold");
  report->add_option("--rmsd-threshold", report_opt.rmsd_threshold,
                     "Success threshold, Angstrom");
  report->add_option("--ma-window", report_opt.ma_window,
                     "Moving-average window over similarity-sorted records");
  report->add_option("--ma-out", report_opt.ma_out, "Moving-average CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*validate)
      return run_validate(validate_opt);
    if (*rmsd_cmd)
      return run_rmsd(rmsd_opt);
    if (*evaluate)
      return run_evaluate(eval_opt);
    if (*relax_cmd)
      return run_relax(relax_opt);
    if (*crossdock)
      return run_crossdock(cross_opt);
    if (*pocket_sim)
      return run_pocket_sim(pocket_opt);
    if (*curate)
      return run_curate(curate_opt);
    if (*report)
      return run_report(report_opt);
  } catch (const CLI::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEntryFailures;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEntryFailures;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEntryFailures;
  }
  return kExitUsage;
}
