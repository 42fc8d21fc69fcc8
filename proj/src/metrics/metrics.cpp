//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "posekit/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace posekit {

namespace {

bool is_success(const EvaluationRecord &r, SuccessCriterion criterion, double threshold) {
  const bool rmsd_ok = r.rmsd < threshold;  // strict, 2.0 counts as failure
  return criterion == SuccessCriterion::RmsdOnly ? rmsd_ok : (rmsd_ok && r.pb_valid);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double parse_double(const std::string &s, const std::string &what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ParseError("records CSV: bad " + what + " value '" + s + "'");
  }
}

bool parse_bool(const std::string &s, const std::string &what) {
  if (s == "true" || s == "1")
    return true;
  if (s == "false" || s == "0")
    return false;
  throw ParseError("records CSV: bad " + what + " value '" + s + "'");
}

}  // namespace

double success_rate(const std::vector<EvaluationRecord> &records,
                    SuccessCriterion criterion, double rmsd_threshold) {
  if (records.empty())
    throw Error("success_rate: no records");
  std::size_t hits = 0;
  for (const auto &r : records)
    hits += is_success(r, criterion, rmsd_threshold);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

double target_level_success(const std::vector<EvaluationRecord> &records,
                            SuccessCriterion criterion, double rmsd_threshold) {
  if (records.empty())
    throw Error("target_level_success: no records");
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_target;  // hits, total
  for (const auto &r : records) {
    auto &[hits, total] = per_target[r.target_id];
    hits += is_success(r, criterion, rmsd_threshold);
    ++total;
  }
  double sum = 0.0;
  for (const auto &[target, counts] : per_target)
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  return 100.0 * sum / static_cast<double>(per_target.size());
}

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size())
    throw Error("pearson: length mismatch");
  if (x.size() < 2)
    throw Error("pearson: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0)
    throw Error("pearson: correlation undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> moving_average(const std::vector<double> &values,
                                   std::size_t window) {
  if (window < 1)
    throw Error("moving_average: window must be >= 1");
  if (window > values.size())
    throw Error("moving_average: window exceeds input length");
  std::vector<double> out;
  out.reserve(values.size() - window + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i + 1 >= window) {
      out.push_back(sum / static_cast<double>(window));
      sum -= values[i + 1 - window];
    }
  }
  return out;
}

std::string records_to_csv(const std::vector<EvaluationRecord> &records) {
  std::vector<EvaluationRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EvaluationRecord &a, const EvaluationRecord &b) {
                     if (a.method_name != b.method_name)
                       return a.method_name < b.method_name;
                     if (a.entry_id != b.entry_id)
                       return a.entry_id < b.entry_id;
                     return a.run_id < b.run_id;
                   });
  std::ostringstream out;
  out << "entry_id,target_id,method,rmsd,pb_valid,pocket_similarity,relaxed,run_id\n";
  for (const auto &r : sorted) {
    out << r.entry_id << ',' << r.target_id << ',' << r.method_name << ','
        << format_double(r.rmsd) << ',' << (r.pb_valid ? "true" : "false") << ','
        << (r.pocket_similarity ? format_double(*r.pocket_similarity) : "") << ','
        << (r.relaxed ? "true" : "false") << ',' << r.run_id << '\n';
  }
  return out.str();
}

std::vector<EvaluationRecord> records_from_csv(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("records CSV: empty input");

  std::vector<EvaluationRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ','))
      f.push_back(field);
    while (f.size() < 8)
      f.push_back("");
    if (f.size() != 8)
      throw ParseError("records CSV: expected 8 fields", lineno);
    EvaluationRecord r;
    r.entry_id = f[0];
    r.target_id = f[1];
    r.method_name = f[2];
    r.rmsd = parse_double(f[3], "rmsd");
    r.pb_valid = parse_bool(f[4], "pb_valid");
    if (!f[5].empty())
      r.pocket_similarity = parse_double(f[5], "pocket_similarity");
    r.relaxed = parse_bool(f[6], "relaxed");
    r.run_id = f[7];
    records.push_back(std::move(r));
  }
  return records;
}

Report generate_report(const std::vector<EvaluationRecord> &records,
                       const ReportConfig &config) {
  if (records.empty())
    throw Error("generate_report: no records");
  if (config.stratify)
    for (const auto &r : records)
      if (!r.pocket_similarity)
        throw Error("generate_report: record '" + r.entry_id +
                    "' lacks pocket_similarity, required for stratification");

  Report report;
  report.records_csv = records_to_csv(records);

  std::map<std::string, std::vector<EvaluationRecord>> by_method;
  for (const auto &r : records)
    by_method[r.method_name].push_back(r);
  // Aggregation order must not depend on input order (floating-point sums).
  for (auto &[method, recs] : by_method)
    std::stable_sort(recs.begin(), recs.end(),
                     [](const EvaluationRecord &a, const EvaluationRecord &b) {
                       if (a.entry_id != b.entry_id)
                         return a.entry_id < b.entry_id;
                       return a.run_id < b.run_id;
                     });

  using nlohmann::ordered_json;
  ordered_json doc;
  doc["record_count"] = records.size();
  doc["rmsd_threshold"] = config.rmsd_threshold;
  ordered_json methods = ordered_json::object();

  auto rates = [&](const std::vector<EvaluationRecord> &recs) {
    ordered_json j;
    if (recs.empty())
      return ordered_json(nullptr);
    j["count"] = recs.size();
    j["success_rate_rmsd"] =
        success_rate(recs, SuccessCriterion::RmsdOnly, config.rmsd_threshold);
    j["success_rate_rmsd_pb_valid"] =
        success_rate(recs, SuccessCriterion::RmsdAndValid, config.rmsd_threshold);
    j["target_level_success_rate_rmsd"] =
        target_level_success(recs, SuccessCriterion::RmsdOnly, config.rmsd_threshold);
    j["target_level_success_rate_rmsd_pb_valid"] =
        target_level_success(recs, SuccessCriterion::RmsdAndValid, config.rmsd_threshold);
    double mean_rmsd = 0;
    for (const auto &r : recs)
      mean_rmsd += r.rmsd;
    j["mean_rmsd"] = mean_rmsd / static_cast<double>(recs.size());
    return j;
  };

  for (const auto &[method, recs] : by_method) {
    ordered_json m;
    m["overall"] = rates(recs);

    std::vector<EvaluationRecord> relaxed, unrelaxed;
    for (const auto &r : recs)
      (r.relaxed ? relaxed : unrelaxed).push_back(r);
    m["relaxed"] = rates(relaxed);
    m["unrelaxed"] = rates(unrelaxed);

    // Pearson of pocket similarity vs rmsd, when the data supports it.
    {
      std::vector<double> sim, rmsd;
      for (const auto &r : recs) {
        if (r.pocket_similarity) {
          sim.push_back(*r.pocket_similarity);
          rmsd.push_back(r.rmsd);
        }
      }
      try {
        m["pearson_similarity_rmsd"] = pearson(sim, rmsd);
      } catch (const Error &) {
        m["pearson_similarity_rmsd"] = nullptr;
      }
    }

    if (config.stratify) {
      std::vector<EvaluationRecord> similar, dissimilar;
      for (const auto &r : recs)
        (*r.pocket_similarity >= config.similarity_threshold ? similar : dissimilar)
            .push_back(r);
      ordered_json strata;
      strata["similarity_threshold"] = config.similarity_threshold;
      strata["similar"] = rates(similar);
      strata["dissimilar"] = rates(dissimilar);
      m["strata"] = strata;
    }

    // Mean +/- sample std of the success rates over runs, when present.
    std::set<std::string> run_ids;
    for (const auto &r : recs)
      run_ids.insert(r.run_id);
    if (run_ids.size() > 1) {
      auto run_stats = [&](SuccessCriterion crit) {
        std::vector<double> per_run;
        for (const auto &run : run_ids) {
          std::vector<EvaluationRecord> sub;
          for (const auto &r : recs)
            if (r.run_id == run)
              sub.push_back(r);
          per_run.push_back(success_rate(sub, crit, config.rmsd_threshold));
        }
        double mean = 0;
        for (double v : per_run)
          mean += v;
        mean /= static_cast<double>(per_run.size());
        double ss = 0;
        for (double v : per_run)
          ss += (v - mean) * (v - mean);
        const double stdev = std::sqrt(ss / static_cast<double>(per_run.size() - 1));
        ordered_json j;
        j["mean"] = mean;
        j["std"] = stdev;
        j["runs"] = per_run.size();
        return j;
      };
      ordered_json runs;
      runs["success_rate_rmsd"] = run_stats(SuccessCriterion::RmsdOnly);
      runs["success_rate_rmsd_pb_valid"] = run_stats(SuccessCriterion::RmsdAndValid);
      m["runs"] = runs;
    }

    methods[method] = m;
  }
  doc["methods"] = methods;
  report.summary_json = doc.dump(2) + "\n";
  return report;
}

}  // namespace posekit
