//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef POSEKIT_METRICS_METRICS_HPP_
#define POSEKIT_METRICS_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "posekit/core/types.hpp"

namespace posekit {

struct EvaluationRecord {
  std::string entry_id;
  std::string target_id;
  std::string method_name;
  double rmsd = 0.0;
  bool pb_valid = false;
  std::optional<double> pocket_similarity;
  bool relaxed = false;
  std::string run_id;  // empty when single-run
};

enum class SuccessCriterion { RmsdOnly, RmsdAndValid };

// Percentage of records with rmsd strictly below 2.0 A (and pb_valid for the
// conjunctive criterion). Full precision; rounding is presentation-only.
double success_rate(const std::vector<EvaluationRecord> &records,
                    SuccessCriterion criterion, double rmsd_threshold = 2.0);

// Per-target success rates first, then their unweighted mean.
double target_level_success(const std::vector<EvaluationRecord> &records,
                            SuccessCriterion criterion, double rmsd_threshold = 2.0);

// Sample Pearson correlation; errors on length < 2 or constant input.
double pearson(const std::vector<double> &x, const std::vector<double> &y);

// Simple trailing mean; output length = n - window + 1.
std::vector<double> moving_average(const std::vector<double> &values, std::size_t window);

struct ReportConfig {
  bool stratify = false;
  double similarity_threshold = 0.70;
  double rmsd_threshold = 2.0;
};

struct Report {
  std::string records_csv;  // canonical per-record table, sorted
  std::string summary_json;
};

// CSV schema: entry_id,target_id,method,rmsd,pb_valid,pocket_similarity,
// relaxed,run_id
std::string records_to_csv(const std::vector<EvaluationRecord> &records);
std::vector<EvaluationRecord> records_from_csv(const std::string &csv);

// Deterministic aggregate report: per-method success rates (sample- and
// target-level, split by relaxation), Pearson of similarity vs rmsd, strata
// summaries when requested, and mean +/- std over run ids when present.
Report generate_report(const std::vector<EvaluationRecord> &records,
                       const ReportConfig &config = {});

}  // namespace posekit

#endif  // POSEKIT_METRICS_METRICS_HPP_
