//
// Project PoseKit - Copyright 2026 The PoseKit Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "posekit/metrics/metrics.hpp"

using namespace posekit;

namespace {

EvaluationRecord record(const std::string &entry, const std::string &target,
                        double rmsd, bool valid, const std::string &method = "m") {
  EvaluationRecord r;
  r.entry_id = entry;
  r.target_id = target;
  r.method_name = method;
  r.rmsd = rmsd;
  r.pb_valid = valid;
  return r;
}

}  // namespace

TEST_CASE("success_rate: two of three under 2 A") {
  const std::vector<EvaluationRecord> records{record("a", "t", 1.2, true),
                                              record("b", "t", 2.5, true),
                                              record("c", "t", 1.8, true)};
  CHECK(success_rate(records, SuccessCriterion::RmsdOnly) ==
        doctest::Approx(200.0 / 3).epsilon(1e-12));
}

TEST_CASE("success_rate: rmsd exactly 2.0 counts as failure") {
  const std::vector<EvaluationRecord> records{record("a", "t", 2.0, true)};
  CHECK(success_rate(records, SuccessCriterion::RmsdOnly) == 0.0);
  const std::vector<EvaluationRecord> under{record("a", "t", 1.9999999, true)};
  CHECK(success_rate(under, SuccessCriterion::RmsdOnly) == 100.0);
}

TEST_CASE("success_rate: conjunction with validity") {
  const std::vector<EvaluationRecord> records{record("a", "t", 1.2, false),
                                              record("b", "t", 2.5, true),
                                              record("c", "t", 1.8, true)};
  CHECK(success_rate(records, SuccessCriterion::RmsdAndValid) ==
        doctest::Approx(100.0 / 3).epsilon(1e-12));
}

TEST_CASE("success_rate: empty input errors") {
  CHECK_THROWS_AS(success_rate({}, SuccessCriterion::RmsdOnly), Error);
}

TEST_CASE("target_level_success: unweighted mean over targets") {
  const std::vector<EvaluationRecord> records{record("a1", "A", 1.0, true),
                                              record("a2", "A", 3.0, true),
                                              record("b1", "B", 1.0, true)};
  CHECK(target_level_success(records, SuccessCriterion::RmsdOnly) ==
        doctest::Approx(75.0));
  CHECK(success_rate(records, SuccessCriterion::RmsdOnly) ==
        doctest::Approx(200.0 / 3));
}

TEST_CASE("target_level_success: degenerate cases") {
  // One target only: equals the sample-level rate.
  const std::vector<EvaluationRecord> one{record("a", "T", 1.0, true),
                                          record("b", "T", 3.0, true)};
  CHECK(target_level_success(one, SuccessCriterion::RmsdOnly) ==
        success_rate(one, SuccessCriterion::RmsdOnly));

  // Equal per-target rates: group sizes don't matter.
  std::vector<EvaluationRecord> equal;
  for (int i = 0; i < 6; ++i)
    equal.push_back(record("a" + std::to_string(i), "A", i % 2 ? 1.0 : 3.0, true));
  equal.push_back(record("b1", "B", 1.0, true));
  equal.push_back(record("b2", "B", 3.0, true));
  CHECK(target_level_success(equal, SuccessCriterion::RmsdOnly) ==
        doctest::Approx(50.0));

  // Duplicating one target's records leaves the result unchanged.
  std::vector<EvaluationRecord> doubled = equal;
  for (const auto &r : equal)
    if (r.target_id == "B")
      doubled.push_back(r);
  CHECK(target_level_success(doubled, SuccessCriterion::RmsdOnly) ==
        doctest::Approx(target_level_success(equal, SuccessCriterion::RmsdOnly)));
}

TEST_CASE("pearson: perfect linear relations") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x)
    y.push_back(2 * v + 1);
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-14));
  for (auto &v : y)
    v = -v;
  CHECK(pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("pearson: matches a long-double reference") {
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(u(rng));
    y.push_back(0.3 * x.back() + u(rng));
  }
  long double mx = 0, my = 0;
  for (int i = 0; i < 20; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= 20;
  my /= 20;
  long double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 20; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double expected = static_cast<double>(sxy / sqrtl(sxx * syy));
  CHECK(std::abs(pearson(x, y) - expected) < 1e-12);
}

TEST_CASE("pearson: affine invariance and sign flip") {
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x, y;
  for (int i = 0; i < 15; ++i) {
    x.push_back(u(rng));
    y.push_back(u(rng));
  }
  const double base = pearson(x, y);
  std::vector<double> x2;
  for (double v : x)
    x2.push_back(3.5 * v + 7.0);
  CHECK(pearson(x2, y) == doctest::Approx(base).epsilon(1e-12));
  for (auto &v : x2)
    v = -v;
  CHECK(pearson(x2, y) == doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("pearson: errors") {
  CHECK_THROWS_AS(pearson({1.0}, {2.0}), Error);
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), Error);
}

TEST_CASE("moving_average: worked examples") {
  CHECK(moving_average({1, 2, 3, 4}, 3) == std::vector<double>{2.0, 3.0});
  CHECK(moving_average({5, 7, 9}, 1) == std::vector<double>{5, 7, 9});
  const auto whole = moving_average({1, 2, 3, 4}, 4);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0] == doctest::Approx(2.5));
  CHECK_THROWS_AS(moving_average({1, 2}, 3), Error);
  CHECK_THROWS_AS(moving_average({1, 2}, 0), Error);
}

TEST_CASE("moving_average: bounded by input extrema") {
  std::mt19937 rng(111);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<double> values;
  for (int i = 0; i < 200; ++i)
    values.push_back(u(rng));
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  for (double v : moving_average(values, 17)) {
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
}

TEST_CASE("records CSV: round trip") {
  std::vector<EvaluationRecord> records{record("e1", "T1", 1.25, true, "alpha"),
                                        record("e2", "T1", 3.5, false, "alpha"),
                                        record("e3", "T2", 0.75, true, "beta")};
  records[0].pocket_similarity = 0.83;
  records[2].relaxed = true;
  records[2].run_id = "run1";

  const std::string csv = records_to_csv(records);
  const auto back = records_from_csv(csv);
  REQUIRE(back.size() == 3);
  CHECK(back[0].entry_id == "e1");
  CHECK(back[0].pocket_similarity.has_value());
  CHECK(*back[0].pocket_similarity == doctest::Approx(0.83));
  CHECK_FALSE(back[1].pocket_similarity.has_value());
  CHECK(back[2].relaxed);
  CHECK(back[2].run_id == "run1");

  CHECK_THROWS_AS(records_from_csv(""), ParseError);
  CHECK_THROWS_AS(records_from_csv("header\nx,y,z,notanumber,true,,false,\n"),
                  ParseError);
}

TEST_CASE("generate_report: deterministic under shuffling") {
  std::mt19937 rng(222);
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 30; ++i) {
    EvaluationRecord r = record("e" + std::to_string(i), "T" + std::to_string(i % 5),
                                0.5 + 0.2 * i, i % 3 != 0, i % 2 ? "alpha" : "beta");
    r.pocket_similarity = 0.5 + 0.015 * i;
    r.relaxed = i % 4 == 0;
    records.push_back(r);
  }
  ReportConfig config;
  config.stratify = true;
  const Report a = generate_report(records, config);
  std::shuffle(records.begin(), records.end(), rng);
  const Report b = generate_report(records, config);
  CHECK(a.records_csv == b.records_csv);
  CHECK(a.summary_json == b.summary_json);
}

TEST_CASE("generate_report: stratification requires similarities") {
  std::vector<EvaluationRecord> records{record("a", "t", 1.0, true)};
  ReportConfig config;
  config.stratify = true;
  try {
    generate_report(records, config);
    FAIL("expected error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("pocket_similarity") != std::string::npos);
  }
}

TEST_CASE("generate_report: summary fields and the conjunction inequality") {
  std::vector<EvaluationRecord> records;
  records.push_back(record("a", "T1", 1.2, true));
  records.push_back(record("b", "T1", 1.5, false));
  records.push_back(record("c", "T2", 2.6, true));
  const Report rep = generate_report(records, {});
  const auto doc = nlohmann::json::parse(rep.summary_json);
  CHECK(doc["record_count"] == 3);
  const auto &m = doc["methods"]["m"]["overall"];
  CHECK(m["success_rate_rmsd"].get<double>() == doctest::Approx(200.0 / 3));
  CHECK(m["success_rate_rmsd_pb_valid"].get<double>() == doctest::Approx(100.0 / 3));
  CHECK(m["success_rate_rmsd_pb_valid"].get<double>() <=
        m["success_rate_rmsd"].get<double>());
}

TEST_CASE("conjunctive success never beats rmsd-only on random records") {
  std::mt19937 rng(333);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvaluationRecord> records;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i)
      records.push_back(record("e" + std::to_string(i), "t" + std::to_string(i % 3),
                               u(rng), rng() % 2 == 0));
    CHECK(success_rate(records, SuccessCriterion::RmsdAndValid) <=
          success_rate(records, SuccessCriterion::RmsdOnly) + 1e-12);
  }
}

TEST_CASE("generate_report: multi-run mean and sample std") {
  std::vector<EvaluationRecord> records;
  EvaluationRecord r1 = record("a", "T", 1.0, true);
  r1.run_id = "run1";
  EvaluationRecord r2 = record("b", "T", 3.0, true);
  r2.run_id = "run1";
  EvaluationRecord r3 = record("a", "T", 1.5, true);
  r3.run_id = "run2";
  EvaluationRecord r4 = record("b", "T", 1.9, true);
  r4.run_id = "run2";
  records = {r1, r2, r3, r4};

  const Report rep = generate_report(records, {});
  const auto doc = nlohmann::json::parse(rep.summary_json);
  const auto &runs = doc["methods"]["m"]["runs"]["success_rate_rmsd"];
  CHECK(runs["mean"].get<double>() == doctest::Approx(75.0));
  // Sample std over {50, 100}.
  CHECK(runs["std"].get<double>() == doctest::Approx(35.35533905932738).epsilon(1e-12));
  CHECK(runs["runs"] == 2);
}
