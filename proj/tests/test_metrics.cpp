#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "clearbench/metrics.hpp"
#include "clearbench/reliability.hpp"
#include "clearbench/rng.hpp"
#include "testutil.hpp"

using namespace clearbench;
using testutil::valid_record;

namespace {

PricingTable simple_pricing(double in_per_1k, double out_per_1k) {
  PricingTable pricing;
  pricing.models["m"] = {in_per_1k, out_per_1k};
  pricing.agent_model_map["a"] = {{"m", 1.0}};
  return pricing;
}

std::vector<RunRecord> single_trial_records(int tasks, int successes) {
  std::vector<RunRecord> records;
  for (int i = 0; i < tasks; ++i) {
    records.push_back(valid_record("a", "t" + std::to_string(i), 0, i < successes));
  }
  return records;
}

}  // namespace

TEST_CASE("efficacy: 217 first-trial successes out of 300 tasks") {
  const auto records = single_trial_records(300, 217);
  CHECK(efficacy(records, true) == doctest::Approx(0.7233).epsilon(1e-3));
}

TEST_CASE("efficacy: degenerate all/none") {
  CHECK(efficacy(single_trial_records(12, 12), true) == 1.0);
  CHECK(efficacy(single_trial_records(4, 0), true) == 0.0);
}

TEST_CASE("efficacy: no records is an error") {
  CHECK_THROWS_AS(efficacy(std::vector<RunRecord>{}, true), Error);
}

TEST_CASE("efficacy with the first-trial flag ignores later trials") {
  std::vector<RunRecord> records = {valid_record("a", "t0", 0, false),
                                    valid_record("a", "t0", 1, true),
                                    valid_record("a", "t1", 0, true),
                                    valid_record("a", "t1", 1, false)};
  CHECK(efficacy(records, true) == 0.5);
  // without the flag a task counts only if every trial succeeded
  CHECK(efficacy(records, false) == 0.0);
  records.push_back(valid_record("a", "t2", 0, true));
  records.push_back(valid_record("a", "t2", 1, true));
  CHECK(efficacy(records, false) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("efficacy: missing trial 0 with the flag set is an error") {
  std::vector<RunRecord> records = {valid_record("a", "t0", 1, true)};
  CHECK_THROWS_AS(efficacy(records, true), Error);
}

TEST_CASE("cost_of_run prices tokens through the model map") {
  RunRecord r = valid_record("a", "t0");
  r.cost_usd.reset();
  r.input_tokens = 1000;
  r.output_tokens = 500;
  const PricingTable pricing = simple_pricing(0.01, 0.03);
  CHECK(cost_of_run(r, pricing) == 0.025);  // exact
}

TEST_CASE("cost_of_run: explicit cost overrides tokens") {
  RunRecord r = valid_record("a", "t0");
  r.cost_usd = 2.87;
  r.input_tokens = 999999;
  CHECK(cost_of_run(r, simple_pricing(100.0, 100.0)) == 2.87);
}

TEST_CASE("cost_of_run: zero tokens and zero price cost nothing") {
  RunRecord r = valid_record("a", "t0");
  r.cost_usd.reset();
  r.input_tokens = 0;
  r.output_tokens = 0;
  CHECK(cost_of_run(r, simple_pricing(0.01, 0.03)) == 0.0);

  r.input_tokens = 12345;
  r.output_tokens = 678;
  CHECK(cost_of_run(r, simple_pricing(0.0, 0.0)) == 0.0);
}

TEST_CASE("cost_of_run: mixed-model shares") {
  PricingTable pricing;
  pricing.models["planner"] = {0.03, 0.06};
  pricing.models["executor"] = {0.002, 0.004};
  pricing.agent_model_map["a"] = {{"planner", 0.15}, {"executor", 0.85}};
  RunRecord r = valid_record("a", "t0");
  r.cost_usd.reset();
  r.input_tokens = 10000;
  r.output_tokens = 2000;
  // 0.15*(10000*0.03 + 2000*0.06)/1000 + 0.85*(10000*0.002 + 2000*0.004)/1000
  const double expected = 0.15 * (300.0 + 120.0) / 1000.0 + 0.85 * (20.0 + 8.0) / 1000.0;
  CHECK(cost_of_run(r, pricing) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cost_of_run: no cost and no mapping names the agent") {
  RunRecord r = valid_record("ghost", "t0");
  r.cost_usd.reset();
  try {
    cost_of_run(r, simple_pricing(0.01, 0.03));
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("cna reference values") {
  CHECK(cna(0.723, 2.87) == doctest::Approx(25.2).epsilon(0.002));
  CHECK(std::fabs(cna(0.723, 2.87) - 25.2) < 0.05);
  CHECK(std::fabs(cna(0.703, 0.27) - 260.4) < 0.05);
  CHECK(cna(1.0, 1.0) == 100.0);
  CHECK_THROWS_AS(cna(0.5, 0.0), Error);
}

TEST_CASE("cna homogeneity: scaling cost by lambda divides cna by lambda") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double e = rng.next_unit();
    const double c = 0.01 + rng.next_unit() * 10.0;
    const double lambda = 0.1 + rng.next_unit() * 5.0;
    CHECK(cna(e, lambda * c) ==
          doctest::Approx(cna(e, c) / lambda).epsilon(1e-12));
  }
}

TEST_CASE("cps") {
  CHECK(*cps(10.0, 5) == 2.0);
  // mean cost 2.87 over 300 tasks with 217 successes
  CHECK(*cps(2.87 * 300.0, 217) == doctest::Approx(3.9677).epsilon(1e-3));
  CHECK(std::fabs(*cps(2.87 * 300.0, 217) - 3.97) < 0.01);
  CHECK_FALSE(cps(5.0, 0).has_value());
}

TEST_CASE("scr counts first-trial records within their SLA") {
  std::vector<TaskSpec> suite = testutil::small_suite(4);  // sla 10s each
  std::vector<RunRecord> records;
  for (int i = 0; i < 4; ++i) {
    RunRecord r = valid_record("a", "t" + std::to_string(i));
    r.latency_total_s = i == 3 ? 11.0 : 9.0;
    r.latency_exec_s = r.latency_total_s - r.latency_plan_s - r.latency_reflect_s;
    records.push_back(std::move(r));
  }
  CHECK(scr(records, index_suite(suite)) == 0.75);
}

TEST_CASE("scr: 23% of software-development tasks over a 30s SLA gives 0.77") {
  std::vector<TaskSpec> suite;
  std::vector<RunRecord> records;
  for (int i = 0; i < 100; ++i) {
    TaskSpec t;
    t.task_id = "sd" + std::to_string(i);
    t.domain = Domain::SoftwareDevelopment;
    t.subtype = "analysis";
    t.step_count = 8;
    t.sla_seconds = 30.0;
    suite.push_back(t);

    RunRecord r = valid_record("a", t.task_id);
    r.latency_total_s = i < 23 ? 50.0 : 10.0;
    r.latency_plan_s = r.latency_total_s * 0.2;
    r.latency_exec_s = r.latency_total_s * 0.6;
    r.latency_reflect_s = r.latency_total_s * 0.2;
    records.push_back(std::move(r));
  }
  CHECK(scr(records, index_suite(suite)) == doctest::Approx(0.77).epsilon(1e-12));
}

TEST_CASE("scr: zero latencies are always within SLA") {
  std::vector<RunRecord> records;
  for (int i = 0; i < 3; ++i) {
    RunRecord r = valid_record("a", "t" + std::to_string(i));
    r.latency_plan_s = r.latency_exec_s = r.latency_reflect_s = r.latency_total_s = 0.0;
    records.push_back(std::move(r));
  }
  CHECK(scr(records, index_suite(testutil::small_suite(3))) == 1.0);
}

TEST_CASE("pas pools violations over critical actions") {
  auto with_policy = [&](std::int64_t violations, std::int64_t actions) {
    RunRecord r = valid_record("a", "t0");
    r.policy_violations = violations;
    r.policy_critical_actions = actions;
    return r;
  };
  CHECK(pas(std::vector<RunRecord>{with_policy(0, 40)}) == 1.0);
  CHECK(pas(std::vector<RunRecord>{with_policy(7, 100)}) ==
        doctest::Approx(0.93).epsilon(1e-12));
  CHECK(pas(std::vector<RunRecord>{with_policy(100, 100)}) == 0.0);
  CHECK_THROWS_AS(pas(std::vector<RunRecord>{with_policy(0, 0)}), Error);
}

TEST_CASE("pas and scr are permutation-invariant") {
  Rng rng(5);
  std::vector<RunRecord> records;
  for (int i = 0; i < 50; ++i) {
    RunRecord r = valid_record("a", "t" + std::to_string(i));
    r.policy_critical_actions = 5 + static_cast<std::int64_t>(rng.next_below(10));
    r.policy_violations = static_cast<std::int64_t>(
        rng.next_below(static_cast<std::uint64_t>(r.policy_critical_actions)));
    r.latency_total_s = rng.next_unit() * 20.0;
    r.latency_plan_s = r.latency_total_s / 3;
    r.latency_exec_s = r.latency_total_s / 3;
    r.latency_reflect_s = r.latency_total_s - r.latency_plan_s - r.latency_exec_s;
    records.push_back(std::move(r));
  }
  const auto tasks = index_suite(testutil::small_suite(50));
  const double pas_baseline = pas(records);
  const double scr_baseline = scr(records, tasks);
  for (int round = 0; round < 5; ++round) {
    for (std::size_t i = records.size(); i > 1; --i) {
      std::swap(records[i - 1], records[rng.next_below(i)]);
    }
    CHECK(pas(records) == pas_baseline);
    CHECK(scr(records, tasks) == scr_baseline);
  }
}

TEST_CASE("injection resistance") {
  auto probe_record = [&](int i, bool attacked) {
    RunRecord r = valid_record("a", "t" + std::to_string(i));
    r.security_probe = SecurityProbe{"case" + std::to_string(i), attacked};
    return r;
  };
  std::vector<RunRecord> records;
  for (int i = 0; i < 500; ++i) records.push_back(probe_record(i, i < 40));
  CHECK(*injection_resistance(records) == doctest::Approx(0.92).epsilon(1e-12));

  for (auto& r : records) r.security_probe->attack_succeeded = false;
  CHECK(*injection_resistance(records) == 1.0);

  for (int i = 0; i < 500; ++i) {
    records[static_cast<std::size_t>(i)].security_probe->attack_succeeded = i < 90;
  }
  CHECK(*injection_resistance(records) == doctest::Approx(0.82).epsilon(1e-12));

  CHECK_FALSE(injection_resistance(std::vector<RunRecord>{valid_record("a", "t0")})
                  .has_value());
}

TEST_CASE("first-trial efficacy equals pass@1 under prefix semantics") {
  Rng rng(31);
  for (int round = 0; round < 20; ++round) {
    std::vector<RunRecord> records;
    const int tasks = 5 + static_cast<int>(rng.next_below(20));
    for (int t = 0; t < tasks; ++t) {
      const int trials = 1 + static_cast<int>(rng.next_below(6));
      for (int k = 0; k < trials; ++k) {
        records.push_back(valid_record("a", "t" + std::to_string(t), k,
                                       rng.next_bernoulli(0.6)));
      }
    }
    const TrialMatrix matrix = build_trial_matrix(records);
    CHECK(efficacy(records, true) ==
          pass_at_k(matrix, 1, PassKSemantics::Prefix));
  }
}

TEST_CASE("first-trial efficacy equals pass@1 on single-trial datasets, any semantics") {
  const auto records = single_trial_records(37, 22);
  const TrialMatrix matrix = build_trial_matrix(records);
  const double eff = efficacy(records, true);
  for (PassKSemantics s : {PassKSemantics::Window, PassKSemantics::Prefix,
                           PassKSemantics::Combinatorial}) {
    CHECK(pass_at_k(matrix, 1, s) == eff);
  }
}

TEST_CASE("compute_dimension_scores aggregates trial-0 rows and pools policy counts") {
  std::vector<RunRecord> records;
  for (int t = 0; t < 4; ++t) {
    RunRecord first = valid_record("a", "t" + std::to_string(t), 0, t < 3);
    first.cost_usd = 2.0;
    records.push_back(first);
    RunRecord retry = valid_record("a", "t" + std::to_string(t), 1, true);
    retry.cost_usd = 99.0;  // must not leak into mean cost
    retry.policy_critical_actions = 0;
    retry.policy_violations = 0;
    records.push_back(retry);
  }
  const auto scores = compute_dimension_scores(
      "a", records, index_suite(testutil::small_suite(4)), PricingTable{});
  CHECK(scores.efficacy == 0.75);
  CHECK(scores.mean_cost_usd == 2.0);
  CHECK(scores.total_cost_usd == 8.0);
  CHECK(*scores.cps_usd == doctest::Approx(8.0 / 3.0));
  CHECK(*scores.pas == doctest::Approx(0.9));  // 4 violations / 40 actions
  CHECK(scores.mean_latency_s == doctest::Approx(3.5));
}
