#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "clearbench/analysis.hpp"
#include "clearbench/rng.hpp"
#include "clearbench/simgen.hpp"
#include "testutil.hpp"

using namespace clearbench;

namespace {

// The six documented reference rows: eff, cost, latency, pas, pass@8.
std::vector<AgentSummary> reference_summaries() {
  auto row = [](const std::string& id, double eff, double cost, double lat,
                double pas_value, double r8) {
    AgentSummary s;
    s.agent_id = id;
    s.efficacy = eff;
    s.mean_cost_usd = cost;
    s.total_cost_usd = cost * 1000;
    s.mean_latency_s = lat;
    s.pas = pas_value;
    s.pass_at[8] = r8;
    s.scr = 0.9;
    return s;
  };
  return {
      row("ReAct-GPT4", 0.723, 2.87, 8.4, 0.89, 0.583),
      row("ReAct-GPT-o3", 0.687, 0.31, 4.2, 0.85, 0.521),
      row("Reflexion", 0.741, 5.12, 12.7, 0.91, 0.612),
      row("Plan-Execute", 0.719, 1.24, 6.8, 0.88, 0.645),
      row("ToolFormer", 0.695, 1.89, 5.9, 0.82, 0.557),
      row("Domain-Tuned", 0.703, 0.27, 3.8, 0.93, 0.728),
  };
}

std::vector<std::string> sorted_frontier(const ParetoResult& result) {
  std::vector<std::string> ids = result.frontier();
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

TEST_CASE("min-max normalization maps extremes to 1 and 0") {
  const std::vector<std::pair<std::string, double>> costs = {{"cheap", 0.27},
                                                             {"pricey", 5.12}};
  const auto normalized = min_max_normalize(costs, Direction::LowerBetter);
  CHECK(normalized[0].second == 1.0);
  CHECK(normalized[1].second == 0.0);
}

TEST_CASE("min-max normalization: degenerate span maps everyone to 1") {
  const std::vector<std::pair<std::string, double>> same = {
      {"a", 3.0}, {"b", 3.0}, {"c", 3.0}};
  for (Direction dir : {Direction::LowerBetter, Direction::HigherBetter}) {
    for (const auto& [id, value] : min_max_normalize(same, dir)) {
      CHECK(value == 1.0);
    }
  }
}

TEST_CASE("min-max normalization: midpoint symmetry") {
  const std::vector<std::pair<std::string, double>> latencies = {
      {"fast", 3.8}, {"mid", 8.25}, {"slow", 12.7}};
  const auto normalized = min_max_normalize(latencies, Direction::LowerBetter);
  CHECK(normalized[0].second == 1.0);
  CHECK(normalized[1].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normalized[2].second == 0.0);
}

TEST_CASE("composite reproduces the hand-computed reference values") {
  const auto summaries = reference_summaries();
  const auto normalized = normalize_cohort(summaries);
  const WeightProfile equal{0.2, 0.2, 0.2, 0.2, 0.2};

  // Domain-Tuned is cheapest and fastest: 0.2*(1 + 1 + 0.703 + 0.93 + 0.728)
  CHECK(composite(normalized[5], equal) == doctest::Approx(0.8722).epsilon(1e-6));
  CHECK(std::fabs(composite(normalized[5], equal) - 0.872) < 0.001);
  // Reflexion is costliest and slowest: 0.2*(0.741 + 0.91 + 0.612)
  CHECK(composite(normalized[2], equal) == doctest::Approx(0.4526).epsilon(1e-6));
  CHECK(std::fabs(composite(normalized[2], equal) - 0.453) < 0.001);
}

TEST_CASE("composite of all-ones scores is 1 under any valid weights") {
  NormalizedScores ones{"x", 1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(composite(ones, WeightProfile{0.2, 0.2, 0.2, 0.2, 0.2}) == 1.0);
  CHECK(composite(ones, WeightProfile{0.1, 0.1, 0.1, 0.3, 0.4}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(composite(ones, WeightProfile{0.5, 0.5, 0.5, 0.5, 0.5}), Error);
}

TEST_CASE("financial services weights reorder the ranking deterministically") {
  // hand-recomputed: equal ranking puts ReAct-GPT-o3 second, the
  // reliability/assurance-heavy profile promotes Plan-Execute above it
  const auto summaries = reference_summaries();
  const auto normalized = normalize_cohort(summaries);
  const WeightProfile equal{0.2, 0.2, 0.2, 0.2, 0.2};
  const WeightProfile fin{0.1, 0.1, 0.1, 0.3, 0.4};

  const std::map<std::string, double> expected_fin = {
      {"ReAct-GPT4", 0.667206},  {"ReAct-GPT-o3", 0.726781},
      {"Reflexion", 0.591900},   {"Plan-Execute", 0.740192},
      {"ToolFormer", 0.681302},  {"Domain-Tuned", 0.840500},
  };
  auto ranking = [&](const WeightProfile& w) {
    std::vector<std::pair<double, std::string>> scored;
    for (const NormalizedScores& n : normalized) {
      scored.emplace_back(composite(n, w), n.agent_id);
    }
    std::sort(scored.rbegin(), scored.rend());
    std::vector<std::string> ids;
    for (const auto& [score, id] : scored) ids.push_back(id);
    return ids;
  };
  for (const NormalizedScores& n : normalized) {
    CHECK(composite(n, fin) ==
          doctest::Approx(expected_fin.at(n.agent_id)).epsilon(1e-5));
  }
  CHECK(ranking(equal) == std::vector<std::string>{
                              "Domain-Tuned", "ReAct-GPT-o3", "Plan-Execute",
                              "ToolFormer", "ReAct-GPT4", "Reflexion"});
  CHECK(ranking(fin) == std::vector<std::string>{
                            "Domain-Tuned", "Plan-Execute", "ReAct-GPT-o3",
                            "ToolFormer", "ReAct-GPT4", "Reflexion"});
}

TEST_CASE("composite is invariant under uniform cost rescaling") {
  auto summaries = reference_summaries();
  const auto base = normalize_cohort(summaries);
  const WeightProfile equal{0.2, 0.2, 0.2, 0.2, 0.2};
  std::vector<double> before;
  for (const NormalizedScores& n : base) before.push_back(composite(n, equal));

  for (double lambda : {0.5, 3.0, 17.25}) {
    auto scaled = reference_summaries();
    for (AgentSummary& s : scaled) s.mean_cost_usd *= lambda;
    const auto normalized = normalize_cohort(scaled);
    for (std::size_t i = 0; i < normalized.size(); ++i) {
      CHECK(composite(normalized[i], equal) ==
            doctest::Approx(before[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("cost-only weights rank agents by c_norm descending") {
  const auto summaries = reference_summaries();
  const auto normalized = normalize_cohort(summaries);
  const WeightProfile cost_only{1.0, 0.0, 0.0, 0.0, 0.0};
  std::vector<std::pair<double, std::string>> by_composite, by_cnorm;
  for (const NormalizedScores& n : normalized) {
    by_composite.emplace_back(composite(n, cost_only), n.agent_id);
    by_cnorm.emplace_back(n.c_norm, n.agent_id);
  }
  std::sort(by_composite.rbegin(), by_composite.rend());
  std::sort(by_cnorm.rbegin(), by_cnorm.rend());
  CHECK(by_composite == by_cnorm);
}

TEST_CASE("pareto frontier on the reference rows") {
  const auto summaries = reference_summaries();
  const ParetoResult result =
      pareto_frontier(summaries, default_pareto_dimensions());
  CHECK(sorted_frontier(result) ==
        std::vector<std::string>{"Domain-Tuned", "Plan-Execute", "ReAct-GPT4",
                                 "Reflexion"});
  for (const ParetoEntry& entry : result.entries) {
    if (entry.agent_id == "ToolFormer" || entry.agent_id == "ReAct-GPT-o3") {
      CHECK_FALSE(entry.on_frontier);
      CHECK(std::count(entry.dominated_by.begin(), entry.dominated_by.end(),
                       "Domain-Tuned") == 1);
    }
  }
}

TEST_CASE("pareto: single agent and strict dominance") {
  auto summaries = reference_summaries();
  summaries.resize(1);
  const ParetoResult single =
      pareto_frontier(summaries, default_pareto_dimensions());
  CHECK(single.frontier() == std::vector<std::string>{"ReAct-GPT4"});

  auto two = reference_summaries();
  two.resize(2);
  // make the second strictly worse everywhere
  two[1].efficacy = 0.1;
  two[1].mean_cost_usd = 9.0;
  two[1].mean_latency_s = 99.0;
  two[1].pas = 0.1;
  two[1].pass_at[8] = 0.1;
  const ParetoResult dominated = pareto_frontier(two, default_pareto_dimensions());
  CHECK(dominated.frontier() == std::vector<std::string>{"ReAct-GPT4"});
}

TEST_CASE("pareto: unknown dimension name is an error") {
  const std::vector<std::string> names = {"cost", "swagger"};
  CHECK_THROWS_AS(resolve_pareto_dimensions(names), Error);
}

TEST_CASE("frontier is invariant under monotone transforms of one dimension") {
  const auto summaries = reference_summaries();
  const auto baseline =
      sorted_frontier(pareto_frontier(summaries, default_pareto_dimensions()));

  auto transformed = reference_summaries();
  for (AgentSummary& s : transformed) s.mean_cost_usd = std::exp(s.mean_cost_usd);
  CHECK(sorted_frontier(pareto_frontier(transformed, default_pareto_dimensions())) ==
        baseline);

  transformed = reference_summaries();
  for (AgentSummary& s : transformed) s.efficacy = 2.0 * s.efficacy + 1.0;
  CHECK(sorted_frontier(pareto_frontier(transformed, default_pareto_dimensions())) ==
        baseline);
}

TEST_CASE("removing a dominated agent leaves the frontier unchanged") {
  const auto summaries = reference_summaries();
  const auto baseline =
      sorted_frontier(pareto_frontier(summaries, default_pareto_dimensions()));

  std::vector<AgentSummary> reduced;
  for (const AgentSummary& s : summaries) {
    if (s.agent_id != "ToolFormer") reduced.push_back(s);
  }
  CHECK(sorted_frontier(pareto_frontier(reduced, default_pareto_dimensions())) ==
        baseline);
}

TEST_CASE("domain breakdown: weighted overall equals the task-count weighted mean") {
  // per-domain efficacy {78.3, 69.0, 71.0, 73.3, 65.0, 61.3} with weights
  // {60, 50, 50, 60, 40, 40} scaled x50 for exact per-domain fractions;
  // the weighted mean is 70.493%, not any of the per-domain values
  const std::array<std::size_t, 6> counts = {3000, 2500, 2500, 3000, 2000, 2000};
  const std::array<std::size_t, 6> successes = {2349, 1725, 1775, 2199, 1300, 1226};

  std::vector<TaskSpec> suite;
  std::vector<RunRecord> records;
  std::size_t next = 0;
  for (std::size_t d = 0; d < 6; ++d) {
    for (std::size_t i = 0; i < counts[d]; ++i) {
      TaskSpec t;
      t.task_id = "t" + std::to_string(next++);
      t.domain = all_domains()[d];
      t.step_count = 7;
      t.sla_seconds = 10.0;
      suite.push_back(t);
      records.push_back(testutil::valid_record("a", t.task_id, 0, i < successes[d]));
    }
  }
  const BreakdownResult result = domain_breakdown(records, suite);
  REQUIRE(result.agents.size() == 1);
  const AgentDomainBreakdown& agent = result.agents[0];
  CHECK(agent.by_domain.at(Domain::CustomerSupport).efficacy ==
        doctest::Approx(0.783).epsilon(1e-12));
  CHECK(agent.by_domain.at(Domain::MultiStakeholder).efficacy ==
        doctest::Approx(0.613).epsilon(1e-12));
  CHECK(agent.overall.efficacy == doctest::Approx(10574.0 / 15000.0).epsilon(1e-12));
  CHECK(agent.overall.task_count == 15000);

  double weighted = 0.0;
  for (const auto& [domain, stats] : agent.by_domain) {
    weighted += stats.efficacy * static_cast<double>(stats.task_count);
  }
  CHECK(agent.overall.efficacy ==
        doctest::Approx(weighted / 15000.0).epsilon(1e-12));
}

TEST_CASE("domain breakdown of the reference domain fixture") {
  const Dataset dataset = domain_reference_fixture();
  const BreakdownResult result = domain_breakdown(dataset.records, dataset.suite);
  REQUIRE(result.agents.size() == 3);

  const AgentDomainBreakdown* domain_tuned = nullptr;
  for (const AgentDomainBreakdown& a : result.agents) {
    if (a.agent_id == "Domain-Tuned") domain_tuned = &a;
  }
  REQUIRE(domain_tuned != nullptr);
  const DomainStats& cs = domain_tuned->by_domain.at(Domain::CustomerSupport);
  CHECK(std::fabs(cs.efficacy - 0.817) < 5e-4);
  CHECK(*cs.pas == doctest::Approx(0.95).epsilon(1e-12));
  const DomainStats& compliance = domain_tuned->by_domain.at(Domain::Compliance);
  CHECK(compliance.efficacy == doctest::Approx(0.725).epsilon(1e-12));
}

TEST_CASE("domain breakdown with a single domain equals the overall row") {
  std::vector<TaskSpec> suite;
  std::vector<RunRecord> records;
  for (int i = 0; i < 10; ++i) {
    TaskSpec t;
    t.task_id = "t" + std::to_string(i);
    t.domain = Domain::Compliance;
    t.step_count = 6;
    t.sla_seconds = 20.0;
    suite.push_back(t);
    records.push_back(testutil::valid_record("a", t.task_id, 0, i < 7));
  }
  const BreakdownResult result = domain_breakdown(records, suite);
  const AgentDomainBreakdown& agent = result.agents[0];
  CHECK(agent.by_domain.size() == 1);
  CHECK(agent.by_domain.at(Domain::Compliance).efficacy == agent.overall.efficacy);
  CHECK(*agent.by_domain.at(Domain::Compliance).pas == *agent.overall.pas);
  // five domains have no tasks: warned, not failed
  CHECK(result.warnings.size() == 5);
}
