#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "clearbench/pipeline.hpp"
#include "clearbench/report.hpp"
#include "clearbench/simgen.hpp"
#include "testutil.hpp"

using namespace clearbench;

namespace {

const AgentSummary& by_id(const std::vector<AgentSummary>& summaries,
                          const std::string& id) {
  for (const AgentSummary& s : summaries) {
    if (s.agent_id == id) return s;
  }
  throw std::runtime_error("missing agent " + id);
}

}  // namespace

TEST_CASE("summaries of the reference fixture reproduce every documented cell") {
  EvaluateOptions options;
  options.mode = ExecMode::Serial;
  const Dataset dataset = reference_fixture();
  const std::vector<AgentSummary> summaries = summarize_agents(dataset, options);
  REQUIRE(summaries.size() == 6);
  // rows keep first-appearance order
  CHECK(summaries[0].agent_id == "ReAct-GPT4");
  CHECK(summaries[5].agent_id == "Domain-Tuned");

  struct Expected {
    const char* id;
    double eff, cost, cna, lat, pas, r8;
  };
  const std::vector<Expected> expected = {
      {"ReAct-GPT4", 0.723, 2.87, 25.2, 8.4, 0.89, 0.583},
      {"ReAct-GPT-o3", 0.687, 0.31, 221.6, 4.2, 0.85, 0.521},
      {"Reflexion", 0.741, 5.12, 14.5, 12.7, 0.91, 0.612},
      {"Plan-Execute", 0.719, 1.24, 58.0, 6.8, 0.88, 0.645},
      {"ToolFormer", 0.695, 1.89, 36.8, 5.9, 0.82, 0.557},
      {"Domain-Tuned", 0.703, 0.27, 260.4, 3.8, 0.93, 0.728},
  };
  for (const Expected& e : expected) {
    const AgentSummary& s = by_id(summaries, e.id);
    CHECK(s.efficacy == doctest::Approx(e.eff).epsilon(1e-12));
    CHECK(s.mean_cost_usd == doctest::Approx(e.cost).epsilon(1e-9));
    CHECK(std::fabs(*s.cna - e.cna) < 0.05);
    CHECK(s.mean_latency_s == doctest::Approx(e.lat).epsilon(1e-9));
    CHECK(*s.pas == doctest::Approx(e.pas).epsilon(1e-9));
    CHECK(s.pass_at.at(8) == doctest::Approx(e.r8).epsilon(1e-12));
    // pass@k is non-increasing in k
    double previous = 1.0;
    for (const auto& [k, value] : s.pass_at) {
      CHECK(value <= previous + 1e-15);
      previous = value;
    }
  }
}

TEST_CASE("serial and parallel summaries are identical") {
  const Dataset dataset = reference_fixture();
  EvaluateOptions serial;
  serial.mode = ExecMode::Serial;
  EvaluateOptions parallel;
  parallel.mode = ExecMode::Parallel;
  const auto a = summarize_agents(dataset, serial);
  const auto b = summarize_agents(dataset, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].agent_id == b[i].agent_id);
    CHECK(a[i].efficacy == b[i].efficacy);
    CHECK(a[i].mean_cost_usd == b[i].mean_cost_usd);
    CHECK(a[i].mean_latency_s == b[i].mean_latency_s);
    CHECK(a[i].scr == b[i].scr);
    CHECK(a[i].pas == b[i].pas);
    CHECK(a[i].pass_at == b[i].pass_at);
    CHECK(a[i].cna == b[i].cna);
  }
}

TEST_CASE("evaluate attaches composite scores and the default-dimension frontier") {
  EvaluateOptions options;
  options.mode = ExecMode::Serial;
  const EvaluationResult result = evaluate(reference_fixture(), options);
  CHECK(result.warnings.empty());
  CHECK(std::fabs(*by_id(result.summaries, "Domain-Tuned").composite - 0.872) < 0.001);
  CHECK(std::fabs(*by_id(result.summaries, "Reflexion").composite - 0.453) < 0.001);

  auto frontier = result.pareto.frontier();
  std::sort(frontier.begin(), frontier.end());
  CHECK(frontier == std::vector<std::string>{"Domain-Tuned", "Plan-Execute",
                                             "ReAct-GPT4", "Reflexion"});
}

TEST_CASE("evaluate under the financial_services profile reorders the ranking") {
  EvaluateOptions equal_opts;
  equal_opts.mode = ExecMode::Serial;
  EvaluateOptions fin_opts = equal_opts;
  fin_opts.weight_profile = "financial_services";

  const Dataset dataset = reference_fixture();
  const auto equal_result = evaluate(dataset, equal_opts);
  const auto fin_result = evaluate(dataset, fin_opts);

  auto rank = [](const std::vector<AgentSummary>& summaries) {
    std::vector<std::pair<double, std::string>> scored;
    for (const AgentSummary& s : summaries) {
      scored.emplace_back(*s.composite, s.agent_id);
    }
    std::sort(scored.rbegin(), scored.rend());
    std::vector<std::string> ids;
    for (const auto& [score, id] : scored) ids.push_back(id);
    return ids;
  };
  CHECK(rank(equal_result.summaries) ==
        std::vector<std::string>{"Domain-Tuned", "ReAct-GPT-o3", "Plan-Execute",
                                 "ToolFormer", "ReAct-GPT4", "Reflexion"});
  CHECK(rank(fin_result.summaries) ==
        std::vector<std::string>{"Domain-Tuned", "Plan-Execute", "ReAct-GPT-o3",
                                 "ToolFormer", "ReAct-GPT4", "Reflexion"});
}

TEST_CASE("unknown weight profile is an error") {
  EvaluateOptions options;
  options.weight_profile = "mystery";
  CHECK_THROWS_AS(evaluate(reference_fixture(), options), Error);
}

TEST_CASE("requesting more trials than exist is an error") {
  EvaluateOptions options;
  options.ks = {12};
  options.mode = ExecMode::Serial;
  try {
    summarize_agents(reference_fixture(), options);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("insufficient trials") != std::string::npos);
  }
}

TEST_CASE("explicit reliability subset restricts pass@k") {
  const Dataset dataset = reference_fixture();
  EvaluateOptions options;
  options.mode = ExecMode::Serial;
  // all-success block tasks only: Domain-Tuned passes every k there
  options.reliability_tasks = std::vector<std::string>{"task-0000", "task-0001",
                                                       "task-0002"};
  const auto summaries = summarize_agents(dataset, options);
  CHECK(by_id(summaries, "Domain-Tuned").pass_at.at(8) == 1.0);

  options.reliability_tasks = std::vector<std::string>{"task-none"};
  CHECK_THROWS_AS(summarize_agents(dataset, options), Error);
}

TEST_CASE("single-trial datasets support pass@1 but reject larger k") {
  const Dataset dataset = domain_reference_fixture();
  EvaluateOptions options;
  options.mode = ExecMode::Serial;
  options.ks = {1};
  const auto summaries = summarize_agents(dataset, options);
  for (const AgentSummary& s : summaries) {
    CHECK(s.pass_at.at(1) == s.efficacy);  // single trial: pass@1 == efficacy
  }
  options.ks = {1, 8};
  CHECK_THROWS_AS(summarize_agents(dataset, options), Error);
}
