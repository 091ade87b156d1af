#include "clearbench/analysis.hpp"

#include <algorithm>
#include <set>

#include "clearbench/metrics.hpp"

namespace clearbench {

std::vector<std::pair<std::string, double>> min_max_normalize(
    std::span<const std::pair<std::string, double>> values, Direction direction) {
  if (values.empty()) {
    throw Error::domain("min_max_normalize: empty value list");
  }
  double lo = values.front().second;
  double hi = values.front().second;
  for (const auto& [id, v] : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  std::vector<std::pair<std::string, double>> out;
  out.reserve(values.size());
  const double span = hi - lo;
  for (const auto& [id, v] : values) {
    double norm = 1.0;  // degenerate span: everyone maps to 1
    if (span > 0.0) {
      norm = direction == Direction::LowerBetter ? (hi - v) / span : (v - lo) / span;
    }
    out.emplace_back(id, norm);
  }
  return out;
}

namespace {

// Largest k shared by every summary's pass@k map; the cohort's reliability
// values must come from one k or they are not comparable.
int common_reliability_k(std::span<const AgentSummary> summaries) {
  std::set<int> common;
  bool first = true;
  for (const AgentSummary& s : summaries) {
    std::set<int> ks;
    for (const auto& [k, v] : s.pass_at) ks.insert(k);
    if (first) {
      common = std::move(ks);
      first = false;
    } else {
      std::set<int> kept;
      std::set_intersection(common.begin(), common.end(), ks.begin(), ks.end(),
                            std::inserter(kept, kept.begin()));
      common = std::move(kept);
    }
  }
  if (common.empty()) {
    throw Error::domain(
        "no pass@k value is available for every agent in the cohort");
  }
  return *common.rbegin();
}

double required_pas(const AgentSummary& s) {
  if (!s.pas) {
    throw Error::domain("agent \"" + s.agent_id +
                        "\" has no policy adherence score");
  }
  return *s.pas;
}

}  // namespace

std::vector<NormalizedScores> normalize_cohort(
    std::span<const AgentSummary> summaries) {
  if (summaries.empty()) {
    throw Error::domain("normalize_cohort: empty cohort");
  }
  const int k = common_reliability_k(summaries);

  std::vector<std::pair<std::string, double>> costs, latencies;
  for (const AgentSummary& s : summaries) {
    costs.emplace_back(s.agent_id, s.mean_cost_usd);
    latencies.emplace_back(s.agent_id, s.mean_latency_s);
  }
  const auto c_norm = min_max_normalize(costs, Direction::LowerBetter);
  const auto l_norm = min_max_normalize(latencies, Direction::LowerBetter);

  std::vector<NormalizedScores> out;
  out.reserve(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const AgentSummary& s = summaries[i];
    NormalizedScores n;
    n.agent_id = s.agent_id;
    n.c_norm = c_norm[i].second;
    n.l_norm = l_norm[i].second;
    n.e = s.efficacy;
    n.a = required_pas(s);
    n.r = s.pass_at.at(k);
    out.push_back(n);
  }
  return out;
}

double composite(const NormalizedScores& norm, const WeightProfile& weights) {
  if (!weights.valid()) {
    throw Error::domain("weight profile does not sum to 1");
  }
  return weights.cost * norm.c_norm + weights.latency * norm.l_norm +
         weights.efficacy * norm.e + weights.assurance * norm.a +
         weights.reliability * norm.r;
}

bool ParetoResult::on_frontier(const std::string& agent_id) const {
  for (const ParetoEntry& e : entries) {
    if (e.agent_id == agent_id) return e.on_frontier;
  }
  return false;
}

std::vector<std::string> ParetoResult::frontier() const {
  std::vector<std::string> ids;
  for (const ParetoEntry& e : entries) {
    if (e.on_frontier) ids.push_back(e.agent_id);
  }
  return ids;
}

const std::vector<ParetoDimension>& default_pareto_dimensions() {
  static const std::vector<ParetoDimension> dims = {
      {"cost", Direction::LowerBetter},
      {"efficacy", Direction::HigherBetter},
      {"latency", Direction::LowerBetter},
      {"pas", Direction::HigherBetter},
      {"reliability", Direction::HigherBetter},
  };
  return dims;
}

std::vector<ParetoDimension> resolve_pareto_dimensions(
    std::span<const std::string> names) {
  std::vector<ParetoDimension> dims;
  for (const std::string& name : names) {
    bool found = false;
    for (const ParetoDimension& d : default_pareto_dimensions()) {
      if (d.name == name) {
        dims.push_back(d);
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error::domain("unknown Pareto dimension \"" + name +
                          "\" (expected cost, efficacy, latency, pas, reliability)");
    }
  }
  if (dims.empty()) {
    throw Error::domain("no Pareto dimensions given");
  }
  return dims;
}

namespace {

double dimension_value(const AgentSummary& s, const std::string& name, int k) {
  if (name == "cost") return s.mean_cost_usd;
  if (name == "efficacy") return s.efficacy;
  if (name == "latency") return s.mean_latency_s;
  if (name == "pas") return required_pas(s);
  if (name == "reliability") return s.pass_at.at(k);
  throw Error::domain("unknown Pareto dimension \"" + name + "\"");
}

}  // namespace

ParetoResult pareto_frontier(std::span<const AgentSummary> summaries,
                             std::span<const ParetoDimension> dimensions) {
  if (summaries.empty()) {
    throw Error::domain("pareto_frontier: empty cohort");
  }
  if (dimensions.empty()) {
    throw Error::domain("pareto_frontier: no dimensions");
  }
  const bool needs_reliability =
      std::any_of(dimensions.begin(), dimensions.end(),
                  [](const ParetoDimension& d) { return d.name == "reliability"; });
  const int k = needs_reliability ? common_reliability_k(summaries) : 0;

  // Value matrix with every dimension flipped to higher-is-better.
  std::vector<std::vector<double>> points(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (const ParetoDimension& d : dimensions) {
      double v = dimension_value(summaries[i], d.name, k);
      points[i].push_back(d.direction == Direction::LowerBetter ? -v : v);
    }
  }

  auto dominates = [&](std::size_t a, std::size_t b) {
    bool strictly_better = false;
    for (std::size_t d = 0; d < points[a].size(); ++d) {
      if (points[a][d] < points[b][d]) return false;
      if (points[a][d] > points[b][d]) strictly_better = true;
    }
    return strictly_better;
  };

  ParetoResult result;
  result.dimensions.assign(dimensions.begin(), dimensions.end());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    ParetoEntry entry;
    entry.agent_id = summaries[i].agent_id;
    for (std::size_t j = 0; j < summaries.size(); ++j) {
      if (i != j && dominates(j, i)) {
        entry.dominated_by.push_back(summaries[j].agent_id);
      }
    }
    entry.on_frontier = entry.dominated_by.empty();
    result.entries.push_back(std::move(entry));
  }
  return result;
}

BreakdownResult domain_breakdown(std::span<const RunRecord> records,
                                 const std::vector<TaskSpec>& suite) {
  const TaskIndex tasks = index_suite(suite);

  std::set<Domain> suite_domains;
  for (const TaskSpec& task : suite) suite_domains.insert(task.domain);

  BreakdownResult result;
  for (Domain d : all_domains()) {
    if (!suite_domains.contains(d)) {
      result.warnings.push_back("domain " + to_string(d) +
                                " has no tasks in the suite; omitted");
    }
  }

  // agents in first-appearance order
  std::vector<std::string> agent_order;
  std::map<std::string, std::vector<RunRecord>> by_agent_domainless;
  std::map<std::string, std::map<Domain, std::vector<RunRecord>>> by_agent;
  for (const RunRecord& r : records) {
    auto it = tasks.find(r.task_id);
    if (it == tasks.end()) {
      throw Error::domain("domain_breakdown: record " + r.run_id +
                          " references unknown task \"" + r.task_id + "\"");
    }
    if (!by_agent.contains(r.agent_id)) agent_order.push_back(r.agent_id);
    by_agent[r.agent_id][it->second.domain].push_back(r);
    by_agent_domainless[r.agent_id].push_back(r);
  }

  for (const std::string& agent_id : agent_order) {
    AgentDomainBreakdown breakdown;
    breakdown.agent_id = agent_id;

    std::size_t total_tasks = 0;
    double weighted_efficacy = 0.0;
    for (Domain d : all_domains()) {
      auto it = by_agent[agent_id].find(d);
      if (it == by_agent[agent_id].end()) {
        if (suite_domains.contains(d)) {
          result.warnings.push_back("agent " + agent_id + " has no records in domain " +
                                    to_string(d) + "; omitted");
        }
        continue;
      }
      const std::vector<RunRecord>& domain_records = it->second;
      DomainStats stats;
      std::set<std::string> domain_tasks;
      for (const RunRecord& r : domain_records) domain_tasks.insert(r.task_id);
      stats.task_count = domain_tasks.size();
      stats.efficacy = efficacy(domain_records, /*first_trial_only=*/true);
      std::int64_t actions = 0;
      for (const RunRecord& r : domain_records) actions += r.policy_critical_actions;
      if (actions > 0) stats.pas = pas(domain_records);

      total_tasks += stats.task_count;
      weighted_efficacy += stats.efficacy * static_cast<double>(stats.task_count);
      breakdown.by_domain.emplace(d, stats);
    }

    breakdown.overall.task_count = total_tasks;
    breakdown.overall.efficacy =
        weighted_efficacy / static_cast<double>(total_tasks);
    const std::vector<RunRecord>& all_records = by_agent_domainless[agent_id];
    std::int64_t actions = 0;
    for (const RunRecord& r : all_records) actions += r.policy_critical_actions;
    if (actions > 0) breakdown.overall.pas = pas(all_records);

    result.agents.push_back(std::move(breakdown));
  }
  return result;
}

}  // namespace clearbench
