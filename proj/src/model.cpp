#include "clearbench/model.hpp"

#include <cmath>
#include <tuple>

namespace clearbench {

const std::vector<Domain>& all_domains() {
  static const std::vector<Domain> domains = {
      Domain::CustomerSupport,    Domain::DataAnalysis,
      Domain::ProcessAutomation,  Domain::SoftwareDevelopment,
      Domain::Compliance,         Domain::MultiStakeholder,
  };
  return domains;
}

std::string to_string(Domain domain) {
  switch (domain) {
    case Domain::CustomerSupport: return "customer_support";
    case Domain::DataAnalysis: return "data_analysis";
    case Domain::ProcessAutomation: return "process_automation";
    case Domain::SoftwareDevelopment: return "software_development";
    case Domain::Compliance: return "compliance";
    case Domain::MultiStakeholder: return "multi_stakeholder";
  }
  throw Error::domain("invalid domain enum value");
}

Domain domain_from_string(const std::string& name) {
  for (Domain d : all_domains()) {
    if (to_string(d) == name) return d;
  }
  throw Error::domain("unknown domain name: " + name);
}

double DomainProfile::resolve_sla(const std::string& subtype) const {
  auto it = sla_map.find(subtype);
  if (it == sla_map.end()) it = sla_map.find("*");
  if (it == sla_map.end()) {
    throw Error::domain("no SLA entry for domain " + to_string(domain) +
                        ", subtype \"" + subtype + "\"");
  }
  return it->second;
}

bool WeightProfile::valid() const {
  if (cost < 0 || latency < 0 || efficacy < 0 || assurance < 0 || reliability < 0) {
    return false;
  }
  return std::fabs(sum() - 1.0) <= 1e-9;
}

TaskIndex index_suite(const std::vector<TaskSpec>& suite) {
  TaskIndex index;
  index.reserve(suite.size());
  for (const TaskSpec& task : suite) index.emplace(task.task_id, task);
  return index;
}

namespace {

bool has_negative_field(const RunRecord& r) {
  return r.trial_index < 0 || r.input_tokens < 0 || r.output_tokens < 0 ||
         (r.cost_usd && *r.cost_usd < 0) || r.latency_plan_s < 0 ||
         r.latency_exec_s < 0 || r.latency_reflect_s < 0 ||
         r.latency_total_s < 0 || r.policy_critical_actions < 0 ||
         r.policy_violations < 0;
}

bool latency_phases_consistent(const RunRecord& r) {
  const double sum = r.latency_plan_s + r.latency_exec_s + r.latency_reflect_s;
  return std::fabs(sum - r.latency_total_s) <=
         kLatencyPhaseTolerance * r.latency_total_s;
}

}  // namespace

std::vector<ValidationIssue> validate_dataset(
    const std::vector<RunRecord>& records, const std::vector<TaskSpec>& suite) {
  std::vector<ValidationIssue> issues;
  const TaskIndex tasks = index_suite(suite);

  // Every member of a duplicated (agent, task, trial) group is flagged, so
  // the report does not depend on record order.
  std::map<std::tuple<std::string, std::string, int>, int> key_counts;
  for (const RunRecord& r : records) {
    ++key_counts[{r.agent_id, r.task_id, r.trial_index}];
  }

  for (const RunRecord& r : records) {
    if (has_negative_field(r)) {
      issues.push_back({r.run_id, "negative_value", "a numeric field is negative"});
    }
    if (r.policy_violations > r.policy_critical_actions) {
      issues.push_back({r.run_id, "violations_exceed_actions",
                        "policy_violations > policy_critical_actions"});
    }
    if (!latency_phases_consistent(r)) {
      issues.push_back({r.run_id, "latency_phase_mismatch",
                        "phase sum differs from latency_total_s by more than 5%"});
    }
    if (key_counts[{r.agent_id, r.task_id, r.trial_index}] > 1) {
      issues.push_back({r.run_id, "duplicate_trial",
                        "(agent_id, task_id, trial_index) is not unique"});
    }
    if (!tasks.contains(r.task_id)) {
      issues.push_back({r.run_id, "unknown_task",
                        "task_id \"" + r.task_id + "\" not in suite"});
    }
  }
  return issues;
}

}  // namespace clearbench
