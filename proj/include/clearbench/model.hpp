#ifndef CLEARBENCH_MODEL_HPP
#define CLEARBENCH_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace clearbench {

// Fatal errors carry a kind so the CLI can map them onto its exit-code
// contract (1 = domain/validation, 2 = I/O).
class Error : public std::runtime_error {
 public:
  enum class Kind { Domain, Io };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

  static Error domain(const std::string& message) {
    return Error(Kind::Domain, message);
  }
  static Error io(const std::string& message) {
    return Error(Kind::Io, message);
  }

 private:
  Kind kind_;
};

enum class Domain {
  CustomerSupport,
  DataAnalysis,
  ProcessAutomation,
  SoftwareDevelopment,
  Compliance,
  MultiStakeholder,
};

inline constexpr int kDomainCount = 6;

const std::vector<Domain>& all_domains();
std::string to_string(Domain domain);
// Throws Error::domain for unrecognized names.
Domain domain_from_string(const std::string& name);

struct SecurityProbe {
  std::string attack_case_id;
  bool attack_succeeded = false;

  bool operator==(const SecurityProbe&) const = default;
};

// One agent execution of one task trial, as emitted by the telemetry log.
struct RunRecord {
  std::string run_id;
  std::string agent_id;
  std::string task_id;
  int trial_index = 0;  // 0-based; defines temporal order of repeated runs
  bool success = false;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  std::optional<double> cost_usd;  // when absent, derived from tokens + pricing
  double latency_plan_s = 0.0;
  double latency_exec_s = 0.0;
  double latency_reflect_s = 0.0;
  double latency_total_s = 0.0;
  std::int64_t policy_critical_actions = 0;
  std::int64_t policy_violations = 0;
  std::optional<SecurityProbe> security_probe;

  bool operator==(const RunRecord&) const = default;
};

// Phase sums rarely equal the logged total exactly (unattributed overhead),
// so the decomposition invariant allows 5% relative slack.
inline constexpr double kLatencyPhaseTolerance = 0.05;

struct TaskSpec {
  std::string task_id;
  Domain domain = Domain::CustomerSupport;
  std::string subtype = "*";
  int step_count = 5;     // must lie in [5, 15]
  double sla_seconds = 0; // resolved from the domain profile at load time
};

inline constexpr int kMinStepCount = 5;
inline constexpr int kMaxStepCount = 15;

// Maps task subtype -> SLA seconds; "*" is the fallback entry.
struct DomainProfile {
  Domain domain = Domain::CustomerSupport;
  std::map<std::string, double> sla_map;

  // Throws Error::domain when neither the subtype nor "*" is mapped.
  double resolve_sla(const std::string& subtype) const;
};

struct ModelPrice {
  double input_usd_per_1k = 0.0;
  double output_usd_per_1k = 0.0;
};

struct ModelShare {
  std::string model_id;
  double token_share = 1.0;
};

struct PricingTable {
  std::map<std::string, ModelPrice> models;
  // Mixed-model agents list several shares; the shares sum to 1.
  std::map<std::string, std::vector<ModelShare>> agent_model_map;
};

inline constexpr double kShareSumTolerance = 1e-9;

struct WeightProfile {
  double cost = 0.2;
  double latency = 0.2;
  double efficacy = 0.2;
  double assurance = 0.2;
  double reliability = 0.2;

  double sum() const { return cost + latency + efficacy + assurance + reliability; }
  // Weights must sum to 1 within 1e-9.
  bool valid() const;
};

// One row of the performance summary. pas/injection_resistance/cna are
// optional because an agent can lack policy-critical actions, security
// probes, or a nonzero mean cost; reports render the gaps as "—".
struct AgentSummary {
  std::string agent_id;
  double efficacy = 0.0;
  double total_cost_usd = 0.0;
  double mean_cost_usd = 0.0;
  std::optional<double> cna;
  std::optional<double> cps_usd;  // undefined when the agent never succeeded
  double mean_latency_s = 0.0;
  double scr = 0.0;
  std::optional<double> pas;
  std::map<int, double> pass_at;  // k -> fraction, non-increasing in k
  std::optional<double> injection_resistance;
  std::optional<double> composite;
};

struct ExpertRating {
  std::string rater_id;
  std::string agent_id;
  std::string task_id;
  int score = 1;  // 5-point scale, 1..5
};

// ------------------------------------------------------------------ validation

struct ValidationIssue {
  std::string record_id;  // run_id of the offending record
  std::string rule;       // e.g. "violations_exceed_actions"
  std::string detail;
};

using TaskIndex = std::unordered_map<std::string, TaskSpec>;

TaskIndex index_suite(const std::vector<TaskSpec>& suite);

// Pure check of every record-level invariant plus task referential
// integrity. Violations are data, not exceptions: the report is empty iff
// the dataset is clean. Idempotent and order-independent over records.
//
// Rules emitted:
//   negative_value             a count/seconds/currency field is negative
//   violations_exceed_actions  policy_violations > policy_critical_actions
//   latency_phase_mismatch     |plan+exec+reflect - total| > 5% of total
//   duplicate_trial            (agent_id, task_id, trial_index) repeated
//   unknown_task               task_id absent from the suite
std::vector<ValidationIssue> validate_dataset(
    const std::vector<RunRecord>& records, const std::vector<TaskSpec>& suite);

}  // namespace clearbench

#endif  // CLEARBENCH_MODEL_HPP
