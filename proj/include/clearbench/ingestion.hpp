#ifndef CLEARBENCH_INGESTION_HPP
#define CLEARBENCH_INGESTION_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clearbench/model.hpp"

namespace clearbench {

struct LineIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct RunsLoadResult {
  std::vector<RunRecord> records;  // file order
  std::vector<LineIssue> errors;   // malformed lines, load continues past them
  std::vector<std::string> warnings;  // e.g. unknown fields
};

// Parses a newline-delimited run log (one JSON object per line, snake_case
// field names, seconds and USD as decimal numbers). Malformed lines become
// error entries with their line number; everything parseable is returned in
// file order. Throws Error::io only when the file itself cannot be read.
RunsLoadResult load_runs(const std::filesystem::path& path);

// Single-record codec used by load_runs/write_runs; exposed for round-trip
// checks. serialize_run emits a stable field order.
std::string serialize_run(const RunRecord& record);
RunRecord parse_run(const std::string& line);

// Writes records one per line in the exact format load_runs reads.
void write_runs(const std::vector<RunRecord>& records,
                const std::filesystem::path& path);

struct SuiteLoadResult {
  std::vector<TaskSpec> tasks;  // sla_seconds resolved
  std::vector<DomainProfile> profiles;
};

// Loads the suite manifest: a "domain_profiles" table (all six domains
// required) and a "tasks" list. Every task's sla_seconds is resolved from
// its domain profile and subtype here. Unknown domain names, step counts
// outside [5, 15], or unresolvable SLAs are fatal.
SuiteLoadResult load_suite(const std::filesystem::path& path);

// Pricing: a "models" table keyed by model_id and an "agent_model_map"
// whose entries are either one model_id or a list of {model_id,
// token_share} pairs summing to 1.
PricingTable load_pricing(const std::filesystem::path& path);

// Named weight profiles; the file must include "equal" with every weight
// exactly 0.2, and every profile must sum to 1.
std::map<std::string, WeightProfile> load_weights(const std::filesystem::path& path);

// The presets that ship with the tool: "equal", "financial_services"
// (w_R=0.4, w_A=0.3, remainder 0.1 each) and "customer_facing" (w_L=0.35,
// remainder 0.1625 each).
const std::map<std::string, WeightProfile>& builtin_weight_profiles();

// CSV with header rater_id,agent_id,task_id,score. Scores outside 1..5 and
// duplicate (rater, agent, task) triples are fatal, with the row number.
std::vector<ExpertRating> load_ratings(const std::filesystem::path& path);

// One task id per non-empty line (reliability subset listings).
std::vector<std::string> load_task_list(const std::filesystem::path& path);

// Everything a metric computation needs, already validated.
struct Dataset {
  std::vector<RunRecord> records;
  std::vector<TaskSpec> suite;
  std::vector<DomainProfile> profiles;
  PricingTable pricing;
  std::map<std::string, WeightProfile> weights;
};

}  // namespace clearbench

#endif  // CLEARBENCH_INGESTION_HPP
