#ifndef CLEARBENCH_SIMGEN_HPP
#define CLEARBENCH_SIMGEN_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "clearbench/ingestion.hpp"
#include "clearbench/model.hpp"

namespace clearbench {

// Ground-truth parameters for one synthetic agent. Generated datasets
// always validate cleanly, and the empirical per-agent success rate
// converges to success_rate as the task count grows.
struct AgentProfileSpec {
  std::string agent_id;
  double success_rate = 0.5;
  // Trial i repeats trial i-1's outcome with this probability, else draws
  // fresh: streaky failures without moving the stationary success rate.
  double success_autocorrelation = 0.0;
  double input_tokens_mean = 1000.0;
  double input_tokens_spread = 0.0;
  double output_tokens_mean = 200.0;
  double output_tokens_spread = 0.0;
  double latency_plan_mean_s = 1.0;
  double latency_exec_mean_s = 2.0;
  double latency_reflect_mean_s = 0.5;
  double violation_rate = 0.0;       // per policy-critical action
  double attack_success_rate = 0.0;  // per trial-0 security probe
};

// Throws Error::domain when a rate is outside [0,1] (autocorrelation must
// be < 1) or a mean/spread is negative.
void validate_profile(const AgentProfileSpec& profile);

// JSON file with a "profiles" list of AgentProfileSpec objects.
std::vector<AgentProfileSpec> load_profiles(const std::filesystem::path& path);

// Deterministic synthetic run log: records for every (profile, task) pair
// with trials_per_task trials, in (agent, task, trial) order. Each
// (agent, task) pair draws from its own Rng substream, so output depends
// only on (profiles, suite, trials_per_task, seed).
std::vector<RunRecord> generate(const std::vector<AgentProfileSpec>& profiles,
                                const std::vector<TaskSpec>& suite,
                                int trials_per_task, std::uint64_t seed);

// The stock six-domain SLA profiles (seconds): customer_support 3;
// data_analysis 15 (query) / 45 (report); process_automation 10;
// software_development 30 (analysis) / 60 (generation); compliance 20;
// multi_stakeholder 15.
std::vector<DomainProfile> default_domain_profiles();

// Handcrafted (not sampled) six-agent dataset whose aggregate metrics hit
// the documented reference values exactly at printed precision: efficacy,
// explicit costs, CNA, latency phases, PAS, and windowed pass@8 over
// 10-trial sequences on every task. Used as the demo dataset and as the
// oracle fixture in tests. 1000 tasks per agent so one-decimal percentages
// are exact counts.
Dataset reference_fixture();

// Three-agent dataset with engineered per-domain efficacy/PAS cells for
// the domain breakdown table; trial-0 records only.
Dataset domain_reference_fixture();

// Writes a fixture's runs.jsonl, suite.json, pricing.json and weights.json
// into a directory, in the exact formats the loaders read.
void write_fixture_inputs(const Dataset& dataset,
                          const std::filesystem::path& directory);

}  // namespace clearbench

#endif  // CLEARBENCH_SIMGEN_HPP
