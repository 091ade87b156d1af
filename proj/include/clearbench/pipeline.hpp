#ifndef CLEARBENCH_PIPELINE_HPP
#define CLEARBENCH_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clearbench/analysis.hpp"
#include "clearbench/ingestion.hpp"
#include "clearbench/model.hpp"
#include "clearbench/parallel.hpp"
#include "clearbench/reliability.hpp"

namespace clearbench {

struct EvaluateOptions {
  std::vector<int> ks = {1, 3, 5, 8};
  PassKSemantics semantics = PassKSemantics::Window;
  std::string weight_profile = "equal";
  // Explicit reliability subset (task ids). Without it, every task with at
  // least max(ks) trials is used; listed tasks with too few trials are an
  // error.
  std::optional<std::vector<std::string>> reliability_tasks;
  ExecMode mode = ExecMode::Parallel;
};

// Per-agent summaries in first-appearance order. Agents are processed
// independently (parallel in Parallel mode) and merged by index, so both
// modes produce identical summaries.
std::vector<AgentSummary> summarize_agents(const Dataset& dataset,
                                           const EvaluateOptions& options);

struct EvaluationResult {
  std::vector<AgentSummary> summaries;  // composite filled in when possible
  ParetoResult pareto;
  BreakdownResult breakdown;
  std::vector<std::string> warnings;
};

// Full pipeline: summaries, composite scores under the chosen weight
// profile, Pareto frontier over the default dimensions (restricted to the
// ones every agent has), and the per-domain breakdown.
EvaluationResult evaluate(const Dataset& dataset, const EvaluateOptions& options);

// Re-ingests a summary.csv written by render_summary_table(Csv). Returns
// the summaries plus the k the reliability column was computed at.
std::pair<std::vector<AgentSummary>, int> parse_summary_csv(
    const std::filesystem::path& path);

}  // namespace clearbench

#endif  // CLEARBENCH_PIPELINE_HPP
