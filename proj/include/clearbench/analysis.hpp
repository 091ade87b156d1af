#ifndef CLEARBENCH_ANALYSIS_HPP
#define CLEARBENCH_ANALYSIS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clearbench/model.hpp"

namespace clearbench {

enum class Direction { LowerBetter, HigherBetter };

// Min-max scaling onto [0, 1] with 1 = best. A degenerate span (all values
// equal) maps everyone to 1.0: equal performance penalizes nobody.
std::vector<std::pair<std::string, double>> min_max_normalize(
    std::span<const std::pair<std::string, double>> values, Direction direction);

// Cohort-normalized view of one agent: cost/latency rescaled so higher is
// better, efficacy/assurance/reliability kept as raw fractions.
struct NormalizedScores {
  std::string agent_id;
  double c_norm = 0.0;
  double l_norm = 0.0;
  double e = 0.0;
  double a = 0.0;
  double r = 0.0;
};

// Normalizes a cohort of summaries. The assurance term is PAS and the
// reliability term is pass@k at the largest k present; agents missing
// either are rejected (the composite would silently lose a dimension).
std::vector<NormalizedScores> normalize_cohort(
    std::span<const AgentSummary> summaries);

// Weighted sum w_C*c_norm + w_L*l_norm + w_E*e + w_A*a + w_R*r.
// Throws when the weights do not sum to 1.
double composite(const NormalizedScores& norm, const WeightProfile& weights);

struct ParetoDimension {
  std::string name;
  Direction direction = Direction::HigherBetter;
};

struct ParetoEntry {
  std::string agent_id;
  bool on_frontier = false;
  std::vector<std::string> dominated_by;
};

struct ParetoResult {
  std::vector<ParetoDimension> dimensions;
  std::vector<ParetoEntry> entries;  // in input summary order

  bool on_frontier(const std::string& agent_id) const;
  std::vector<std::string> frontier() const;
};

// The five standard dimensions: cost(min), efficacy(max), latency(min),
// pas(max), reliability(max, pass@k at the largest k).
const std::vector<ParetoDimension>& default_pareto_dimensions();

// Resolves dimension names ("cost", "efficacy", "latency", "pas",
// "reliability") against the defaults; throws on unknown names.
std::vector<ParetoDimension> resolve_pareto_dimensions(
    std::span<const std::string> names);

// Pairwise dominance over the raw dimension values (dominance is invariant
// under monotone rescaling, so normalization never enters). X dominates Y
// iff X is at least as good everywhere and strictly better somewhere.
ParetoResult pareto_frontier(std::span<const AgentSummary> summaries,
                             std::span<const ParetoDimension> dimensions);

// ------------------------------------------------------------- domain tables

struct DomainStats {
  std::size_t task_count = 0;
  double efficacy = 0.0;
  std::optional<double> pas;
};

struct AgentDomainBreakdown {
  std::string agent_id;
  std::map<Domain, DomainStats> by_domain;
  DomainStats overall;  // efficacy = task-count-weighted mean; pas pooled
};

struct BreakdownResult {
  std::vector<AgentDomainBreakdown> agents;  // first-appearance order
  std::vector<std::string> warnings;         // e.g. domains with no tasks
};

// First-trial efficacy and pooled PAS restricted to each domain's tasks.
// Domains with no records for an agent are omitted with a warning.
BreakdownResult domain_breakdown(std::span<const RunRecord> records,
                                 const std::vector<TaskSpec>& suite);

}  // namespace clearbench

#endif  // CLEARBENCH_ANALYSIS_HPP
