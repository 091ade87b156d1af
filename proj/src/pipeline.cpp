#include "clearbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "clearbench/metrics.hpp"

namespace clearbench {

namespace {

std::vector<int> checked_ks(const std::vector<int>& ks) {
  if (ks.empty()) {
    throw Error::domain("at least one k is required for pass@k");
  }
  std::vector<int> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1) {
    throw Error::domain("pass@k requires k >= 1");
  }
  return sorted;
}

}  // namespace

std::vector<AgentSummary> summarize_agents(const Dataset& dataset,
                                           const EvaluateOptions& options) {
  const std::vector<int> ks = checked_ks(options.ks);
  const int max_k = ks.back();
  const TaskIndex tasks = index_suite(dataset.suite);

  std::vector<std::string> agent_order;
  std::map<std::string, std::vector<RunRecord>> grouped;
  for (const RunRecord& r : dataset.records) {
    if (!grouped.contains(r.agent_id)) agent_order.push_back(r.agent_id);
    grouped[r.agent_id].push_back(r);
  }
  if (agent_order.empty()) {
    throw Error::domain("no run records to evaluate");
  }

  std::optional<std::set<std::string>> subset;
  if (options.reliability_tasks) {
    subset.emplace(options.reliability_tasks->begin(),
                   options.reliability_tasks->end());
  }

  std::vector<AgentSummary> summaries(agent_order.size());
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  for_each_index(agent_order.size(), options.mode, [&](std::size_t i) {
    try {
      const std::string& agent_id = agent_order[i];
      const std::vector<RunRecord>& records = grouped.at(agent_id);

      const DimensionScores dims =
          compute_dimension_scores(agent_id, records, tasks, dataset.pricing);
      AgentSummary summary;
      summary.agent_id = dims.agent_id;
      summary.efficacy = dims.efficacy;
      summary.total_cost_usd = dims.total_cost_usd;
      summary.mean_cost_usd = dims.mean_cost_usd;
      summary.cna = dims.cna;
      summary.cps_usd = dims.cps_usd;
      summary.mean_latency_s = dims.mean_latency_s;
      summary.scr = dims.scr;
      summary.pas = dims.pas;
      summary.injection_resistance = dims.injection_resistance;

      TrialMatrix matrix = build_trial_matrix(records, subset);
      if (!subset) {
        // default subset: tasks re-run often enough for the largest k
        for (auto it = matrix.sequences.begin(); it != matrix.sequences.end();) {
          if (it->second.size() < static_cast<std::size_t>(max_k)) {
            it = matrix.sequences.erase(it);
          } else {
            ++it;
          }
        }
        if (matrix.sequences.empty()) {
          throw Error::domain("insufficient trials: no task of agent \"" +
                              agent_id + "\" has at least " +
                              std::to_string(max_k) + " trials");
        }
      }
      for (int k : ks) {
        summary.pass_at[k] =
            pass_at_k(matrix, k, options.semantics, ExecMode::Serial);
      }
      summaries[i] = std::move(summary);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return summaries;
}

namespace {

// Default Pareto dimensions restricted to what every agent actually has;
// cost/efficacy/latency are always present.
std::vector<ParetoDimension> available_default_dimensions(
    std::span<const AgentSummary> summaries, std::vector<std::string>* warnings) {
  std::vector<ParetoDimension> dims;
  for (const ParetoDimension& d : default_pareto_dimensions()) {
    bool available = true;
    if (d.name == "pas") {
      available = std::all_of(summaries.begin(), summaries.end(),
                              [](const AgentSummary& s) { return s.pas.has_value(); });
    } else if (d.name == "reliability") {
      available = std::all_of(summaries.begin(), summaries.end(),
                              [](const AgentSummary& s) { return !s.pass_at.empty(); });
      if (available) {
        std::set<int> common;
        bool first = true;
        for (const AgentSummary& s : summaries) {
          std::set<int> ks;
          for (const auto& [k, v] : s.pass_at) ks.insert(k);
          if (first) {
            common = ks;
            first = false;
          } else {
            std::set<int> kept;
            std::set_intersection(common.begin(), common.end(), ks.begin(), ks.end(),
                                  std::inserter(kept, kept.begin()));
            common = kept;
          }
        }
        available = !common.empty();
      }
    }
    if (available) {
      dims.push_back(d);
    } else if (warnings) {
      warnings->push_back("Pareto dimension \"" + d.name +
                          "\" unavailable for some agent; dropped");
    }
  }
  return dims;
}

}  // namespace

EvaluationResult evaluate(const Dataset& dataset, const EvaluateOptions& options) {
  EvaluationResult result;
  result.summaries = summarize_agents(dataset, options);

  auto weights = dataset.weights.find(options.weight_profile);
  if (weights == dataset.weights.end()) {
    throw Error::domain("unknown weight profile \"" + options.weight_profile + "\"");
  }

  try {
    const std::vector<NormalizedScores> normalized =
        normalize_cohort(result.summaries);
    for (std::size_t i = 0; i < result.summaries.size(); ++i) {
      result.summaries[i].composite = composite(normalized[i], weights->second);
    }
  } catch (const Error& e) {
    result.warnings.push_back(std::string("composite scores unavailable: ") +
                              e.what());
  }

  const std::vector<ParetoDimension> dims =
      available_default_dimensions(result.summaries, &result.warnings);
  result.pareto = pareto_frontier(result.summaries, dims);
  result.breakdown = domain_breakdown(dataset.records, dataset.suite);
  std::copy(result.breakdown.warnings.begin(), result.breakdown.warnings.end(),
            std::back_inserter(result.warnings));
  return result;
}

std::pair<std::vector<AgentSummary>, int> parse_summary_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error::io("cannot open " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw Error::domain("summary file " + path.string() + " is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> headers;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) headers.push_back(field);
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < headers.size(); ++i) {
      if (headers[i] == name) return i;
    }
    return std::nullopt;
  };

  int k = 0;
  std::optional<std::size_t> r_col;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const std::string& h = headers[i];
    if (h.starts_with("r_at_") && h.ends_with("_pct")) {
      r_col = i;
      k = std::stoi(h.substr(5));
    }
  }
  const auto agent_col = column("agent");
  const auto eff_col = column("eff_pct");
  const auto cost_col = column("cost_usd");
  const auto cna_col = column("cna");
  const auto lat_col = column("latency_s");
  const auto pas_col = column("pas");
  const auto composite_col = column("composite");
  if (!agent_col || !eff_col || !cost_col || !lat_col || !pas_col) {
    throw Error::domain("summary file " + path.string() +
                        " is missing required columns (agent, eff_pct, "
                        "cost_usd, latency_s, pas)");
  }

  std::vector<AgentSummary> summaries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) cells.push_back(field);
    while (cells.size() < headers.size()) cells.push_back("");

    auto number = [&](std::size_t col) -> std::optional<double> {
      if (cells[col].empty()) return std::nullopt;
      try {
        return std::stod(cells[col]);
      } catch (const std::exception&) {
        throw Error::domain("summary row " + std::to_string(line_no) +
                            ": \"" + cells[col] + "\" is not a number");
      }
    };

    AgentSummary s;
    s.agent_id = cells[*agent_col];
    const auto eff = number(*eff_col);
    const auto cost = number(*cost_col);
    const auto lat = number(*lat_col);
    if (!eff || !cost || !lat) {
      throw Error::domain("summary row " + std::to_string(line_no) +
                          " is missing efficacy, cost, or latency");
    }
    s.efficacy = *eff / 100.0;
    s.mean_cost_usd = *cost;
    s.mean_latency_s = *lat;
    if (cna_col) s.cna = number(*cna_col);
    s.pas = number(*pas_col);
    if (r_col) {
      if (const auto r = number(*r_col)) s.pass_at[k] = *r / 100.0;
    }
    if (composite_col) s.composite = number(*composite_col);
    summaries.push_back(std::move(s));
  }
  if (summaries.empty()) {
    throw Error::domain("summary file " + path.string() + " has no rows");
  }
  return {std::move(summaries), k};
}

}  // namespace clearbench
