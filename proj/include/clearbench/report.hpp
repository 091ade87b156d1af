#ifndef CLEARBENCH_REPORT_HPP
#define CLEARBENCH_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clearbench/analysis.hpp"
#include "clearbench/model.hpp"
#include "clearbench/reliability.hpp"

namespace clearbench {

enum class TableFormat { Markdown, Csv, Text };

// Fixed-point decimal string with half-even rounding at the printed
// precision; the one formatting routine every table cell goes through, so
// identical inputs give byte-identical documents.
std::string format_fixed(double value, int decimals);

struct SummaryRenderOptions {
  PassKSemantics semantics = PassKSemantics::Window;
  int reliability_k = 8;
  // When set, a note flags any difference between the computed frontier
  // and this externally claimed one.
  std::optional<std::vector<std::string>> expected_frontier;
  bool color = false;  // bold frontier rows (Text format only)
};

// One row per agent in input order, columns Agent / Eff. (%) / Cost ($) /
// CNA / Lat. (s) / PAS / R@k (%) / CLEAR; frontier members get a "*"
// suffix (Markdown/Text) or an on_frontier column (Csv). Footer names the
// pass@k semantics mode.
std::string render_summary_table(std::span<const AgentSummary> summaries,
                                 const ParetoResult& pareto, TableFormat format,
                                 const SummaryRenderOptions& options = {});

// Domain rows in fixed domain order plus a recomputed Overall row; paired
// Eff./PAS columns per agent (Markdown/Text) or long-format rows (Csv).
// Omitted domains are footnoted.
std::string render_domain_table(const BreakdownResult& breakdown,
                                TableFormat format);

// Per agent: mean input/output tokens (in K), mean cost, and mean
// plan/exec/reflect phase seconds, over trial-0 records.
std::string render_cost_latency_table(std::span<const RunRecord> records,
                                      const PricingTable& pricing,
                                      TableFormat format);

// The dimensions the headline table leaves out: cost per success, SLA
// compliance rate, and injection resistance. Undefined values (no
// successes, no probes) render as "—".
std::string render_supplementary_table(std::span<const AgentSummary> summaries,
                                       TableFormat format);

struct CorrelationRow {
  std::string approach;  // "efficacy_only", "efficacy_cost", "clear"
  double pearson = 0.0;
  double spearman = 0.0;
  std::optional<std::pair<double, double>> pearson_ci;   // 95% bootstrap
  std::optional<std::pair<double, double>> spearman_ci;
};

// One row per evaluation approach, coefficients to two decimals; CI
// columns appear only when a bootstrap was run.
std::string render_correlation_table(std::span<const CorrelationRow> rows,
                                     TableFormat format);

}  // namespace clearbench

#endif  // CLEARBENCH_REPORT_HPP
