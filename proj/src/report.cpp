#include "clearbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "clearbench/metrics.hpp"

namespace clearbench {

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return "nan";
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  // nearbyint rounds half to even under the default FP environment
  const auto scaled = static_cast<long long>(std::nearbyint(value * scale));
  const bool negative = scaled < 0;
  unsigned long long magnitude =
      negative ? 0ull - static_cast<unsigned long long>(scaled)
               : static_cast<unsigned long long>(scaled);
  const auto scale_int = static_cast<unsigned long long>(scale);
  std::string out = negative ? "-" : "";
  out += std::to_string(magnitude / scale_int);
  if (decimals > 0) {
    std::string frac = std::to_string(magnitude % scale_int);
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

namespace {

constexpr const char* kMissingCell = "—";

std::string percent1(double fraction) { return format_fixed(fraction * 100.0, 1); }

std::string opt_cell(const std::optional<double>& value, int decimals,
                     TableFormat format) {
  if (!value) return format == TableFormat::Csv ? "" : kMissingCell;
  return format_fixed(*value, decimals);
}

// Small table assembler shared by every renderer.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> bold_rows;  // Text format only
  std::vector<std::string> notes;

  std::string render(TableFormat format, bool color) const {
    switch (format) {
      case TableFormat::Markdown: return render_markdown();
      case TableFormat::Csv: return render_csv();
      case TableFormat::Text: return render_text(color);
    }
    return {};
  }

 private:
  std::string render_markdown() const {
    std::ostringstream out;
    out << "| ";
    for (std::size_t c = 0; c < headers.size(); ++c) {
      out << headers[c] << (c + 1 < headers.size() ? " | " : " |\n");
    }
    out << "|";
    for (std::size_t c = 0; c < headers.size(); ++c) {
      out << std::string(headers[c].size() + 2, '-') << "|";
    }
    out << "\n";
    for (const auto& row : rows) {
      out << "| ";
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << row[c] << (c + 1 < row.size() ? " | " : " |\n");
      }
    }
    for (const std::string& note : notes) {
      out << "\n" << note << "\n";
    }
    return out.str();
  }

  std::string render_csv() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << cells[c] << (c + 1 < cells.size() ? "," : "");
      }
      out << "\n";
    };
    line(headers);
    for (const auto& row : rows) line(row);
    return out.str();
  }

  std::string render_text(bool color) const {
    std::vector<std::size_t> widths(headers.size(), 0);
    for (std::size_t c = 0; c < headers.size(); ++c) {
      widths[c] = display_width(headers[c]);
    }
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        widths[c] = std::max(widths[c], display_width(row[c]));
      }
    }
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells, bool bold) {
      std::string text;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        text += cells[c];
        if (c + 1 < cells.size()) {
          text += std::string(widths[c] - display_width(cells[c]) + 2, ' ');
        }
      }
      if (bold && color) {
        out << "\x1b[1m" << text << "\x1b[0m\n";
      } else {
        out << text << "\n";
      }
    };
    line(headers, false);
    std::size_t total = 0;
    for (std::size_t c = 0; c < widths.size(); ++c) {
      total += widths[c] + (c + 1 < widths.size() ? 2 : 0);
    }
    out << std::string(total, '-') << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      line(rows[r], r < bold_rows.size() && bold_rows[r]);
    }
    for (const std::string& note : notes) {
      out << "\n" << note << "\n";
    }
    return out.str();
  }

  // The em dash used for missing cells is 3 UTF-8 bytes but 1 column.
  static std::size_t display_width(const std::string& s) {
    std::size_t width = 0;
    for (unsigned char ch : s) {
      if ((ch & 0xC0) != 0x80) ++width;
    }
    return width;
  }
};

std::string join(std::span<const std::string> parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string render_summary_table(std::span<const AgentSummary> summaries,
                                 const ParetoResult& pareto, TableFormat format,
                                 const SummaryRenderOptions& options) {
  if (summaries.empty()) {
    throw Error::domain("render_summary_table: no summaries");
  }
  const std::string r_header = "R@" + std::to_string(options.reliability_k);

  Table table;
  if (format == TableFormat::Csv) {
    table.headers = {"agent",     "eff_pct",  "cost_usd",
                     "cna",       "latency_s", "pas",
                     "r_at_" + std::to_string(options.reliability_k) + "_pct",
                     "scr_pct",   "cps_usd",  "inj_res_pct",
                     "composite", "on_frontier"};
  } else {
    table.headers = {"Agent", "Eff. (%)", "Cost ($)", "CNA",
                     "Lat. (s)", "PAS", r_header + " (%)", "CLEAR"};
  }

  for (const AgentSummary& s : summaries) {
    const bool starred = pareto.on_frontier(s.agent_id);
    std::vector<std::string> row;
    if (format == TableFormat::Csv) {
      row.push_back(s.agent_id);
    } else {
      row.push_back(starred ? s.agent_id + "*" : s.agent_id);
    }
    row.push_back(percent1(s.efficacy));
    row.push_back(format_fixed(s.mean_cost_usd, 2));
    row.push_back(opt_cell(s.cna, 1, format));
    row.push_back(format_fixed(s.mean_latency_s, 1));
    row.push_back(opt_cell(s.pas, 2, format));
    auto r_it = s.pass_at.find(options.reliability_k);
    if (r_it == s.pass_at.end()) {
      row.push_back(format == TableFormat::Csv ? "" : kMissingCell);
    } else {
      row.push_back(percent1(r_it->second));
    }
    if (format == TableFormat::Csv) {
      row.push_back(percent1(s.scr));
      row.push_back(opt_cell(s.cps_usd, 2, format));
      std::optional<double> inj_pct;
      if (s.injection_resistance) inj_pct = *s.injection_resistance * 100.0;
      row.push_back(opt_cell(inj_pct, 1, format));
    }
    row.push_back(opt_cell(s.composite, 3, format));
    if (format == TableFormat::Csv) {
      row.push_back(starred ? "1" : "0");
    }
    table.rows.push_back(std::move(row));
    table.bold_rows.push_back(starred);
  }

  if (format != TableFormat::Csv) {
    std::vector<std::string> dim_names;
    for (const ParetoDimension& d : pareto.dimensions) dim_names.push_back(d.name);
    table.notes.push_back("* Pareto frontier over {" + join(dim_names, ", ") + "}.");
    table.notes.push_back(r_header + ": pass@k, " + to_string(options.semantics) +
                          " semantics.");
    if (options.expected_frontier) {
      std::vector<std::string> expected = *options.expected_frontier;
      std::sort(expected.begin(), expected.end());
      std::vector<std::string> computed = pareto.frontier();
      std::sort(computed.begin(), computed.end());
      if (expected != computed) {
        table.notes.push_back("WARNING: computed frontier {" + join(computed, ", ") +
                              "} differs from the expected frontier {" +
                              join(expected, ", ") + "}.");
      }
    }
  }
  return table.render(format, options.color);
}

std::string render_domain_table(const BreakdownResult& breakdown,
                                TableFormat format) {
  if (breakdown.agents.empty()) {
    throw Error::domain("render_domain_table: no agents");
  }

  // Domains that appear for at least one agent, in canonical order.
  std::vector<Domain> domains;
  for (Domain d : all_domains()) {
    for (const AgentDomainBreakdown& agent : breakdown.agents) {
      if (agent.by_domain.contains(d)) {
        domains.push_back(d);
        break;
      }
    }
  }

  Table table;
  if (format == TableFormat::Csv) {
    table.headers = {"domain", "agent", "task_count", "eff_pct", "pas"};
    auto add_rows = [&](const std::string& domain_label,
                        auto&& stats_of_agent) {
      for (const AgentDomainBreakdown& agent : breakdown.agents) {
        const DomainStats* stats = stats_of_agent(agent);
        if (!stats) continue;
        table.rows.push_back({domain_label, agent.agent_id,
                              std::to_string(stats->task_count),
                              percent1(stats->efficacy),
                              opt_cell(stats->pas, 2, format)});
      }
    };
    for (Domain d : domains) {
      add_rows(to_string(d), [&](const AgentDomainBreakdown& a) -> const DomainStats* {
        auto it = a.by_domain.find(d);
        return it == a.by_domain.end() ? nullptr : &it->second;
      });
    }
    add_rows("overall",
             [](const AgentDomainBreakdown& a) { return &a.overall; });
  } else {
    table.headers = {"Domain"};
    for (const AgentDomainBreakdown& agent : breakdown.agents) {
      table.headers.push_back(agent.agent_id + " Eff. (%)");
      table.headers.push_back(agent.agent_id + " PAS");
    }
    auto add_row = [&](const std::string& label, auto&& stats_of_agent) {
      std::vector<std::string> row = {label};
      for (const AgentDomainBreakdown& agent : breakdown.agents) {
        const DomainStats* stats = stats_of_agent(agent);
        if (!stats) {
          row.push_back(kMissingCell);
          row.push_back(kMissingCell);
        } else {
          row.push_back(percent1(stats->efficacy));
          row.push_back(opt_cell(stats->pas, 2, format));
        }
      }
      table.rows.push_back(std::move(row));
    };
    for (Domain d : domains) {
      add_row(to_string(d), [&](const AgentDomainBreakdown& a) -> const DomainStats* {
        auto it = a.by_domain.find(d);
        return it == a.by_domain.end() ? nullptr : &it->second;
      });
    }
    add_row("Overall",
            [](const AgentDomainBreakdown& a) { return &a.overall; });
    for (const std::string& warning : breakdown.warnings) {
      table.notes.push_back("note: " + warning);
    }
  }
  return table.render(format, false);
}

std::string render_cost_latency_table(std::span<const RunRecord> records,
                                      const PricingTable& pricing,
                                      TableFormat format) {
  std::vector<std::string> agent_order;
  std::map<std::string, std::vector<const RunRecord*>> by_agent;
  for (const RunRecord& r : records) {
    if (r.trial_index != 0) continue;
    if (!by_agent.contains(r.agent_id)) agent_order.push_back(r.agent_id);
    by_agent[r.agent_id].push_back(&r);
  }
  if (agent_order.empty()) {
    throw Error::domain("render_cost_latency_table: no trial-0 records");
  }

  Table table;
  if (format == TableFormat::Csv) {
    table.headers = {"agent",         "input_tokens_k", "output_tokens_k",
                     "mean_cost_usd", "plan_s",         "exec_s",
                     "reflect_s"};
  } else {
    table.headers = {"Agent",    "Input Tok.", "Output Tok.", "Total Cost",
                     "Plan (s)", "Exec (s)",   "Reflect (s)"};
  }

  for (const std::string& agent_id : agent_order) {
    const auto& agent_records = by_agent[agent_id];
    const auto n = static_cast<double>(agent_records.size());
    double in_tok = 0, out_tok = 0, cost = 0, plan = 0, exec = 0, reflect = 0;
    for (const RunRecord* r : agent_records) {
      in_tok += static_cast<double>(r->input_tokens);
      out_tok += static_cast<double>(r->output_tokens);
      cost += cost_of_run(*r, pricing);
      plan += r->latency_plan_s;
      exec += r->latency_exec_s;
      reflect += r->latency_reflect_s;
    }
    const std::string in_k = format_fixed(in_tok / n / 1000.0, 1);
    const std::string out_k = format_fixed(out_tok / n / 1000.0, 1);
    const std::string cost_str = format_fixed(cost / n, 2);
    std::vector<std::string> row = {agent_id};
    if (format == TableFormat::Csv) {
      row.insert(row.end(), {in_k, out_k, cost_str});
    } else {
      row.insert(row.end(), {in_k + "K", out_k + "K", "$" + cost_str});
    }
    row.push_back(format_fixed(plan / n, 1));
    row.push_back(format_fixed(exec / n, 1));
    row.push_back(format_fixed(reflect / n, 1));
    table.rows.push_back(std::move(row));
  }
  return table.render(format, false);
}

std::string render_supplementary_table(std::span<const AgentSummary> summaries,
                                       TableFormat format) {
  if (summaries.empty()) {
    throw Error::domain("render_supplementary_table: no summaries");
  }
  Table table;
  if (format == TableFormat::Csv) {
    table.headers = {"agent", "cps_usd", "scr_pct", "inj_res_pct"};
  } else {
    table.headers = {"Agent", "CPS ($)", "SCR (%)", "Inj. Res. (%)"};
  }
  for (const AgentSummary& s : summaries) {
    std::optional<double> inj_pct;
    if (s.injection_resistance) inj_pct = *s.injection_resistance * 100.0;
    table.rows.push_back({s.agent_id, opt_cell(s.cps_usd, 2, format),
                          percent1(s.scr), opt_cell(inj_pct, 1, format)});
  }
  return table.render(format, false);
}

std::string render_correlation_table(std::span<const CorrelationRow> rows,
                                     TableFormat format) {
  if (rows.empty()) {
    throw Error::domain("render_correlation_table: no rows");
  }
  const bool with_ci =
      std::any_of(rows.begin(), rows.end(), [](const CorrelationRow& r) {
        return r.pearson_ci.has_value() || r.spearman_ci.has_value();
      });

  auto display_name = [](const std::string& approach) -> std::string {
    if (approach == "efficacy_only") return "Efficacy Only";
    if (approach == "efficacy_cost") return "Efficacy + Cost";
    if (approach == "clear") return "CLEAR (all 5 dimensions)";
    return approach;
  };

  Table table;
  if (format == TableFormat::Csv) {
    table.headers = {"approach", "pearson", "spearman"};
    if (with_ci) {
      table.headers = {"approach",        "pearson",         "pearson_ci_low",
                       "pearson_ci_high", "spearman",        "spearman_ci_low",
                       "spearman_ci_high"};
    }
    for (const CorrelationRow& r : rows) {
      std::vector<std::string> row = {r.approach, format_fixed(r.pearson, 2)};
      if (with_ci) {
        row.push_back(r.pearson_ci ? format_fixed(r.pearson_ci->first, 2) : "");
        row.push_back(r.pearson_ci ? format_fixed(r.pearson_ci->second, 2) : "");
      }
      row.push_back(format_fixed(r.spearman, 2));
      if (with_ci) {
        row.push_back(r.spearman_ci ? format_fixed(r.spearman_ci->first, 2) : "");
        row.push_back(r.spearman_ci ? format_fixed(r.spearman_ci->second, 2) : "");
      }
      table.rows.push_back(std::move(row));
    }
  } else {
    table.headers = {"Evaluation Approach", "Pearson", "Spearman"};
    for (const CorrelationRow& r : rows) {
      auto cell = [&](double value, const std::optional<std::pair<double, double>>& ci) {
        std::string text = format_fixed(value, 2);
        if (ci) {
          text += " (" + format_fixed(ci->first, 2) + ", " +
                  format_fixed(ci->second, 2) + ")";
        }
        return text;
      };
      table.rows.push_back({display_name(r.approach), cell(r.pearson, r.pearson_ci),
                            cell(r.spearman, r.spearman_ci)});
    }
    if (with_ci) {
      table.notes.push_back("Parenthesized ranges are 95% bootstrap confidence intervals.");
    }
  }
  return table.render(format, false);
}

}  // namespace clearbench
