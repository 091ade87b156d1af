#include "clearbench/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

#include "CLI11.hpp"

#include "clearbench/analysis.hpp"
#include "clearbench/ingestion.hpp"
#include "clearbench/metrics.hpp"
#include "clearbench/pipeline.hpp"
#include "clearbench/report.hpp"
#include "clearbench/simgen.hpp"
#include "clearbench/stats.hpp"

namespace clearbench {

namespace {

namespace fs = std::filesystem;

bool color_enabled(const std::ostream& out) {
#if defined(__unix__) || defined(__APPLE__)
  return &out == &std::cout && isatty(STDOUT_FILENO) != 0 &&
         std::getenv("CLEAR_NO_COLOR") == nullptr;
#else
  (void)out;
  return false;
#endif
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw Error::io("cannot write " + path.string());
  }
  stream << content;
  if (!stream) {
    throw Error::io("failed while writing " + path.string());
  }
}

struct LoadedDataset {
  Dataset dataset;
  std::vector<LineIssue> line_errors;
  std::vector<std::string> warnings;
};

LoadedDataset load_inputs(const std::string& runs_path,
                          const std::string& suite_path,
                          const std::string& pricing_path,
                          const std::string& weights_path) {
  LoadedDataset loaded;
  RunsLoadResult runs = load_runs(runs_path);
  loaded.dataset.records = std::move(runs.records);
  loaded.line_errors = std::move(runs.errors);
  loaded.warnings = std::move(runs.warnings);

  SuiteLoadResult suite = load_suite(suite_path);
  loaded.dataset.suite = std::move(suite.tasks);
  loaded.dataset.profiles = std::move(suite.profiles);

  if (!pricing_path.empty()) {
    loaded.dataset.pricing = load_pricing(pricing_path);
  }
  loaded.dataset.weights = weights_path.empty() ? builtin_weight_profiles()
                                                : load_weights(weights_path);
  return loaded;
}

// Prints malformed lines and validation findings; returns the total count.
std::size_t report_findings(const LoadedDataset& loaded,
                            const std::vector<ValidationIssue>& issues,
                            std::ostream& out) {
  for (const LineIssue& e : loaded.line_errors) {
    out << "line " << e.line << ": " << e.message << "\n";
  }
  for (const ValidationIssue& issue : issues) {
    out << issue.record_id << ": " << issue.rule << " (" << issue.detail << ")\n";
  }
  return loaded.line_errors.size() + issues.size();
}

// ----------------------------------------------------------------- validate

struct ValidateParams {
  std::string runs, suite;
};

int cmd_validate(const ValidateParams& params, std::ostream& out) {
  LoadedDataset loaded = load_inputs(params.runs, params.suite, "", "");
  const std::vector<ValidationIssue> issues =
      validate_dataset(loaded.dataset.records, loaded.dataset.suite);
  const std::size_t findings = report_findings(loaded, issues, out);
  if (!loaded.line_errors.empty()) {
    out << loaded.line_errors.size() << " malformed lines\n";
  }
  out << issues.size() << " violations\n";
  return findings == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateParams {
  std::string runs, suite, pricing, weights_file, reliability_tasks, out_dir;
  std::string weights = "equal";
  std::string semantics = "window";
  std::vector<int> ks = {1, 3, 5, 8};
  std::vector<std::string> expected_frontier;
  bool serial = false;
};

int cmd_evaluate(const EvaluateParams& params, std::ostream& out,
                 std::ostream& err) {
  LoadedDataset loaded =
      load_inputs(params.runs, params.suite, params.pricing, params.weights_file);
  const std::vector<ValidationIssue> issues =
      validate_dataset(loaded.dataset.records, loaded.dataset.suite);
  if (report_findings(loaded, issues, err) > 0) {
    err << "dataset failed validation\n";
    return 1;
  }
  for (const std::string& w : loaded.warnings) err << "warning: " << w << "\n";

  EvaluateOptions options;
  options.ks = params.ks;
  options.semantics = passk_semantics_from_string(params.semantics);
  options.weight_profile = params.weights;
  options.mode = params.serial ? ExecMode::Serial : ExecMode::Parallel;
  if (!params.reliability_tasks.empty()) {
    options.reliability_tasks = load_task_list(params.reliability_tasks);
  }

  const EvaluationResult result = evaluate(loaded.dataset, options);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";

  SummaryRenderOptions render;
  render.semantics = options.semantics;
  render.reliability_k = *std::max_element(params.ks.begin(), params.ks.end());
  if (!params.expected_frontier.empty()) {
    render.expected_frontier = params.expected_frontier;
  }

  const fs::path out_dir(params.out_dir);
  fs::create_directories(out_dir);

  std::ostringstream report;
  report << "# CLEAR evaluation report\n\n";
  report << "Weight profile: " << params.weights << "\n\n";
  report << "## Performance summary\n\n";
  report << render_summary_table(result.summaries, result.pareto,
                                 TableFormat::Markdown, render);
  report << "\n## Cost per success, SLA compliance, injection resistance\n\n";
  report << render_supplementary_table(result.summaries, TableFormat::Markdown);
  report << "\n## Domain breakdown\n\n";
  report << render_domain_table(result.breakdown, TableFormat::Markdown);
  report << "\n## Cost and latency decomposition\n\n";
  report << render_cost_latency_table(loaded.dataset.records,
                                      loaded.dataset.pricing,
                                      TableFormat::Markdown);
  write_text_file(out_dir / "report.md", report.str());
  write_text_file(out_dir / "summary.csv",
                  render_summary_table(result.summaries, result.pareto,
                                       TableFormat::Csv, render));
  write_text_file(out_dir / "domains.csv",
                  render_domain_table(result.breakdown, TableFormat::Csv));
  write_text_file(out_dir / "cost_latency.csv",
                  render_cost_latency_table(loaded.dataset.records,
                                            loaded.dataset.pricing,
                                            TableFormat::Csv));

  SummaryRenderOptions text_render = render;
  text_render.color = color_enabled(out);
  out << render_summary_table(result.summaries, result.pareto, TableFormat::Text,
                              text_render);
  out << "\nreport written to " << (out_dir / "report.md").string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- pareto

struct ParetoParams {
  std::string summary, runs, suite, pricing;
  std::vector<std::string> dims = {"cost", "efficacy", "latency", "pas",
                                   "reliability"};
  std::vector<std::string> expected_frontier;
};

int cmd_pareto(const ParetoParams& params, std::ostream& out, std::ostream& err) {
  std::vector<AgentSummary> summaries;
  if (!params.summary.empty()) {
    summaries = parse_summary_csv(params.summary).first;
  } else if (!params.runs.empty()) {
    LoadedDataset loaded = load_inputs(params.runs, params.suite, params.pricing, "");
    const std::vector<ValidationIssue> issues =
        validate_dataset(loaded.dataset.records, loaded.dataset.suite);
    if (report_findings(loaded, issues, err) > 0) {
      err << "dataset failed validation\n";
      return 1;
    }
    summaries = summarize_agents(loaded.dataset, EvaluateOptions{});
  } else {
    err << "pareto requires --summary or --runs/--suite/--pricing\n";
    return 1;
  }

  const std::vector<ParetoDimension> dims = resolve_pareto_dimensions(params.dims);
  const ParetoResult pareto = pareto_frontier(summaries, dims);

  std::vector<std::string> names;
  for (const ParetoDimension& d : dims) {
    names.push_back(d.name + (d.direction == Direction::LowerBetter ? " (min)"
                                                                    : " (max)"));
  }
  out << "dimensions: ";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << names[i] << (i + 1 < names.size() ? ", " : "\n");
  }
  for (const ParetoEntry& entry : pareto.entries) {
    if (entry.on_frontier) {
      out << entry.agent_id << ": on frontier\n";
    } else {
      out << entry.agent_id << ": dominated by ";
      for (std::size_t i = 0; i < entry.dominated_by.size(); ++i) {
        out << entry.dominated_by[i]
            << (i + 1 < entry.dominated_by.size() ? ", " : "\n");
      }
    }
  }

  if (!params.expected_frontier.empty()) {
    std::vector<std::string> expected = params.expected_frontier;
    std::vector<std::string> computed = pareto.frontier();
    std::sort(expected.begin(), expected.end());
    std::sort(computed.begin(), computed.end());
    if (expected != computed) {
      out << "WARNING: computed frontier differs from the expected frontier\n";
    } else {
      out << "computed frontier matches the expected frontier\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- correlate

struct CorrelateParams {
  std::string summary, ratings, weights_file, out_dir;
  std::string weights = "equal";
  std::vector<std::string> approaches = {"efficacy_only", "efficacy_cost", "clear"};
  int bootstrap = 0;
  std::uint64_t seed = 0;
  bool serial = false;
};

int cmd_correlate(const CorrelateParams& params, std::ostream& out,
                  std::ostream& err) {
  const auto [summaries, k] = parse_summary_csv(params.summary);
  const std::vector<ExpertRating> ratings = load_ratings(params.ratings);

  const std::map<std::string, WeightProfile> weight_profiles =
      params.weights_file.empty() ? builtin_weight_profiles()
                                  : load_weights(params.weights_file);
  auto weights = weight_profiles.find(params.weights);
  if (weights == weight_profiles.end()) {
    throw Error::domain("unknown weight profile \"" + params.weights + "\"");
  }

  // Per-agent mean expert rating across raters and tasks.
  std::map<std::string, std::pair<double, int>> rating_sums;
  for (const ExpertRating& r : ratings) {
    auto& [sum, count] = rating_sums[r.agent_id];
    sum += static_cast<double>(r.score);
    ++count;
  }
  std::vector<AgentSummary> rated;
  for (const AgentSummary& s : summaries) {
    if (rating_sums.contains(s.agent_id)) {
      rated.push_back(s);
    } else {
      err << "warning: agent " << s.agent_id << " has no expert ratings; skipped\n";
    }
  }
  if (rated.size() < 3) {
    throw Error::domain("degenerate sample: fewer than 3 agents with ratings");
  }

  // Approach scores share the cohort's min-max bounds.
  std::vector<std::pair<std::string, double>> eff_values, cost_values;
  for (const AgentSummary& s : rated) {
    eff_values.emplace_back(s.agent_id, s.efficacy);
    cost_values.emplace_back(s.agent_id, s.mean_cost_usd);
  }
  const auto eff_norm = min_max_normalize(eff_values, Direction::HigherBetter);
  const auto cost_norm = min_max_normalize(cost_values, Direction::LowerBetter);
  const std::vector<NormalizedScores> normalized = normalize_cohort(rated);

  auto approach_score = [&](const std::string& approach, std::size_t i) -> double {
    if (approach == "efficacy_only") return rated[i].efficacy;
    if (approach == "efficacy_cost") {
      return 0.5 * eff_norm[i].second + 0.5 * cost_norm[i].second;
    }
    if (approach == "clear") return composite(normalized[i], weights->second);
    throw Error::domain("unknown evaluation approach \"" + approach +
                        "\" (expected efficacy_only, efficacy_cost, clear)");
  };

  const ExecMode mode = params.serial ? ExecMode::Serial : ExecMode::Parallel;
  std::vector<CorrelationRow> rows;
  for (const std::string& approach : params.approaches) {
    PairedSample sample;
    for (std::size_t i = 0; i < rated.size(); ++i) {
      const auto& [sum, count] = rating_sums[rated[i].agent_id];
      sample.points.push_back({rated[i].agent_id, approach_score(approach, i),
                               sum / static_cast<double>(count)});
    }
    CorrelationRow row;
    row.approach = approach;
    row.pearson = pearson(sample);
    row.spearman = spearman(sample);
    if (params.bootstrap > 0) {
      const BootstrapResult p = bootstrap_ci(
          sample, CorrelationStatistic::Pearson, params.bootstrap, params.seed, mode);
      const BootstrapResult s = bootstrap_ci(
          sample, CorrelationStatistic::Spearman, params.bootstrap, params.seed, mode);
      row.pearson_ci = {p.low, p.high};
      row.spearman_ci = {s.low, s.high};
    }
    rows.push_back(std::move(row));
  }

  out << render_correlation_table(rows, TableFormat::Text);
  if (!params.out_dir.empty()) {
    fs::create_directories(params.out_dir);
    write_text_file(fs::path(params.out_dir) / "correlation.csv",
                    render_correlation_table(rows, TableFormat::Csv));
  }
  return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateParams {
  std::string profiles, suite, out;
  int trials = 1;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateParams& params, std::ostream& out) {
  const std::vector<AgentProfileSpec> profiles = load_profiles(params.profiles);
  const SuiteLoadResult suite = load_suite(params.suite);
  const std::vector<RunRecord> records =
      generate(profiles, suite.tasks, params.trials, params.seed);
  write_runs(records, params.out);

  out << "wrote " << records.size() << " records to " << params.out << "\n";
  out << "ground truth:\n";
  for (const AgentProfileSpec& p : profiles) {
    out << "  " << p.agent_id << ": success_rate=" << format_fixed(p.success_rate, 4)
        << " autocorrelation=" << format_fixed(p.success_autocorrelation, 4)
        << " violation_rate=" << format_fixed(p.violation_rate, 4)
        << " attack_success_rate=" << format_fixed(p.attack_success_rate, 4) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ fixture

struct FixtureParams {
  std::string name = "reference";
  std::string out_dir;
};

int cmd_fixture(const FixtureParams& params, std::ostream& out) {
  Dataset dataset;
  if (params.name == "reference") {
    dataset = reference_fixture();
  } else if (params.name == "domains") {
    dataset = domain_reference_fixture();
  } else {
    throw Error::domain("unknown fixture \"" + params.name +
                        "\" (expected reference or domains)");
  }
  write_fixture_inputs(dataset, params.out_dir);
  out << "wrote runs.jsonl, suite.json, pricing.json, weights.json to "
      << params.out_dir << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"clearbench: multidimensional agent-run evaluation (CLEAR: "
               "Cost, Latency, Efficacy, Assurance, Reliability)"};
  app.require_subcommand(1);

  ValidateParams validate_params;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a run log against the suite and print violations");
  validate->add_option("--runs", validate_params.runs, "runs.jsonl path")->required();
  validate->add_option("--suite", validate_params.suite, "suite manifest path")->required();

  EvaluateParams evaluate_params;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Compute all CLEAR metrics and write the report files");
  evaluate->add_option("--runs", evaluate_params.runs, "runs.jsonl path")->required();
  evaluate->add_option("--suite", evaluate_params.suite, "suite manifest path")->required();
  evaluate->add_option("--pricing", evaluate_params.pricing, "pricing table path")->required();
  evaluate->add_option("--weights", evaluate_params.weights,
                       "weight profile name (default equal)");
  evaluate->add_option("--weights-file", evaluate_params.weights_file,
                       "named weight profiles (default: built-in equal, "
                       "financial_services, customer_facing)");
  evaluate->add_option("--reliability-tasks", evaluate_params.reliability_tasks,
                       "file listing the reliability subset, one task id per line");
  evaluate->add_option("--passk-semantics", evaluate_params.semantics,
                       "pass@k mode: window, prefix, or combinatorial");
  evaluate->add_option("--k", evaluate_params.ks, "pass@k values")->delimiter(',');
  evaluate->add_option("--expected-frontier", evaluate_params.expected_frontier,
                       "agent ids; the report flags divergence from this set")
      ->delimiter(',');
  evaluate->add_option("--out", evaluate_params.out_dir, "output directory")->required();
  evaluate->add_flag("--serial", evaluate_params.serial,
                     "disable parallel per-agent evaluation");

  ParetoParams pareto_params;
  CLI::App* pareto = app.add_subcommand(
      "pareto", "Print Pareto frontier membership and dominators");
  pareto->add_option("--summary", pareto_params.summary, "summary.csv from evaluate");
  pareto->add_option("--runs", pareto_params.runs, "runs.jsonl path");
  pareto->add_option("--suite", pareto_params.suite, "suite manifest path");
  pareto->add_option("--pricing", pareto_params.pricing, "pricing table path");
  pareto->add_option("--dims", pareto_params.dims,
                     "dimensions: cost, efficacy, latency, pas, reliability")
      ->delimiter(',');
  pareto->add_option("--expected-frontier", pareto_params.expected_frontier,
                     "agent ids to compare the computed frontier against")
      ->delimiter(',');

  CorrelateParams correlate_params;
  CLI::App* correlate = app.add_subcommand(
      "correlate",
      "Correlate evaluation approaches with expert ratings. Approaches: "
      "efficacy_only (raw efficacy), efficacy_cost (mean of min-max "
      "normalized efficacy and cost), clear (full composite)");
  correlate->add_option("--summary", correlate_params.summary, "summary.csv path")->required();
  correlate->add_option("--ratings", correlate_params.ratings, "ratings.csv path")->required();
  correlate->add_option("--approaches", correlate_params.approaches,
                        "subset of efficacy_only, efficacy_cost, clear")
      ->delimiter(',');
  correlate->add_option("--bootstrap", correlate_params.bootstrap,
                        "bootstrap resamples for 95% CIs (>= 1000; 0 disables)");
  correlate->add_option("--seed", correlate_params.seed, "bootstrap seed");
  correlate->add_option("--weights", correlate_params.weights,
                        "weight profile for the clear approach");
  correlate->add_option("--weights-file", correlate_params.weights_file,
                        "named weight profiles");
  correlate->add_option("--out", correlate_params.out_dir,
                        "directory for correlation.csv");
  correlate->add_flag("--serial", correlate_params.serial,
                      "disable parallel bootstrap resampling");

  SimulateParams simulate_params;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic run log with known ground truth");
  simulate->add_option("--profiles", simulate_params.profiles,
                       "agent profile spec file")->required();
  simulate->add_option("--suite", simulate_params.suite, "suite manifest path")->required();
  simulate->add_option("--trials", simulate_params.trials, "trials per task");
  simulate->add_option("--seed", simulate_params.seed, "generator seed");
  simulate->add_option("--out", simulate_params.out, "output runs.jsonl path")->required();

  FixtureParams fixture_params;
  CLI::App* fixture = app.add_subcommand(
      "fixture", "Write a built-in demo dataset (runs + suite + pricing + weights)");
  fixture->add_option("--name", fixture_params.name, "reference or domains");
  fixture->add_option("--out-dir", fixture_params.out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_params, out);
    if (evaluate->parsed()) return cmd_evaluate(evaluate_params, out, err);
    if (pareto->parsed()) return cmd_pareto(pareto_params, out, err);
    if (correlate->parsed()) return cmd_correlate(correlate_params, out, err);
    if (simulate->parsed()) return cmd_simulate(simulate_params, out);
    if (fixture->parsed()) return cmd_fixture(fixture_params, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::Io ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace clearbench
