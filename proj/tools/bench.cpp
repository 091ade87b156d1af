// Compares the serial reference path against the OpenMP path for the three
// parallel kernels (per-agent summaries, pass@k, bootstrap resampling) on a
// synthetic workload, and checks that both produce identical results.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "clearbench/ingestion.hpp"
#include "clearbench/parallel.hpp"
#include "clearbench/pipeline.hpp"
#include "clearbench/reliability.hpp"
#include "clearbench/rng.hpp"
#include "clearbench/simgen.hpp"
#include "clearbench/stats.hpp"

using namespace clearbench;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

Dataset synthetic_dataset(std::size_t tasks, int trials) {
  Dataset dataset;
  dataset.profiles = default_domain_profiles();

  std::vector<TaskSpec> suite;
  for (std::size_t t = 0; t < tasks; ++t) {
    TaskSpec task;
    task.task_id = "task-" + std::to_string(t);
    task.domain = all_domains()[t % all_domains().size()];
    task.subtype = "*";
    task.step_count = 5 + static_cast<int>(t % 11);
    for (const DomainProfile& p : dataset.profiles) {
      if (p.domain == task.domain) task.sla_seconds = p.resolve_sla("*");
    }
    suite.push_back(std::move(task));
  }
  dataset.suite = std::move(suite);

  std::vector<AgentProfileSpec> profiles;
  for (int a = 0; a < 8; ++a) {
    AgentProfileSpec p;
    p.agent_id = "agent-" + std::to_string(a);
    p.success_rate = 0.5 + 0.05 * a;
    p.success_autocorrelation = 0.1 * a / 8.0;
    p.input_tokens_mean = 20000 + 1000 * a;
    p.input_tokens_spread = 2000;
    p.output_tokens_mean = 4000;
    p.output_tokens_spread = 500;
    p.violation_rate = 0.05;
    p.attack_success_rate = 0.1;
    profiles.push_back(std::move(p));
  }
  dataset.records = generate(profiles, dataset.suite, trials, 12345);

  dataset.pricing.models["m"] = {0.01, 0.03};
  for (const AgentProfileSpec& p : profiles) {
    dataset.pricing.agent_model_map[p.agent_id] = {{"m", 1.0}};
  }
  dataset.weights = builtin_weight_profiles();
  return dataset;
}

void report(const char* kernel, double serial_s, double parallel_s, bool equal) {
  std::printf("%-22s serial=%8.4fs  parallel=%8.4fs  speedup=%5.2fx  identical=%s\n",
              kernel, serial_s, parallel_s, serial_s / parallel_s,
              equal ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t tasks = 20000;
  int trials = 8;
  int repeats = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--tasks" && i + 1 < argc) {
      tasks = static_cast<std::size_t>(std::stoull(argv[++i]));
    } else if (arg == "--trials" && i + 1 < argc) {
      trials = std::stoi(argv[++i]);
    } else if (arg == "--repeats" && i + 1 < argc) {
      repeats = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr,
                   "usage: clearbench_bench [--tasks N] [--trials N] [--repeats N]\n");
      return 2;
    }
  }

  std::printf("threads=%d tasks=%zu trials=%d repeats=%d\n\n", max_threads(),
              tasks, trials, repeats);

  const Dataset dataset = synthetic_dataset(tasks, trials);
  std::printf("dataset: %zu records, %zu agents\n\n", dataset.records.size(),
              dataset.pricing.agent_model_map.size());

  bool all_equal = true;

  {
    EvaluateOptions serial_opts;
    serial_opts.ks = {1, 3, trials};
    serial_opts.mode = ExecMode::Serial;
    EvaluateOptions parallel_opts = serial_opts;
    parallel_opts.mode = ExecMode::Parallel;

    std::vector<AgentSummary> serial_out, parallel_out;
    const double serial_s = time_best_of(
        repeats, [&] { serial_out = summarize_agents(dataset, serial_opts); });
    const double parallel_s = time_best_of(
        repeats, [&] { parallel_out = summarize_agents(dataset, parallel_opts); });

    bool equal = serial_out.size() == parallel_out.size();
    for (std::size_t i = 0; equal && i < serial_out.size(); ++i) {
      equal = serial_out[i].agent_id == parallel_out[i].agent_id &&
              serial_out[i].efficacy == parallel_out[i].efficacy &&
              serial_out[i].mean_cost_usd == parallel_out[i].mean_cost_usd &&
              serial_out[i].pass_at == parallel_out[i].pass_at;
    }
    all_equal = all_equal && equal;
    report("summarize_agents", serial_s, parallel_s, equal);
  }

  {
    std::vector<RunRecord> agent_records;
    for (const RunRecord& r : dataset.records) {
      if (r.agent_id == "agent-0") agent_records.push_back(r);
    }
    const TrialMatrix matrix = build_trial_matrix(agent_records);

    double serial_value = 0, parallel_value = 0;
    const double serial_s = time_best_of(repeats, [&] {
      serial_value =
          pass_at_k(matrix, trials / 2, PassKSemantics::Window, ExecMode::Serial);
    });
    const double parallel_s = time_best_of(repeats, [&] {
      parallel_value =
          pass_at_k(matrix, trials / 2, PassKSemantics::Window, ExecMode::Parallel);
    });
    const bool equal = serial_value == parallel_value;
    all_equal = all_equal && equal;
    report("pass_at_k", serial_s, parallel_s, equal);
  }

  {
    PairedSample sample;
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      const double x = rng.next_unit();
      sample.points.push_back(
          {"s" + std::to_string(i), x, x + 0.25 * rng.next_gaussian()});
    }
    const int resamples = 50000;

    BootstrapResult serial_out, parallel_out;
    const double serial_s = time_best_of(repeats, [&] {
      serial_out = bootstrap_ci(sample, CorrelationStatistic::Spearman, resamples,
                                99, ExecMode::Serial);
    });
    const double parallel_s = time_best_of(repeats, [&] {
      parallel_out = bootstrap_ci(sample, CorrelationStatistic::Spearman, resamples,
                                  99, ExecMode::Parallel);
    });
    const bool equal = serial_out.low == parallel_out.low &&
                       serial_out.high == parallel_out.high &&
                       serial_out.degenerate_redraws == parallel_out.degenerate_redraws;
    all_equal = all_equal && equal;
    report("bootstrap_ci", serial_s, parallel_s, equal);
  }

  if (!all_equal) {
    std::fprintf(stderr, "\nserial and parallel results diverged\n");
    return 1;
  }
  return 0;
}
