#include "clearbench/reliability.hpp"

#include <algorithm>
#include <atomic>

namespace clearbench {

std::string to_string(PassKSemantics semantics) {
  switch (semantics) {
    case PassKSemantics::Window: return "window";
    case PassKSemantics::Prefix: return "prefix";
    case PassKSemantics::Combinatorial: return "combinatorial";
  }
  throw Error::domain("invalid pass@k semantics enum value");
}

PassKSemantics passk_semantics_from_string(const std::string& name) {
  if (name == "window") return PassKSemantics::Window;
  if (name == "prefix") return PassKSemantics::Prefix;
  if (name == "combinatorial") return PassKSemantics::Combinatorial;
  throw Error::domain("unknown pass@k semantics \"" + name +
                      "\" (expected window, prefix, or combinatorial)");
}

TrialMatrix build_trial_matrix(
    std::span<const RunRecord> records,
    const std::optional<std::set<std::string>>& subset) {
  TrialMatrix matrix;
  std::map<std::string, std::vector<std::pair<int, bool>>> staged;
  for (const RunRecord& r : records) {
    if (matrix.agent_id.empty()) matrix.agent_id = r.agent_id;
    if (subset && !subset->contains(r.task_id)) continue;
    staged[r.task_id].emplace_back(r.trial_index, r.success);
  }
  if (subset) {
    for (const std::string& task_id : *subset) {
      if (!staged.contains(task_id)) {
        throw Error::domain("reliability subset task \"" + task_id +
                            "\" has no records for agent \"" + matrix.agent_id +
                            "\"");
      }
    }
  }
  for (auto& [task_id, trials] : staged) {
    std::sort(trials.begin(), trials.end());
    std::vector<std::uint8_t> sequence;
    sequence.reserve(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (trials[i].first != static_cast<int>(i)) {
        throw Error::domain("task \"" + task_id + "\" of agent \"" +
                            matrix.agent_id +
                            "\" has duplicate or missing trial indices");
      }
      sequence.push_back(trials[i].second ? 1 : 0);
    }
    matrix.sequences.emplace(task_id, std::move(sequence));
  }
  return matrix;
}

namespace {

// C(n, k) is exact in double well past n = 10; callers stay tiny.
double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace

double task_pass_at_k(std::span<const std::uint8_t> sequence, int k,
                      PassKSemantics semantics) {
  if (k <= 0) {
    throw Error::domain("pass@k: k must be positive");
  }
  const auto n = static_cast<std::int64_t>(sequence.size());
  if (k > n) {
    throw Error::domain("pass@k: insufficient trials (k=" + std::to_string(k) +
                        ", trials=" + std::to_string(n) + ")");
  }
  switch (semantics) {
    case PassKSemantics::Window: {
      int run = 0;
      for (std::uint8_t s : sequence) {
        run = s ? run + 1 : 0;
        if (run >= k) return 1.0;
      }
      return 0.0;
    }
    case PassKSemantics::Prefix: {
      for (int i = 0; i < k; ++i) {
        if (!sequence[static_cast<std::size_t>(i)]) return 0.0;
      }
      return 1.0;
    }
    case PassKSemantics::Combinatorial: {
      std::int64_t successes = 0;
      for (std::uint8_t s : sequence) successes += s ? 1 : 0;
      return binomial(successes, k) / binomial(n, k);
    }
  }
  throw Error::domain("invalid pass@k semantics enum value");
}

double pass_at_k(const TrialMatrix& matrix, int k, PassKSemantics semantics,
                 ExecMode mode) {
  if (matrix.sequences.empty()) {
    throw Error::domain("pass@k: empty trial matrix");
  }
  std::vector<const std::vector<std::uint8_t>*> sequences;
  sequences.reserve(matrix.sequences.size());
  for (const auto& [task_id, sequence] : matrix.sequences) {
    sequences.push_back(&sequence);
  }
  std::vector<double> per_task(sequences.size(), 0.0);
  // Errors inside the loop body must not escape an OpenMP region; stash one
  // and rethrow after the join.
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  for_each_index(sequences.size(), mode, [&](std::size_t i) {
    try {
      per_task[i] = task_pass_at_k(*sequences[i], k, semantics);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (double v : per_task) sum += v;  // fixed order, independent of mode
  return sum / static_cast<double>(per_task.size());
}

double consistency_drop(double pass1, double passk) {
  if (pass1 <= 0.0) {
    throw Error::domain("consistency_drop: pass@1 is zero");
  }
  return (pass1 - passk) / pass1;
}

}  // namespace clearbench
