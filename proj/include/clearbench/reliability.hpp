#ifndef CLEARBENCH_RELIABILITY_HPP
#define CLEARBENCH_RELIABILITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "clearbench/model.hpp"
#include "clearbench/parallel.hpp"

namespace clearbench {

// pass@k counting modes. Window follows the "k consecutive successes"
// wording and is the default; Combinatorial is the subset-expectation
// variant some harnesses use. Reports always name the mode in the pass@k
// footer so numbers are never compared across modes by accident.
enum class PassKSemantics { Window, Prefix, Combinatorial };

std::string to_string(PassKSemantics semantics);
PassKSemantics passk_semantics_from_string(const std::string& name);

// Ordered success sequences (by trial_index, gap-free) per task, for one
// agent. std::map keeps task iteration deterministic.
struct TrialMatrix {
  std::string agent_id;
  std::map<std::string, std::vector<std::uint8_t>> sequences;
};

// Groups one agent's records into per-task success sequences. When `subset`
// is given, only those task ids are included (each must be present).
// Throws on trial-index gaps or duplicates.
TrialMatrix build_trial_matrix(
    std::span<const RunRecord> records,
    const std::optional<std::set<std::string>>& subset = std::nullopt);

// Per-task pass@k for one success sequence.
//   Window        1.0 iff some k consecutive entries are all successes
//   Prefix        1.0 iff the first k entries are all successes
//   Combinatorial C(s, k) / C(n, k) with s successes out of n trials
// Throws "insufficient trials" when k exceeds the sequence length.
double task_pass_at_k(std::span<const std::uint8_t> sequence, int k,
                      PassKSemantics semantics);

// Mean of task_pass_at_k over every task in the matrix. Per-task values are
// computed independently (parallel in Parallel mode) and reduced in task
// order, so both modes give bit-identical results.
double pass_at_k(const TrialMatrix& matrix, int k, PassKSemantics semantics,
                 ExecMode mode = ExecMode::Serial);

// Relative decline from pass@1 to pass@k: (pass1 - passk) / pass1.
// Throws when pass1 is zero.
double consistency_drop(double pass1, double passk);

}  // namespace clearbench

#endif  // CLEARBENCH_RELIABILITY_HPP
