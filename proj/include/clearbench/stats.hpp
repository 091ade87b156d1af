#ifndef CLEARBENCH_STATS_HPP
#define CLEARBENCH_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clearbench/model.hpp"
#include "clearbench/parallel.hpp"

namespace clearbench {

struct PairedPoint {
  std::string subject_id;
  double x = 0.0;
  double y = 0.0;
};

// Correlation input; subjects must be unique and at least 3 for any
// coefficient to be meaningful.
struct PairedSample {
  std::vector<PairedPoint> points;
};

// Checks the PairedSample invariants (size >= 3, no duplicate subject_id)
// and throws on violation.
void check_sample(const PairedSample& sample);

// Product-moment coefficient. The denominator is computed as
// sqrt(sum_dx2 * sum_dy2) with a single square root so rational results
// (e.g. 1/2) come out exact. Throws "degenerate sample" when either side
// has zero variance.
double pearson(const PairedSample& sample);

// Fractional (average) ranks; ties share the mean of their rank positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson applied to average ranks of x and y.
double spearman(const PairedSample& sample);

enum class AlphaMetric { Ordinal, Interval };

// Krippendorff's alpha from the standard coincidence-matrix formulation,
// units = (agent_id, task_id), categories = the 1..5 scores. Units rated
// fewer than twice are ignored. Perfect agreement short-circuits to 1.0
// (including the all-identical-scores case where expected disagreement is
// zero). Throws when no unit was rated by two or more raters.
double krippendorff_alpha(std::span<const ExpertRating> ratings,
                          AlphaMetric metric = AlphaMetric::Ordinal);

enum class CorrelationStatistic { Pearson, Spearman };

struct BootstrapResult {
  double low = 0.0;   // 2.5th percentile
  double high = 0.0;  // 97.5th percentile
  int resamples = 0;
  int degenerate_redraws = 0;  // zero-variance resamples that were redrawn
};

// Seeded percentile bootstrap for a correlation coefficient. Resample i,
// attempt j draws its indices from Rng::substream(seed, i * kRedrawLimit + j),
// so the value set is a pure function of (sample, seed, resamples) and is
// identical in Serial and Parallel mode. Degenerate resamples are redrawn
// (counted in the result); a sample that keeps producing degenerate
// resamples past the redraw limit throws.
BootstrapResult bootstrap_ci(const PairedSample& sample,
                             CorrelationStatistic statistic, int resamples,
                             std::uint64_t seed,
                             ExecMode mode = ExecMode::Serial);

inline constexpr int kBootstrapMinResamples = 1000;
inline constexpr int kBootstrapRedrawLimit = 100;

}  // namespace clearbench

#endif  // CLEARBENCH_STATS_HPP
