#include "clearbench/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "clearbench/rng.hpp"

namespace clearbench {

void check_sample(const PairedSample& sample) {
  if (sample.points.size() < 3) {
    throw Error::domain("degenerate sample: need at least 3 paired points, got " +
                        std::to_string(sample.points.size()));
  }
  std::set<std::string> subjects;
  for (const PairedPoint& p : sample.points) {
    if (!subjects.insert(p.subject_id).second) {
      throw Error::domain("duplicated subject_id \"" + p.subject_id +
                          "\" in paired sample");
    }
  }
}

namespace {

double pearson_xy(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error::domain("degenerate sample: zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::vector<double>, std::vector<double>> split_xy(
    const PairedSample& sample) {
  std::vector<double> x, y;
  x.reserve(sample.points.size());
  y.reserve(sample.points.size());
  for (const PairedPoint& p : sample.points) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

double pearson(const PairedSample& sample) {
  check_sample(sample);
  auto [x, y] = split_xy(sample);
  return pearson_xy(x, y);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(values.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean 1-based rank
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman(const PairedSample& sample) {
  check_sample(sample);
  auto [x, y] = split_xy(sample);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson_xy(rx, ry);
}

double krippendorff_alpha(std::span<const ExpertRating> ratings,
                          AlphaMetric metric) {
  // unit = (agent, task); collect each unit's scores
  std::map<std::pair<std::string, std::string>, std::vector<int>> units;
  for (const ExpertRating& r : ratings) {
    if (r.score < 1 || r.score > 5) {
      throw Error::domain("krippendorff_alpha: score " + std::to_string(r.score) +
                          " outside the 1..5 scale");
    }
    units[{r.agent_id, r.task_id}].push_back(r.score);
  }

  constexpr int kCategories = 5;  // scores are 1..5
  double coincidence[kCategories][kCategories] = {};
  bool any_pairable = false;
  for (const auto& [unit, scores] : units) {
    const auto m = static_cast<double>(scores.size());
    if (scores.size() < 2) continue;
    any_pairable = true;
    for (std::size_t a = 0; a < scores.size(); ++a) {
      for (std::size_t b = 0; b < scores.size(); ++b) {
        if (a == b) continue;
        coincidence[scores[a] - 1][scores[b] - 1] += 1.0 / (m - 1.0);
      }
    }
  }
  if (!any_pairable) {
    throw Error::domain(
        "krippendorff_alpha: no unit was rated by two or more raters");
  }

  double category_totals[kCategories] = {};
  double n_total = 0.0;
  for (int c = 0; c < kCategories; ++c) {
    for (int k = 0; k < kCategories; ++k) category_totals[c] += coincidence[c][k];
    n_total += category_totals[c];
  }

  auto delta_sq = [&](int c, int k) -> double {
    if (metric == AlphaMetric::Interval) {
      const double d = static_cast<double>(c - k);
      return d * d;
    }
    // ordinal: (sum of category totals between c and k, inclusive, minus
    // half the two endpoints) squared
    const int lo = std::min(c, k);
    const int hi = std::max(c, k);
    double between = 0.0;
    for (int g = lo; g <= hi; ++g) between += category_totals[g];
    between -= (category_totals[c] + category_totals[k]) / 2.0;
    return between * between;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (int c = 0; c < kCategories; ++c) {
    for (int k = 0; k < kCategories; ++k) {
      observed += coincidence[c][k] * delta_sq(c, k);
      expected += category_totals[c] * category_totals[k] * delta_sq(c, k);
    }
  }
  if (observed == 0.0) return 1.0;  // perfect agreement, even when expected == 0
  observed /= n_total;
  expected /= n_total * (n_total - 1.0);
  return 1.0 - observed / expected;
}

BootstrapResult bootstrap_ci(const PairedSample& sample,
                             CorrelationStatistic statistic, int resamples,
                             std::uint64_t seed, ExecMode mode) {
  check_sample(sample);
  if (resamples < kBootstrapMinResamples) {
    throw Error::domain("bootstrap_ci: resamples must be at least " +
                        std::to_string(kBootstrapMinResamples));
  }
  auto [x, y] = split_xy(sample);
  const std::size_t n = x.size();

  std::vector<double> values(static_cast<std::size_t>(resamples), 0.0);
  std::vector<int> redraws(static_cast<std::size_t>(resamples), 0);
  std::atomic<bool> failed{false};
  std::exception_ptr failure;

  for_each_index(values.size(), mode, [&](std::size_t i) {
    try {
      std::vector<double> rx(n), ry(n);
      for (int attempt = 0;; ++attempt) {
        if (attempt >= kBootstrapRedrawLimit) {
          throw Error::domain(
              "bootstrap_ci: resample stayed degenerate after " +
              std::to_string(kBootstrapRedrawLimit) + " redraws");
        }
        Rng rng = Rng::substream(
            seed, i * static_cast<std::uint64_t>(kBootstrapRedrawLimit) +
                      static_cast<std::uint64_t>(attempt));
        for (std::size_t t = 0; t < n; ++t) {
          const auto pick = static_cast<std::size_t>(rng.next_below(n));
          rx[t] = x[pick];
          ry[t] = y[pick];
        }
        try {
          if (statistic == CorrelationStatistic::Pearson) {
            values[i] = pearson_xy(rx, ry);
          } else {
            const std::vector<double> rrx = average_ranks(rx);
            const std::vector<double> rry = average_ranks(ry);
            values[i] = pearson_xy(rrx, rry);
          }
          redraws[i] = attempt;
          break;
        } catch (const Error&) {
          continue;  // degenerate resample: redraw from the next substream
        }
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  BootstrapResult result;
  result.resamples = resamples;
  result.degenerate_redraws = std::accumulate(redraws.begin(), redraws.end(), 0);

  std::sort(values.begin(), values.end());
  auto percentile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  result.low = std::clamp(percentile(0.025), -1.0, 1.0);
  result.high = std::clamp(percentile(0.975), -1.0, 1.0);
  return result;
}

}  // namespace clearbench
