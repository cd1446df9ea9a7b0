#pragma once

#include <cstddef>
#include <cstdint>

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/dependence.hpp"

namespace ht2d {

enum class EstimatorMethod { Plain, Conditional };

const char* to_string(EstimatorMethod method);

// One Monte Carlo answer. std_err is the binomial formula
// sqrt(p (1 - p) / m) for the plain indicator estimators and the sample
// standard error of the per-path values for the conditional one.
struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  EstimatorMethod method = EstimatorMethod::Plain;

  bool operator==(const Estimate&) const = default;
};

// Discrete-time surplus model over a fixed horizon: capitals x and y are
// eaten by the weighted claim sums of `claims`, with `weights` drawn from
// streams disjoint from the claim streams.
struct RiskModelConfig {
  std::size_t n;
  SequenceModel claims;
  WeightModel weights;
  double x;
  double y;
};

enum class RuinKind {
  And,  // both coordinates breached somewhere in the horizon
  Max,  // some single epoch has both surpluses negative at once
};

// Indicator counts for the five path events, all evaluated on one shared
// path stream so that the pathwise orderings hold exactly:
//   final_sum <= running_max <= positive_sum and simultaneous <= running_max.
struct PathEventCounts {
  std::uint64_t final_sum = 0;     // S_n > x and T_n > y
  std::uint64_t coord_max = 0;     // max_k Theta_k X_k > x and the Y mirror
  std::uint64_t running_max = 0;   // max_k S_k > x and max_l T_l > y
  std::uint64_t positive_sum = 0;  // sums of positive parts exceed both
  std::uint64_t simultaneous = 0;  // some epoch k has S_k > x and T_k > y
  std::uint64_t m = 0;

  bool operator==(const PathEventCounts&) const = default;
};

// OpenMP kernel: paths are chunked, each chunk tallied independently, and
// the chunk tallies combined in index order, so the result is identical
// for every worker count. HEAVYTAIL2D_THREADS caps the workers.
PathEventCounts count_path_events(const SequenceModel& model,
                                  const WeightModel& weights, double x,
                                  double y, std::uint64_t m,
                                  std::uint64_t seed);

// Single-threaded reference producing the exact same tallies; kept for
// the parity tests and the benchmark.
PathEventCounts count_path_events_serial(const SequenceModel& model,
                                         const WeightModel& weights, double x,
                                         double y, std::uint64_t m,
                                         std::uint64_t seed);

// P[sum Theta_k X_k > x, sum Delta_l Y_l > y], m >= 1000.
Estimate estimate_joint_sum_tail(const SequenceModel& model,
                                 const WeightModel& weights, double x,
                                 double y, std::uint64_t m,
                                 std::uint64_t seed);

// Joint tail of the coordinate-wise maxima of the weighted claims.
Estimate estimate_joint_max_tail(const SequenceModel& model,
                                 const WeightModel& weights, double x,
                                 double y, std::uint64_t m,
                                 std::uint64_t seed);

// Joint tail of the running maxima of the weighted partial sums. Shares
// the path stream of estimate_joint_sum_tail for common-random-number
// comparisons; with nonnegative claims the two agree pathwise.
Estimate estimate_running_max_tail(const SequenceModel& model,
                                   const WeightModel& weights, double x,
                                   double y, std::uint64_t m,
                                   std::uint64_t seed);

// Joint tail of the sums of positive parts, the upper end of the
// running-maximum sandwich for mixed-sign claims.
Estimate estimate_positive_sum_tail(const SequenceModel& model,
                                    const WeightModel& weights, double x,
                                    double y, std::uint64_t m,
                                    std::uint64_t seed);

Estimate estimate_ruin(const RiskModelConfig& config, RuinKind which,
                       std::uint64_t m, std::uint64_t seed);

// First epochs (1-based) at which each coordinate's surplus goes negative
// on one path, 0 when it never does within the horizon. The and-ruin
// indicator is exactly {t1 > 0 and t2 > 0}.
struct PassageTimes {
  std::size_t t1 = 0;
  std::size_t t2 = 0;
};

PassageTimes ruin_passage_times(const RiskModelConfig& config,
                                std::uint64_t seed, std::uint64_t path_index);

// Conditional Monte Carlo for the final-sum joint tail, for nonnegative
// claims. Paths are stratified by the first index whose weighted claim
// clears half the threshold in each coordinate; within a stratum the
// leftover claim (or claim pair) is integrated out in closed form through
// the pair's survival copula and its derivatives, and the stratum where
// neither coordinate sees a half-threshold jump keeps the plain
// indicator. The estimator is unbiased for every eligible model.
//
// Falls back to the plain estimator (method tag Plain) when there is no
// rare event to exploit (some single weighted claim clears its half
// threshold with probability >= 1/4), when a margin has atoms, or when
// the model chains dependence across indices.
Estimate conditional_estimator(const SequenceModel& model,
                               const WeightModel& weights, double x, double y,
                               std::uint64_t m, std::uint64_t seed);

// Reference implementation with the same chunked accumulation order;
// bit-identical to conditional_estimator.
Estimate conditional_estimator_serial(const SequenceModel& model,
                                      const WeightModel& weights, double x,
                                      double y, std::uint64_t m,
                                      std::uint64_t seed);

}  // namespace ht2d
