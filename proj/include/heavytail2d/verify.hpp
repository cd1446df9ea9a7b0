#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/classify.hpp"
#include "heavytail2d/curve.hpp"
#include "heavytail2d/dependence.hpp"
#include "heavytail2d/dists.hpp"
#include "heavytail2d/mcengine.hpp"

// Experiment harness. Each run pairs a left-hand side (simulated or exact)
// with its double-sum approximant along a ladder of tail levels and reports
// the ratio curve plus a verdict. Runs are pure functions of their plan:
// re-running one reproduces every output bit for bit, independently of the
// worker count, so plans may execute concurrently from separate threads.

namespace ht2d {

// Path statistic supplying the left-hand side.
enum class LhsStat { Sum, Max, RunningMax };

// How the left-hand side is evaluated. Exact substitutes deterministic
// oracles (closed forms for maxima, the bracketed convolution for sums) and
// is available only where independence lets the joint tail factor; Plain
// and Conditional dispatch to the Monte Carlo engine.
enum class EstimatorKind { Exact, Plain, Conditional };

// What a schedule level refers to: the tail of the first x-coordinate claim
// margin at the scaled threshold, or the value of the double-sum
// approximant itself. Margin levels invert the marginal quantile; rhs-value
// levels invert the approximant by bisection.
enum class LevelKind { MarginTail, RhsValue };

const char* to_string(LhsStat stat);
const char* to_string(EstimatorKind kind);
const char* to_string(LevelKind kind);

// Geometric ladder of target levels from hi down to lo.
struct ThresholdSchedule {
  LevelKind kind = LevelKind::RhsValue;
  double level_hi = 1e-2;
  double level_lo = 1e-6;
  std::size_t points = 8;

  // Plain Monte Carlo bottoms out at 1e-6; oracle-backed and conditional
  // runs can afford 1e-8.
  static ThresholdSchedule defaults_for(EstimatorKind kind);

  // The ladder, descending. Throws when the bounds are out of order, not
  // inside (0, 1) for margin levels, or fewer than two points are asked.
  std::vector<double> levels() const;

  bool operator==(const ThresholdSchedule&) const = default;
};

struct ExperimentPlan {
  std::string name;
  SequenceModel model;
  WeightModel weights = WeightModel::unit();
  LhsStat stat = LhsStat::Sum;
  EstimatorKind estimator = EstimatorKind::Plain;
  std::uint64_t m = 1000000;
  std::uint64_t seed = 1;
  // Thresholds march along the ray (ray_x * t, ray_y * t).
  double ray_x = 1.0;
  double ray_y = 1.0;
  ThresholdSchedule schedule{};
  double tolerance = 0.1;
  bool negative_control = false;

  // Structural checks: rays positive, schedule well formed, estimator
  // compatible with the statistic and the model. Exact demands unit weights
  // and either a single epoch or independent blocks with at most two (the
  // reach of the binary convolution oracle); Conditional covers Sum, plus
  // RunningMax when claims are nonnegative (the two then coincide
  // pathwise), and never Max. Throws std::invalid_argument.
  void validate() const;

  bool operator==(const ExperimentPlan&) const = default;
};

// Plan with the schedule and tolerance defaults wired to the estimator:
// tolerance 0.02 for oracle-backed ratios, 0.1 for Monte Carlo.
ExperimentPlan make_plan(std::string name, SequenceModel model, LhsStat stat,
                         EstimatorKind estimator, std::uint64_t m,
                         std::uint64_t seed);

struct EquivalenceReport {
  std::string name;
  std::vector<double> levels;
  std::vector<double> thresholds;
  std::vector<double> lhs;
  std::vector<double> lhs_stderr;
  std::vector<double> rhs;
  // values = lhs / rhs with the stderr scaled by 1 / rhs; verdict is
  // against limit 1 at the plan tolerance. A point whose estimator threw
  // is flagged Unreliable and skipped by the verdict.
  RatioCurve curve;
  // "by construction" when the model's dependence cannot reach across
  // epochs, "assumed" for the chained structure, where the insensitivity
  // hypotheses hold empirically but are not provable inside the catalog.
  std::string hypothesis;
};

// Threshold solving schedule level ell along the ray: the marginal
// quantile of the first x-margin for MarginTail, bisection on the
// double-sum approximant for RhsValue. Exposed for tests and the CLI.
double invert_level(const SequenceModel& model, const WeightModel& weights,
                    double ray_x, double ray_y, LevelKind kind, double ell);

// LHS over ruin_and_rhs along the plan's schedule. Plain estimators refuse
// schedules whose deepest approximant value sits below 1e-6 (nothing to
// see at desk-scale path counts); Exact and Conditional go deeper.
EquivalenceReport run_equivalence(const ExperimentPlan& plan);

// Two-epoch sum equivalence with the estimator picked from the structure:
// independent blocks use the convolution oracle, everything else the
// conditional engine. Claims must be nonnegative.
EquivalenceReport run_maxsum_equivalence(const SequenceModel& model,
                                         std::uint64_t m, std::uint64_t seed,
                                         const ThresholdSchedule& schedule);

struct ClosureReport {
  // Empirical scale ratio of the summed pair, judged bounded.
  RatioCurve d2;
  std::vector<double> thresholds;
  // Exceedance counts on the shared sample set, per threshold: the joint
  // sum event, the four half-threshold pair events, and the four
  // full-threshold pair events.
  std::vector<std::uint64_t> sum_count;
  std::vector<std::uint64_t> half_pair_count;
  std::vector<std::uint64_t> full_pair_count;
  // Pathwise bracket checks, exact integer comparisons on the counts:
  // sum_count <= half_pair_count and 4 * sum_count >= full_pair_count.
  bool upper_bracket_holds = false;
  bool lower_bracket_holds = false;
};

// Closure of the two-epoch sum under the dominated-variation probe. The
// four pairs are the laws of (X_k, Y_l) in row-major order; margins must
// agree where they refer to the same variable, the two cross pairs must be
// independent and the two diagonal laws equal, so the joint law is a pair
// of independent blocks and can be sampled. Supports nonnegative claims
// only.
ClosureReport run_closure_D2(const std::array<BivariatePair, 4>& pairs,
                             std::size_t m, std::uint64_t seed,
                             const RatioProbe& probe, double bound_cap = 64.0);

struct ScalarClosureReport {
  RatioCurve l2;
  RatioCurve d2;
  // The vanishing-weight diagnostic that gated the run, one curve per c.
  std::vector<RatioCurve> assumption_a;
};

// Shift and scale probes against the quadrature product tail of
// (Theta X, Theta Y). Refuses (std::runtime_error, message names the
// failing ray) unless the weight tail vanishes against the product tail
// for every c in {0.5, 1, 2} over the scale probe's grid.
ScalarClosureReport run_scalar_closure(const ScalarProductModel& model,
                                       const RatioProbe& shift_probe,
                                       const RatioProbe& scale_probe,
                                       double l2_tolerance = 0.02,
                                       double bound_cap = 256.0);

struct WeightedReport {
  EquivalenceReport sum;
  EquivalenceReport running_max;
  EquivalenceReport maxima;
};

// The three weighted left-hand sides (final sums, running maxima, claim
// maxima) against the common approximant, estimated plainly on shared
// paths: with nonnegative claims the running-max estimate equals the sum
// estimate and the maxima estimate never exceeds it, path by path. The
// config's thresholds set the probe ray; weight bounds are those declared
// in the config's weight model.
WeightedReport run_weighted_equivalence(const RiskModelConfig& config,
                                        std::uint64_t m, std::uint64_t seed,
                                        const ThresholdSchedule& schedule,
                                        double tolerance = 0.15);

// Class probe family for the convolution of two laws.
enum class UniClosureKind { Dominated, Consistent };

struct UnivariateClosureReport {
  // Dominated: one scale-0.5 curve, judged bounded. Consistent: one curve
  // per scale in {0.5, 0.75, 0.9, 0.99}, each judged bounded, with the
  // per-curve sup falling toward 1 as the scale climbs when the
  // convolution varies consistently.
  std::vector<RatioCurve> class_probe;
  // conv_tail(t) / (tail1(t) + tail2(t)), judged against limit 1. Carries
  // no stderr: the bracket midpoint is deterministic.
  RatioCurve max_sum;
};

UnivariateClosureReport run_univariate_closure(const UnivariateSpec& f1,
                                               const UnivariateSpec& f2,
                                               UniClosureKind kind,
                                               const std::vector<double>& grid,
                                               double tolerance = 0.02,
                                               double bound_cap = 100.0);

}  // namespace ht2d
