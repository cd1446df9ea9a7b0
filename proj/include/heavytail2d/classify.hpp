#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heavytail2d/curve.hpp"
#include "heavytail2d/dependence.hpp"
#include "heavytail2d/dists.hpp"

namespace ht2d {

// A probe for the bivariate limit ratios, marched along the ray
// (t, c * t). Exactly one family is active: Shift probes the long-tail
// property (arguments moved down by a fixed offset), Scale probes
// dominated variation (arguments multiplied by factors in (0,1)).
// Consistent-variation profiles reuse the Scale family with factors
// climbing toward 1; see c2_profile.
class RatioProbe {
 public:
  enum class Kind { Shift, Scale };

  static RatioProbe shift(double a1, double a2, double ray_c,
                          std::vector<double> t_grid);
  static RatioProbe scale(double b1, double b2, double ray_c,
                          std::vector<double> t_grid);

  Kind kind() const { return kind_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  double ray() const { return ray_; }
  const std::vector<double>& grid() const { return grid_; }

 private:
  RatioProbe(Kind kind, double p1, double p2, double ray,
             std::vector<double> grid)
      : kind_(kind), p1_(p1), p2_(p2), ray_(ray), grid_(std::move(grid)) {}

  Kind kind_;
  double p1_, p2_;
  double ray_;
  std::vector<double> grid_;
};

// tail2(t - a1, c t - a2) / tail2(t, c t) over the probe grid. Values
// drift down to 1 for jointly long-tailed inputs. A zero denominator
// truncates the curve; values below the field's floor are censored.
RatioCurve l2_ratio(const TailField& tail2, const RatioProbe& probe);

// tail2(b1 t, b2 c t) / tail2(t, c t); bounded curves are the
// dominated-variation evidence.
RatioCurve d2_ratio(const TailField& tail2, const RatioProbe& probe);

// One scale-style curve per z = (z1, z2) in the schedule, which must
// climb toward (1, 1). Consistent variation shows as the per-curve sup
// falling to 1 along the schedule.
std::vector<RatioCurve> c2_profile(
    const TailField& tail2,
    const std::vector<std::pair<double, double>>& z_schedule,
    const std::vector<double>& t_grid, double ray_c = 1.0);

// Monte Carlo ratio P[X1+X2 > t, Y1+Y2 > c t] / joint_tail(t, c t) for a
// model of two i.i.d. pairs; the subexponential limit is 4. Points whose
// exact denominator sits below 10/m are flagged unreliable. Rejects
// models other than two common i.i.d. pairs and margins outside the
// subexponential class.
RatioCurve s2_ratio(const SequenceModel& model,
                    const std::vector<double>& t_grid, std::size_t m,
                    std::uint64_t seed, double ray_c = 1.0);

enum class UniKind { LShift, DScale, CProfile };

// Univariate analogue: tail(t - a) / tail(t) for LShift with param a >= 0,
// tail(b t) / tail(t) for DScale with b in (0, 1), and tail(z t) / tail(t)
// for CProfile with z in (0, 1].
RatioCurve univariate_ratio(const UnivariateSpec& spec, UniKind kind,
                            double param, const std::vector<double>& t_grid);

// Piecewise-constant unbounded shift function: value levels[i] on
// (breakpoints[i], breakpoints[i+1]], with the last level extending
// beyond the final breakpoint and 0 before the first.
struct InsensitivityFn {
  std::vector<double> breakpoints;
  std::vector<double> levels;
  bool truncated = false;

  double eval(double x) const {
    std::size_t lev = 0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!(x > breakpoints[i])) break;
      lev = i + 1;
    }
    return lev == 0 ? 0.0 : levels[lev - 1];
  }
};

// Constructive joint-insensitive shift: for each level n = 1..max_level,
// the breakpoint is the smallest grid threshold from which the
// shift-(n, n) ratio deviation stays at or below 1/n over the rest of the
// grid (a suffix-maximum scan, so the defining inequality holds on the
// whole produced range by construction). Exhausting the grid before
// max_level returns the partial function flagged truncated.
InsensitivityFn build_insensitivity(const TailField& tail2,
                                    std::size_t max_level,
                                    const std::vector<double>& search_grid,
                                    double ray_c = 1.0);

struct VerdictTarget {
  bool bounded = false;
  double value = 0.0;

  static VerdictTarget limit(double v) { return {false, v}; }
  static VerdictTarget bounded_by(double cap) { return {true, cap}; }
};

struct ClassVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double trend_stat = 0.0;
};

// Deterministic curve judgement. Only points that are flagged Ok and
// finite participate. For a limit target T with tolerance tol, the window
// is the last quarter (rounded up) of the usable points:
//   supports     every window point has |v - T| <= tol + 3 stderr, and,
//                when standard errors are present, the largest window
//                stderr is at most tol (otherwise the data cannot resolve
//                the target and the verdict is inconclusive);
//   contradicts  window deviations from T never decrease and finish above
//                twice the final slack (drifting away), or every window
//                deviation exceeds three times its slack while the window
//                values stay within 2 (tol + 3 stderr) of each other
//                (settled on a different limit);
//   otherwise    inconclusive.
// For a bounded target with cap B, every usable point is examined:
//   contradicts  some value exceeds B, or the usable values at least
//                double at every consecutive step;
//   supports     otherwise.
// trend_stat reports the last-minus-first window deviation for limit
// targets and log2(last / first) over usable values for bounded ones.
ClassVerdict verdict(const RatioCurve& curve, const VerdictTarget& target,
                     double tolerance);

// Same rule, with the result also stored on the curve.
ClassVerdict apply_verdict(RatioCurve& curve, const VerdictTarget& target,
                           double tolerance);

}  // namespace ht2d
