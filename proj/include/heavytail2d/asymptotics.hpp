#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heavytail2d/curve.hpp"
#include "heavytail2d/dependence.hpp"
#include "heavytail2d/dists.hpp"

// Right-hand-side approximants for the tail equivalences: double sums of
// pairwise joint tails, their weighted (discount-factor) versions computed by
// quadrature over the weight laws, and the supporting assumption checkers.

namespace ht2d {

// Discount factors applied to the claim sequences. Three shapes:
//   Unit        : all weights identically 1, any horizon.
//   CommonTheta : one random factor scaling every claim on both coordinates;
//                 bounded nonnegative support required.
//   PerIndex    : separate factors per period and coordinate, each confined
//                 to declared almost-sure bounds [lo, hi] with lo > 0.
// Weight components are mutually independent and independent of the claims
// (enforced by drawing them from a dedicated stream block).
enum class WeightKind { Unit, CommonTheta, PerIndex };

struct WeightBound {
  double lo = 1.0;
  double hi = 1.0;
  bool operator==(const WeightBound&) const = default;
};

class WeightModel {
 public:
  static WeightModel unit();
  static WeightModel common(UnivariateSpec theta);
  static WeightModel per_index(std::vector<UnivariateSpec> thetas,
                               std::vector<WeightBound> theta_bounds,
                               std::vector<UnivariateSpec> deltas,
                               std::vector<WeightBound> delta_bounds);

  WeightKind kind() const { return kind_; }
  bool trivial() const { return kind_ == WeightKind::Unit; }
  // Number of per-index slots; 0 for the horizon-agnostic kinds.
  std::size_t n() const { return thetas_.size(); }

  const UnivariateSpec& common_theta() const;
  const UnivariateSpec& theta(std::size_t k) const;
  const UnivariateSpec& delta(std::size_t l) const;
  WeightBound theta_bound(std::size_t k) const;
  WeightBound delta_bound(std::size_t l) const;

  // Fills theta_out[0..n) and delta_out[0..n) for one path. CommonTheta
  // writes the same draw into every slot of both arrays.
  void draw(std::uint64_t seed, std::uint64_t index, std::size_t n,
            double* theta_out, double* delta_out) const;

  std::string describe() const;
  bool operator==(const WeightModel&) const = default;

 private:
  WeightModel() = default;
  WeightKind kind_ = WeightKind::Unit;
  std::optional<UnivariateSpec> common_;
  std::vector<UnivariateSpec> thetas_, deltas_;
  std::vector<WeightBound> theta_bounds_, delta_bounds_;
};

// A nonnegative random factor Theta scaling both coordinates of a pair:
// the joint tail of (Theta X, Theta Y). Theta must not be almost surely 0,
// but unbounded support is allowed here (that is what Assumption A probes).
struct ScalarProductModel {
  ScalarProductModel(BivariatePair pair, UnivariateSpec theta);
  BivariatePair pair;
  UnivariateSpec theta;
};

// Quadrature result: value plus the integrator's absolute error estimate
// (0 when the weight law is purely atomic and the sum is exact).
struct ProductTail {
  double value = 0.0;
  double err = 0.0;
};

// Sum over k, l of the model's pairwise joint tails at (x, y), in index
// order. This is the unweighted right-hand side of the sum and max
// equivalences.
double sum_tail_rhs(const SequenceModel& model, double x, double y);

// P[Theta X > x, Delta Y > y] for independent weights Theta, Delta applied
// to a pair with joint tail `base`. Atoms are enumerated exactly; continuous
// parts integrate the quantile transform with an adaptive 7/15 rule to the
// relative target.
ProductTail weighted_pair_tail(const UnivariateSpec& theta,
                               const UnivariateSpec& delta,
                               const TailField& base, double x, double y,
                               double rel_tol = 1e-8);

// H-bar(x, y) = integral of pair.joint_tail(x/s, y/s) against the law of
// Theta. Requires x > 0 and y > 0.
ProductTail scalar_product_tail(const ScalarProductModel& model, double x,
                                double y, double rel_tol = 1e-8);

// Weighted double-sum approximant: Unit weights reduce to sum_tail_rhs,
// CommonTheta integrates the summed pair tails against the single shared
// factor, PerIndex (requires weights.n() == model.n()) integrates each
// (k, l) term against Theta_k x Delta_l.
ProductTail ruin_and_rhs(const SequenceModel& model, const WeightModel& weights,
                         double x, double y, double rel_tol = 1e-8);

// Identical value, exported under the name used when it serves as the upper
// approximant for the simultaneous-ruin probability.
ProductTail ruin_max_upper(const SequenceModel& model,
                           const WeightModel& weights, double x, double y,
                           double rel_tol = 1e-8);

// The model's weighted joint tail as a plain field of (x, y).
TailField product_tail_field(const ScalarProductModel& model,
                             double rel_tol = 1e-8);

// One curve per c: theta-tail(c * min(t, ray_c t)) / H-bar(t, ray_c t).
// The weight tail must vanish relative to the product tail for every c;
// judge each curve against limit 0. Points whose denominator cannot be
// resolved above its own quadrature error are censored.
std::vector<RatioCurve> check_assumption_A(const ScalarProductModel& model,
                                           const std::vector<double>& c_list,
                                           const std::vector<double>& t_grid,
                                           double ray_c = 1.0,
                                           double rel_tol = 1e-8);

// Two curves: P[Theta > t] and P[Delta > t], each divided by
// product_tail(c1 t, c2 t). Both must vanish for the weighted pair to
// inherit shift insensitivity.
std::array<RatioCurve, 2> check_eq_6_8(const UnivariateSpec& theta,
                                       const UnivariateSpec& delta,
                                       const TailField& product_tail,
                                       double c1, double c2,
                                       const std::vector<double>& t_grid);

// Auxiliary scaling function built from an increasing ladder lambda_1 <
// lambda_2 < ... with lambda_{n+1} > (n+1) lambda_n. On [lambda_n,
// lambda_{n+1}) the function is the running supremum of t/n across levels:
//   n = 1 : t
//   n >= 2: max(lambda_n / (n-1), t / n)
// with the last segment's rule extending beyond the final rung and the
// value clamped to lambda_1 below the first. By construction it is
// continuous, non-decreasing, eventually o(t), and satisfies
// weight_tail(eval(t)) <= product_tail(t, t) / n on segment n.
struct AuxiliaryFn {
  std::vector<double> lambdas;
  bool truncated = false;

  double eval(double t) const;
};

// Searches the grid for the ladder: lambda_n is the smallest threshold,
// strictly above n * lambda_{n-1}, from which weight_tail(min(t, c t)/n)
// stays at or below product_tail(t, c t)/n over the rest of the grid
// (suffix-maximum scan). No admissible lambda_1 at all means the vanishing
// assumption fails on this grid and the construction refuses; running out
// of grid at a later level returns the partial ladder flagged truncated.
AuxiliaryFn build_auxiliary_b(const std::function<double(double)>& weight_tail,
                              const TailField& product_tail,
                              std::size_t n_max,
                              const std::vector<double>& search_grid,
                              double ray_c = 1.0);

}  // namespace ht2d
