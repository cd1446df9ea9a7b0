#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "heavytail2d/curve.hpp"
#include "heavytail2d/dists.hpp"

namespace ht2d {

// Copula families for the joint upper tail P[X > x, Y > y].
enum class DepKind {
  Independent,
  FGM,              // Farlie-Gumbel-Morgenstern, theta in [-1, 1]
  SurvivalClayton,  // Clayton survival copula, delta > 0
  Comonotone,
  Countermonotone,
  GaussianCopula,   // correlation rho in (-1, 1)
};

const char* to_string(DepKind kind);

class DependenceSpec {
 public:
  static DependenceSpec independent();
  static DependenceSpec fgm(double theta);
  static DependenceSpec survival_clayton(double delta);
  static DependenceSpec comonotone();
  static DependenceSpec countermonotone();
  static DependenceSpec gaussian(double rho);

  DepKind kind() const { return kind_; }
  double param() const { return param_; }

  // Survival copula: P[X > x, Y > y] = survival(tail_x(x), tail_y(y)).
  // Grounded, uniform margins, 2-increasing for every kind.
  double survival(double u, double v) const;

  // Partial derivatives of survival(u, v). These are the closed-form
  // conditional tails given one coordinate and need interior arguments.
  double survival_du(double u, double v) const;
  double survival_dv(double u, double v) const;

  // Maps two independent uniforms to probability-transform coordinates,
  // so X = quantile_x(w1), Y = quantile_y(w2) realizes the survival
  // copula. Conditional inversion for FGM and Clayton, a common shock for
  // the monotone kinds, one Cholesky step for Gaussian.
  std::pair<double, double> sample_uniforms(double u1, double u2) const;

  // Joint-tail values at or below this floor are quadrature noise rather
  // than genuine zeros. Only the Gaussian kind evaluates through
  // quadrature; every other kind reports 0 here.
  double tail_floor() const;

  std::string describe() const;

  bool operator==(const DependenceSpec& other) const = default;

 private:
  DependenceSpec(DepKind kind, double param) : kind_(kind), param_(param) {}

  DepKind kind_;
  double param_;
};

// A bivariate claim model: two margins tied by a dependence spec.
struct BivariatePair {
  UnivariateSpec x;
  UnivariateSpec y;
  DependenceSpec dep;

  double joint_tail(double xv, double yv) const;

  // One draw. Streams name the uniform lanes so callers can lay several
  // pairs side by side without collisions.
  std::pair<double, double> sample_at(std::uint64_t seed, std::uint64_t index,
                                      std::uint64_t stream_x = 0,
                                      std::uint64_t stream_y = 1) const;
  std::vector<std::pair<double, double>> sample(std::uint64_t seed,
                                                std::size_t m) const;

  TailField tail_field() const;

  bool operator==(const BivariatePair& other) const = default;
};

// Ratio joint_tail(t, t) / (tail_x(t) * tail_y(t)) over a threshold grid.
// A finite positive limit is the strong-asymptotic-independence constant;
// divergence signals asymptotic dependence; decay to zero is the boundary
// case where the constant vanishes.
RatioCurve sai_profile(const BivariatePair& pair,
                       const std::vector<double>& t_grid);

// Least-squares fit of survival(t1 x, t2 x) ~ x^gamma * h(t1, t2) as the
// schedule descends toward zero.
struct ScalingFit {
  double gamma_est = std::numeric_limits<double>::quiet_NaN();
  double h_est = std::numeric_limits<double>::quiet_NaN();
  std::size_t points_used = 0;
  bool truncated = false;  // schedule cut at a non-positive copula value
  bool has_exact = false;  // closed-form limit available (Clayton)
  double gamma_exact = 0.0;
  double h_exact = 0.0;
};

ScalingFit scaling_h(const DependenceSpec& dep, double t1, double t2,
                     const std::vector<double>& x_schedule);

// Column-major sample store; names feed CSV headers.
struct SampleMatrix {
  std::size_t rows = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  std::size_t col_count() const { return cols.size(); }
  double at(std::size_t r, std::size_t c) const { return cols[c][r]; }
  SampleMatrix select(const std::vector<std::size_t>& indices) const;
};

enum class SeqStructure { BlocksIndependent, PairwiseFGM, CommonPairIID };

const char* to_string(SeqStructure structure);

// Two blocks of n variables (X_1..X_n, Y_1..Y_n) with a declared
// cross-block dependence recipe. Each recipe yields generalized tail
// asymptotic independence by construction; the diagnose_* routines below
// only corroborate that empirically, they never establish it.
//
// Uniform-stream layout: chain position p = k draws X_{k+1} and position
// p = n + l draws Y_{l+1}. PairwiseFGM couples consecutive positions with
// one FGM(theta) link each, in the fixed order X_1 -> ... -> X_n ->
// Y_1 -> ... -> Y_n; fixing the order keeps sampling deterministic.
class SequenceModel {
 public:
  static SequenceModel blocks_independent(std::vector<UnivariateSpec> x_block,
                                          std::vector<UnivariateSpec> y_block);
  static SequenceModel pairwise_fgm(std::vector<UnivariateSpec> x_block,
                                    std::vector<UnivariateSpec> y_block,
                                    double theta);
  static SequenceModel common_pair_iid(std::size_t n, BivariatePair pair);

  std::size_t n() const { return xs_.size(); }
  SeqStructure structure() const { return structure_; }
  const UnivariateSpec& x_margin(std::size_t k) const { return xs_[k]; }
  const UnivariateSpec& y_margin(std::size_t l) const { return ys_[l]; }
  double link_theta() const { return theta_; }
  const DependenceSpec& pair_dep() const { return dep_; }

  // Effective FGM parameter between two chain positions d steps apart.
  // Integrating out the d - 1 intermediate links leaves an FGM copula
  // with parameter theta^d / 3^(d-1). PairwiseFGM only.
  double chain_theta(std::size_t pos_a, std::size_t pos_b) const;

  // P[X_{k+1} > x, Y_{l+1} > y] in closed form (k, l are 0-based).
  double pair_tail(std::size_t k, std::size_t l, double x, double y) const;

  bool nonnegative() const;

  // One draw; xs_out and ys_out must hold n() doubles each.
  void draw(std::uint64_t seed, std::uint64_t index, double* xs_out,
            double* ys_out) const;
  SampleMatrix sample(std::uint64_t seed, std::size_t m) const;

  std::string describe() const;

  bool operator==(const SequenceModel& other) const = default;

 private:
  SequenceModel(SeqStructure structure, std::vector<UnivariateSpec> xs,
                std::vector<UnivariateSpec> ys, double theta,
                DependenceSpec dep)
      : structure_(structure),
        xs_(std::move(xs)),
        ys_(std::move(ys)),
        theta_(theta),
        dep_(dep) {}

  SeqStructure structure_;
  std::vector<UnivariateSpec> xs_;
  std::vector<UnivariateSpec> ys_;
  double theta_;
  DependenceSpec dep_;
};

// Pairwise tail-independence diagnostic over one block of samples: for
// each grid threshold the worst conditional P[|V_i| > t | V_j > t] over
// ordered pairs i != j. Tail asymptotic independence shows up as decay
// toward zero; a point whose conditioning event is empty for some pair is
// flagged unreliable.
RatioCurve diagnose_tai(const SampleMatrix& block,
                        const std::vector<double>& t_grid);

// Trio-level diagnostic on full sequence draws (2n columns, X block then
// Y block): the worst conditional P[|V_i| > t | V_k > t, W_j > t] over
// all cross-block trios, thresholds taken on the diagonal.
RatioCurve diagnose_gtai(const SampleMatrix& draws, std::size_t n,
                         const std::vector<double>& t_grid);

}  // namespace ht2d
