#include "heavytail2d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ht2d {

namespace {

// Plain path counting cannot resolve events this rare at desk scale.
constexpr double kPlainRhsFloor = 1e-6;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rhs_value(const SequenceModel& model, const WeightModel& weights,
                 double x, double y) {
  return ruin_and_rhs(model, weights, x, y).value;
}

// Closed-form / convolution-bracket left-hand side. Reachability was
// checked by ExperimentPlan::validate.
double exact_lhs(const SequenceModel& model, LhsStat stat, double x,
                 double y) {
  if (model.n() == 1) return model.pair_tail(0, 0, x, y);
  if (stat == LhsStat::Max) {
    const double px = 1.0 - (1.0 - model.x_margin(0).tail(x)) *
                                (1.0 - model.x_margin(1).tail(x));
    const double py = 1.0 - (1.0 - model.y_margin(0).tail(y)) *
                                (1.0 - model.y_margin(1).tail(y));
    return px * py;
  }
  return conv_tail(model.x_margin(0), model.x_margin(1), x).value() *
         conv_tail(model.y_margin(0), model.y_margin(1), y).value();
}

Estimate mc_lhs(const ExperimentPlan& plan, double x, double y,
                std::uint64_t seed) {
  if (plan.estimator == EstimatorKind::Conditional)
    return conditional_estimator(plan.model, plan.weights, x, y, plan.m, seed);
  switch (plan.stat) {
    case LhsStat::Max:
      return estimate_joint_max_tail(plan.model, plan.weights, x, y, plan.m,
                                     seed);
    case LhsStat::RunningMax:
      return estimate_running_max_tail(plan.model, plan.weights, x, y, plan.m,
                                       seed);
    case LhsStat::Sum:
      break;
  }
  return estimate_joint_sum_tail(plan.model, plan.weights, x, y, plan.m, seed);
}

}  // namespace

const char* to_string(LhsStat stat) {
  switch (stat) {
    case LhsStat::Sum: return "sum";
    case LhsStat::Max: return "max";
    case LhsStat::RunningMax: return "running-max";
  }
  return "?";
}

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Exact: return "exact";
    case EstimatorKind::Plain: return "plain";
    case EstimatorKind::Conditional: return "conditional";
  }
  return "?";
}

const char* to_string(LevelKind kind) {
  switch (kind) {
    case LevelKind::MarginTail: return "margin-tail";
    case LevelKind::RhsValue: return "rhs-value";
  }
  return "?";
}

ThresholdSchedule ThresholdSchedule::defaults_for(EstimatorKind kind) {
  ThresholdSchedule s;
  if (kind != EstimatorKind::Plain) s.level_lo = 1e-8;
  return s;
}

std::vector<double> ThresholdSchedule::levels() const {
  if (!(level_lo > 0.0) || !(level_hi >= level_lo))
    throw std::invalid_argument("schedule levels must satisfy 0 < lo <= hi");
  if (kind == LevelKind::MarginTail && !(level_hi < 1.0))
    throw std::invalid_argument("margin levels must lie in (0, 1)");
  if (points < 2)
    throw std::invalid_argument("schedule needs at least two points");
  std::vector<double> out(points);
  const double step =
      std::log(level_lo / level_hi) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = level_hi * std::exp(step * static_cast<double>(i));
  out.front() = level_hi;
  out.back() = level_lo;
  return out;
}

void ExperimentPlan::validate() const {
  if (name.empty()) throw std::invalid_argument("plan needs a name");
  if (!(ray_x > 0.0) || !(ray_y > 0.0))
    throw std::invalid_argument("probe ray components must be positive");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("verdict tolerance must be positive");
  schedule.levels();
  if (weights.kind() == WeightKind::PerIndex && weights.n() != model.n())
    throw std::invalid_argument("per-index weights must match the model horizon");
  if (estimator != EstimatorKind::Exact && m < 1000)
    throw std::invalid_argument("Monte Carlo estimators need m >= 1000");
  if (estimator == EstimatorKind::Exact) {
    if (!weights.trivial())
      throw std::invalid_argument("exact oracles cover unit weights only");
    const bool single = model.n() == 1;
    const bool blocks2 =
        model.structure() == SeqStructure::BlocksIndependent && model.n() == 2;
    if (!single && !blocks2)
      throw std::invalid_argument(
          "exact oracles need one epoch or two independent blocks");
    if (stat == LhsStat::RunningMax && !single && !model.nonnegative())
      throw std::invalid_argument(
          "exact running-max oracle needs nonnegative claims");
  }
  if (estimator == EstimatorKind::Conditional) {
    if (stat == LhsStat::Max)
      throw std::invalid_argument(
          "conditional estimator does not cover the maxima statistic");
    if (stat == LhsStat::RunningMax && !model.nonnegative())
      throw std::invalid_argument(
          "conditional running-max needs nonnegative claims");
  }
}

ExperimentPlan make_plan(std::string name, SequenceModel model, LhsStat stat,
                         EstimatorKind estimator, std::uint64_t m,
                         std::uint64_t seed) {
  ExperimentPlan plan{.name = std::move(name), .model = std::move(model)};
  plan.stat = stat;
  plan.estimator = estimator;
  plan.m = m;
  plan.seed = seed;
  plan.schedule = ThresholdSchedule::defaults_for(estimator);
  plan.tolerance = estimator == EstimatorKind::Exact ? 0.02 : 0.1;
  return plan;
}

double invert_level(const SequenceModel& model, const WeightModel& weights,
                    double ray_x, double ray_y, LevelKind kind, double ell) {
  if (!(ray_x > 0.0) || !(ray_y > 0.0))
    throw std::invalid_argument("probe ray components must be positive");
  if (!(ell > 0.0))
    throw std::invalid_argument("schedule level must be positive");
  if (kind == LevelKind::MarginTail) {
    if (!(ell < 1.0))
      throw std::invalid_argument("margin levels must lie in (0, 1)");
    return model.x_margin(0).quantile(1.0 - ell) / ray_x;
  }
  const auto f = [&](double t) {
    return rhs_value(model, weights, ray_x * t, ray_y * t);
  };
  double lo = 1.0, hi = 1.0;
  for (int guard = 0; f(hi) >= ell; ++guard) {
    if (guard > 1060)
      throw std::runtime_error("schedule level not reachable along the ray");
    hi *= 2.0;
  }
  for (int guard = 0; f(lo) < ell; ++guard) {
    if (guard > 1060)
      throw std::runtime_error("schedule level not reachable along the ray");
    lo *= 0.5;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= ell ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EquivalenceReport run_equivalence(const ExperimentPlan& plan) {
  plan.validate();
  const auto levels = plan.schedule.levels();
  const std::size_t np = levels.size();

  EquivalenceReport rep;
  rep.name = plan.name;
  rep.levels = levels;
  rep.hypothesis = plan.model.structure() == SeqStructure::PairwiseFGM
                       ? "assumed"
                       : "by construction";
  rep.thresholds.resize(np);
  rep.lhs.assign(np, kNaN);
  rep.lhs_stderr.assign(np, 0.0);
  rep.rhs.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    rep.thresholds[i] = invert_level(plan.model, plan.weights, plan.ray_x,
                                     plan.ray_y, plan.schedule.kind, levels[i]);
    rep.rhs[i] = rhs_value(plan.model, plan.weights,
                           plan.ray_x * rep.thresholds[i],
                           plan.ray_y * rep.thresholds[i]);
  }
  if (plan.estimator == EstimatorKind::Plain &&
      rep.rhs.back() < kPlainRhsFloor * (1.0 - 1e-9))
    throw std::invalid_argument(
        "plain Monte Carlo cannot resolve the schedule: deepest approximant "
        "value below 1e-6");

  RatioCurve curve;
  curve.thresholds = rep.thresholds;
  curve.values.assign(np, kNaN);
  if (plan.estimator != EstimatorKind::Exact) curve.stderrs.assign(np, 0.0);
  std::vector<PointFlag> flags(np, PointFlag::Ok);
  bool any_bad = false;
  for (std::size_t i = 0; i < np; ++i) {
    const double x = plan.ray_x * rep.thresholds[i];
    const double y = plan.ray_y * rep.thresholds[i];
    try {
      if (plan.estimator == EstimatorKind::Exact) {
        rep.lhs[i] = exact_lhs(plan.model, plan.stat, x, y);
      } else {
        const Estimate est = mc_lhs(plan, x, y, plan.seed + i);
        rep.lhs[i] = est.value;
        rep.lhs_stderr[i] = est.std_err;
        curve.stderrs[i] = est.std_err / rep.rhs[i];
      }
      curve.values[i] = rep.lhs[i] / rep.rhs[i];
    } catch (const std::exception&) {
      flags[i] = PointFlag::Unreliable;
      any_bad = true;
    }
  }
  if (any_bad) curve.flags = std::move(flags);
  apply_verdict(curve, VerdictTarget::limit(1.0), plan.tolerance);
  rep.curve = std::move(curve);
  return rep;
}

EquivalenceReport run_maxsum_equivalence(const SequenceModel& model,
                                         std::uint64_t m, std::uint64_t seed,
                                         const ThresholdSchedule& schedule) {
  if (model.n() != 2)
    throw std::invalid_argument("sum equivalence runs on two epochs");
  if (!model.nonnegative())
    throw std::invalid_argument("sum equivalence needs nonnegative claims");
  const EstimatorKind est =
      model.structure() == SeqStructure::BlocksIndependent
          ? EstimatorKind::Exact
          : EstimatorKind::Conditional;
  ExperimentPlan plan =
      make_plan("maxsum-equivalence", model, LhsStat::Sum, est, m, seed);
  plan.schedule = schedule;
  return run_equivalence(plan);
}

ClosureReport run_closure_D2(const std::array<BivariatePair, 4>& pairs,
                             std::size_t m, std::uint64_t seed,
                             const RatioProbe& probe, double bound_cap) {
  for (const auto& p : pairs)
    if (p.x.support_lo() < 0.0 || p.y.support_lo() < 0.0)
      throw std::invalid_argument("closure experiment needs nonnegative claims");
  const auto indep = DependenceSpec::independent();
  if (!(pairs[1].dep == indep) || !(pairs[2].dep == indep))
    throw std::invalid_argument(
        "cross pairs must be independent for a block-samplable joint law");
  if (!(pairs[0] == pairs[3]))
    throw std::invalid_argument(
        "diagonal pair laws must agree (two independent copies of one pair)");
  if (!(pairs[1].x == pairs[0].x) || !(pairs[1].y == pairs[3].y) ||
      !(pairs[2].x == pairs[3].x) || !(pairs[2].y == pairs[0].y))
    throw std::invalid_argument("cross pair margins must match the diagonals");
  if (m < 1000)
    throw std::invalid_argument("closure experiment needs m >= 1000");

  const SequenceModel model = SequenceModel::common_pair_iid(2, pairs[0]);
  const auto& grid = probe.grid();
  const double c = probe.ray();
  const std::size_t g = grid.size();

  ClosureReport rep;
  rep.thresholds = grid;
  rep.sum_count.assign(g, 0);
  rep.half_pair_count.assign(g, 0);
  rep.full_pair_count.assign(g, 0);

  std::vector<double> sx(m), sy(m);
  double xs[2], ys[2];
  for (std::size_t i = 0; i < m; ++i) {
    model.draw(seed, i, xs, ys);
    sx[i] = xs[0] + xs[1];
    sy[i] = ys[0] + ys[1];
    for (std::size_t j = 0; j < g; ++j) {
      const double x = grid[j], y = c * grid[j];
      rep.sum_count[j] += sx[i] > x && sy[i] > y;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          rep.half_pair_count[j] += xs[k] > 0.5 * x && ys[l] > 0.5 * y;
          rep.full_pair_count[j] += xs[k] > x && ys[l] > y;
        }
    }
  }

  rep.upper_bracket_holds = true;
  rep.lower_bracket_holds = true;
  for (std::size_t j = 0; j < g; ++j) {
    rep.upper_bracket_holds &= rep.sum_count[j] <= rep.half_pair_count[j];
    rep.lower_bracket_holds &= 4 * rep.sum_count[j] >= rep.full_pair_count[j];
  }

  TailField field;
  field.floor = 10.0 / static_cast<double>(m);
  field.eval = [sx = std::move(sx), sy = std::move(sy)](double a, double b) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) cnt += sx[i] > a && sy[i] > b;
    return static_cast<double>(cnt) / static_cast<double>(sx.size());
  };
  rep.d2 = d2_ratio(field, probe);
  apply_verdict(rep.d2, VerdictTarget::bounded_by(bound_cap), 0.1);
  return rep;
}

ScalarClosureReport run_scalar_closure(const ScalarProductModel& model,
                                       const RatioProbe& shift_probe,
                                       const RatioProbe& scale_probe,
                                       double l2_tolerance, double bound_cap) {
  const std::vector<double> c_list{0.5, 1.0, 2.0};
  ScalarClosureReport rep;
  rep.assumption_a = check_assumption_A(model, c_list, scale_probe.grid(),
                                        scale_probe.ray());
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    const auto v =
        apply_verdict(rep.assumption_a[i], VerdictTarget::limit(0.0), 0.05);
    if (v.verdict != Verdict::Supports) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "assumption A fails on ray c=%g: weight tail does not "
                    "vanish against the product tail",
                    c_list[i]);
      throw std::runtime_error(msg);
    }
  }
  const TailField field = product_tail_field(model);
  rep.l2 = l2_ratio(field, shift_probe);
  apply_verdict(rep.l2, VerdictTarget::limit(1.0), l2_tolerance);
  rep.d2 = d2_ratio(field, scale_probe);
  apply_verdict(rep.d2, VerdictTarget::bounded_by(bound_cap), 0.1);
  return rep;
}

WeightedReport run_weighted_equivalence(const RiskModelConfig& config,
                                        std::uint64_t m, std::uint64_t seed,
                                        const ThresholdSchedule& schedule,
                                        double tolerance) {
  if (config.n != config.claims.n())
    throw std::invalid_argument("config horizon must match the claim model");
  if (!(config.x > 0.0) || !(config.y > 0.0))
    throw std::invalid_argument("thresholds must be positive");

  const auto one = [&](const char* name, LhsStat stat) {
    ExperimentPlan plan{.name = name, .model = config.claims};
    plan.weights = config.weights;
    plan.stat = stat;
    plan.estimator = EstimatorKind::Plain;
    plan.m = m;
    plan.seed = seed;
    plan.ray_x = config.x;
    plan.ray_y = config.y;
    plan.schedule = schedule;
    plan.tolerance = tolerance;
    return run_equivalence(plan);
  };
  WeightedReport rep{one("weighted-sum", LhsStat::Sum),
                     one("weighted-running-max", LhsStat::RunningMax),
                     one("weighted-max", LhsStat::Max)};
  return rep;
}

UnivariateClosureReport run_univariate_closure(const UnivariateSpec& f1,
                                               const UnivariateSpec& f2,
                                               UniClosureKind kind,
                                               const std::vector<double>& grid,
                                               double tolerance,
                                               double bound_cap) {
  if (f1.support_lo() < 0.0 || f2.support_lo() < 0.0)
    throw std::invalid_argument(
        "univariate closure needs nonnegative supports");
  if (grid.size() < 2)
    throw std::invalid_argument("closure grid needs at least two thresholds");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw std::invalid_argument("closure grid must increase and stay positive");

  std::vector<double> base(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    base[i] = conv_tail(f1, f2, grid[i]).value();

  UnivariateClosureReport rep;
  const std::vector<double> scales = kind == UniClosureKind::Dominated
                                         ? std::vector<double>{0.5}
                                         : std::vector<double>{0.5, 0.75, 0.9,
                                                               0.99};
  for (const double s : scales) {
    RatioCurve curve;
    curve.thresholds = grid;
    curve.values.assign(grid.size(), kNaN);
    std::vector<PointFlag> flags(grid.size(), PointFlag::Ok);
    bool any_bad = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (base[i] > 0.0) {
        curve.values[i] = conv_tail(f1, f2, s * grid[i]).value() / base[i];
      } else {
        flags[i] = PointFlag::Unreliable;
        any_bad = true;
      }
    }
    if (any_bad) curve.flags = std::move(flags);
    apply_verdict(curve, VerdictTarget::bounded_by(bound_cap), 0.1);
    rep.class_probe.push_back(std::move(curve));
  }

  RatioCurve ms;
  ms.thresholds = grid;
  ms.values.assign(grid.size(), kNaN);
  std::vector<PointFlag> flags(grid.size(), PointFlag::Ok);
  bool any_bad = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double denom = f1.tail(grid[i]) + f2.tail(grid[i]);
    if (denom > 0.0) {
      ms.values[i] = base[i] / denom;
    } else {
      flags[i] = PointFlag::Unreliable;
      any_bad = true;
    }
  }
  if (any_bad) ms.flags = std::move(flags);
  apply_verdict(ms, VerdictTarget::limit(1.0), tolerance);
  rep.max_sum = std::move(ms);
  return rep;
}

}  // namespace ht2d
