#include "heavytail2d/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heavytail2d/rng.hpp"

namespace ht2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_grid(const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("threshold grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("threshold grid must be strictly increasing");
}

struct Quad {
  double value = 0.0;
  double err = 0.0;
};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; the rule
// is symmetric and all nodes are interior). The embedded Gauss rule uses
// the odd-indexed nodes plus the center.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

template <typename F>
Quad gk15(F&& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double d = h * kXgk[i];
    const double fs = f(c - d) + f(c + d);
    k += kWgk[i] * fs;
    if (i % 2 == 1) g += kWg[i / 2] * fs;
  }
  return {k * h, std::abs(k - g) * h};
}

// Worst-segment-first bisection until the summed error estimate meets the
// relative target. The split budget bounds work on integrands that refuse
// to settle; the final estimate is still returned with its honest error.
template <typename F>
Quad adaptive(F&& f, double a, double b, double rel_tol) {
  struct Seg {
    double a, b, value, err;
  };
  std::vector<Seg> segs;
  const auto push = [&](double lo, double hi) {
    const Quad q = gk15(f, lo, hi);
    segs.push_back({lo, hi, q.value, q.err});
  };
  push(a, b);
  for (int round = 0; round < 2000; ++round) {
    double value = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      value += segs[i].value;
      err += segs[i].err;
      if (segs[i].err > segs[worst].err) worst = i;
    }
    if (err <= rel_tol * std::abs(value) || err <= 1e-305) return {value, err};
    const Seg s = segs[worst];
    segs.erase(segs.begin() + worst);
    const double mid = 0.5 * (s.a + s.b);
    push(s.a, mid);
    push(mid, s.b);
  }
  double value = 0.0, err = 0.0;
  for (const Seg& s : segs) {
    value += s.value;
    err += s.err;
  }
  return {value, err};
}

// E[g(W)]: atom lists are summed exactly, continuous laws integrate the
// quantile transform over (0, 1).
template <typename G>
Quad expect(const UnivariateSpec& w, G&& g, double rel_tol) {
  if (w.atomic()) {
    double value = 0.0;
    for (const auto& [at, p] : w.atoms()) value += p * g(at);
    return {value, 0.0};
  }
  return adaptive([&](double u) { return g(w.quantile(u)); }, 0.0, 1.0,
                  rel_tol);
}

void require_positive_point(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("evaluation point must be positive");
}

void require_tol(double rel_tol) {
  if (!(rel_tol > 0.0))
    throw std::invalid_argument("relative tolerance must be positive");
}

}  // namespace

WeightModel WeightModel::unit() { return WeightModel(); }

WeightModel WeightModel::common(UnivariateSpec theta) {
  if (theta.support_lo() < 0.0)
    throw std::invalid_argument("common weight must be nonnegative");
  if (!std::isfinite(theta.support_hi()))
    throw std::invalid_argument("common weight must have bounded support");
  if (!(theta.tail(0.0) > 0.0))
    throw std::invalid_argument("weight must not be almost surely zero");
  WeightModel w;
  w.kind_ = WeightKind::CommonTheta;
  w.common_ = std::move(theta);
  return w;
}

WeightModel WeightModel::per_index(std::vector<UnivariateSpec> thetas,
                                   std::vector<WeightBound> theta_bounds,
                                   std::vector<UnivariateSpec> deltas,
                                   std::vector<WeightBound> delta_bounds) {
  const std::size_t n = thetas.size();
  if (n == 0 || deltas.size() != n || theta_bounds.size() != n ||
      delta_bounds.size() != n)
    throw std::invalid_argument(
        "per-index weights need matching nonempty theta and delta lists");
  const auto check = [](const UnivariateSpec& spec, const WeightBound& b) {
    if (!(b.lo > 0.0) || !(b.hi >= b.lo) || !std::isfinite(b.hi))
      throw std::invalid_argument(
          "weight bounds need 0 < lo <= hi with hi finite");
    if (spec.support_lo() < b.lo || spec.support_hi() > b.hi)
      throw std::invalid_argument(
          "weight support must lie inside its declared bounds");
  };
  for (std::size_t k = 0; k < n; ++k) {
    check(thetas[k], theta_bounds[k]);
    check(deltas[k], delta_bounds[k]);
  }
  WeightModel w;
  w.kind_ = WeightKind::PerIndex;
  w.thetas_ = std::move(thetas);
  w.deltas_ = std::move(deltas);
  w.theta_bounds_ = std::move(theta_bounds);
  w.delta_bounds_ = std::move(delta_bounds);
  return w;
}

const UnivariateSpec& WeightModel::common_theta() const {
  if (kind_ != WeightKind::CommonTheta)
    throw std::logic_error("common_theta applies to CommonTheta weights only");
  return *common_;
}

const UnivariateSpec& WeightModel::theta(std::size_t k) const {
  if (kind_ != WeightKind::PerIndex)
    throw std::logic_error("indexed weights apply to PerIndex models only");
  return thetas_.at(k);
}

const UnivariateSpec& WeightModel::delta(std::size_t l) const {
  if (kind_ != WeightKind::PerIndex)
    throw std::logic_error("indexed weights apply to PerIndex models only");
  return deltas_.at(l);
}

WeightBound WeightModel::theta_bound(std::size_t k) const {
  if (kind_ != WeightKind::PerIndex)
    throw std::logic_error("indexed weights apply to PerIndex models only");
  return theta_bounds_.at(k);
}

WeightBound WeightModel::delta_bound(std::size_t l) const {
  if (kind_ != WeightKind::PerIndex)
    throw std::logic_error("indexed weights apply to PerIndex models only");
  return delta_bounds_.at(l);
}

void WeightModel::draw(std::uint64_t seed, std::uint64_t index, std::size_t n,
                       double* theta_out, double* delta_out) const {
  switch (kind_) {
    case WeightKind::Unit:
      for (std::size_t k = 0; k < n; ++k) theta_out[k] = delta_out[k] = 1.0;
      return;
    case WeightKind::CommonTheta: {
      const double s = common_->sample_at(seed, kWeightStreamBase, index);
      for (std::size_t k = 0; k < n; ++k) theta_out[k] = delta_out[k] = s;
      return;
    }
    case WeightKind::PerIndex:
      if (n != thetas_.size())
        throw std::invalid_argument(
            "per-index weight draw needs the declared horizon");
      for (std::size_t k = 0; k < n; ++k) {
        theta_out[k] = thetas_[k].sample_at(seed, kWeightStreamBase + k, index);
        delta_out[k] =
            deltas_[k].sample_at(seed, kWeightStreamBase + n + k, index);
      }
      return;
  }
}

std::string WeightModel::describe() const {
  switch (kind_) {
    case WeightKind::Unit:
      return "unit weights";
    case WeightKind::CommonTheta:
      return "common weight " + common_->describe();
    case WeightKind::PerIndex:
      return "per-index weights, n=" + std::to_string(thetas_.size());
  }
  return "?";
}

ScalarProductModel::ScalarProductModel(BivariatePair pair_, UnivariateSpec theta_)
    : pair(std::move(pair_)), theta(std::move(theta_)) {
  if (theta.support_lo() < 0.0)
    throw std::invalid_argument("scalar weight must be nonnegative");
  if (!(theta.tail(0.0) > 0.0))
    throw std::invalid_argument("weight must not be almost surely zero");
}

double sum_tail_rhs(const SequenceModel& model, double x, double y) {
  double total = 0.0;
  for (std::size_t k = 0; k < model.n(); ++k)
    for (std::size_t l = 0; l < model.n(); ++l)
      total += model.pair_tail(k, l, x, y);
  return total;
}

ProductTail weighted_pair_tail(const UnivariateSpec& theta,
                               const UnivariateSpec& delta,
                               const TailField& base, double x, double y,
                               double rel_tol) {
  require_positive_point(x, y);
  require_tol(rel_tol);
  const Quad q = expect(
      theta,
      [&](double s) -> double {
        if (!(s > 0.0)) return 0.0;
        return expect(
                   delta,
                   [&](double t) -> double {
                     if (!(t > 0.0)) return 0.0;
                     return base.eval(x / s, y / t);
                   },
                   rel_tol)
            .value;
      },
      rel_tol);
  return {q.value, q.err};
}

ProductTail scalar_product_tail(const ScalarProductModel& model, double x,
                                double y, double rel_tol) {
  require_positive_point(x, y);
  require_tol(rel_tol);
  const Quad q = expect(
      model.theta,
      [&](double s) -> double {
        if (!(s > 0.0)) return 0.0;
        return model.pair.joint_tail(x / s, y / s);
      },
      rel_tol);
  return {q.value, q.err};
}

ProductTail ruin_and_rhs(const SequenceModel& model, const WeightModel& weights,
                         double x, double y, double rel_tol) {
  require_positive_point(x, y);
  require_tol(rel_tol);
  const std::size_t n = model.n();
  switch (weights.kind()) {
    case WeightKind::Unit:
      return {sum_tail_rhs(model, x, y), 0.0};
    case WeightKind::CommonTheta: {
      // One shared factor: integrate the summed pair tails in one pass.
      const Quad q = expect(
          weights.common_theta(),
          [&](double s) -> double {
            if (!(s > 0.0)) return 0.0;
            double total = 0.0;
            for (std::size_t k = 0; k < n; ++k)
              for (std::size_t l = 0; l < n; ++l)
                total += model.pair_tail(k, l, x / s, y / s);
            return total;
          },
          rel_tol);
      return {q.value, q.err};
    }
    case WeightKind::PerIndex: {
      if (weights.n() != n)
        throw std::invalid_argument(
            "per-index weights must match the model horizon");
      ProductTail out;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const TailField field{
              [&model, k, l](double a, double b) {
                return model.pair_tail(k, l, a, b);
              },
              0.0};
          const ProductTail term = weighted_pair_tail(
              weights.theta(k), weights.delta(l), field, x, y, rel_tol);
          out.value += term.value;
          out.err += term.err;
        }
      return out;
    }
  }
  return {};
}

ProductTail ruin_max_upper(const SequenceModel& model,
                           const WeightModel& weights, double x, double y,
                           double rel_tol) {
  return ruin_and_rhs(model, weights, x, y, rel_tol);
}

TailField product_tail_field(const ScalarProductModel& model, double rel_tol) {
  require_tol(rel_tol);
  return {[model, rel_tol](double x, double y) {
            return scalar_product_tail(model, x, y, rel_tol).value;
          },
          0.0};
}

std::vector<RatioCurve> check_assumption_A(const ScalarProductModel& model,
                                           const std::vector<double>& c_list,
                                           const std::vector<double>& t_grid,
                                           double ray_c, double rel_tol) {
  if (c_list.empty())
    throw std::invalid_argument("check_assumption_A needs at least one c");
  for (const double c : c_list)
    if (!(c > 0.0))
      throw std::invalid_argument("scaling constants must be positive");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(t_grid);
  require_tol(rel_tol);

  std::vector<ProductTail> den(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    den[i] = scalar_product_tail(model, t_grid[i], ray_c * t_grid[i], rel_tol);

  std::vector<RatioCurve> out;
  out.reserve(c_list.size());
  for (const double c : c_list) {
    RatioCurve curve;
    bool flagged = false;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double t = t_grid[i];
      if (!(den[i].value > 0.0)) {
        curve.truncated = true;
        break;
      }
      curve.thresholds.push_back(t);
      const double num = model.theta.tail(c * std::min(t, ray_c * t));
      if (den[i].value <= 10.0 * den[i].err) {
        curve.values.push_back(kNaN);
        curve.flags.push_back(PointFlag::Censored);
        flagged = true;
      } else {
        curve.values.push_back(num / den[i].value);
        curve.flags.push_back(PointFlag::Ok);
      }
    }
    if (!flagged) curve.flags.clear();
    out.push_back(std::move(curve));
  }
  return out;
}

std::array<RatioCurve, 2> check_eq_6_8(const UnivariateSpec& theta,
                                       const UnivariateSpec& delta,
                                       const TailField& product_tail,
                                       double c1, double c2,
                                       const std::vector<double>& t_grid) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("scaling constants must be positive");
  require_grid(t_grid);

  std::array<RatioCurve, 2> out;
  for (const double t : t_grid) {
    const double den = product_tail.eval(c1 * t, c2 * t);
    if (!(den > product_tail.floor)) {
      out[0].truncated = out[1].truncated = true;
      break;
    }
    out[0].thresholds.push_back(t);
    out[1].thresholds.push_back(t);
    out[0].values.push_back(theta.tail(t) / den);
    out[1].values.push_back(delta.tail(t) / den);
  }
  return out;
}

double AuxiliaryFn::eval(double t) const {
  if (lambdas.empty()) return 0.0;
  if (t <= lambdas[0]) return lambdas[0];
  std::size_t n = 1;
  while (n < lambdas.size() && t >= lambdas[n]) ++n;
  if (n == 1) return t;
  return std::max(lambdas[n - 1] / double(n - 1), t / double(n));
}

AuxiliaryFn build_auxiliary_b(const std::function<double(double)>& weight_tail,
                              const TailField& product_tail,
                              std::size_t n_max,
                              const std::vector<double>& search_grid,
                              double ray_c) {
  if (n_max == 0)
    throw std::invalid_argument("build_auxiliary_b needs n_max >= 1");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(search_grid);

  const std::size_t ng = search_grid.size();
  std::vector<double> den(ng);
  for (std::size_t i = 0; i < ng; ++i)
    den[i] = product_tail.eval(search_grid[i], ray_c * search_grid[i]);

  AuxiliaryFn fn;
  std::size_t start = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    // Skip forward to honor the ladder spacing lambda_n > n lambda_{n-1}.
    if (!fn.lambdas.empty()) {
      const double floor_t = double(n) * fn.lambdas.back();
      while (start < ng && !(search_grid[start] > floor_t)) ++start;
    }
    std::vector<double> dev(ng, kInf);
    for (std::size_t i = start; i < ng; ++i) {
      if (!(den[i] > product_tail.floor)) continue;
      const double t = std::min(search_grid[i], ray_c * search_grid[i]);
      dev[i] = weight_tail(t / double(n)) / den[i];
    }
    if (ng >= 2)
      for (std::size_t i = ng - 1; i-- > start;)
        dev[i] = std::max(dev[i], dev[i + 1]);

    std::size_t hit = ng;
    for (std::size_t i = start; i < ng; ++i)
      if (dev[i] <= 1.0 / double(n)) {
        hit = i;
        break;
      }
    if (hit == ng) {
      if (n == 1)
        throw std::runtime_error(
            "auxiliary function needs the weight tail to vanish against the "
            "product tail on the search grid");
      fn.truncated = true;
      break;
    }
    fn.lambdas.push_back(search_grid[hit]);
    start = hit + 1;
    if (start >= ng && n < n_max) {
      fn.truncated = true;
      break;
    }
  }
  return fn;
}

}  // namespace ht2d
