#include "heavytail2d/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ht2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_grid(const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("threshold grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("threshold grid must be strictly increasing");
}

// Shared walk for the exact bivariate ratio curves: numerator arguments
// come from `map`, denominators are tail2(t, c t). Zero denominators end
// the curve; values at or below the field floor are censored in place.
template <typename MapFn>
RatioCurve exact_ratio_curve(const TailField& tail2, double ray_c,
                             const std::vector<double>& grid, MapFn map) {
  RatioCurve out;
  bool flagged = false;
  for (const double t : grid) {
    const double den = tail2.eval(t, ray_c * t);
    if (den <= 0.0) {
      out.truncated = true;
      break;
    }
    const auto [nx, ny] = map(t);
    const double num = tail2.eval(nx, ny);
    out.thresholds.push_back(t);
    if (den <= tail2.floor || num <= tail2.floor) {
      out.values.push_back(kNaN);
      out.flags.push_back(PointFlag::Censored);
      flagged = true;
    } else {
      out.values.push_back(num / den);
      out.flags.push_back(PointFlag::Ok);
    }
  }
  if (!flagged) out.flags.clear();
  return out;
}

}  // namespace

RatioProbe RatioProbe::shift(double a1, double a2, double ray_c,
                             std::vector<double> t_grid) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0))
    throw std::invalid_argument("shift probe offsets must be nonnegative");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(t_grid);
  return RatioProbe(Kind::Shift, a1, a2, ray_c, std::move(t_grid));
}

RatioProbe RatioProbe::scale(double b1, double b2, double ray_c,
                             std::vector<double> t_grid) {
  if (!(b1 > 0.0 && b1 < 1.0 && b2 > 0.0 && b2 < 1.0))
    throw std::invalid_argument("scale probe factors must lie in (0, 1)");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(t_grid);
  return RatioProbe(Kind::Scale, b1, b2, ray_c, std::move(t_grid));
}

RatioCurve l2_ratio(const TailField& tail2, const RatioProbe& probe) {
  if (probe.kind() != RatioProbe::Kind::Shift)
    throw std::invalid_argument("l2_ratio needs a shift probe");
  const double a1 = probe.p1(), a2 = probe.p2(), c = probe.ray();
  return exact_ratio_curve(tail2, c, probe.grid(), [&](double t) {
    return std::pair<double, double>{t - a1, c * t - a2};
  });
}

RatioCurve d2_ratio(const TailField& tail2, const RatioProbe& probe) {
  if (probe.kind() != RatioProbe::Kind::Scale)
    throw std::invalid_argument("d2_ratio needs a scale probe");
  const double b1 = probe.p1(), b2 = probe.p2(), c = probe.ray();
  return exact_ratio_curve(tail2, c, probe.grid(), [&](double t) {
    return std::pair<double, double>{b1 * t, b2 * c * t};
  });
}

std::vector<RatioCurve> c2_profile(
    const TailField& tail2,
    const std::vector<std::pair<double, double>>& z_schedule,
    const std::vector<double>& t_grid, double ray_c) {
  if (z_schedule.empty())
    throw std::invalid_argument("c2_profile needs a z schedule");
  for (std::size_t i = 0; i < z_schedule.size(); ++i) {
    const auto [z1, z2] = z_schedule[i];
    if (!(z1 > 0.0 && z1 <= 1.0 && z2 > 0.0 && z2 <= 1.0))
      throw std::invalid_argument("z factors must lie in (0, 1]");
    if (i > 0 && !(z1 >= z_schedule[i - 1].first &&
                   z2 >= z_schedule[i - 1].second))
      throw std::invalid_argument("z schedule must climb toward (1, 1)");
  }
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(t_grid);

  std::vector<RatioCurve> out;
  out.reserve(z_schedule.size());
  for (const auto& [z1, z2] : z_schedule)
    out.push_back(exact_ratio_curve(tail2, ray_c, t_grid, [&](double t) {
      return std::pair<double, double>{z1 * t, z2 * ray_c * t};
    }));
  return out;
}

RatioCurve s2_ratio(const SequenceModel& model,
                    const std::vector<double>& t_grid, std::size_t m,
                    std::uint64_t seed, double ray_c) {
  if (model.structure() != SeqStructure::CommonPairIID || model.n() != 2)
    throw std::invalid_argument("s2_ratio needs two common i.i.d. pairs");
  if (!model.x_margin(0).class_flags().in_S ||
      !model.y_margin(0).class_flags().in_S)
    throw std::invalid_argument(
        "s2_ratio needs subexponential margins on both coordinates");
  if (m == 0) throw std::invalid_argument("s2_ratio needs m >= 1");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(t_grid);

  const std::size_t ng = t_grid.size();
  std::vector<double> y_grid(ng);
  for (std::size_t g = 0; g < ng; ++g) y_grid[g] = ray_c * t_grid[g];

  // Joint exceedance histogram over the grid, one pass over the draws.
  std::vector<std::uint64_t> hist(ng + 1, 0);
  double xs[2], ys[2];
  for (std::size_t i = 0; i < m; ++i) {
    model.draw(seed, i, xs, ys);
    const double sx = xs[0] + xs[1];
    const double sy = ys[0] + ys[1];
    const std::size_t dx =
        std::lower_bound(t_grid.begin(), t_grid.end(), sx) - t_grid.begin();
    const std::size_t dy =
        std::lower_bound(y_grid.begin(), y_grid.end(), sy) - y_grid.begin();
    hist[std::min(dx, dy)]++;
  }
  std::vector<std::uint64_t> cnt(ng, 0);
  std::uint64_t acc = 0;
  for (std::size_t g = ng; g-- > 0;) {
    acc += hist[g + 1];
    cnt[g] = acc;
  }

  RatioCurve out;
  bool flagged = false;
  for (std::size_t g = 0; g < ng; ++g) {
    const double t = t_grid[g];
    const double den = model.pair_tail(0, 0, t, ray_c * t);
    const double phat = double(cnt[g]) / double(m);
    out.thresholds.push_back(t);
    if (den <= 0.0) {
      out.values.push_back(kNaN);
      out.stderrs.push_back(kNaN);
      out.flags.push_back(PointFlag::Unreliable);
      flagged = true;
      continue;
    }
    out.values.push_back(phat / den);
    out.stderrs.push_back(std::sqrt(phat * (1.0 - phat) / double(m)) / den);
    const bool thin = den < 10.0 / double(m);
    out.flags.push_back(thin ? PointFlag::Unreliable : PointFlag::Ok);
    flagged |= thin;
  }
  if (!flagged) out.flags.clear();
  return out;
}

RatioCurve univariate_ratio(const UnivariateSpec& spec, UniKind kind,
                            double param, const std::vector<double>& t_grid) {
  switch (kind) {
    case UniKind::LShift:
      if (!(param >= 0.0))
        throw std::invalid_argument("LShift offset must be nonnegative");
      break;
    case UniKind::DScale:
      if (!(param > 0.0 && param < 1.0))
        throw std::invalid_argument("DScale factor must lie in (0, 1)");
      break;
    case UniKind::CProfile:
      if (!(param > 0.0 && param <= 1.0))
        throw std::invalid_argument("CProfile factor must lie in (0, 1]");
      break;
  }
  require_grid(t_grid);

  RatioCurve out;
  for (const double t : t_grid) {
    const double den = spec.tail(t);
    if (den <= 0.0) {
      out.truncated = true;
      break;
    }
    const double arg = kind == UniKind::LShift ? t - param : param * t;
    out.thresholds.push_back(t);
    out.values.push_back(spec.tail(arg) / den);
  }
  return out;
}

InsensitivityFn build_insensitivity(const TailField& tail2,
                                    std::size_t max_level,
                                    const std::vector<double>& search_grid,
                                    double ray_c) {
  if (max_level == 0)
    throw std::invalid_argument("build_insensitivity needs max_level >= 1");
  if (!(ray_c > 0.0))
    throw std::invalid_argument("ray slope must be positive");
  require_grid(search_grid);

  const std::size_t ng = search_grid.size();
  InsensitivityFn fn;
  std::size_t start = 0;
  for (std::size_t n = 1; n <= max_level; ++n) {
    // Deviation of the shift-(n, n) ratio at each remaining grid point,
    // then the suffix maximum, so a chosen breakpoint certifies the whole
    // observed range beyond it.
    std::vector<double> dev(ng, std::numeric_limits<double>::infinity());
    for (std::size_t i = start; i < ng; ++i) {
      const double t = search_grid[i];
      const double den = tail2.eval(t, ray_c * t);
      if (den <= tail2.floor) continue;
      dev[i] = tail2.eval(t - double(n), ray_c * t - double(n)) / den - 1.0;
    }
    for (std::size_t i = ng - 1; i-- > start;) dev[i] = std::max(dev[i], dev[i + 1]);

    std::size_t hit = ng;
    for (std::size_t i = start; i < ng; ++i)
      if (dev[i] <= 1.0 / double(n)) {
        hit = i;
        break;
      }
    if (hit == ng) {
      fn.truncated = true;
      break;
    }
    fn.breakpoints.push_back(search_grid[hit]);
    fn.levels.push_back(double(n));
    start = hit + 1;
    if (start >= ng && n < max_level) {
      fn.truncated = true;
      break;
    }
  }
  return fn;
}

ClassVerdict verdict(const RatioCurve& curve, const VerdictTarget& target,
                     double tolerance) {
  if (!(tolerance > 0.0))
    throw std::invalid_argument("verdict tolerance must be positive");

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve.flag(i) == PointFlag::Ok && std::isfinite(curve.values[i]))
      usable.push_back(i);
  if (usable.empty()) return {Verdict::Inconclusive, 0.0};

  const auto value = [&](std::size_t k) { return curve.values[usable[k]]; };
  const auto se = [&](std::size_t k) {
    return curve.stderrs.empty() ? 0.0 : curve.stderrs[usable[k]];
  };

  if (target.bounded) {
    bool exceeded = false;
    for (std::size_t k = 0; k < usable.size(); ++k)
      exceeded |= value(k) > target.value;
    bool doubling = usable.size() >= 2;
    for (std::size_t k = 0; k + 1 < usable.size(); ++k)
      if (!(value(k + 1) >= 2.0 * value(k))) doubling = false;
    double trend = 0.0;
    if (value(0) > 0.0 && value(usable.size() - 1) > 0.0)
      trend = std::log2(value(usable.size() - 1) / value(0));
    if (exceeded || doubling) return {Verdict::Contradicts, trend};
    return {Verdict::Supports, trend};
  }

  const std::size_t w = std::max<std::size_t>(1, (usable.size() + 3) / 4);
  const std::size_t first = usable.size() - w;
  bool within = true, all_clear = true;
  double max_se = 0.0, vmin = value(first), vmax = value(first);
  for (std::size_t k = first; k < usable.size(); ++k) {
    const double dev = std::abs(value(k) - target.value);
    const double slack = tolerance + 3.0 * se(k);
    within &= dev <= slack;
    all_clear &= dev > 3.0 * slack;
    max_se = std::max(max_se, se(k));
    vmin = std::min(vmin, value(k));
    vmax = std::max(vmax, value(k));
  }
  const double dev_first = std::abs(value(first) - target.value);
  const double dev_last = std::abs(value(usable.size() - 1) - target.value);
  const double trend = dev_last - dev_first;

  if (within) {
    if (!curve.stderrs.empty() && max_se > tolerance)
      return {Verdict::Inconclusive, trend};
    return {Verdict::Supports, trend};
  }

  bool drifting = w >= 2;
  for (std::size_t k = first; k + 1 < usable.size(); ++k)
    if (std::abs(value(k + 1) - target.value) <
        std::abs(value(k) - target.value))
      drifting = false;
  const double last_slack = tolerance + 3.0 * se(usable.size() - 1);
  if (drifting && dev_last > 2.0 * last_slack && dev_last > dev_first)
    return {Verdict::Contradicts, trend};

  if (all_clear && vmax - vmin <= 2.0 * (tolerance + 3.0 * max_se))
    return {Verdict::Contradicts, trend};

  return {Verdict::Inconclusive, trend};
}

ClassVerdict apply_verdict(RatioCurve& curve, const VerdictTarget& target,
                           double tolerance) {
  const ClassVerdict v = verdict(curve, target, tolerance);
  curve.verdict = v.verdict;
  curve.trend_stat = v.trend_stat;
  return v;
}

}  // namespace ht2d
