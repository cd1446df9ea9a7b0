#include "heavytail2d/mcengine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ht2d {

const char* to_string(EstimatorMethod method) {
  return method == EstimatorMethod::Plain ? "plain" : "conditional";
}

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

int worker_count() {
  if (const char* env = std::getenv("HEAVYTAIL2D_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void require_mc_args(const SequenceModel& model, const WeightModel& weights,
                     double x, double y, std::uint64_t m) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::invalid_argument("thresholds must be positive");
  if (m < 1000)
    throw std::invalid_argument("Monte Carlo estimators need m >= 1000");
  if (weights.kind() == WeightKind::PerIndex && weights.n() != model.n())
    throw std::invalid_argument(
        "per-index weights must match the model horizon");
}

struct PathBuffers {
  std::vector<double> xs, ys, th, de;
  explicit PathBuffers(std::size_t n) : xs(n), ys(n), th(n), de(n) {}
};

void tally_range(const SequenceModel& model, const WeightModel& weights,
                 double x, double y, std::uint64_t seed, std::uint64_t lo,
                 std::uint64_t hi, PathEventCounts& out) {
  const std::size_t n = model.n();
  PathBuffers buf(n);
  for (std::uint64_t i = lo; i < hi; ++i) {
    weights.draw(seed, i, n, buf.th.data(), buf.de.data());
    model.draw(seed, i, buf.xs.data(), buf.ys.data());
    double sx = 0.0, sy = 0.0, mx = -kInf, my = -kInf, rx = -kInf, ry = -kInf;
    double px = 0.0, py = 0.0;
    bool simul = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double wx = buf.th[k] * buf.xs[k];
      const double wy = buf.de[k] * buf.ys[k];
      sx += wx;
      sy += wy;
      mx = std::max(mx, wx);
      my = std::max(my, wy);
      rx = std::max(rx, sx);
      ry = std::max(ry, sy);
      px += std::max(wx, 0.0);
      py += std::max(wy, 0.0);
      if (sx > x && sy > y) simul = true;
    }
    out.final_sum += sx > x && sy > y;
    out.coord_max += mx > x && my > y;
    out.running_max += rx > x && ry > y;
    out.positive_sum += px > x && py > y;
    out.simultaneous += simul;
  }
}

Estimate from_count(std::uint64_t hits, std::uint64_t m, std::uint64_t seed) {
  const double p = double(hits) / double(m);
  return {p, std::sqrt(p * (1.0 - p) / double(m)), m, seed,
          EstimatorMethod::Plain};
}

}  // namespace

PathEventCounts count_path_events_serial(const SequenceModel& model,
                                         const WeightModel& weights, double x,
                                         double y, std::uint64_t m,
                                         std::uint64_t seed) {
  require_mc_args(model, weights, x, y, m);
  PathEventCounts counts;
  tally_range(model, weights, x, y, seed, 0, m, counts);
  counts.m = m;
  return counts;
}

PathEventCounts count_path_events(const SequenceModel& model,
                                  const WeightModel& weights, double x,
                                  double y, std::uint64_t m,
                                  std::uint64_t seed) {
  require_mc_args(model, weights, x, y, m);
  const std::uint64_t n_chunks = (m + kChunk - 1) / kChunk;
  std::vector<PathEventCounts> parts(n_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
  for (std::int64_t c = 0; c < std::int64_t(n_chunks); ++c) {
    const std::uint64_t lo = std::uint64_t(c) * kChunk;
    tally_range(model, weights, x, y, seed, lo, std::min(m, lo + kChunk),
                parts[std::size_t(c)]);
  }
  PathEventCounts counts;
  for (const auto& part : parts) {
    counts.final_sum += part.final_sum;
    counts.coord_max += part.coord_max;
    counts.running_max += part.running_max;
    counts.positive_sum += part.positive_sum;
    counts.simultaneous += part.simultaneous;
  }
  counts.m = m;
  return counts;
}

Estimate estimate_joint_sum_tail(const SequenceModel& model,
                                 const WeightModel& weights, double x,
                                 double y, std::uint64_t m,
                                 std::uint64_t seed) {
  return from_count(count_path_events(model, weights, x, y, m, seed).final_sum,
                    m, seed);
}

Estimate estimate_joint_max_tail(const SequenceModel& model,
                                 const WeightModel& weights, double x,
                                 double y, std::uint64_t m,
                                 std::uint64_t seed) {
  return from_count(count_path_events(model, weights, x, y, m, seed).coord_max,
                    m, seed);
}

Estimate estimate_running_max_tail(const SequenceModel& model,
                                   const WeightModel& weights, double x,
                                   double y, std::uint64_t m,
                                   std::uint64_t seed) {
  return from_count(
      count_path_events(model, weights, x, y, m, seed).running_max, m, seed);
}

Estimate estimate_positive_sum_tail(const SequenceModel& model,
                                    const WeightModel& weights, double x,
                                    double y, std::uint64_t m,
                                    std::uint64_t seed) {
  return from_count(
      count_path_events(model, weights, x, y, m, seed).positive_sum, m, seed);
}

namespace {

void require_config(const RiskModelConfig& config) {
  if (config.n != config.claims.n())
    throw std::invalid_argument("config horizon must match the claim model");
}

}  // namespace

Estimate estimate_ruin(const RiskModelConfig& config, RuinKind which,
                       std::uint64_t m, std::uint64_t seed) {
  require_config(config);
  const auto counts = count_path_events(config.claims, config.weights,
                                        config.x, config.y, m, seed);
  return from_count(
      which == RuinKind::And ? counts.running_max : counts.simultaneous, m,
      seed);
}

PassageTimes ruin_passage_times(const RiskModelConfig& config,
                                std::uint64_t seed,
                                std::uint64_t path_index) {
  require_config(config);
  if (!(config.x > 0.0) || !(config.y > 0.0))
    throw std::invalid_argument("thresholds must be positive");
  const std::size_t n = config.n;
  PathBuffers buf(n);
  config.weights.draw(seed, path_index, n, buf.th.data(), buf.de.data());
  config.claims.draw(seed, path_index, buf.xs.data(), buf.ys.data());
  PassageTimes times;
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += buf.th[k] * buf.xs[k];
    sy += buf.de[k] * buf.ys[k];
    if (times.t1 == 0 && sx > config.x) times.t1 = k + 1;
    if (times.t2 == 0 && sy > config.y) times.t2 = k + 1;
  }
  return times;
}

namespace {

double theta_hi(const WeightModel& w, std::size_t k) {
  switch (w.kind()) {
    case WeightKind::Unit: return 1.0;
    case WeightKind::CommonTheta: return w.common_theta().support_hi();
    case WeightKind::PerIndex: return w.theta_bound(k).hi;
  }
  return 1.0;
}

double delta_hi(const WeightModel& w, std::size_t l) {
  switch (w.kind()) {
    case WeightKind::Unit: return 1.0;
    case WeightKind::CommonTheta: return w.common_theta().support_hi();
    case WeightKind::PerIndex: return w.delta_bound(l).hi;
  }
  return 1.0;
}

bool conditional_eligible(const SequenceModel& model,
                          const WeightModel& weights, double x, double y) {
  if (model.structure() == SeqStructure::PairwiseFGM) return false;
  for (std::size_t k = 0; k < model.n(); ++k) {
    if (model.x_margin(k).atomic() || model.y_margin(k).atomic()) return false;
    // No rare event to exploit: a single weighted claim already clears
    // half the threshold with appreciable probability.
    if (model.x_margin(k).tail(0.5 * x / theta_hi(weights, k)) >= 0.25)
      return false;
    if (model.y_margin(k).tail(0.5 * y / delta_hi(weights, k)) >= 0.25)
      return false;
  }
  return true;
}

// P[own > a | partner = partner_value] for one claim pair. The realized
// partner level is pushed into the open interval before the derivative
// call; a at or beyond the support ends skips the copula entirely.
double cond_tail_given_partner(const DependenceSpec& dep,
                               const UnivariateSpec& own,
                               const UnivariateSpec& partner, double a,
                               double partner_value, bool own_is_x) {
  const double u = own.tail(a);
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double v = std::clamp(partner.tail(partner_value), 1e-300,
                              1.0 - 1e-12);
  return own_is_x ? dep.survival_dv(u, v) : dep.survival_du(v, u);
}

struct CondBuffers {
  PathBuffers path;
  std::vector<double> wx, wy;
  explicit CondBuffers(std::size_t n) : path(n), wx(n), wy(n) {}
};

double conditional_path(const SequenceModel& model, const WeightModel& weights,
                        double x, double y, std::uint64_t seed,
                        std::uint64_t i, CondBuffers& buf) {
  const std::size_t n = model.n();
  auto& p = buf.path;
  weights.draw(seed, i, n, p.th.data(), p.de.data());
  model.draw(seed, i, p.xs.data(), p.ys.data());

  double sum_x = 0.0, sum_y = 0.0;
  std::size_t kx = n, ky = n;  // first half-threshold exceedances
  for (std::size_t k = 0; k < n; ++k) {
    buf.wx[k] = p.th[k] * p.xs[k];
    buf.wy[k] = p.de[k] * p.ys[k];
    sum_x += buf.wx[k];
    sum_y += buf.wy[k];
    if (kx == n && buf.wx[k] > 0.5 * x) kx = k;
    if (ky == n && buf.wy[k] > 0.5 * y) ky = k;
  }

  double v = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (kx < a) break;  // an earlier X jump rules out every later stratum
    const double ax =
        std::max(0.5 * x, x - (sum_x - buf.wx[a])) / p.th[a];
    for (std::size_t b = 0; b < n; ++b) {
      if (ky < b) break;
      const double ay =
          std::max(0.5 * y, y - (sum_y - buf.wy[b])) / p.de[b];
      if (a == b) {
        v += model.pair_tail(a, a, ax, ay);
      } else {
        const double p1 =
            cond_tail_given_partner(model.pair_dep(), model.x_margin(a),
                                    model.y_margin(a), ax, p.ys[a], true);
        const double p2 =
            cond_tail_given_partner(model.pair_dep(), model.y_margin(b),
                                    model.x_margin(b), ay, p.xs[b], false);
        v += p1 * p2;
      }
    }
  }
  // Stratum without a half-threshold jump in one of the coordinates:
  // plain indicator on the realized path.
  if (kx == n || ky == n) v += sum_x > x && sum_y > y;
  return v;
}

struct CondPartial {
  double sum_v = 0.0;
  double sum_v2 = 0.0;
};

CondPartial conditional_chunk(const SequenceModel& model,
                              const WeightModel& weights, double x, double y,
                              std::uint64_t seed, std::uint64_t lo,
                              std::uint64_t hi) {
  CondBuffers buf(model.n());
  CondPartial part;
  for (std::uint64_t i = lo; i < hi; ++i) {
    const double v = conditional_path(model, weights, x, y, seed, i, buf);
    part.sum_v += v;
    part.sum_v2 += v * v;
  }
  return part;
}

Estimate conditional_reduce(const std::vector<CondPartial>& parts,
                            std::uint64_t m, std::uint64_t seed) {
  double sv = 0.0, sv2 = 0.0;
  for (const auto& part : parts) {
    sv += part.sum_v;
    sv2 += part.sum_v2;
  }
  const double mean = sv / double(m);
  const double var =
      m > 1 ? std::max(0.0, (sv2 - sv * mean) / double(m - 1)) : 0.0;
  return {std::clamp(mean, 0.0, 1.0), std::sqrt(var / double(m)), m, seed,
          EstimatorMethod::Conditional};
}

Estimate conditional_impl(const SequenceModel& model,
                          const WeightModel& weights, double x, double y,
                          std::uint64_t m, std::uint64_t seed, bool parallel) {
  require_mc_args(model, weights, x, y, m);
  if (!model.nonnegative())
    throw std::invalid_argument(
        "conditional estimator needs nonnegative claims");
  if (!conditional_eligible(model, weights, x, y)) {
    Estimate plain =
        parallel
            ? estimate_joint_sum_tail(model, weights, x, y, m, seed)
            : from_count(
                  count_path_events_serial(model, weights, x, y, m, seed)
                      .final_sum,
                  m, seed);
    return plain;
  }
  const std::uint64_t n_chunks = (m + kChunk - 1) / kChunk;
  std::vector<CondPartial> parts(n_chunks);
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
    for (std::int64_t c = 0; c < std::int64_t(n_chunks); ++c) {
      const std::uint64_t lo = std::uint64_t(c) * kChunk;
      parts[std::size_t(c)] = conditional_chunk(model, weights, x, y, seed,
                                                lo, std::min(m, lo + kChunk));
    }
  } else {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t lo = c * kChunk;
      parts[c] = conditional_chunk(model, weights, x, y, seed, lo,
                                   std::min(m, lo + kChunk));
    }
  }
  return conditional_reduce(parts, m, seed);
}

}  // namespace

Estimate conditional_estimator(const SequenceModel& model,
                               const WeightModel& weights, double x, double y,
                               std::uint64_t m, std::uint64_t seed) {
  return conditional_impl(model, weights, x, y, m, seed, true);
}

Estimate conditional_estimator_serial(const SequenceModel& model,
                                      const WeightModel& weights, double x,
                                      double y, std::uint64_t m,
                                      std::uint64_t seed) {
  return conditional_impl(model, weights, x, y, m, seed, false);
}

}  // namespace ht2d
