#include "heavytail2d/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "heavytail2d/rng.hpp"
#include "heavytail2d/special.hpp"

namespace ht2d {

namespace {

// Keeps probability-transform coordinates strictly inside (0, 1) after a
// floating-point collapse deep in a tail (events at probability ~1e-16
// per draw). quantile(1.0) would be infinite for unbounded margins.
double clamp_open01(double w) {
  constexpr double lo = 0x1p-54;
  constexpr double hi = 1.0 - 0x1p-53;
  return std::min(std::max(w, lo), hi);
}

// Inverse of the FGM conditional distribution: solves
// q * (1 + a * (1 - q)) = u with a = theta * (1 - 2 * prev), taking the
// root that stays in [0, 1]. The rationalized form is stable as a -> 0.
double fgm_conditional_inverse(double prev, double u, double theta) {
  const double a = theta * (1.0 - 2.0 * prev);
  const double b = 1.0 + a;
  const double disc = b * b - 4.0 * a * u;
  return 2.0 * u / (b + std::sqrt(std::max(disc, 0.0)));
}

double fgm_survival(double u, double v, double theta) {
  return u * v * (1.0 + theta * (1.0 - u) * (1.0 - v));
}

// log(u^-d + v^-d - 1) for interior u, v. Working in logs keeps the
// Clayton generator finite for large delta deep in the tail, where the
// direct pow form overflows.
double clayton_log_sum(double u, double v, double d) {
  const double lu = -d * std::log(u);
  const double lv = -d * std::log(v);
  const double mx = std::max(lu, lv);
  return mx +
         std::log(std::exp(lu - mx) + std::exp(lv - mx) - std::exp(-mx));
}

void require_grid(const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("threshold grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("threshold grid must be strictly increasing");
}

// Number of grid thresholds strictly below val; the row exceeds exactly
// the thresholds with index < count.
std::size_t exceed_depth(const std::vector<double>& grid, double val) {
  return static_cast<std::size_t>(
      std::lower_bound(grid.begin(), grid.end(), val) - grid.begin());
}

// hist[e] counts rows whose exceedance depth equals e; returns
// cnt[g] = rows exceeding threshold g, i.e. rows with depth > g.
std::vector<std::uint64_t> exceed_counts(
    const std::vector<std::uint64_t>& hist) {
  const std::size_t ng = hist.size() - 1;
  std::vector<std::uint64_t> cnt(ng, 0);
  std::uint64_t acc = 0;
  for (std::size_t g = ng; g-- > 0;) {
    acc += hist[g + 1];
    cnt[g] = acc;
  }
  return cnt;
}

}  // namespace

const char* to_string(DepKind kind) {
  switch (kind) {
    case DepKind::Independent: return "Independent";
    case DepKind::FGM: return "FGM";
    case DepKind::SurvivalClayton: return "SurvivalClayton";
    case DepKind::Comonotone: return "Comonotone";
    case DepKind::Countermonotone: return "Countermonotone";
    case DepKind::GaussianCopula: return "GaussianCopula";
  }
  return "?";
}

DependenceSpec DependenceSpec::independent() {
  return DependenceSpec(DepKind::Independent, 0.0);
}

DependenceSpec DependenceSpec::fgm(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0))
    throw std::invalid_argument("FGM theta must lie in [-1, 1]");
  return DependenceSpec(DepKind::FGM, theta);
}

DependenceSpec DependenceSpec::survival_clayton(double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("SurvivalClayton delta must be positive");
  return DependenceSpec(DepKind::SurvivalClayton, delta);
}

DependenceSpec DependenceSpec::comonotone() {
  return DependenceSpec(DepKind::Comonotone, 0.0);
}

DependenceSpec DependenceSpec::countermonotone() {
  return DependenceSpec(DepKind::Countermonotone, 0.0);
}

DependenceSpec DependenceSpec::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("GaussianCopula rho must lie in (-1, 1)");
  return DependenceSpec(DepKind::GaussianCopula, rho);
}

double DependenceSpec::survival(double u, double v) const {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw std::domain_error("survival copula arguments must lie in [0, 1]");
  if (u <= 0.0 || v <= 0.0) return 0.0;
  switch (kind_) {
    case DepKind::Independent:
      return u * v;
    case DepKind::FGM:
      return fgm_survival(u, v, param_);
    case DepKind::SurvivalClayton:
      if (u >= 1.0) return v;
      if (v >= 1.0) return u;
      return std::exp(-clayton_log_sum(u, v, param_) / param_);
    case DepKind::Comonotone:
      return std::min(u, v);
    case DepKind::Countermonotone:
      return std::max(u + v - 1.0, 0.0);
    case DepKind::GaussianCopula: {
      if (u >= 1.0) return v;
      if (v >= 1.0) return u;
      // Below the quadrature floor the result is indistinguishable from
      // zero; the guard also keeps 1 - u from rounding to exactly 1.
      if (u < 1e-15 || v < 1e-15) return 0.0;
      return bvn_upper(norm_quantile(1.0 - u), norm_quantile(1.0 - v),
                       param_);
    }
  }
  throw std::logic_error("unhandled dependence kind");
}

double DependenceSpec::survival_dv(double u, double v) const {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw std::domain_error(
        "survival copula derivatives need interior arguments");
  switch (kind_) {
    case DepKind::Independent:
      return u;
    case DepKind::FGM:
      return u * (1.0 + param_ * (1.0 - u) * (1.0 - 2.0 * v));
    case DepKind::SurvivalClayton: {
      const double ls = clayton_log_sum(u, v, param_);
      return std::exp(-(param_ + 1.0) * std::log(v) -
                      (1.0 / param_ + 1.0) * ls);
    }
    case DepKind::Comonotone:
      return v < u ? 1.0 : 0.0;
    case DepKind::Countermonotone:
      return u + v > 1.0 ? 1.0 : 0.0;
    case DepKind::GaussianCopula: {
      const double s = std::sqrt(1.0 - param_ * param_);
      return norm_cdf((norm_quantile(u) - param_ * norm_quantile(v)) / s);
    }
  }
  throw std::logic_error("unhandled dependence kind");
}

double DependenceSpec::survival_du(double u, double v) const {
  // Every kind here is exchangeable, so the u-derivative at (u, v) equals
  // the v-derivative at (v, u).
  return survival_dv(v, u);
}

std::pair<double, double> DependenceSpec::sample_uniforms(double u1,
                                                          double u2) const {
  switch (kind_) {
    case DepKind::Independent:
      return {u1, u2};
    case DepKind::FGM:
      return {u1, fgm_conditional_inverse(u1, u2, param_)};
    case DepKind::SurvivalClayton: {
      // Draw (v1, v2) from the Clayton copula by conditional inversion,
      // then reflect: (1 - v1, 1 - v2) has the Clayton survival copula.
      const double r = std::pow(u2, -param_ / (1.0 + param_)) - 1.0;
      const double v2 =
          std::pow(r * std::pow(u1, -param_) + 1.0, -1.0 / param_);
      return {clamp_open01(1.0 - u1), clamp_open01(1.0 - v2)};
    }
    case DepKind::Comonotone:
      return {u1, u1};
    case DepKind::Countermonotone:
      return {u1, clamp_open01(1.0 - u1)};
    case DepKind::GaussianCopula: {
      const double z1 = norm_quantile(u1);
      const double z2 = param_ * z1 +
                        std::sqrt(1.0 - param_ * param_) * norm_quantile(u2);
      return {u1, clamp_open01(norm_cdf(z2))};
    }
  }
  throw std::logic_error("unhandled dependence kind");
}

double DependenceSpec::tail_floor() const {
  return kind_ == DepKind::GaussianCopula ? 1e-10 : 0.0;
}

std::string DependenceSpec::describe() const {
  char buf[64];
  switch (kind_) {
    case DepKind::FGM:
      std::snprintf(buf, sizeof buf, "FGM(theta=%g)", param_);
      return buf;
    case DepKind::SurvivalClayton:
      std::snprintf(buf, sizeof buf, "SurvivalClayton(delta=%g)", param_);
      return buf;
    case DepKind::GaussianCopula:
      std::snprintf(buf, sizeof buf, "GaussianCopula(rho=%g)", param_);
      return buf;
    default:
      return to_string(kind_);
  }
}

double BivariatePair::joint_tail(double xv, double yv) const {
  return dep.survival(x.tail(xv), y.tail(yv));
}

std::pair<double, double> BivariatePair::sample_at(
    std::uint64_t seed, std::uint64_t index, std::uint64_t stream_x,
    std::uint64_t stream_y) const {
  const double u1 = uniform01(seed, stream_x, index);
  const double u2 = uniform01(seed, stream_y, index);
  const auto w = dep.sample_uniforms(u1, u2);
  return {x.quantile(w.first), y.quantile(w.second)};
}

std::vector<std::pair<double, double>> BivariatePair::sample(
    std::uint64_t seed, std::size_t m) const {
  if (m == 0) throw std::invalid_argument("sample needs m >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(sample_at(seed, i));
  return out;
}

TailField BivariatePair::tail_field() const {
  const BivariatePair copy = *this;
  return {[copy](double xv, double yv) { return copy.joint_tail(xv, yv); },
          dep.tail_floor()};
}

RatioCurve sai_profile(const BivariatePair& pair,
                       const std::vector<double>& t_grid) {
  require_grid(t_grid);
  RatioCurve out;
  const double floor = pair.dep.tail_floor();
  bool flagged = false;
  for (const double t : t_grid) {
    const double den = pair.x.tail(t) * pair.y.tail(t);
    double val = std::numeric_limits<double>::quiet_NaN();
    PointFlag flag = PointFlag::Ok;
    if (den <= 0.0) {
      flag = PointFlag::Unreliable;
    } else {
      const double num = pair.joint_tail(t, t);
      if (floor > 0.0 && num <= floor)
        flag = PointFlag::Censored;
      else
        val = num / den;
    }
    out.thresholds.push_back(t);
    out.values.push_back(val);
    out.flags.push_back(flag);
    flagged |= flag != PointFlag::Ok;
  }
  if (!flagged) out.flags.clear();
  return out;
}

ScalingFit scaling_h(const DependenceSpec& dep, double t1, double t2,
                     const std::vector<double>& x_schedule) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("scaling_h needs positive ray coefficients");
  if (x_schedule.empty())
    throw std::invalid_argument("scaling_h needs a schedule");
  for (std::size_t i = 0; i < x_schedule.size(); ++i) {
    if (!(x_schedule[i] > 0.0) ||
        (i > 0 && !(x_schedule[i] < x_schedule[i - 1])))
      throw std::invalid_argument(
          "scaling_h schedule must be positive and strictly decreasing");
  }

  ScalingFit fit;
  if (dep.kind() == DepKind::SurvivalClayton) {
    const double d = dep.param();
    fit.has_exact = true;
    fit.gamma_exact = 1.0;
    fit.h_exact = std::pow(std::pow(t1, -d) + std::pow(t2, -d), -1.0 / d);
  }

  std::vector<double> lx, lc;
  for (const double s : x_schedule) {
    const double c =
        dep.survival(std::min(t1 * s, 1.0), std::min(t2 * s, 1.0));
    if (c <= dep.tail_floor()) {
      fit.truncated = true;
      break;
    }
    lx.push_back(std::log(s));
    lc.push_back(std::log(c));
  }
  fit.points_used = lx.size();
  if (lx.size() < 2) {
    fit.truncated = true;
    return fit;
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += lc[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (lc[i] - my);
  }
  fit.gamma_est = sxy / sxx;
  fit.h_est = std::exp(my - fit.gamma_est * mx);
  return fit;
}

SampleMatrix SampleMatrix::select(
    const std::vector<std::size_t>& indices) const {
  SampleMatrix out;
  out.rows = rows;
  for (const std::size_t c : indices) {
    if (c >= cols.size())
      throw std::out_of_range("SampleMatrix column index out of range");
    out.cols.push_back(cols[c]);
    out.names.push_back(c < names.size() ? names[c] : std::string());
  }
  return out;
}

const char* to_string(SeqStructure structure) {
  switch (structure) {
    case SeqStructure::BlocksIndependent: return "BlocksIndependent";
    case SeqStructure::PairwiseFGM: return "PairwiseFGM";
    case SeqStructure::CommonPairIID: return "CommonPairIID";
  }
  return "?";
}

SequenceModel SequenceModel::blocks_independent(
    std::vector<UnivariateSpec> x_block, std::vector<UnivariateSpec> y_block) {
  if (x_block.empty() || x_block.size() != y_block.size())
    throw std::invalid_argument(
        "sequence blocks must be nonempty and of equal length");
  return SequenceModel(SeqStructure::BlocksIndependent, std::move(x_block),
                       std::move(y_block), 0.0, DependenceSpec::independent());
}

SequenceModel SequenceModel::pairwise_fgm(std::vector<UnivariateSpec> x_block,
                                          std::vector<UnivariateSpec> y_block,
                                          double theta) {
  if (x_block.empty() || x_block.size() != y_block.size())
    throw std::invalid_argument(
        "sequence blocks must be nonempty and of equal length");
  if (!(theta >= -1.0 && theta <= 1.0))
    throw std::invalid_argument("PairwiseFGM theta must lie in [-1, 1]");
  return SequenceModel(SeqStructure::PairwiseFGM, std::move(x_block),
                       std::move(y_block), theta,
                       DependenceSpec::independent());
}

SequenceModel SequenceModel::common_pair_iid(std::size_t n,
                                             BivariatePair pair) {
  if (n == 0) throw std::invalid_argument("common_pair_iid needs n >= 1");
  std::vector<UnivariateSpec> xs(n, pair.x);
  std::vector<UnivariateSpec> ys(n, pair.y);
  return SequenceModel(SeqStructure::CommonPairIID, std::move(xs),
                       std::move(ys), 0.0, pair.dep);
}

double SequenceModel::chain_theta(std::size_t pos_a, std::size_t pos_b) const {
  if (structure_ != SeqStructure::PairwiseFGM)
    throw std::logic_error("chain_theta applies to PairwiseFGM models only");
  if (pos_a >= 2 * n() || pos_b >= 2 * n() || pos_a == pos_b)
    throw std::invalid_argument(
        "chain positions must be distinct and within 2n");
  const std::size_t d = pos_a < pos_b ? pos_b - pos_a : pos_a - pos_b;
  return std::pow(theta_, double(d)) / std::pow(3.0, double(d - 1));
}

double SequenceModel::pair_tail(std::size_t k, std::size_t l, double x,
                                double y) const {
  if (k >= n() || l >= n())
    throw std::out_of_range("pair_tail index out of range");
  const double u = xs_[k].tail(x);
  const double v = ys_[l].tail(y);
  switch (structure_) {
    case SeqStructure::BlocksIndependent:
      return u * v;
    case SeqStructure::PairwiseFGM:
      return fgm_survival(u, v, chain_theta(k, n() + l));
    case SeqStructure::CommonPairIID:
      return k == l ? dep_.survival(u, v) : u * v;
  }
  throw std::logic_error("unhandled sequence structure");
}

bool SequenceModel::nonnegative() const {
  for (const auto& s : xs_)
    if (s.support_lo() < 0.0) return false;
  for (const auto& s : ys_)
    if (s.support_lo() < 0.0) return false;
  return true;
}

void SequenceModel::draw(std::uint64_t seed, std::uint64_t index,
                         double* xs_out, double* ys_out) const {
  const std::size_t nn = n();
  switch (structure_) {
    case SeqStructure::BlocksIndependent:
      for (std::size_t k = 0; k < nn; ++k)
        xs_out[k] = xs_[k].quantile(uniform01(seed, k, index));
      for (std::size_t l = 0; l < nn; ++l)
        ys_out[l] = ys_[l].quantile(uniform01(seed, nn + l, index));
      return;
    case SeqStructure::PairwiseFGM: {
      double w = uniform01(seed, 0, index);
      xs_out[0] = xs_[0].quantile(w);
      for (std::size_t p = 1; p < 2 * nn; ++p) {
        w = fgm_conditional_inverse(w, uniform01(seed, p, index), theta_);
        if (p < nn)
          xs_out[p] = xs_[p].quantile(w);
        else
          ys_out[p - nn] = ys_[p - nn].quantile(w);
      }
      return;
    }
    case SeqStructure::CommonPairIID:
      for (std::size_t k = 0; k < nn; ++k) {
        const auto w = dep_.sample_uniforms(uniform01(seed, k, index),
                                            uniform01(seed, nn + k, index));
        xs_out[k] = xs_[k].quantile(w.first);
        ys_out[k] = ys_[k].quantile(w.second);
      }
      return;
  }
  throw std::logic_error("unhandled sequence structure");
}

SampleMatrix SequenceModel::sample(std::uint64_t seed, std::size_t m) const {
  if (m == 0) throw std::invalid_argument("sample needs m >= 1");
  const std::size_t nn = n();
  SampleMatrix out;
  out.rows = m;
  out.cols.assign(2 * nn, {});
  for (auto& c : out.cols) c.resize(m);
  out.names.resize(2 * nn);
  char buf[32];
  for (std::size_t k = 0; k < nn; ++k) {
    std::snprintf(buf, sizeof buf, "x%zu", k + 1);
    out.names[k] = buf;
  }
  for (std::size_t l = 0; l < nn; ++l) {
    std::snprintf(buf, sizeof buf, "y%zu", l + 1);
    out.names[nn + l] = buf;
  }
  std::vector<double> xrow(nn), yrow(nn);
  for (std::size_t i = 0; i < m; ++i) {
    draw(seed, i, xrow.data(), yrow.data());
    for (std::size_t k = 0; k < nn; ++k) out.cols[k][i] = xrow[k];
    for (std::size_t l = 0; l < nn; ++l) out.cols[nn + l][i] = yrow[l];
  }
  return out;
}

std::string SequenceModel::describe() const {
  char buf[128];
  switch (structure_) {
    case SeqStructure::BlocksIndependent:
      std::snprintf(buf, sizeof buf, "BlocksIndependent(n=%zu)", n());
      return buf;
    case SeqStructure::PairwiseFGM:
      std::snprintf(buf, sizeof buf, "PairwiseFGM(n=%zu, theta=%g)", n(),
                    theta_);
      return buf;
    case SeqStructure::CommonPairIID:
      std::snprintf(buf, sizeof buf, "CommonPairIID(n=%zu, %s)", n(),
                    dep_.describe().c_str());
      return buf;
  }
  return "?";
}

RatioCurve diagnose_tai(const SampleMatrix& block,
                        const std::vector<double>& t_grid) {
  const std::size_t nv = block.col_count();
  if (nv < 2)
    throw std::invalid_argument("diagnose_tai needs at least two variables");
  if (block.rows == 0) throw std::invalid_argument("diagnose_tai needs rows");
  require_grid(t_grid);
  const std::size_t ng = t_grid.size();

  // One pass: histogram each count by exceedance depth, then suffix-sum.
  std::vector<std::vector<std::uint64_t>> cond_hist(
      nv, std::vector<std::uint64_t>(ng + 1, 0));
  std::vector<std::vector<std::uint64_t>> joint_hist(
      nv * nv, std::vector<std::uint64_t>(ng + 1, 0));
  std::vector<std::size_t> raw(nv), mag(nv);
  for (std::size_t r = 0; r < block.rows; ++r) {
    for (std::size_t v = 0; v < nv; ++v) {
      const double val = block.at(r, v);
      raw[v] = exceed_depth(t_grid, val);
      mag[v] = exceed_depth(t_grid, std::abs(val));
    }
    for (std::size_t j = 0; j < nv; ++j) {
      cond_hist[j][raw[j]]++;
      for (std::size_t i = 0; i < nv; ++i) {
        if (i == j) continue;
        joint_hist[i * nv + j][std::min(mag[i], raw[j])]++;
      }
    }
  }
  std::vector<std::vector<std::uint64_t>> cond(nv), joint(nv * nv);
  for (std::size_t j = 0; j < nv; ++j) cond[j] = exceed_counts(cond_hist[j]);
  for (std::size_t p = 0; p < nv * nv; ++p)
    joint[p] = exceed_counts(joint_hist[p]);

  RatioCurve out;
  bool any_flag = false;
  for (std::size_t g = 0; g < ng; ++g) {
    double best = 0.0;
    bool found = false, empty = false;
    for (std::size_t j = 0; j < nv; ++j) {
      const std::uint64_t d = cond[j][g];
      if (d == 0) {
        empty = true;
        continue;
      }
      for (std::size_t i = 0; i < nv; ++i) {
        if (i == j) continue;
        found = true;
        best = std::max(best, double(joint[i * nv + j][g]) / double(d));
      }
    }
    out.thresholds.push_back(t_grid[g]);
    out.values.push_back(found ? best
                               : std::numeric_limits<double>::quiet_NaN());
    out.flags.push_back(empty ? PointFlag::Unreliable : PointFlag::Ok);
    any_flag |= empty;
  }
  if (!any_flag) out.flags.clear();
  return out;
}

RatioCurve diagnose_gtai(const SampleMatrix& draws, std::size_t n,
                         const std::vector<double>& t_grid) {
  if (n < 2) throw std::invalid_argument("diagnose_gtai needs n >= 2");
  if (draws.col_count() != 2 * n)
    throw std::invalid_argument(
        "diagnose_gtai expects 2n columns, X block then Y block");
  if (draws.rows == 0) throw std::invalid_argument("diagnose_gtai needs rows");
  require_grid(t_grid);
  const std::size_t ng = t_grid.size();
  const std::size_t nv = 2 * n;

  // Both conditional families from the trio-level definition: the
  // numerator variable comes from one block, the conditioning pair takes
  // the other same-block variable plus one opposite-block variable.
  struct Trio {
    std::size_t num, c1, c2, pair_id;
  };
  std::vector<Trio> trios;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto pair_id = [&pairs](std::size_t a, std::size_t b) {
    const std::pair<std::size_t, std::size_t> key = std::minmax(a, b);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (pairs[p] == key) return p;
    pairs.push_back(key);
    return pairs.size() - 1;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      for (std::size_t j = 0; j < n; ++j) {
        trios.push_back({i, k, n + j, pair_id(k, n + j)});
        trios.push_back({n + i, n + k, j, pair_id(n + k, j)});
      }
    }

  std::vector<std::vector<std::uint64_t>> pair_hist(
      pairs.size(), std::vector<std::uint64_t>(ng + 1, 0));
  std::vector<std::vector<std::uint64_t>> trio_hist(
      trios.size(), std::vector<std::uint64_t>(ng + 1, 0));
  std::vector<std::size_t> raw(nv), mag(nv);
  for (std::size_t r = 0; r < draws.rows; ++r) {
    for (std::size_t v = 0; v < nv; ++v) {
      const double val = draws.at(r, v);
      raw[v] = exceed_depth(t_grid, val);
      mag[v] = exceed_depth(t_grid, std::abs(val));
    }
    for (std::size_t p = 0; p < pairs.size(); ++p)
      pair_hist[p][std::min(raw[pairs[p].first], raw[pairs[p].second])]++;
    for (std::size_t t = 0; t < trios.size(); ++t)
      trio_hist[t][std::min(
          {mag[trios[t].num], raw[trios[t].c1], raw[trios[t].c2]})]++;
  }
  std::vector<std::vector<std::uint64_t>> pairc(pairs.size()),
      trioc(trios.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    pairc[p] = exceed_counts(pair_hist[p]);
  for (std::size_t t = 0; t < trios.size(); ++t)
    trioc[t] = exceed_counts(trio_hist[t]);

  RatioCurve out;
  bool any_flag = false;
  for (std::size_t g = 0; g < ng; ++g) {
    double best = 0.0;
    bool found = false, empty = false;
    for (std::size_t t = 0; t < trios.size(); ++t) {
      const std::uint64_t d = pairc[trios[t].pair_id][g];
      if (d == 0) {
        empty = true;
        continue;
      }
      found = true;
      best = std::max(best, double(trioc[t][g]) / double(d));
    }
    out.thresholds.push_back(t_grid[g]);
    out.values.push_back(found ? best
                               : std::numeric_limits<double>::quiet_NaN());
    out.flags.push_back(empty ? PointFlag::Unreliable : PointFlag::Ok);
    any_flag |= empty;
  }
  if (!any_flag) out.flags.clear();
  return out;
}

}  // namespace ht2d
