#include "heavytail2d/plan_json.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

namespace ht2d {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Strict object reader: required/optional access plus a final unknown-key
// sweep. Every complaint names the dotted path.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw PlanError(path_, "expected a JSON object");
  }

  const Json& get(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end())
      throw PlanError(path_ + "." + key, "missing required field");
    seen_.insert(key);
    return *it;
  }

  const Json* find(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  double num(const char* key) { return as_num(get(key), key); }

  double num_or(const char* key, double dflt) {
    const Json* j = find(key);
    return j ? as_num(*j, key) : dflt;
  }

  std::uint64_t uint(const char* key) { return as_uint(get(key), key); }

  std::uint64_t uint_or(const char* key, std::uint64_t dflt) {
    const Json* j = find(key);
    return j ? as_uint(*j, key) : dflt;
  }

  std::string str(const char* key) {
    const Json& j = get(key);
    if (!j.is_string())
      throw PlanError(path_ + "." + key, "expected a string");
    return j.get<std::string>();
  }

  std::string str_or(const char* key, const std::string& dflt) {
    const Json* j = find(key);
    if (!j) return dflt;
    if (!j->is_string())
      throw PlanError(path_ + "." + key, "expected a string");
    return j->get<std::string>();
  }

  bool flag_or(const char* key, bool dflt) {
    const Json* j = find(key);
    if (!j) return dflt;
    if (!j->is_boolean())
      throw PlanError(path_ + "." + key, "expected a boolean");
    return j->get<bool>();
  }

  std::vector<double> num_list(const char* key) {
    const Json& j = get(key);
    if (!j.is_array())
      throw PlanError(path_ + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(as_num(e, key));
    return out;
  }

  const std::string& path() const { return path_; }

  std::string sub(const char* key) const { return path_ + "." + key; }

  // Call last: rejects keys nothing asked for.
  void done() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        throw PlanError(path_ + "." + item.key(), "unknown field");
  }

 private:
  double as_num(const Json& j, const char* key) const {
    if (!j.is_number())
      throw PlanError(path_ + "." + key, "expected a number");
    return j.get<double>();
  }

  std::uint64_t as_uint(const Json& j, const char* key) const {
    if (!j.is_number_unsigned())
      throw PlanError(path_ + "." + key, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Json spec_array_json(const std::vector<UnivariateSpec>& specs) {
  Json arr = Json::array();
  for (const auto& s : specs) arr.push_back(to_json(s));
  return arr;
}

std::vector<UnivariateSpec> spec_array_from_json(const Json& j,
                                                 const std::string& path) {
  if (!j.is_array()) throw PlanError(path, "expected an array of laws");
  std::vector<UnivariateSpec> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(spec_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Rewrap factory rejections so the message names the offending field. The
// bound-support rules get their own exit code: they are the almost-sure
// weight requirement, not a syntax problem.
template <class Fn>
auto checked(Fn&& fn, const std::string& path, int exit_code = kExitError) {
  try {
    return fn();
  } catch (const PlanError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw PlanError(path, e.what(), exit_code);
  }
}

void require_bounded(const UnivariateSpec& spec, const std::string& path) {
  if (!std::isfinite(spec.support_hi()))
    throw PlanError(path, "unbounded weight support", kExitWeightSupport);
}

std::vector<WeightBound> bounds_from_json(const Json& j,
                                          const std::string& path) {
  if (!j.is_array()) throw PlanError(path, "expected an array of [lo, hi]");
  std::vector<WeightBound> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      throw PlanError(p, "expected [lo, hi]");
    out.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return out;
}

Json bounds_json(const WeightModel& w, bool thetas) {
  Json arr = Json::array();
  for (std::size_t k = 0; k < w.n(); ++k) {
    const WeightBound b = thetas ? w.theta_bound(k) : w.delta_bound(k);
    arr.push_back(Json::array({b.lo, b.hi}));
  }
  return arr;
}

LhsStat stat_from_string(const std::string& s, const std::string& path) {
  if (s == "sum") return LhsStat::Sum;
  if (s == "max") return LhsStat::Max;
  if (s == "running-max") return LhsStat::RunningMax;
  throw PlanError(path, "unknown statistic '" + s +
                            "' (want sum, max, or running-max)");
}

EstimatorKind estimator_from_string(const std::string& s,
                                    const std::string& path) {
  if (s == "exact") return EstimatorKind::Exact;
  if (s == "plain") return EstimatorKind::Plain;
  if (s == "conditional") return EstimatorKind::Conditional;
  throw PlanError(path, "unknown estimator '" + s +
                            "' (want exact, plain, or conditional)");
}

LevelKind level_kind_from_string(const std::string& s,
                                 const std::string& path) {
  if (s == "margin-tail") return LevelKind::MarginTail;
  if (s == "rhs-value") return LevelKind::RhsValue;
  throw PlanError(path, "unknown schedule kind '" + s +
                            "' (want margin-tail or rhs-value)");
}

UniKind uni_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "l-shift") return UniKind::LShift;
  if (s == "d-scale") return UniKind::DScale;
  if (s == "c-profile") return UniKind::CProfile;
  throw PlanError(path, "unknown probe '" + s +
                            "' (want l-shift, d-scale, or c-profile)");
}

}  // namespace

Json to_json(const UnivariateSpec& spec) {
  const double* p = spec.params();
  switch (spec.family()) {
    case Family::Pareto:
      return {{"family", "pareto"},
              {"params", {{"alpha", p[0]}, {"xm", p[1]}}}};
    case Family::Lognormal:
      return {{"family", "lognormal"},
              {"params", {{"mu", p[0]}, {"sigma", p[1]}}}};
    case Family::WeibullHeavy:
      return {{"family", "weibull_heavy"},
              {"params", {{"shape", p[0]}, {"scale", p[1]}}}};
    case Family::Exponential:
      return {{"family", "exponential"}, {"params", {{"rate", p[0]}}}};
    case Family::Uniform:
      return {{"family", "uniform"}, {"params", {{"lo", p[0]}, {"hi", p[1]}}}};
    case Family::TwoPoint:
      return {{"family", "two_point"},
              {"params", {{"a", p[0]}, {"pa", p[1]}, {"b", p[2]}}}};
    case Family::Degenerate:
      return {{"family", "degenerate"}, {"params", {{"c", p[0]}}}};
  }
  throw std::logic_error("unhandled family");
}

UnivariateSpec spec_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  const std::string family = f.str("family");
  Fields params(f.get("params"), f.sub("params"));
  f.done();

  const auto build = [&]() -> UnivariateSpec {
    if (family == "pareto")
      return UnivariateSpec::pareto(params.num("alpha"), params.num("xm"));
    if (family == "lognormal")
      return UnivariateSpec::lognormal(params.num("mu"), params.num("sigma"));
    if (family == "weibull_heavy")
      return UnivariateSpec::weibull_heavy(params.num("shape"),
                                           params.num("scale"));
    if (family == "exponential")
      return UnivariateSpec::exponential(params.num("rate"));
    if (family == "uniform")
      return UnivariateSpec::uniform(params.num("lo"), params.num("hi"));
    if (family == "two_point")
      return UnivariateSpec::two_point(params.num("a"), params.num("pa"),
                                       params.num("b"));
    if (family == "degenerate")
      return UnivariateSpec::degenerate(params.num("c"));
    throw PlanError(path + ".family", "unknown family '" + family + "'");
  };
  UnivariateSpec spec = checked(build, f.sub("params"));
  params.done();
  return spec;
}

Json to_json(const DependenceSpec& dep) {
  Json params = Json::object();
  switch (dep.kind()) {
    case DepKind::FGM: params["theta"] = dep.param(); break;
    case DepKind::SurvivalClayton: params["delta"] = dep.param(); break;
    case DepKind::GaussianCopula: params["rho"] = dep.param(); break;
    default: break;
  }
  switch (dep.kind()) {
    case DepKind::Independent:
      return {{"family", "independent"}, {"params", params}};
    case DepKind::FGM: return {{"family", "fgm"}, {"params", params}};
    case DepKind::SurvivalClayton:
      return {{"family", "survival_clayton"}, {"params", params}};
    case DepKind::Comonotone:
      return {{"family", "comonotone"}, {"params", params}};
    case DepKind::Countermonotone:
      return {{"family", "countermonotone"}, {"params", params}};
    case DepKind::GaussianCopula:
      return {{"family", "gaussian"}, {"params", params}};
  }
  throw std::logic_error("unhandled dependence kind");
}

DependenceSpec dep_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  const std::string family = f.str("family");
  const Json empty = Json::object();
  const Json* given = f.find("params");
  Fields params(given ? *given : empty, f.sub("params"));
  f.done();

  const auto build = [&]() -> DependenceSpec {
    if (family == "independent") return DependenceSpec::independent();
    if (family == "fgm") return DependenceSpec::fgm(params.num("theta"));
    if (family == "survival_clayton")
      return DependenceSpec::survival_clayton(params.num("delta"));
    if (family == "comonotone") return DependenceSpec::comonotone();
    if (family == "countermonotone") return DependenceSpec::countermonotone();
    if (family == "gaussian")
      return DependenceSpec::gaussian(params.num("rho"));
    throw PlanError(path + ".family",
                    "unknown dependence family '" + family + "'");
  };
  DependenceSpec dep = checked(build, f.sub("params"));
  params.done();
  return dep;
}

Json to_json(const BivariatePair& pair) {
  return {{"x", to_json(pair.x)},
          {"y", to_json(pair.y)},
          {"dep", to_json(pair.dep)}};
}

BivariatePair pair_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  BivariatePair pair{spec_from_json(f.get("x"), f.sub("x")),
                     spec_from_json(f.get("y"), f.sub("y")),
                     dep_from_json(f.get("dep"), f.sub("dep"))};
  f.done();
  return pair;
}

Json to_json(const SequenceModel& model) {
  switch (model.structure()) {
    case SeqStructure::BlocksIndependent:
    case SeqStructure::PairwiseFGM: {
      std::vector<UnivariateSpec> xs, ys;
      for (std::size_t k = 0; k < model.n(); ++k) {
        xs.push_back(model.x_margin(k));
        ys.push_back(model.y_margin(k));
      }
      Json out = {{"x_margins", spec_array_json(xs)},
                  {"y_margins", spec_array_json(ys)}};
      if (model.structure() == SeqStructure::PairwiseFGM) {
        out["structure"] = "pairwise_fgm";
        out["theta"] = model.link_theta();
      } else {
        out["structure"] = "blocks_independent";
      }
      return out;
    }
    case SeqStructure::CommonPairIID:
      return {{"structure", "common_pair_iid"},
              {"n", model.n()},
              {"pair", to_json(BivariatePair{model.x_margin(0),
                                             model.y_margin(0),
                                             model.pair_dep()})}};
  }
  throw std::logic_error("unhandled sequence structure");
}

SequenceModel model_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  const std::string structure = f.str("structure");
  if (structure == "blocks_independent" || structure == "pairwise_fgm") {
    auto xs = spec_array_from_json(f.get("x_margins"), f.sub("x_margins"));
    auto ys = spec_array_from_json(f.get("y_margins"), f.sub("y_margins"));
    if (structure == "blocks_independent") {
      f.done();
      return checked(
          [&] {
            return SequenceModel::blocks_independent(std::move(xs),
                                                     std::move(ys));
          },
          path);
    }
    const double theta = f.num("theta");
    f.done();
    return checked(
        [&] {
          return SequenceModel::pairwise_fgm(std::move(xs), std::move(ys),
                                             theta);
        },
        f.sub("theta"));
  }
  if (structure == "common_pair_iid") {
    const std::uint64_t n = f.uint("n");
    auto pair = pair_from_json(f.get("pair"), f.sub("pair"));
    f.done();
    return checked(
        [&] {
          return SequenceModel::common_pair_iid(std::size_t(n),
                                                std::move(pair));
        },
        path);
  }
  throw PlanError(f.sub("structure"),
                  "unknown structure '" + structure + "'");
}

Json to_json(const WeightModel& weights) {
  switch (weights.kind()) {
    case WeightKind::Unit: return {{"kind", "unit"}};
    case WeightKind::CommonTheta:
      return {{"kind", "common"}, {"theta", to_json(weights.common_theta())}};
    case WeightKind::PerIndex: {
      std::vector<UnivariateSpec> thetas, deltas;
      for (std::size_t k = 0; k < weights.n(); ++k) {
        thetas.push_back(weights.theta(k));
        deltas.push_back(weights.delta(k));
      }
      return {{"kind", "per_index"},
              {"thetas", spec_array_json(thetas)},
              {"theta_bounds", bounds_json(weights, true)},
              {"deltas", spec_array_json(deltas)},
              {"delta_bounds", bounds_json(weights, false)}};
    }
  }
  throw std::logic_error("unhandled weight kind");
}

WeightModel weights_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  const std::string kind = f.str("kind");
  if (kind == "unit") {
    f.done();
    return WeightModel::unit();
  }
  if (kind == "common") {
    auto theta = spec_from_json(f.get("theta"), f.sub("theta"));
    f.done();
    require_bounded(theta, f.sub("theta"));
    return checked([&] { return WeightModel::common(std::move(theta)); },
                   f.sub("theta"), kExitWeightSupport);
  }
  if (kind == "per_index") {
    auto thetas = spec_array_from_json(f.get("thetas"), f.sub("thetas"));
    auto tb = bounds_from_json(f.get("theta_bounds"), f.sub("theta_bounds"));
    auto deltas = spec_array_from_json(f.get("deltas"), f.sub("deltas"));
    auto db = bounds_from_json(f.get("delta_bounds"), f.sub("delta_bounds"));
    f.done();
    for (std::size_t k = 0; k < thetas.size(); ++k)
      require_bounded(thetas[k],
                      f.sub("thetas") + "[" + std::to_string(k) + "]");
    for (std::size_t l = 0; l < deltas.size(); ++l)
      require_bounded(deltas[l],
                      f.sub("deltas") + "[" + std::to_string(l) + "]");
    return checked(
        [&] {
          return WeightModel::per_index(std::move(thetas), std::move(tb),
                                        std::move(deltas), std::move(db));
        },
        path, kExitWeightSupport);
  }
  throw PlanError(f.sub("kind"), "unknown weight kind '" + kind + "'");
}

Json to_json(const ThresholdSchedule& schedule) {
  return {{"kind", to_string(schedule.kind)},
          {"level_hi", schedule.level_hi},
          {"level_lo", schedule.level_lo},
          {"points", schedule.points}};
}

ThresholdSchedule schedule_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  ThresholdSchedule sched;
  sched.kind = level_kind_from_string(f.str("kind"), f.sub("kind"));
  sched.level_hi = f.num("level_hi");
  sched.level_lo = f.num("level_lo");
  sched.points = std::size_t(f.uint("points"));
  f.done();
  checked([&] { return sched.levels(); }, path);
  return sched;
}

Json to_json(const ExperimentPlan& plan) {
  return {{"name", plan.name},
          {"model", to_json(plan.model)},
          {"weights", to_json(plan.weights)},
          {"stat", to_string(plan.stat)},
          {"estimator", to_string(plan.estimator)},
          {"m", plan.m},
          {"seed", plan.seed},
          {"ray_x", plan.ray_x},
          {"ray_y", plan.ray_y},
          {"schedule", to_json(plan.schedule)},
          {"tolerance", plan.tolerance},
          {"negative_control", plan.negative_control}};
}

ExperimentPlan plan_from_json(const Json& j) {
  Fields f(j, "plan");
  ExperimentPlan plan{.name = f.str("name"),
                      .model = model_from_json(f.get("model"), "plan.model")};
  if (const Json* w = f.find("weights"))
    plan.weights = weights_from_json(*w, "plan.weights");
  plan.stat = stat_from_string(f.str_or("stat", "sum"), "plan.stat");
  plan.estimator = estimator_from_string(f.str_or("estimator", "plain"),
                                         "plan.estimator");
  plan.m = f.uint_or("m", plan.m);
  plan.seed = f.uint_or("seed", plan.seed);
  plan.ray_x = f.num_or("ray_x", 1.0);
  plan.ray_y = f.num_or("ray_y", 1.0);
  plan.schedule = ThresholdSchedule::defaults_for(plan.estimator);
  if (const Json* s = f.find("schedule"))
    plan.schedule = schedule_from_json(*s, "plan.schedule");
  plan.tolerance = f.num_or(
      "tolerance", plan.estimator == EstimatorKind::Exact ? 0.02 : 0.1);
  plan.negative_control = f.flag_or("negative_control", false);
  f.done();
  checked([&] { plan.validate(); return 0; }, "plan");
  return plan;
}

Json to_json(const SamplePlan& plan) {
  return {{"model", to_json(plan.model)}, {"m", plan.m}, {"seed", plan.seed}};
}

SamplePlan sample_plan_from_json(const Json& j) {
  Fields f(j, "plan");
  SamplePlan plan{model_from_json(f.get("model"), "plan.model"),
                  f.uint_or("m", 1000), f.uint_or("seed", 1)};
  f.done();
  if (plan.m == 0) throw PlanError("plan.m", "need at least one draw");
  return plan;
}

Json to_json(const TailPlan& plan) {
  return {{"pair", to_json(plan.pair)},
          {"grid", plan.grid},
          {"ray_x", plan.ray_x},
          {"ray_y", plan.ray_y}};
}

TailPlan tail_plan_from_json(const Json& j) {
  Fields f(j, "plan");
  TailPlan plan{pair_from_json(f.get("pair"), "plan.pair"),
                f.num_list("grid"), f.num_or("ray_x", 1.0),
                f.num_or("ray_y", 1.0)};
  f.done();
  if (plan.grid.empty()) throw PlanError("plan.grid", "empty grid");
  return plan;
}

Json to_json(const ClassifyPlan& plan) {
  return {{"law", to_json(plan.law)},
          {"probe", to_string(plan.probe)},
          {"param", plan.param},
          {"grid", plan.grid}};
}

ClassifyPlan classify_plan_from_json(const Json& j) {
  Fields f(j, "plan");
  ClassifyPlan plan{spec_from_json(f.get("law"), "plan.law"),
                    uni_kind_from_string(f.str("probe"), "plan.probe"),
                    f.num("param"), f.num_list("grid")};
  f.done();
  if (plan.grid.empty()) throw PlanError("plan.grid", "empty grid");
  return plan;
}

namespace {

// ruin and tailsum share everything but the statistic they report.
template <class Plan>
Json engine_plan_json(const Plan& plan) {
  return {{"model", to_json(plan.model)},
          {"weights", to_json(plan.weights)},
          {"x", plan.x},
          {"y", plan.y},
          {"estimator", plan.estimator},
          {"m", plan.m},
          {"seed", plan.seed}};
}

template <class Plan>
Plan engine_plan_from_json(const Json& j) {
  Fields f(j, "plan");
  Plan plan{.model = model_from_json(f.get("model"), "plan.model")};
  if (const Json* w = f.find("weights"))
    plan.weights = weights_from_json(*w, "plan.weights");
  plan.x = f.num("x");
  plan.y = f.num("y");
  plan.estimator = f.str_or("estimator", "plain");
  plan.m = f.uint_or("m", plan.m);
  plan.seed = f.uint_or("seed", plan.seed);
  f.done();
  if (plan.estimator != "plain" && plan.estimator != "conditional")
    throw PlanError("plan.estimator", "unknown estimator '" + plan.estimator +
                                          "' (want plain or conditional)");
  if (!(plan.x > 0.0) || !(plan.y > 0.0))
    throw PlanError("plan.x", "thresholds must be positive");
  return plan;
}

}  // namespace

Json to_json(const RuinPlan& plan) { return engine_plan_json(plan); }
Json to_json(const TailSumPlan& plan) { return engine_plan_json(plan); }

RuinPlan ruin_plan_from_json(const Json& j) {
  return engine_plan_from_json<RuinPlan>(j);
}

TailSumPlan tailsum_plan_from_json(const Json& j) {
  return engine_plan_from_json<TailSumPlan>(j);
}

const char* to_string(UniKind kind) {
  switch (kind) {
    case UniKind::LShift: return "l-shift";
    case UniKind::DScale: return "d-scale";
    case UniKind::CProfile: return "c-profile";
  }
  return "?";
}

std::string plan_hash(const Json& plan_echo) {
  const std::string dump = plan_echo.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::string provenance_header(const Json& plan_echo, std::uint64_t seed,
                              std::uint64_t m) {
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "# heavytail2d v%s\n# plan_hash=%s seed=%llu m=%llu\n",
                kVersion, plan_hash(plan_echo).c_str(),
                (unsigned long long)seed, (unsigned long long)m);
  return buf;
}

Json provenance_json(const Json& plan_echo, std::uint64_t seed,
                     std::uint64_t m) {
  return {{"version", kVersion},
          {"plan_hash", plan_hash(plan_echo)},
          {"seed", seed},
          {"m", m}};
}

std::string equivalence_csv(const EquivalenceReport& report,
                            const std::string& header) {
  std::string out = header;
  out += "threshold,lhs,rhs,ratio,stderr,flag\n";
  for (std::size_t i = 0; i < report.curve.size(); ++i) {
    out += fmt_double(report.thresholds[i]);
    out += ',';
    out += fmt_double(report.lhs[i]);
    out += ',';
    out += fmt_double(report.rhs[i]);
    out += ',';
    out += fmt_double(report.curve.values[i]);
    out += ',';
    out += fmt_double(report.curve.stderrs.empty() ? 0.0
                                                   : report.curve.stderrs[i]);
    out += ',';
    out += to_string(report.curve.flag(i));
    out += '\n';
  }
  return out;
}

std::string curve_csv(const RatioCurve& curve, const std::string& header) {
  std::string out = header;
  out += "threshold,value,stderr,flag\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += fmt_double(curve.thresholds[i]);
    out += ',';
    out += fmt_double(curve.values[i]);
    out += ',';
    out += fmt_double(curve.stderrs.empty() ? 0.0 : curve.stderrs[i]);
    out += ',';
    out += to_string(curve.flag(i));
    out += '\n';
  }
  return out;
}

std::string sample_csv(const SampleMatrix& draws, const std::string& header) {
  std::string out = header;
  for (std::size_t c = 0; c < draws.col_count(); ++c) {
    if (c) out += ',';
    out += draws.names[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < draws.rows; ++r) {
    for (std::size_t c = 0; c < draws.col_count(); ++c) {
      if (c) out += ',';
      out += fmt_double(draws.at(r, c));
    }
    out += '\n';
  }
  return out;
}

Json estimate_json(const Estimate& estimate) {
  return {{"value", estimate.value},
          {"stderr", estimate.std_err},
          {"m", estimate.m},
          {"seed", estimate.seed},
          {"method", to_string(estimate.method)}};
}

Json verdict_json(const EquivalenceReport& report, double tolerance,
                  bool negative_control, const Json& provenance) {
  Json out = provenance;
  out["name"] = report.name;
  out["verdict"] = to_string(report.curve.verdict);
  out["trend_stat"] = report.curve.trend_stat;
  out["tolerance"] = tolerance;
  out["negative_control"] = negative_control;
  out["hypothesis"] = report.hypothesis;
  out["points"] = report.curve.size();
  if (report.curve.size()) {
    out["deepest_threshold"] = report.thresholds.back();
    out["deepest_ratio"] = report.curve.values.back();
  }
  return out;
}

}  // namespace ht2d
