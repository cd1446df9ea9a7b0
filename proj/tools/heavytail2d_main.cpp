// Command-line front end: plan files in, CSV/JSON artifacts out.
//
// Every subcommand reads a JSON plan (--plan), applies the --seed and
// --samples overrides, and echoes the effective plan next to its output so
// a run can be reproduced from the artifacts alone. Exit codes: 0 on
// success (for verify: the verdict matches what the plan declared), 1 when
// a verify verdict comes out wrong, 2 on errors, 3 when a weight law
// violates the almost-sure bound requirement.

#include "CLI11.hpp"

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/plan_json.hpp"

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace ht2d;

namespace {

struct CommonOpts {
  std::string plan_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::string format = "csv";
};

Json load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanError(path, "cannot open plan file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw PlanError(path, e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("short write to " + path);
}

// Primary artifact to --out or stdout; sidecars only when --out is given.
// The one-line summary goes to stdout when the artifact went to a file,
// otherwise to stderr so piped output stays clean.
void emit(const CommonOpts& opts, const std::string& primary,
          const Json& plan_echo, const Json* verdict,
          const std::string& summary) {
  if (opts.out_path.empty()) {
    std::cout << primary;
    if (verdict) std::clog << verdict->dump(2) << '\n';
    std::clog << summary << '\n';
    return;
  }
  write_file(opts.out_path, primary);
  write_file(opts.out_path + ".plan.json", plan_echo.dump(2) + "\n");
  if (verdict)
    write_file(opts.out_path + ".verdict.json", verdict->dump(2) + "\n");
  std::cout << summary << '\n';
}

int run_sample(const CommonOpts& opts) {
  SamplePlan plan = sample_plan_from_json(load_plan(opts.plan_path));
  if (opts.seed) plan.seed = *opts.seed;
  if (opts.samples) plan.m = *opts.samples;
  const Json echo = to_json(plan);
  const auto draws = plan.model.sample(plan.seed, plan.m);
  const std::string csv =
      sample_csv(draws, provenance_header(echo, plan.seed, plan.m));
  char line[128];
  std::snprintf(line, sizeof line, "sample: n=%zu m=%llu seed=%llu",
                plan.model.n(), (unsigned long long)plan.m,
                (unsigned long long)plan.seed);
  emit(opts, csv, echo, nullptr, line);
  return 0;
}

int run_tail(const CommonOpts& opts) {
  const TailPlan plan = tail_plan_from_json(load_plan(opts.plan_path));
  const Json echo = to_json(plan);
  RatioCurve curve;
  const double floor = plan.pair.dep.tail_floor();
  bool censored = false;
  for (double t : plan.grid) {
    curve.thresholds.push_back(t);
    const double v = plan.pair.joint_tail(plan.ray_x * t, plan.ray_y * t);
    curve.values.push_back(v);
    censored = censored || (v > 0.0 && v <= floor);
  }
  if (censored)
    for (std::size_t i = 0; i < curve.size(); ++i)
      curve.flags.push_back(curve.values[i] > 0.0 &&
                                    curve.values[i] <= floor
                                ? PointFlag::Censored
                                : PointFlag::Ok);
  const std::string csv = curve_csv(curve, provenance_header(echo, 0, 0));
  char line[96];
  std::snprintf(line, sizeof line, "tail: %zu points along ray (%g, %g)",
                curve.size(), plan.ray_x, plan.ray_y);
  emit(opts, csv, echo, nullptr, line);
  return 0;
}

int run_classify(const CommonOpts& opts) {
  const ClassifyPlan plan = classify_plan_from_json(load_plan(opts.plan_path));
  const Json echo = to_json(plan);
  const RatioCurve curve =
      univariate_ratio(plan.law, plan.probe, plan.param, plan.grid);
  const std::string csv = curve_csv(curve, provenance_header(echo, 0, 0));
  char line[96];
  std::snprintf(line, sizeof line, "classify %s(%g): %zu points",
                to_string(plan.probe), plan.param, curve.size());
  emit(opts, csv, echo, nullptr, line);
  return 0;
}

std::string estimate_csv_row(const char* statistic, const Estimate& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%llu,%llu,%s\n", statistic,
                e.value, e.std_err, (unsigned long long)e.m,
                (unsigned long long)e.seed, to_string(e.method));
  return buf;
}

std::string rhs_csv_row(const char* statistic, const ProductTail& rhs) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,0,0,rhs\n", statistic,
                rhs.value, rhs.err);
  return buf;
}

int run_ruin(const CommonOpts& opts) {
  RuinPlan plan = ruin_plan_from_json(load_plan(opts.plan_path));
  if (opts.seed) plan.seed = *opts.seed;
  if (opts.samples) plan.m = *opts.samples;
  const Json echo = to_json(plan);

  const RiskModelConfig cfg{plan.model.n(), plan.model, plan.weights, plan.x,
                            plan.y};
  const Estimate and_est =
      plan.estimator == "conditional"
          ? conditional_estimator(plan.model, plan.weights, plan.x, plan.y,
                                  plan.m, plan.seed)
          : estimate_ruin(cfg, RuinKind::And, plan.m, plan.seed);
  const Estimate max_est = estimate_ruin(cfg, RuinKind::Max, plan.m, plan.seed);
  const ProductTail rhs = ruin_and_rhs(plan.model, plan.weights, plan.x,
                                       plan.y);

  Json result = provenance_json(echo, plan.seed, plan.m);
  result["and"] = estimate_json(and_est);
  result["max"] = estimate_json(max_est);
  result["and_rhs"] = {{"value", rhs.value}, {"err", rhs.err},
                       {"method", "rhs"}};

  std::string primary;
  if (opts.format == "csv") {
    primary = provenance_header(echo, plan.seed, plan.m);
    primary += "statistic,value,stderr,m,seed,method\n";
    primary += estimate_csv_row("and", and_est);
    primary += estimate_csv_row("max", max_est);
    primary += rhs_csv_row("and_rhs", rhs);
  } else {
    primary = result.dump(2) + "\n";
  }
  char line[160];
  std::snprintf(line, sizeof line,
                "ruin: and=%.6g (se %.2g) max=%.6g rhs=%.6g", and_est.value,
                and_est.std_err, max_est.value, rhs.value);
  emit(opts, primary, echo, nullptr, line);
  return 0;
}

int run_tailsum(const CommonOpts& opts) {
  TailSumPlan plan = tailsum_plan_from_json(load_plan(opts.plan_path));
  if (opts.seed) plan.seed = *opts.seed;
  if (opts.samples) plan.m = *opts.samples;
  const Json echo = to_json(plan);

  const Estimate est =
      plan.estimator == "conditional"
          ? conditional_estimator(plan.model, plan.weights, plan.x, plan.y,
                                  plan.m, plan.seed)
          : estimate_joint_sum_tail(plan.model, plan.weights, plan.x, plan.y,
                                    plan.m, plan.seed);
  const ProductTail rhs = ruin_and_rhs(plan.model, plan.weights, plan.x,
                                       plan.y);

  Json result = provenance_json(echo, plan.seed, plan.m);
  result["sum"] = estimate_json(est);
  result["rhs"] = {{"value", rhs.value}, {"err", rhs.err}, {"method", "rhs"}};

  std::string primary;
  if (opts.format == "csv") {
    primary = provenance_header(echo, plan.seed, plan.m);
    primary += "statistic,value,stderr,m,seed,method\n";
    primary += estimate_csv_row("sum", est);
    primary += rhs_csv_row("sum", rhs);
  } else {
    primary = result.dump(2) + "\n";
  }
  char line[160];
  std::snprintf(line, sizeof line, "tailsum: value=%.6g (se %.2g) rhs=%.6g",
                est.value, est.std_err, rhs.value);
  emit(opts, primary, echo, nullptr, line);
  return 0;
}

int run_verify(const CommonOpts& opts) {
  ExperimentPlan plan = plan_from_json(load_plan(opts.plan_path));
  if (opts.seed) plan.seed = *opts.seed;
  if (opts.samples) plan.m = *opts.samples;
  const Json echo = to_json(plan);

  const EquivalenceReport report = run_equivalence(plan);
  const Json verdict = verdict_json(
      report, plan.tolerance, plan.negative_control,
      provenance_json(echo, plan.seed, plan.m));
  const std::string csv =
      equivalence_csv(report, provenance_header(echo, plan.seed, plan.m));

  const Verdict v = report.curve.verdict;
  const bool pass = plan.negative_control ? v == Verdict::Contradicts
                                          : v == Verdict::Supports;
  char line[200];
  std::snprintf(line, sizeof line,
                "verify %s: verdict=%s hypothesis=%s deepest_ratio=%.6g",
                report.name.c_str(), to_string(v), report.hypothesis.c_str(),
                report.curve.size() ? report.curve.values.back() : 0.0);
  emit(opts, csv, echo, &verdict, line);
  return pass ? 0 : 1;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool stochastic) {
  sub->add_option("--plan", opts.plan_path, "plan JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out_path,
                  "output path (sidecars derive from it)");
  sub->add_option("--format", opts.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
  if (stochastic) {
    sub->add_option("--seed", opts.seed, "override the plan seed");
    sub->add_option("--samples", opts.samples, "override the plan path count");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bivariate heavy-tail calculus harness"};
  app.require_subcommand(1);

  CommonOpts opts;
  int (*runner)(const CommonOpts&) = nullptr;

  const struct {
    const char* name;
    const char* help;
    int (*fn)(const CommonOpts&);
    bool stochastic;
  } subs[] = {
      {"sample", "draw claim sequences as CSV", run_sample, true},
      {"tail", "joint tail of a pair along a ray", run_tail, false},
      {"classify", "univariate tail-class probe curve", run_classify, false},
      {"ruin", "finite-horizon ruin probabilities", run_ruin, true},
      {"tailsum", "joint sum-tail estimate vs approximant", run_tailsum,
       true},
      {"verify", "equivalence experiment with verdict", run_verify, true},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, opts, s.stochastic);
    sub->callback([&runner, fn = s.fn] { runner = fn; });
  }

  // ruin and tailsum default to JSON primaries; everything else to CSV.
  opts.format = "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  if (opts.format.empty())
    opts.format = (app.got_subcommand("ruin") || app.got_subcommand("tailsum"))
                      ? "json"
                      : "csv";

  try {
    return runner(opts);
  } catch (const PlanError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
