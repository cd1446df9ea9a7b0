#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "heavytail2d/classify.hpp"
#include "heavytail2d/mcengine.hpp"
#include "heavytail2d/verify.hpp"

// JSON plan schema and artifact serialization. Parsing is strict: unknown
// keys are errors, and every message carries the dotted path of the field
// it complains about. Emitted plan echoes re-parse to equal objects.

namespace ht2d {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Exit code conventions shared by the parser and the CLI dispatcher:
// 2 for schema violations and runtime failures, 3 for weight laws that
// break the almost-sure bound requirement (unbounded or out-of-bounds
// support).
inline constexpr int kExitError = 2;
inline constexpr int kExitWeightSupport = 3;

class PlanError : public std::runtime_error {
 public:
  PlanError(const std::string& path, const std::string& message,
            int exit_code = kExitError)
      : std::runtime_error(path + ": " + message), exit_code_(exit_code) {}

  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

// Catalog objects <-> JSON. Laws serialize as {"family", "params": {...}}
// with the parameter names of their factories; dependence as
// {"family", "params"}; models and weights by their structural kind.
Json to_json(const UnivariateSpec& spec);
Json to_json(const DependenceSpec& dep);
Json to_json(const BivariatePair& pair);
Json to_json(const SequenceModel& model);
Json to_json(const WeightModel& weights);
Json to_json(const ThresholdSchedule& schedule);
Json to_json(const ExperimentPlan& plan);

UnivariateSpec spec_from_json(const Json& j, const std::string& path);
DependenceSpec dep_from_json(const Json& j, const std::string& path);
BivariatePair pair_from_json(const Json& j, const std::string& path);
SequenceModel model_from_json(const Json& j, const std::string& path);
WeightModel weights_from_json(const Json& j, const std::string& path);
ThresholdSchedule schedule_from_json(const Json& j, const std::string& path);
ExperimentPlan plan_from_json(const Json& j);

// Subcommand plans beyond the verify experiment.
struct SamplePlan {
  SequenceModel model;
  std::uint64_t m = 1000;
  std::uint64_t seed = 1;
  bool operator==(const SamplePlan&) const = default;
};

struct TailPlan {
  BivariatePair pair;
  std::vector<double> grid;
  double ray_x = 1.0;
  double ray_y = 1.0;
  bool operator==(const TailPlan&) const = default;
};

struct ClassifyPlan {
  UnivariateSpec law;
  UniKind probe = UniKind::DScale;
  double param = 0.5;
  std::vector<double> grid;
  bool operator==(const ClassifyPlan&) const = default;
};

struct RuinPlan {
  SequenceModel model;
  WeightModel weights = WeightModel::unit();
  double x = 1.0;
  double y = 1.0;
  std::string estimator = "plain";  // "plain" or "conditional" (and-ruin)
  std::uint64_t m = 1000000;
  std::uint64_t seed = 1;
  bool operator==(const RuinPlan&) const = default;
};

struct TailSumPlan {
  SequenceModel model;
  WeightModel weights = WeightModel::unit();
  double x = 1.0;
  double y = 1.0;
  std::string estimator = "plain";
  std::uint64_t m = 1000000;
  std::uint64_t seed = 1;
  bool operator==(const TailSumPlan&) const = default;
};

Json to_json(const SamplePlan& plan);
Json to_json(const TailPlan& plan);
Json to_json(const ClassifyPlan& plan);
Json to_json(const RuinPlan& plan);
Json to_json(const TailSumPlan& plan);

SamplePlan sample_plan_from_json(const Json& j);
TailPlan tail_plan_from_json(const Json& j);
ClassifyPlan classify_plan_from_json(const Json& j);
RuinPlan ruin_plan_from_json(const Json& j);
TailSumPlan tailsum_plan_from_json(const Json& j);

const char* to_string(UniKind kind);

// FNV-1a 64 over the canonical dump of the echoed plan (nlohmann objects
// serialize with sorted keys, so the digest is representation-stable).
std::string plan_hash(const Json& plan_echo);

// Two comment lines stamped on top of every artifact:
//   # heavytail2d v<version>
//   # plan_hash=<hex> seed=<seed> m=<m>
std::string provenance_header(const Json& plan_echo, std::uint64_t seed,
                              std::uint64_t m);
Json provenance_json(const Json& plan_echo, std::uint64_t seed,
                     std::uint64_t m);

// Artifact bodies. Doubles print with %.17g so identical runs are
// byte-identical and values round-trip.
std::string equivalence_csv(const EquivalenceReport& report,
                            const std::string& header);
std::string curve_csv(const RatioCurve& curve, const std::string& header);
std::string sample_csv(const SampleMatrix& draws, const std::string& header);
Json estimate_json(const Estimate& estimate);
Json verdict_json(const EquivalenceReport& report, double tolerance,
                  bool negative_control, const Json& provenance);

}  // namespace ht2d
