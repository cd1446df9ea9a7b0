#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ht2d {

// Per-point annotations for ratio curves.
//   Ok         : trustworthy point
//   Unreliable : denominator too small, or conditioning event empty
//   Censored   : value sits below a documented quadrature floor
enum class PointFlag { Ok, Unreliable, Censored };

inline const char* to_string(PointFlag flag) {
  switch (flag) {
    case PointFlag::Ok: return "ok";
    case PointFlag::Unreliable: return "unreliable";
    case PointFlag::Censored: return "censored";
  }
  return "?";
}

enum class Verdict { None, Supports, Contradicts, Inconclusive };

inline const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::None: return "none";
    case Verdict::Supports: return "supports";
    case Verdict::Contradicts: return "contradicts";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// A ratio-vs-threshold curve. stderrs stays empty for curves computed from
// closed forms; flags stays empty when every point is Ok. truncated means
// the producing operation stopped before exhausting its grid.
struct RatioCurve {
  std::vector<double> thresholds;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<PointFlag> flags;
  Verdict verdict = Verdict::None;
  double trend_stat = 0.0;
  bool truncated = false;

  std::size_t size() const { return thresholds.size(); }
  PointFlag flag(std::size_t i) const {
    return flags.empty() ? PointFlag::Ok : flags[i];
  }
};

// Joint tail as a plain function of (x, y), plus the absolute floor below
// which values are quadrature noise rather than genuine zeros.
struct TailField {
  std::function<double(double, double)> eval;
  double floor = 0.0;
};

}  // namespace ht2d
