#include "doctest.h"

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/dependence.hpp"
#include "heavytail2d/dists.hpp"
#include "heavytail2d/mcengine.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>

using namespace ht2d;

namespace {

const UnivariateSpec kPar21 = UnivariateSpec::pareto(2.0, 1.0);
const WeightModel kUnit = WeightModel::unit();

BivariatePair fgm_pair() {
  return {kPar21, kPar21, DependenceSpec::fgm(0.5)};
}

SequenceModel pareto_blocks() {
  return SequenceModel::blocks_independent({kPar21, kPar21}, {kPar21, kPar21});
}

SequenceModel mixed_sign_blocks() {
  const auto tp = UnivariateSpec::two_point(-1.0, 0.4, 2.0);
  return SequenceModel::blocks_independent({tp, tp, tp}, {tp, tp, tp});
}

}  // namespace

TEST_CASE("estimator arguments are validated") {
  const auto one = SequenceModel::common_pair_iid(1, fgm_pair());
  CHECK_THROWS_AS(estimate_joint_sum_tail(one, kUnit, 5.0, 5.0, 999, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_joint_sum_tail(one, kUnit, 0.0, 5.0, 1000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_joint_max_tail(one, kUnit, 5.0, -1.0, 1000, 1),
                  std::invalid_argument);

  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const auto w1 = WeightModel::per_index({tp}, {{0.5, 1.0}}, {tp}, {{0.5, 1.0}});
  const auto two = pareto_blocks();
  CHECK_THROWS_AS(estimate_joint_sum_tail(two, w1, 5.0, 5.0, 1000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_ruin(RiskModelConfig{3, two, kUnit, 5.0, 5.0},
                                RuinKind::And, 1000, 1),
                  std::invalid_argument);

  const auto est = estimate_joint_sum_tail(one, kUnit, 5.0, 5.0, 1000, 42);
  CHECK(est.m == 1000);
  CHECK(est.seed == 42);
  CHECK(est.method == EstimatorMethod::Plain);
  CHECK(est == estimate_joint_sum_tail(one, kUnit, 5.0, 5.0, 1000, 42));
}

TEST_CASE("single-epoch estimators all reduce to the pair tail") {
  const auto one = SequenceModel::common_pair_iid(1, fgm_pair());
  const double oracle = fgm_pair().joint_tail(5.0, 5.0);

  const auto sum = estimate_joint_sum_tail(one, kUnit, 5.0, 5.0, 1000000, 11);
  CHECK(std::fabs(sum.value - oracle) <= 3.0 * sum.std_err);
  CHECK(sum.std_err ==
        doctest::Approx(std::sqrt(sum.value * (1.0 - sum.value) / 1e6)));

  // With one epoch every event coincides, pathwise.
  CHECK(estimate_joint_max_tail(one, kUnit, 5.0, 5.0, 1000000, 11).value ==
        sum.value);
  CHECK(estimate_running_max_tail(one, kUnit, 5.0, 5.0, 1000000, 11).value ==
        sum.value);
  const RiskModelConfig cfg{1, one, kUnit, 5.0, 5.0};
  CHECK(estimate_ruin(cfg, RuinKind::And, 1000000, 11).value == sum.value);
  CHECK(estimate_ruin(cfg, RuinKind::Max, 1000000, 11).value == sum.value);
}

TEST_CASE("independent blocks factorize against the convolution oracle") {
  const auto blocks = pareto_blocks();
  const auto conv = conv_tail(kPar21, kPar21, 20.0);
  const double mid = conv.value() * conv.value();
  const double slack =
      0.5 * (conv.upper * conv.upper - conv.lower * conv.lower);

  const auto sum =
      estimate_joint_sum_tail(blocks, kUnit, 20.0, 20.0, 10000000, 2026);
  CHECK(std::fabs(sum.value - mid) <= 3.0 * sum.std_err + slack);

  // Nonnegative claims: the running maximum is the final sum, so and-ruin
  // and max-ruin coincide with the sum tail on every path.
  const RiskModelConfig cfg{2, blocks, kUnit, 20.0, 20.0};
  const auto and_ruin = estimate_ruin(cfg, RuinKind::And, 10000000, 2026);
  const auto max_ruin = estimate_ruin(cfg, RuinKind::Max, 10000000, 2026);
  CHECK(and_ruin.value == sum.value);
  CHECK(max_ruin.value == sum.value);
}

TEST_CASE("coordinate maxima against the closed form") {
  const auto blocks = pareto_blocks();
  const double fx = kPar21.tail(6.0), fy = kPar21.tail(9.0);
  const double oracle = (1.0 - (1.0 - fx) * (1.0 - fx)) *
                        (1.0 - (1.0 - fy) * (1.0 - fy));
  const auto est = estimate_joint_max_tail(blocks, kUnit, 6.0, 9.0, 1000000, 11);
  CHECK(std::fabs(est.value - oracle) <= 3.0 * est.std_err);

  // Thresholds below every support: certain event.
  CHECK(estimate_joint_max_tail(blocks, kUnit, 0.5, 0.5, 1000, 1).value == 1.0);

  // Degenerate claims: sums are constants, the event is decided.
  const auto deg = UnivariateSpec::degenerate(1.0);
  const auto dm =
      SequenceModel::blocks_independent({deg, deg, deg}, {deg, deg, deg});
  CHECK(estimate_joint_sum_tail(dm, kUnit, 2.5, 3.5, 1000, 1).value == 0.0);
  CHECK(estimate_joint_sum_tail(dm, kUnit, 2.5, 2.5, 1000, 1).value == 1.0);
}

TEST_CASE("running maxima sandwich on mixed-sign claims") {
  const auto model = mixed_sign_blocks();

  const auto lo = count_path_events_serial(model, kUnit, 1.5, 1.5, 20000, 7);
  CHECK(lo.final_sum == 8553);
  CHECK(lo.running_max == 11329);
  CHECK(lo.positive_sum == 17604);
  CHECK(lo.coord_max == 17604);
  CHECK(lo.simultaneous == 10774);
  CHECK(lo.final_sum < lo.running_max);
  CHECK(lo.running_max < lo.positive_sum);
  CHECK(lo.simultaneous < lo.running_max);

  // At 2.5 the two-point lattice makes every sum event identical and the
  // single-claim maximum unreachable.
  const auto hi = count_path_events_serial(model, kUnit, 2.5, 2.5, 20000, 7);
  CHECK(hi.final_sum == 8553);
  CHECK(hi.running_max == 8553);
  CHECK(hi.positive_sum == 8553);
  CHECK(hi.simultaneous == 8553);
  CHECK(hi.coord_max == 0);

  // Estimator wrappers read the same tallies.
  CHECK(estimate_positive_sum_tail(model, kUnit, 1.5, 1.5, 20000, 7).value ==
        doctest::Approx(17604.0 / 20000.0).epsilon(1e-15));
  CHECK(estimate_running_max_tail(model, kUnit, 1.5, 1.5, 20000, 7).value ==
        doctest::Approx(11329.0 / 20000.0).epsilon(1e-15));

  // Nonnegative claims collapse the sandwich.
  const auto pos = count_path_events_serial(pareto_blocks(), kUnit, 20.0, 20.0,
                                            100000, 5);
  CHECK(pos.running_max == pos.final_sum);
  CHECK(pos.positive_sum == pos.final_sum);
  CHECK(pos.simultaneous == pos.final_sum);

  // One epoch: the running maximum is the only partial sum.
  const auto tp = UnivariateSpec::two_point(-1.0, 0.4, 2.0);
  const auto one = SequenceModel::blocks_independent({tp}, {tp});
  const auto c1 = count_path_events_serial(one, kUnit, 1.0, 1.0, 20000, 3);
  CHECK(c1.running_max == c1.final_sum);
}

TEST_CASE("ruin passage times explain the and-event") {
  const auto model = mixed_sign_blocks();
  const RiskModelConfig cfg{3, model, kUnit, 1.5, 1.5};
  std::uint64_t both = 0;
  bool saw_partial = false;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const auto pt = ruin_passage_times(cfg, 7, i);
    CHECK(pt.t1 <= 3);
    CHECK(pt.t2 <= 3);
    both += pt.t1 > 0 && pt.t2 > 0;
    saw_partial = saw_partial || (pt.t1 > 0) != (pt.t2 > 0);
  }
  const auto counts =
      count_path_events_serial(model, kUnit, 1.5, 1.5, 20000, 7);
  CHECK(both == counts.running_max);
  CHECK(saw_partial);  // one-sided ruin does occur, and is not and-ruin

  const RiskModelConfig far{3, model, kUnit, 100.0, 100.0};
  const auto none = ruin_passage_times(far, 7, 0);
  CHECK(none.t1 == 0);
  CHECK(none.t2 == 0);
}

TEST_CASE("plain estimators stay unbiased across seeds") {
  const auto one = SequenceModel::common_pair_iid(1, fgm_pair());
  const double oracle = fgm_pair().joint_tail(5.0, 5.0);
  int ok = 0;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    const auto est = estimate_joint_sum_tail(one, kUnit, 5.0, 5.0, 100000, s);
    if (std::fabs(est.value - oracle) <= 3.0 * est.std_err) ++ok;
  }
  CHECK(ok >= 99);
}

TEST_CASE("parallel and serial kernels agree bit for bit") {
  const auto model = SequenceModel::common_pair_iid(2, fgm_pair());
  const auto wu = WeightModel::common(UnivariateSpec::uniform(0.5, 1.0));
  for (const char* threads : {"1", "3"}) {
    setenv("HEAVYTAIL2D_THREADS", threads, 1);
    CHECK(count_path_events(model, wu, 5.0, 5.0, 100000, 3) ==
          count_path_events_serial(model, wu, 5.0, 5.0, 100000, 3));
    CHECK(conditional_estimator(model, wu, 30.0, 30.0, 100000, 3) ==
          conditional_estimator_serial(model, wu, 30.0, 30.0, 100000, 3));
  }
  unsetenv("HEAVYTAIL2D_THREADS");
}

TEST_CASE("conditional estimator is exact for one epoch") {
  const auto one = SequenceModel::common_pair_iid(1, fgm_pair());
  const auto est = conditional_estimator(one, kUnit, 10.0, 10.0, 1000, 5);
  CHECK(est.method == EstimatorMethod::Conditional);
  CHECK(est.value == doctest::Approx(1.49005e-4).epsilon(1e-12));
  CHECK(est.std_err == 0.0);
}

TEST_CASE("conditional estimator cuts the variance far into the tail") {
  const auto blocks = pareto_blocks();
  const auto conv = conv_tail(kPar21, kPar21, 50.0);
  const double mid = conv.value() * conv.value();
  const double slack =
      0.5 * (conv.upper * conv.upper - conv.lower * conv.lower);

  const auto plain =
      estimate_joint_sum_tail(blocks, kUnit, 50.0, 50.0, 1000000, 4);
  const auto cond = conditional_estimator(blocks, kUnit, 50.0, 50.0, 1000000, 4);
  CHECK(cond.method == EstimatorMethod::Conditional);
  CHECK(std::fabs(cond.value - mid) <= 3.0 * cond.std_err + slack);
  const double comb = std::sqrt(plain.std_err * plain.std_err +
                                cond.std_err * cond.std_err);
  CHECK(std::fabs(cond.value - plain.value) <= 3.0 * comb);
  CHECK(plain.std_err >= 5.0 * cond.std_err);
}

TEST_CASE("conditional estimator matches plain under cross-dependence") {
  for (const auto& dep : {DependenceSpec::survival_clayton(1.0),
                          DependenceSpec::fgm(0.5)}) {
    const BivariatePair pair{kPar21, kPar21, dep};
    const auto model = SequenceModel::common_pair_iid(2, pair);
    const auto plain =
        estimate_joint_sum_tail(model, kUnit, 30.0, 30.0, 1000000, 9);
    const auto cond = conditional_estimator(model, kUnit, 30.0, 30.0, 1000000, 9);
    const double comb = std::sqrt(plain.std_err * plain.std_err +
                                  cond.std_err * cond.std_err);
    CHECK(std::fabs(cond.value - plain.value) <= 3.0 * comb);
    CHECK(cond.std_err < plain.std_err);
  }
}

TEST_CASE("conditional estimator integrates random weights") {
  const auto one = SequenceModel::common_pair_iid(1, fgm_pair());
  const auto wu = WeightModel::common(UnivariateSpec::uniform(0.5, 1.0));
  const auto oracle = ruin_and_rhs(one, wu, 10.0, 10.0);
  const auto plain = estimate_joint_sum_tail(one, wu, 10.0, 10.0, 1000000, 21);
  const auto cond = conditional_estimator(one, wu, 10.0, 10.0, 1000000, 21);
  CHECK(std::fabs(plain.value - oracle.value) <= 3.0 * plain.std_err);
  CHECK(cond.std_err > 0.0);  // the weight stays random per path
  CHECK(std::fabs(cond.value - oracle.value) <= 3.0 * cond.std_err + oracle.err);
}

TEST_CASE("conditional estimator falls back to plain when it must") {
  const auto blocks = pareto_blocks();

  // Thresholds near the median: no rare event to exploit.
  const auto shallow = conditional_estimator(blocks, kUnit, 1.5, 1.5, 10000, 2);
  CHECK(shallow.method == EstimatorMethod::Plain);
  CHECK(shallow == estimate_joint_sum_tail(blocks, kUnit, 1.5, 1.5, 10000, 2));
  CHECK(conditional_estimator_serial(blocks, kUnit, 1.5, 1.5, 10000, 2) ==
        shallow);

  // Atomic margins.
  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const auto atoms = SequenceModel::blocks_independent({tp, tp}, {tp, tp});
  const auto at = conditional_estimator(atoms, kUnit, 3.0, 3.0, 10000, 2);
  CHECK(at.method == EstimatorMethod::Plain);
  CHECK(at == estimate_joint_sum_tail(atoms, kUnit, 3.0, 3.0, 10000, 2));

  // Dependence chained across indices.
  const auto chain =
      SequenceModel::pairwise_fgm({kPar21, kPar21}, {kPar21, kPar21}, 0.8);
  const auto ch = conditional_estimator(chain, kUnit, 30.0, 30.0, 10000, 2);
  CHECK(ch.method == EstimatorMethod::Plain);
  CHECK(ch == estimate_joint_sum_tail(chain, kUnit, 30.0, 30.0, 10000, 2));

  // Mixed-sign claims violate the precondition outright.
  CHECK_THROWS_AS(
      conditional_estimator(mixed_sign_blocks(), kUnit, 30.0, 30.0, 10000, 2),
      std::invalid_argument);
}
