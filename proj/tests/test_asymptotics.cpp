#include "doctest.h"

#include "heavytail2d/asymptotics.hpp"
#include "heavytail2d/classify.hpp"
#include "heavytail2d/dependence.hpp"
#include "heavytail2d/dists.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace ht2d;

namespace {

const UnivariateSpec kPar21 = UnivariateSpec::pareto(2.0, 1.0);
const UnivariateSpec kHalfOne = UnivariateSpec::uniform(0.5, 1.0);

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return g;
}

// Exact weighted tail for Theta ~ Exponential(1) over an independent
// Pareto(2,1) pair on the diagonal, via the truncated fourth moment.
double exp_pareto_diag(double t) {
  const double g5t = 24.0 * std::exp(-t) *
                     (1.0 + t + t * t / 2.0 + t * t * t / 6.0 +
                      t * t * t * t / 24.0);
  return (24.0 - g5t) / std::pow(t, 4.0) + std::exp(-t);
}

}  // namespace

TEST_CASE("weight models validate their construction") {
  const auto unit = WeightModel::unit();
  CHECK(unit.trivial());
  CHECK(unit.n() == 0);
  CHECK_THROWS_AS(unit.common_theta(), std::logic_error);
  CHECK_THROWS_AS(unit.theta(0), std::logic_error);

  const auto common = WeightModel::common(kHalfOne);
  CHECK_FALSE(common.trivial());
  CHECK(common.common_theta() == kHalfOne);
  CHECK_THROWS_AS(WeightModel::common(UnivariateSpec::exponential(1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::common(UnivariateSpec::uniform(-0.5, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::common(UnivariateSpec::degenerate(0.0)),
                  std::invalid_argument);

  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const auto per = WeightModel::per_index({tp, tp}, {{0.5, 1.0}, {0.5, 1.0}},
                                          {tp, tp}, {{0.5, 1.0}, {0.5, 1.0}});
  CHECK(per.n() == 2);
  CHECK(per.theta(1) == tp);
  CHECK(per.delta_bound(0).hi == 1.0);
  CHECK(per == per);
  CHECK_FALSE(per == unit);

  CHECK_THROWS_AS(WeightModel::per_index({tp}, {{0.5, 1.0}}, {}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      WeightModel::per_index({tp}, {{0.0, 1.0}}, {tp}, {{0.5, 1.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::per_index({UnivariateSpec::exponential(1.0)},
                                         {{0.1, 5.0}}, {tp}, {{0.5, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      WeightModel::per_index({kHalfOne}, {{0.6, 1.0}}, {tp}, {{0.5, 1.0}}),
      std::invalid_argument);
}

TEST_CASE("weight draws fill dedicated streams deterministically") {
  double th[3], de[3];
  WeightModel::unit().draw(1, 0, 3, th, de);
  for (int k = 0; k < 3; ++k) {
    CHECK(th[k] == 1.0);
    CHECK(de[k] == 1.0);
  }

  const auto common = WeightModel::common(kHalfOne);
  common.draw(5, 17, 3, th, de);
  for (int k = 0; k < 3; ++k) {
    CHECK(th[k] == th[0]);
    CHECK(de[k] == th[0]);
  }
  CHECK(th[0] >= 0.5);
  CHECK(th[0] <= 1.0);
  double th2[3], de2[3];
  common.draw(5, 17, 3, th2, de2);
  CHECK(th2[0] == th[0]);

  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const auto per = WeightModel::per_index({tp, tp}, {{0.5, 1.0}, {0.5, 1.0}},
                                          {tp, tp}, {{0.5, 1.0}, {0.5, 1.0}});
  std::size_t split = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    per.draw(5, i, 2, th, de);
    CHECK((th[0] == 0.5 || th[0] == 1.0));
    CHECK((de[1] == 0.5 || de[1] == 1.0));
    split += th[0] != de[0];
  }
  // Theta and Delta streams are distinct, so the slots decouple.
  CHECK(split > 300);
  CHECK(split < 700);
  CHECK_THROWS_AS(per.draw(5, 0, 3, th, de), std::invalid_argument);
}

TEST_CASE("sum of pairwise joint tails") {
  const BivariatePair fgm{kPar21, kPar21, DependenceSpec::fgm(0.5)};
  const auto one = SequenceModel::common_pair_iid(1, fgm);
  CHECK(sum_tail_rhs(one, 10.0, 10.0) == fgm.joint_tail(10.0, 10.0));
  CHECK(sum_tail_rhs(one, 10.0, 10.0) ==
        doctest::Approx(1.49005e-4).epsilon(1e-9));

  const auto blocks =
      SequenceModel::blocks_independent({kPar21, kPar21}, {kPar21, kPar21});
  CHECK(sum_tail_rhs(blocks, 10.0, 10.0) ==
        doctest::Approx(4e-4).epsilon(1e-12));

  const auto linked = SequenceModel::common_pair_iid(2, fgm);
  CHECK(sum_tail_rhs(linked, 10.0, 10.0) ==
        doctest::Approx(2.0 * 1.49005e-4 + 2.0 * 1e-4).epsilon(1e-9));

  double manual = 0.0;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l)
      manual += linked.pair_tail(k, l, 7.0, 12.0);
  CHECK(sum_tail_rhs(linked, 7.0, 12.0) == manual);
}

TEST_CASE("scalar product tails by quadrature") {
  const BivariatePair pp{kPar21, kPar21, DependenceSpec::independent()};

  // A degenerate factor is a pure rescaling, computed without quadrature.
  const ScalarProductModel ident{pp, UnivariateSpec::degenerate(1.0)};
  CHECK(scalar_product_tail(ident, 10.0, 10.0).value ==
        pp.joint_tail(10.0, 10.0));
  CHECK(scalar_product_tail(ident, 10.0, 10.0).err == 0.0);
  const BivariatePair fgm{kPar21, kPar21, DependenceSpec::fgm(0.5)};
  const ScalarProductModel ident_fgm{fgm, UnivariateSpec::degenerate(1.0)};
  CHECK(scalar_product_tail(ident_fgm, 6.0, 9.0).value ==
        fgm.joint_tail(6.0, 9.0));
  const ScalarProductModel twice{pp, UnivariateSpec::degenerate(2.0)};
  CHECK(scalar_product_tail(twice, 10.0, 10.0).value ==
        doctest::Approx(1.6e-3).epsilon(1e-12));

  // Uniform factor: fourth-moment closed form 0.3875 / (x y)^2.
  const ScalarProductModel mu{pp, kHalfOne};
  for (const auto& [x, y] :
       std::vector<std::pair<double, double>>{{10.0, 10.0}, {10.0, 20.0}, {5.0, 7.0}}) {
    const auto h = scalar_product_tail(mu, x, y);
    CHECK(h.value ==
          doctest::Approx(0.3875 / (x * x * y * y)).epsilon(1e-8));
    CHECK(h.err <= 1e-8 * h.value);
  }
  CHECK(scalar_product_tail(mu, 10.0, 10.0).value ==
        doctest::Approx(3.875e-5).epsilon(1e-8));

  // Two-point factor: exact two-term mixture.
  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const ScalarProductModel mtp{pp, tp};
  const double mix = 0.5 * kPar21.tail(20.0) * kPar21.tail(20.0) +
                     0.5 * kPar21.tail(10.0) * kPar21.tail(10.0);
  CHECK(scalar_product_tail(mtp, 10.0, 10.0).value ==
        doctest::Approx(mix).epsilon(1e-14));
  CHECK(scalar_product_tail(mtp, 10.0, 10.0).err == 0.0);

  // Unbounded factor against the truncated-moment closed form.
  const ScalarProductModel me{pp, UnivariateSpec::exponential(1.0)};
  for (const double t : {1.0, 5.0, 10.0, 25.0, 40.0})
    CHECK(scalar_product_tail(me, t, t).value ==
          doctest::Approx(exp_pareto_diag(t)).epsilon(1e-7));

  // Monotone non-increasing in each coordinate.
  const ScalarProductModel mf{fgm, kHalfOne};
  double prev = scalar_product_tail(mf, 2.0, 6.0).value;
  for (const double x : {4.0, 8.0, 16.0}) {
    const double cur = scalar_product_tail(mf, x, 6.0).value;
    CHECK(cur <= prev);
    prev = cur;
  }
  prev = scalar_product_tail(mf, 6.0, 2.0).value;
  for (const double y : {4.0, 8.0, 16.0}) {
    const double cur = scalar_product_tail(mf, 6.0, y).value;
    CHECK(cur <= prev);
    prev = cur;
  }

  CHECK_THROWS_AS(scalar_product_tail(mu, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(scalar_product_tail(mu, 10.0, 10.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScalarProductModel(pp, UnivariateSpec::degenerate(0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScalarProductModel(pp, UnivariateSpec::uniform(-0.5, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("independent weight pairs integrate coordinate by coordinate") {
  const BivariatePair pp{kPar21, kPar21, DependenceSpec::independent()};
  const auto field = pp.tail_field();
  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);

  double manual = 0.0;
  for (const auto& [s, ps] : tp.atoms())
    for (const auto& [t, pt] : tp.atoms())
      manual += ps * pt * field.eval(10.0 / s, 10.0 / t);
  const auto both = weighted_pair_tail(tp, tp, field, 10.0, 10.0);
  CHECK(both.value == doctest::Approx(manual).epsilon(1e-15));
  CHECK(both.err == 0.0);

  // E[Theta^2] = 7/12 for Uniform(0.5, 1) against a squared Pareto margin.
  const auto mixed = weighted_pair_tail(kHalfOne, UnivariateSpec::degenerate(1.0),
                                        field, 10.0, 10.0);
  CHECK(mixed.value == doctest::Approx((7.0 / 12.0) * 1e-4).epsilon(1e-8));
}

TEST_CASE("weighted double sums for ruin approximants") {
  const auto m1 = SequenceModel::blocks_independent({kPar21}, {kPar21});
  const auto unit = WeightModel::unit();
  const auto u1 = ruin_and_rhs(m1, unit, 10.0, 10.0);
  CHECK(u1.value == sum_tail_rhs(m1, 10.0, 10.0));
  CHECK(u1.err == 0.0);

  const auto deg = WeightModel::common(UnivariateSpec::degenerate(0.5));
  CHECK(ruin_and_rhs(m1, deg, 10.0, 10.0).value ==
        doctest::Approx(6.25e-6).epsilon(1e-12));

  // Per-index two-point weights: enumeration over the four outcomes.
  const auto tp = UnivariateSpec::two_point(0.5, 0.5, 1.0);
  const auto wtp = WeightModel::per_index({tp}, {{0.5, 1.0}}, {tp}, {{0.5, 1.0}});
  const double enumerated =
      0.25 * std::pow(kPar21.tail(20.0) + kPar21.tail(10.0), 2.0);
  CHECK(ruin_and_rhs(m1, wtp, 10.0, 10.0).value ==
        doctest::Approx(enumerated).epsilon(1e-12));
  CHECK(ruin_and_rhs(m1, wtp, 10.0, 10.0).value ==
        doctest::Approx(3.90625e-5).epsilon(1e-12));

  // A shared factor couples the coordinates; independent per-index factors
  // with the same marginal law do not. E[Theta^4] = 0.3875 vs (7/12)^2.
  const auto m2 =
      SequenceModel::blocks_independent({kPar21, kPar21}, {kPar21, kPar21});
  const auto wcu = WeightModel::common(kHalfOne);
  CHECK(ruin_and_rhs(m2, wcu, 10.0, 10.0).value ==
        doctest::Approx(1.55e-4).epsilon(1e-8));
  const auto wpu = WeightModel::per_index(
      {kHalfOne, kHalfOne}, {{0.5, 1.0}, {0.5, 1.0}}, {kHalfOne, kHalfOne},
      {{0.5, 1.0}, {0.5, 1.0}});
  CHECK(ruin_and_rhs(m2, wpu, 10.0, 10.0).value ==
        doctest::Approx(4.0 * (7.0 / 12.0) * (7.0 / 12.0) * 1e-4)
            .epsilon(1e-8));

  const BivariatePair fgm{kPar21, kPar21, DependenceSpec::fgm(0.5)};
  const auto linked = SequenceModel::common_pair_iid(2, fgm);
  CHECK(ruin_max_upper(linked, wcu, 10.0, 10.0).value ==
        ruin_and_rhs(linked, wcu, 10.0, 10.0).value);

  CHECK_THROWS_AS(ruin_and_rhs(m2, wtp, 10.0, 10.0), std::invalid_argument);
}

TEST_CASE("assumption-A curves vanish for light weights and stall for heavy") {
  const BivariatePair pp{kPar21, kPar21, DependenceSpec::independent()};

  const ScalarProductModel mu{pp, kHalfOne};
  const auto bounded =
      check_assumption_A(mu, {0.5, 1.0, 2.0}, geometric_grid(1.0, 64.0, 7));
  REQUIRE(bounded.size() == 3);
  for (const double v : bounded[2].values) CHECK(v == 0.0);
  for (const double v : bounded[1].values) CHECK(v == 0.0);
  CHECK(bounded[0].values[0] > 0.0);
  for (std::size_t i = 0; i < bounded[0].size(); ++i)
    if (bounded[0].thresholds[i] >= 2.0) CHECK(bounded[0].values[i] == 0.0);
  CHECK(verdict(bounded[0], VerdictTarget::limit(0.0), 0.05).verdict ==
        Verdict::Supports);

  const ScalarProductModel me{pp, UnivariateSpec::exponential(1.0)};
  const auto light = check_assumption_A(me, {1.0}, {5.0, 10.0, 20.0, 40.0});
  for (std::size_t i = 1; i < light[0].size(); ++i)
    CHECK(light[0].values[i] < light[0].values[i - 1]);
  CHECK(light[0].values.back() < 1e-6);
  CHECK(verdict(light[0], VerdictTarget::limit(0.0), 1e-3).verdict ==
        Verdict::Supports);

  // Pareto(1.1) weight decays no faster than the product tail: the ratio
  // settles at c^{-1.1} * 29/40 instead of dying out.
  const ScalarProductModel mp{pp, UnivariateSpec::pareto(1.1, 1.0)};
  const auto heavy =
      check_assumption_A(mp, {1.0, 2.0}, geometric_grid(10.0, 1000.0, 12));
  CHECK(heavy[0].values.back() == doctest::Approx(29.0 / 40.0).epsilon(1e-3));
  CHECK(heavy[1].values.back() ==
        doctest::Approx(std::pow(2.0, -1.1) * 29.0 / 40.0).epsilon(1e-2));
  CHECK(verdict(heavy[0], VerdictTarget::limit(0.0), 0.05).verdict ==
        Verdict::Contradicts);

  CHECK_THROWS_AS(check_assumption_A(mu, {}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_assumption_A(mu, {-1.0}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_assumption_A(mu, {1.0}, {2.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("weight tails against the weighted product tail") {
  const BivariatePair pp{kPar21, kPar21, DependenceSpec::independent()};
  const ScalarProductModel mu{pp, kHalfOne};
  const auto ufield = product_tail_field(mu);

  const auto curves =
      check_eq_6_8(kHalfOne, kHalfOne, ufield, 1.0, 1.0, {0.6, 0.9, 1.0, 2.0, 5.0});
  CHECK(curves[0].values == curves[1].values);
  for (std::size_t i = 0; i < curves[0].size(); ++i) {
    if (curves[0].thresholds[i] >= 1.0)
      CHECK(curves[0].values[i] == 0.0);
    else
      CHECK(curves[0].values[i] > 0.0);
  }

  const ScalarProductModel me{pp, UnivariateSpec::exponential(1.0)};
  const auto efield = product_tail_field(me);
  const auto expo = UnivariateSpec::exponential(1.0);
  const auto light = check_eq_6_8(expo, expo, efield, 1.0, 1.0, {5.0, 10.0, 20.0, 40.0});
  for (std::size_t i = 1; i < light[0].size(); ++i)
    CHECK(light[0].values[i] < light[0].values[i - 1]);
  CHECK(light[0].values.back() < 1e-8);

  // Bounded joint support kills the denominator and truncates both curves.
  const auto uni = UnivariateSpec::uniform(0.0, 1.0);
  const BivariatePair up{uni, uni, DependenceSpec::independent()};
  const auto cut = check_eq_6_8(kHalfOne, kHalfOne, up.tail_field(), 1.0, 1.0,
                                {0.5, 2.0});
  CHECK(cut[0].truncated);
  CHECK(cut[0].size() == 1);
  CHECK(cut[1].truncated);

  CHECK_THROWS_AS(check_eq_6_8(kHalfOne, kHalfOne, ufield, 0.0, 1.0, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("auxiliary scaling ladder") {
  const BivariatePair pp{kPar21, kPar21, DependenceSpec::independent()};

  const ScalarProductModel mu{pp, kHalfOne};
  const auto ufield = product_tail_field(mu);
  const auto ugrid = geometric_grid(0.5, 1e4, 300);
  const auto utail = [&](double s) { return mu.theta.tail(s); };
  const auto fnU = build_auxiliary_b(utail, ufield, 5, ugrid);
  REQUIRE_FALSE(fnU.truncated);
  REQUIRE(fnU.lambdas.size() == 5);
  CHECK(fnU.lambdas[0] == doctest::Approx(0.5168).epsilon(1e-3));
  CHECK(fnU.lambdas[4] == doctest::Approx(126.2460).epsilon(1e-3));

  const ScalarProductModel me{pp, UnivariateSpec::exponential(1.0)};
  const auto efield = product_tail_field(me);
  const auto egrid = geometric_grid(1.0, 1e4, 300);
  const auto etail = [&](double s) { return me.theta.tail(s); };
  const auto fnE = build_auxiliary_b(etail, efield, 5, egrid);
  REQUIRE_FALSE(fnE.truncated);
  REQUIRE(fnE.lambdas.size() == 5);
  CHECK(fnE.lambdas[1] == doctest::Approx(18.6596).epsilon(1e-3));
  CHECK(fnE.lambdas[4] == doctest::Approx(1193.7766).epsilon(1e-3));

  // The three defining properties, re-checked by direct evaluation.
  const auto verify_fn = [](const AuxiliaryFn& fn,
                            const std::function<double(double)>& wt,
                            const TailField& pt,
                            const std::vector<double>& grid) {
    for (std::size_t i = 1; i < fn.lambdas.size(); ++i)
      CHECK(fn.lambdas[i] > double(i + 1) * fn.lambdas[i - 1]);
    double prev = 0.0;
    for (const double t : grid) {
      const double b = fn.eval(t);
      CHECK(b >= prev);
      prev = b;
      if (t < fn.lambdas[0]) continue;
      std::size_t level = 0;
      while (level < fn.lambdas.size() && fn.lambdas[level] <= t) ++level;
      CHECK(wt(b) <= pt.eval(t, t) / double(level) + 1e-15);
    }
    const double top = grid.back();
    CHECK(fn.eval(top) / top < 0.5);
    CHECK(fn.eval(fn.lambdas[0] * 0.25) == fn.lambdas[0]);
  };
  verify_fn(fnU, utail, ufield, ugrid);
  verify_fn(fnE, etail, efield, egrid);

  // Bounded weight: beyond twice the support top the tail term is already
  // zero, the witness the ladder competes with.
  for (const double t : {2.0, 5.0, 100.0}) CHECK(kHalfOne.tail(t / 2.0) == 0.0);

  // Single level keeps the identity segment.
  const auto fn1 = build_auxiliary_b(utail, ufield, 1, ugrid);
  CHECK(fn1.lambdas.size() == 1);
  CHECK(fn1.eval(3.0 * fn1.lambdas[0]) == 3.0 * fn1.lambdas[0]);

  // Heavy weight: the first rung exists but the ladder cannot continue.
  const ScalarProductModel mp{pp, UnivariateSpec::pareto(1.1, 1.0)};
  const auto pfield = product_tail_field(mp);
  const auto fnP = build_auxiliary_b([&](double s) { return mp.theta.tail(s); },
                                     pfield, 4, geometric_grid(2.0, 1e3, 200));
  CHECK(fnP.truncated);
  CHECK(fnP.lambdas.size() == 1);

  // Bounded claims never dominate the weight tail: refused outright.
  const auto uni = UnivariateSpec::uniform(0.0, 1.0);
  const BivariatePair up{uni, uni, DependenceSpec::independent()};
  const ScalarProductModel stuck{up, UnivariateSpec::exponential(1.0)};
  const auto sfield = product_tail_field(stuck);
  CHECK_THROWS_AS(build_auxiliary_b([&](double s) { return stuck.theta.tail(s); },
                                    sfield, 2, {0.5, 1.0, 2.0}),
                  std::runtime_error);

  CHECK_THROWS_AS(build_auxiliary_b(utail, ufield, 0, ugrid),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_auxiliary_b(utail, ufield, 2, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_auxiliary_b(utail, ufield, 2, ugrid, -1.0),
                  std::invalid_argument);
}
