#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heavytail2d/rng.hpp"
#include "heavytail2d/special.hpp"

using namespace ht2d;

namespace {

// Reduce the orthant probability to a 1-D integral and evaluate it with a
// fine Simpson rule; slow but independent of the implementation under test.
double bvn_upper_simpson(double h, double k, double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    auto f = [&](double t) {
        const double phi = std::exp(-0.5 * t * t) / 2.5066282746310005024;
        return phi * norm_tail((k - rho * t) / s);
    };
    const double lo = h, hi = std::max(h, k) + 12.0;
    const int n = 40000;
    const double step = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * step) * (i % 2 ? 4.0 : 2.0);
    return acc * step / 3.0;
}

} // namespace

TEST_CASE("philox stream is deterministic and distinct across streams") {
    const double a = uniform01(42, 0, 0);
    CHECK(a == uniform01(42, 0, 0));
    CHECK(a != uniform01(42, 0, 1));
    CHECK(a != uniform01(42, 1, 0));
    CHECK(a != uniform01(43, 0, 0));
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = uniform01(7, 3, i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("philox uniforms have sane moments") {
    double sum = 0.0, sumsq = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const double u = uniform01(1234, 5, i);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / m;
    const double var = sumsq / m - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("norm_cdf and norm_tail at pinned points") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_tail(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(norm_tail(-1.0) + norm_tail(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("norm_quantile round trip") {
    CHECK(norm_quantile(0.5) == 0.0);
    CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    const double ps[] = {1e-300, 1e-200, 1e-100, 1e-30, 1e-12, 1e-6, 1e-3,
                         0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999, 1.0 - 1e-9};
    for (double p : ps) {
        const double z = norm_quantile(p);
        CHECK(norm_cdf(z) == doctest::Approx(p).epsilon(1e-12));
        // Antisymmetry only where 1-p is exactly representable; closer to 1
        // the rounding of 1-p itself dominates through the quantile slope.
        if (p >= 1e-6)
            CHECK(norm_quantile(1.0 - p) == doctest::Approx(-z).epsilon(1e-9));
    }
    CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);
}

TEST_CASE("bvn_upper degenerate correlations and independence") {
    CHECK(bvn_upper(1.0, 2.0, 0.0) ==
          doctest::Approx(norm_tail(1.0) * norm_tail(2.0)).epsilon(1e-14));
    CHECK(bvn_upper(1.0, 2.0, 1.0) == doctest::Approx(norm_tail(2.0)).epsilon(1e-14));
    CHECK(bvn_upper(-1.0, 0.5, -1.0) ==
          doctest::Approx(norm_tail(-1.0) + norm_tail(0.5) - 1.0).epsilon(1e-13));
    CHECK(bvn_upper(3.0, 3.0, -1.0) == 0.0);
}

TEST_CASE("bvn_upper quadrant identity") {
    // P[Z1>0, Z2>0] = 1/4 + asin(rho)/(2 pi), exact.
    const double rhos[] = {-0.95, -0.6, -0.3, -0.05, 0.05, 0.3, 0.6, 0.8, 0.95, 0.99};
    for (double r : rhos) {
        const double expect = 0.25 + std::asin(r) / 6.283185307179586477;
        CHECK(bvn_upper(0.0, 0.0, r) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("bvn_upper against Simpson oracle") {
    const double hs[] = {-1.5, 0.3, 1.0, 2.5};
    const double ks[] = {-0.5, 0.8, 3.0};
    const double rhos[] = {-0.96, -0.5, 0.2, 0.7, 0.93, 0.995};
    for (double h : hs)
        for (double k : ks)
            for (double r : rhos) {
                const double got = bvn_upper(h, k, r);
                const double want = bvn_upper_simpson(h, k, r);
                CHECK(got == doctest::Approx(want).epsilon(5e-8));
                CHECK(bvn_upper(k, h, r) == doctest::Approx(got).epsilon(1e-13));
            }
}

TEST_CASE("bvn_upper deep joint tail stays positive and monotone in rho") {
    double prev = 0.0;
    for (double r : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        const double v = bvn_upper(5.0, 5.0, r);
        CHECK(v >= prev); // joint tail increases with correlation
        prev = v;
    }
    CHECK(bvn_upper(5.0, 5.0, 0.5) > 0.0);
}
