#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Univariate catalog: closed-form tails and quantiles, counter-based
// inversion sampling, analytic tail-class metadata, and a bracketed numerical
// convolution used as the deterministic oracle by the higher-level modules.

namespace ht2d {

enum class Family {
    Pareto,
    Lognormal,
    WeibullHeavy,
    Exponential,
    Uniform,
    TwoPoint,
    Degenerate,
};

// Analytic class memberships. These are derived from the family, never
// estimated from data; finite samples cannot decide a limit statement.
struct TailClassFlags {
    bool in_K = false; // heavy: no finite exponential moment
    bool in_L = false; // long-tailed: shift-insensitive tail
    bool in_S = false; // subexponential
    bool in_D = false; // dominated variation
    bool in_C = false; // consistent variation
    bool has_rv_index = false;
    double rv_index = 0.0;
};

class UnivariateSpec {
public:
    static UnivariateSpec pareto(double alpha, double xm);
    static UnivariateSpec lognormal(double mu, double sigma);
    static UnivariateSpec weibull_heavy(double shape, double scale);
    static UnivariateSpec exponential(double rate);
    static UnivariateSpec uniform(double lo, double hi);
    static UnivariateSpec two_point(double a, double pa, double b);
    static UnivariateSpec degenerate(double c);

    Family family() const { return family_; }
    const double* params() const { return p_; }

    double tail(double x) const;     // P[X > x], 1 below the support
    double quantile(double p) const; // smallest x with P[X <= x] >= p
    double support_lo() const;
    double support_hi() const; // +infinity for the unbounded families
    bool atomic() const { return family_ == Family::TwoPoint || family_ == Family::Degenerate; }
    // Atom list (value, probability); empty for continuous families.
    std::vector<std::pair<double, double>> atoms() const;
    double mean() const;

    TailClassFlags class_flags() const;

    double sample_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) const;
    std::vector<double> sample(std::uint64_t seed, std::size_t m, std::uint64_t stream = 0) const;

    std::string describe() const;
    bool operator==(const UnivariateSpec&) const = default;

private:
    UnivariateSpec(Family f, double p0, double p1, double p2);
    Family family_;
    double p_[3];
};

// Bracketed tail of an independent sum. Both bounds are rigorous: the lower
// (upper) bound discretizes A onto the left (right) cell edges of a grid that
// is geometric in tail probability down to `depth`.
struct ConvTail {
    double lower = 0.0;
    double upper = 0.0;
    double value() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

ConvTail conv_tail(const UnivariateSpec& a, const UnivariateSpec& b, double x,
                   std::size_t cells = 20000, double depth = 1e-8);

} // namespace ht2d
