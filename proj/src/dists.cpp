#include "heavytail2d/dists.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "heavytail2d/rng.hpp"
#include "heavytail2d/special.hpp"

namespace ht2d {

UnivariateSpec::UnivariateSpec(Family f, double p0, double p1, double p2)
    : family_(f), p_{p0, p1, p2} {}

UnivariateSpec UnivariateSpec::pareto(double alpha, double xm) {
    if (!(alpha > 0.0) || !(xm > 0.0))
        throw std::invalid_argument("Pareto requires alpha > 0 and xm > 0");
    return {Family::Pareto, alpha, xm, 0.0};
}

UnivariateSpec UnivariateSpec::lognormal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("Lognormal requires sigma > 0");
    return {Family::Lognormal, mu, sigma, 0.0};
}

UnivariateSpec UnivariateSpec::weibull_heavy(double shape, double scale) {
    if (!(shape > 0.0 && shape < 1.0))
        throw std::invalid_argument("WeibullHeavy shape parameter must lie in (0,1)");
    if (!(scale > 0.0)) throw std::invalid_argument("WeibullHeavy requires scale > 0");
    return {Family::WeibullHeavy, shape, scale, 0.0};
}

UnivariateSpec UnivariateSpec::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("Exponential requires rate > 0");
    return {Family::Exponential, rate, 0.0, 0.0};
}

UnivariateSpec UnivariateSpec::uniform(double lo, double hi) {
    if (!(lo >= 0.0 && hi > lo))
        throw std::invalid_argument("Uniform requires 0 <= lo < hi");
    return {Family::Uniform, lo, hi, 0.0};
}

UnivariateSpec UnivariateSpec::two_point(double a, double pa, double b) {
    if (!(a < b)) throw std::invalid_argument("TwoPoint requires a < b");
    if (!(pa > 0.0 && pa < 1.0))
        throw std::invalid_argument("TwoPoint requires the atom probability in (0,1)");
    return {Family::TwoPoint, a, pa, b};
}

UnivariateSpec UnivariateSpec::degenerate(double c) {
    return {Family::Degenerate, c, 0.0, 0.0};
}

double UnivariateSpec::tail(double x) const {
    switch (family_) {
    case Family::Pareto:
        return x < p_[1] ? 1.0 : std::pow(p_[1] / x, p_[0]);
    case Family::Lognormal:
        return x <= 0.0 ? 1.0 : norm_tail((std::log(x) - p_[0]) / p_[1]);
    case Family::WeibullHeavy:
        return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / p_[1], p_[0]));
    case Family::Exponential:
        return x <= 0.0 ? 1.0 : std::exp(-p_[0] * x);
    case Family::Uniform:
        if (x < p_[0]) return 1.0;
        if (x >= p_[1]) return 0.0;
        return (p_[1] - x) / (p_[1] - p_[0]);
    case Family::TwoPoint:
        if (x < p_[0]) return 1.0;
        if (x < p_[2]) return 1.0 - p_[1];
        return 0.0;
    case Family::Degenerate:
        return x < p_[0] ? 1.0 : 0.0;
    }
    return 0.0;
}

double UnivariateSpec::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("quantile: p must lie in (0,1)");
    switch (family_) {
    case Family::Pareto:
        return p_[1] * std::pow(1.0 - p, -1.0 / p_[0]);
    case Family::Lognormal:
        return std::exp(p_[0] + p_[1] * norm_quantile(p));
    case Family::WeibullHeavy:
        return p_[1] * std::pow(-std::log1p(-p), 1.0 / p_[0]);
    case Family::Exponential:
        return -std::log1p(-p) / p_[0];
    case Family::Uniform:
        return p_[0] + p * (p_[1] - p_[0]);
    case Family::TwoPoint:
        return p <= p_[1] ? p_[0] : p_[2];
    case Family::Degenerate:
        return p_[0];
    }
    return 0.0;
}

double UnivariateSpec::support_lo() const {
    switch (family_) {
    case Family::Pareto: return p_[1];
    case Family::Lognormal: return 0.0;
    case Family::WeibullHeavy: return 0.0;
    case Family::Exponential: return 0.0;
    case Family::Uniform: return p_[0];
    case Family::TwoPoint: return p_[0];
    case Family::Degenerate: return p_[0];
    }
    return 0.0;
}

double UnivariateSpec::support_hi() const {
    switch (family_) {
    case Family::Uniform: return p_[1];
    case Family::TwoPoint: return p_[2];
    case Family::Degenerate: return p_[0];
    default: return std::numeric_limits<double>::infinity();
    }
}

std::vector<std::pair<double, double>> UnivariateSpec::atoms() const {
    if (family_ == Family::TwoPoint)
        return {{p_[0], p_[1]}, {p_[2], 1.0 - p_[1]}};
    if (family_ == Family::Degenerate) return {{p_[0], 1.0}};
    return {};
}

double UnivariateSpec::mean() const {
    switch (family_) {
    case Family::Pareto:
        if (p_[0] <= 1.0) return std::numeric_limits<double>::infinity();
        return p_[0] * p_[1] / (p_[0] - 1.0);
    case Family::Lognormal: return std::exp(p_[0] + 0.5 * p_[1] * p_[1]);
    case Family::WeibullHeavy: return p_[1] * std::tgamma(1.0 + 1.0 / p_[0]);
    case Family::Exponential: return 1.0 / p_[0];
    case Family::Uniform: return 0.5 * (p_[0] + p_[1]);
    case Family::TwoPoint: return p_[0] * p_[1] + p_[2] * (1.0 - p_[1]);
    case Family::Degenerate: return p_[0];
    }
    return 0.0;
}

TailClassFlags UnivariateSpec::class_flags() const {
    TailClassFlags f;
    switch (family_) {
    case Family::Pareto:
        f.in_K = f.in_L = f.in_S = f.in_D = f.in_C = true;
        f.has_rv_index = true;
        f.rv_index = p_[0];
        break;
    case Family::Lognormal:
    case Family::WeibullHeavy:
        f.in_K = f.in_L = f.in_S = true;
        break;
    default:
        break; // light-tailed families: all false
    }
    return f;
}

double UnivariateSpec::sample_at(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) const {
    return quantile(uniform01(seed, stream, index));
}

std::vector<double> UnivariateSpec::sample(std::uint64_t seed, std::size_t m,
                                           std::uint64_t stream) const {
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = sample_at(seed, stream, i);
    return out;
}

std::string UnivariateSpec::describe() const {
    char buf[96];
    switch (family_) {
    case Family::Pareto:
        std::snprintf(buf, sizeof buf, "Pareto(alpha=%g,xm=%g)", p_[0], p_[1]);
        break;
    case Family::Lognormal:
        std::snprintf(buf, sizeof buf, "Lognormal(mu=%g,sigma=%g)", p_[0], p_[1]);
        break;
    case Family::WeibullHeavy:
        std::snprintf(buf, sizeof buf, "WeibullHeavy(shape=%g,scale=%g)", p_[0], p_[1]);
        break;
    case Family::Exponential:
        std::snprintf(buf, sizeof buf, "Exponential(rate=%g)", p_[0]);
        break;
    case Family::Uniform:
        std::snprintf(buf, sizeof buf, "Uniform(lo=%g,hi=%g)", p_[0], p_[1]);
        break;
    case Family::TwoPoint:
        std::snprintf(buf, sizeof buf, "TwoPoint(a=%g,pa=%g,b=%g)", p_[0], p_[1], p_[2]);
        break;
    case Family::Degenerate:
        std::snprintf(buf, sizeof buf, "Degenerate(c=%g)", p_[0]);
        break;
    }
    return buf;
}

namespace {

// Stieltjes bracket of E[tailB(x - A)] over one A-segment (alo, ahi] carrying
// mass `mass`. tailB is non-increasing, so the segment contribution lies
// between mass*tailB(x - alo) and mass*tailB(x - ahi).
struct Bracket {
    double lo = 0.0, hi = 0.0;
};

Bracket conv_against(const UnivariateSpec& a, const UnivariateSpec& b, double x,
                     std::size_t cells, double depth) {
    Bracket out;
    if (a.atomic()) {
        // Exact from the A side; no discretization error.
        for (auto [v, p] : a.atoms()) {
            const double t = b.tail(x - v);
            out.lo += p * t;
            out.hi += p * t;
        }
        return out;
    }
    // Grid geometric in tail level: a_j = quantile(1 - depth^(j/cells)).
    const double lstep = std::log(depth) / static_cast<double>(cells);
    double prev_a = a.support_lo();
    double prev_tail = 1.0;
    double tb_prev = b.tail(x - prev_a);
    for (std::size_t j = 1; j <= cells; ++j) {
        const double lev = std::exp(lstep * static_cast<double>(j));
        const double aj = a.quantile(1.0 - lev);
        const double tj = a.tail(aj);
        const double mass = prev_tail - tj;
        const double tb = b.tail(x - aj);
        if (mass > 0.0) {
            out.lo += mass * tb_prev;
            out.hi += mass * tb;
        }
        prev_a = aj;
        prev_tail = tj;
        tb_prev = tb;
    }
    // Remaining tail mass of A beyond the grid: tailB there lies in
    // [tailB(x - a_top), 1].
    if (prev_tail > 0.0) {
        out.lo += prev_tail * tb_prev;
        out.hi += prev_tail * 1.0;
    }
    return out;
}

} // namespace

ConvTail conv_tail(const UnivariateSpec& a, const UnivariateSpec& b, double x,
                   std::size_t cells, double depth) {
    if (cells == 0 || !(depth > 0.0 && depth < 1.0))
        throw std::invalid_argument("conv_tail: need cells > 0 and depth in (0,1)");
    if (x < a.support_lo() + b.support_lo()) return {1.0, 1.0};
    // Discretize the atomic side exactly when available; otherwise pick A.
    const bool swap = !a.atomic() && b.atomic();
    const Bracket br = swap ? conv_against(b, a, x, cells, depth)
                            : conv_against(a, b, x, cells, depth);
    ConvTail out;
    out.lower = std::min(br.lo, br.hi);
    out.upper = std::max(br.lo, br.hi);
    return out;
}

} // namespace ht2d
