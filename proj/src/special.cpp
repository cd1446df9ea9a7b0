#include "heavytail2d/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ht2d {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double norm_tail(double x) {
    return 0.5 * std::erfc(x * 0.7071067811865475244);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = q *
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Gauss-Legendre half tables for 6-, 12- and 20-point rules.
const double gl_x3[] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969};
const double gl_w3[] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910};
const double gl_x6[] = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
                        -0.5873179542866175, -0.3678314989981802, -0.1252334085114689};
const double gl_w6[] = {0.04717533638651183, 0.1069393259953184, 0.1600783285433462,
                        0.2031674267230659, 0.2334925365383548, 0.2491470458134028};
const double gl_x10[] = {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                         -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                         -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                         -0.07652652113349733};
const double gl_w10[] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                         0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                         0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                         0.1527533871307259};

} // namespace

double bvn_upper(double dh, double dk, double rho) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::domain_error("bvn_upper: rho must lie in [-1,1]");
    if (dh == inf || dk == inf) return 0.0;
    if (dh == -inf) return norm_tail(dk);
    if (dk == -inf) return norm_tail(dh);
    if (rho == 1.0) return std::min(norm_tail(dh), norm_tail(dk));
    if (rho == -1.0) return std::max(norm_tail(dh) + norm_tail(dk) - 1.0, 0.0);

    const double twopi = 6.283185307179586477;
    const double* x;
    const double* w;
    int lg;
    const double ar = std::fabs(rho);
    if (ar < 0.3) { lg = 3; x = gl_x3; w = gl_w3; }
    else if (ar < 0.75) { lg = 6; x = gl_x6; w = gl_w6; }
    else { lg = 10; x = gl_x10; w = gl_w10; }

    double h = dh, k = dk, hk = h * k, bvn = 0.0;
    if (ar < 0.925) {
        if (ar > 0.0) {
            const double hs = (h * h + k * k) / 2;
            const double asr = std::asin(rho);
            for (int i = 0; i < lg; ++i)
                for (int is = -1; is <= 1; is += 2) {
                    const double sn = std::sin(asr * (is * x[i] + 1) / 2);
                    bvn += w[i] * std::exp((sn * hk - hs) / (1 - sn * sn));
                }
            bvn = bvn * asr / (2 * twopi);
        }
        bvn += norm_tail(h) * norm_tail(k);
    } else {
        if (rho < 0.0) { k = -k; hk = -hk; }
        const double as = (1 - rho) * (1 + rho);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4 - hk) / 8;
        const double d = (12 - hk) / 16;
        double asr = -(bs / as + hk) / 2;
        if (asr > -100.0)
            bvn = a * std::exp(asr) *
                  (1 - c * (bs - as) * (1 - d * bs / 5) / 3 + c * d * as * as / 5);
        if (-hk < 100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(twopi) * norm_cdf(-b / a);
            bvn -= std::exp(-hk / 2) * sp * b * (1 - c * bs * (1 - d * bs / 5) / 3);
        }
        a /= 2;
        for (int i = 0; i < lg; ++i)
            for (int is = -1; is <= 1; is += 2) {
                const double t = a * (is * x[i] + 1);
                const double xs = t * t;
                const double rs = std::sqrt(1 - xs);
                asr = -(bs / xs + hk) / 2;
                if (asr > -100.0) {
                    const double sp = 1 + c * xs * (1 + d * xs);
                    const double ep = std::exp(-hk * (1 - rs) / (2 * (1 + rs))) / rs;
                    bvn += a * w[i] * std::exp(asr) * (ep - sp);
                }
            }
        bvn = -bvn / twopi;
        if (rho > 0.0) {
            bvn += norm_tail(std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, std::min(norm_tail(dh), norm_tail(dk)));
}

} // namespace ht2d
