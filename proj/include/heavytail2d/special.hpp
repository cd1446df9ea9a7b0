#pragma once

// Standard normal helpers and the bivariate normal upper-orthant probability.
// norm_quantile follows Wichura's PPND16 rational approximations; bvn_upper
// follows the Drezner/Genz quadrature scheme. Both are accurate to well below
// the 1e-10 absolute tolerance documented for Gaussian-copula tails.

namespace ht2d {

double norm_cdf(double x);      // P[Z <= x]
double norm_tail(double x);     // P[Z > x]
double norm_quantile(double p); // inverse of norm_cdf, p in (0,1)

// P[Z1 > h, Z2 > k] for standard bivariate normal with correlation rho.
double bvn_upper(double h, double k, double rho);

} // namespace ht2d
