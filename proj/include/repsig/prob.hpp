#pragma once
// Tail probabilities and special functions backing the statistics module.
// Self-contained: regularized incomplete beta (Lentz continued fraction,
// Numerical Recipes style), Student-t tails, normal cdf/quantile, and the
// asymptotic Kolmogorov distribution.

namespace repsig::prob {

// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

// P(T > t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (Acklam's rational approximation, refined by one
// Halley step; relative error far below anything the callers resolve).
double normal_ppf(double p);

// Survival of chi-square with 2 degrees of freedom: exp(-x/2).
double chi2_sf_2df(double x);

// Q_KS(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2),
// series truncated once terms drop below 1e-12; clamped to [0,1].
double kolmogorov_q(double lambda);

}  // namespace repsig::prob
