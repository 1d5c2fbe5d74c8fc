#pragma once

namespace perceptsim {

// Regularized incomplete beta I_x(a, b) and gamma P(a, x) / Q(a, x),
// evaluated by continued fractions (Lentz) with symmetry switching, at most
// 300 iterations to a relative tolerance of 1e-14. ConvergenceError if the
// fraction does not settle; DomainError on invalid arguments.
double regularized_beta(double a, double b, double x);
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double normal_cdf(double z);

// Lower-tail CDFs. Degrees of freedom must be >= 1; x >= 0 for F and chi2.
double t_cdf(double t, double df);
double f_cdf(double x, double df1, double df2);
double chi2_cdf(double x, double df);

// Upper tails computed directly rather than as 1 - cdf, so small p-values
// keep their precision.
double t_two_sided_p(double t, double df);
double f_sf(double x, double df1, double df2);
double chi2_sf(double x, double df);

// Inverse of t_cdf for p in (0, 1), by bisection to ~1e-12.
double t_quantile(double p, double df);

}  // namespace perceptsim
