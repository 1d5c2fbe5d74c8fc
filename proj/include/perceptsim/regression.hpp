#pragma once

#include "perceptsim/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perceptsim {

struct Cohort;

struct JarqueBera {
    double statistic = 0.0;
    double p_value = 1.0;
    double skew = 0.0;
    double kurtosis = 3.0;  // Pearson (normal = 3)
};

// OLS fit with the residual diagnostic panel. Entries of the per-coefficient
// vectors follow the design's column order (intercept first). Diagnostics
// that are undefined for a given fit (e.g. Durbin-Watson on an exact fit) are
// NaN.
struct OlsFit {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_values;
    std::vector<double> p_values;  // two-sided; below 1e-300 reported as 0
    std::vector<double> conf_low;  // 95% interval
    std::vector<double> conf_high;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_statistic = 0.0;
    double f_p_value = 0.0;
    double durbin_watson = 0.0;
    double jarque_bera = 0.0;
    double jb_p_value = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0;
    double condition_number = 0.0;
    double sse = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n_obs = 0;
    std::size_t df_model = 0;
    std::size_t df_resid = 0;
    std::vector<double> residuals;  // response order
};

/// Least squares of `response` on `design` via column-pivoted Householder QR.
///
/// The design must carry a leading column of ones; `names` labels the
/// columns (defaults to "const", "x1", ...). Throws DomainError on dimension
/// problems or n <= columns, SingularityError when a pivot falls below
/// 1e-10 times the largest.
OlsFit fit_ols(const Matrix& design, std::span<const double> response, std::vector<std::string> names = {});

// Design [1, theme_1, ..., theme_K] and response = success for a cohort.
Matrix cohort_design(const Cohort& cohort);
OlsFit fit_cohort(const Cohort& cohort);

// sum (e_t - e_{t-1})^2 / sum e_t^2, in the order given. Needs n >= 2 and a
// nonzero residual.
double durbin_watson(std::span<const double> residuals);

// n/6 (S^2 + (K - 3)^2 / 4) with its chi-square(2) upper-tail p-value.
JarqueBera jarque_bera(std::span<const double> residuals);

// Largest over smallest singular value of the unscaled design.
double condition_number(const Matrix& design);

// Two-sided p-value with the underflow floor applied.
double two_sided_p(double t, double df);

}  // namespace perceptsim
