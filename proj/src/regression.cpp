#include "perceptsim/regression.hpp"

#include "perceptsim/distributions.hpp"
#include "perceptsim/error.hpp"
#include "perceptsim/simulator.hpp"
#include "perceptsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace perceptsim {

namespace {

constexpr double kPFloor = 1e-300;
constexpr double kRankTolerance = 1e-10;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double floor_p(double p) { return p < kPFloor ? 0.0 : std::min(p, 1.0); }

bool all_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

double two_sided_p(double t, double df) {
    if (std::isnan(t)) return kNaN;
    return floor_p(t_two_sided_p(t, df));
}

double durbin_watson(std::span<const double> residuals) {
    if (residuals.size() < 2) throw DomainError("durbin_watson: needs at least 2 residuals");
    double num = 0.0;
    double den = residuals[0] * residuals[0];
    for (std::size_t t = 1; t < residuals.size(); ++t) {
        const double d = residuals[t] - residuals[t - 1];
        num += d * d;
        den += residuals[t] * residuals[t];
    }
    if (den == 0.0) throw DomainError("durbin_watson: all residuals are zero");
    return num / den;
}

JarqueBera jarque_bera(std::span<const double> residuals) {
    if (residuals.size() < 4) throw DomainError("jarque_bera: needs at least 4 residuals");
    JarqueBera jb;
    jb.skew = skewness(residuals);
    jb.kurtosis = kurtosis(residuals);
    const double n = static_cast<double>(residuals.size());
    const double excess = jb.kurtosis - 3.0;
    jb.statistic = n / 6.0 * (jb.skew * jb.skew + excess * excess / 4.0);
    jb.p_value = chi2_sf(jb.statistic, 2.0);
    return jb;
}

double condition_number(const Matrix& design) {
    if (design.rows() < design.cols() || design.cols() == 0) {
        throw DomainError("condition_number: design needs at least as many rows as columns");
    }
    const auto sv = singular_values(design);
    if (sv.back() <= kRankTolerance * sv.front()) throw SingularityError("condition_number: rank-deficient design");
    return sv.front() / sv.back();
}

OlsFit fit_ols(const Matrix& design, std::span<const double> response, std::vector<std::string> names) {
    const std::size_t n = design.rows();
    const std::size_t p = design.cols();
    if (p == 0) throw DomainError("fit_ols: design has no columns");
    if (response.size() != n) {
        throw DomainError(fmt::format("fit_ols: design has {} rows but response has {}", n, response.size()));
    }
    if (n <= p) throw DomainError(fmt::format("fit_ols: need more observations ({}) than coefficients ({})", n, p));
    for (std::size_t i = 0; i < n; ++i) {
        if (design(i, 0) != 1.0) throw DomainError("fit_ols: first design column must be the constant 1");
    }
    if (names.empty()) {
        names.push_back("const");
        for (std::size_t j = 1; j < p; ++j) names.push_back(fmt::format("x{}", j));
    }
    if (names.size() != p) throw DomainError("fit_ols: one name per design column required");

    const PivotedQr qr = pivoted_qr(design, response, kRankTolerance);
    if (qr.rank < p) throw SingularityError(fmt::format("fit_ols: design rank {} < {} columns", qr.rank, p));

    // Solve R z = (Q^T y)[0:p], then undo the column permutation.
    const Matrix r_inv = invert_upper(qr.r);
    std::vector<double> z(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) z[i] += r_inv(i, j) * qr.qt_b[j];

    OlsFit fit;
    fit.names = std::move(names);
    fit.n_obs = n;
    fit.df_model = p - 1;
    fit.df_resid = n - p;
    fit.coefficients.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) fit.coefficients[qr.permutation[i]] = z[i];

    const auto fitted = multiply(design, fit.coefficients);
    fit.residuals.resize(n);
    double sse = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = response[i] - fitted[i];
        sse += fit.residuals[i] * fit.residuals[i];
        y_mean += response[i];
    }
    y_mean /= static_cast<double>(n);
    double sst = 0.0;
    for (double y : response) sst += (y - y_mean) * (y - y_mean);
    if (sst == 0.0) throw DomainError("fit_ols: response has zero variance");
    // Residuals this small relative to the spread of y are rounding noise
    // from an exact fit; zero them so the exact-fit path applies.
    if (sse <= 1e-24 * sst) {
        std::fill(fit.residuals.begin(), fit.residuals.end(), 0.0);
        sse = 0.0;
    }

    fit.sse = sse;
    const double df_resid = static_cast<double>(fit.df_resid);
    const double df_model = static_cast<double>(fit.df_model);
    const double nd = static_cast<double>(n);
    fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * (nd - 1.0) / df_resid;

    // (X^T X)^-1 = P R^-1 R^-T P^T; only the diagonal is needed.
    const double s2 = sse / df_resid;
    const double t_crit = t_quantile(0.975, df_resid);
    fit.std_errors.assign(p, 0.0);
    fit.t_values.assign(p, 0.0);
    fit.p_values.assign(p, 0.0);
    fit.conf_low.assign(p, 0.0);
    fit.conf_high.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double diag = 0.0;
        for (std::size_t j = i; j < p; ++j) diag += r_inv(i, j) * r_inv(i, j);
        const std::size_t col = qr.permutation[i];
        const double se = std::sqrt(s2 * diag);
        const double beta = fit.coefficients[col];
        fit.std_errors[col] = se;
        if (se > 0.0) {
            fit.t_values[col] = beta / se;
        } else {
            fit.t_values[col] = beta == 0.0 ? kNaN : std::copysign(std::numeric_limits<double>::infinity(), beta);
        }
        fit.p_values[col] = two_sided_p(fit.t_values[col], df_resid);
        fit.conf_low[col] = beta - t_crit * se;
        fit.conf_high[col] = beta + t_crit * se;
    }

    if (fit.df_model > 0) {
        if (fit.r_squared < 1.0) {
            fit.f_statistic = (fit.r_squared / df_model) / ((1.0 - fit.r_squared) / df_resid);
            fit.f_p_value = floor_p(f_sf(fit.f_statistic, df_model, df_resid));
        } else {
            fit.f_statistic = std::numeric_limits<double>::infinity();
            fit.f_p_value = 0.0;
        }
    } else {
        fit.f_statistic = kNaN;
        fit.f_p_value = kNaN;
    }

    if (all_zero(fit.residuals)) {
        fit.durbin_watson = kNaN;
        fit.jarque_bera = kNaN;
        fit.jb_p_value = kNaN;
        fit.skew = kNaN;
        fit.kurtosis = kNaN;
    } else {
        fit.durbin_watson = durbin_watson(fit.residuals);
        try {
            const auto jb = jarque_bera(fit.residuals);
            fit.jarque_bera = jb.statistic;
            fit.jb_p_value = jb.p_value;
            fit.skew = jb.skew;
            fit.kurtosis = jb.kurtosis;
        } catch (const DomainError&) {
            fit.jarque_bera = fit.jb_p_value = fit.skew = fit.kurtosis = kNaN;
        }
    }
    fit.condition_number = condition_number(design);

    if (sse > 0.0) {
        const double pd = static_cast<double>(p);
        fit.log_likelihood = -0.5 * nd * (std::log(2.0 * std::numbers::pi) + std::log(sse / nd) + 1.0);
        fit.aic = -2.0 * fit.log_likelihood + 2.0 * pd;
        fit.bic = -2.0 * fit.log_likelihood + pd * std::log(nd);
    } else {
        fit.log_likelihood = std::numeric_limits<double>::infinity();
        fit.aic = fit.bic = -std::numeric_limits<double>::infinity();
    }
    return fit;
}

Matrix cohort_design(const Cohort& cohort) {
    const std::size_t n = cohort.size();
    const std::size_t k = cohort.theme_count();
    Matrix design(n, k + 1, 1.0);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < n; ++j) design(j, c + 1) = cohort.theme_scores[c][j];
    return design;
}

OlsFit fit_cohort(const Cohort& cohort) {
    const std::size_t k = cohort.theme_count();
    if (cohort.size() <= k + 1) {
        throw DomainError(fmt::format("regression needs n > K + 1 = {} respondents, cohort has {}", k + 1,
                                      cohort.size()));
    }
    std::vector<std::string> names{"const"};
    for (const auto& p : cohort.composites_echo) names.push_back(p.theme_id);
    if (names.size() != k + 1) {
        names.resize(1);
        for (std::size_t c = 0; c < k; ++c) names.push_back(fmt::format("theme_{}", c + 1));
    }
    return fit_ols(cohort_design(cohort), cohort.success, std::move(names));
}

}  // namespace perceptsim
