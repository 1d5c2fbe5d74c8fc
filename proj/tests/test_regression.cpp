#include "oracles.hpp"
#include "perceptsim/distributions.hpp"
#include "perceptsim/error.hpp"
#include "perceptsim/linalg.hpp"
#include "perceptsim/regression.hpp"
#include "perceptsim/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace perceptsim;

namespace {

Matrix design_from(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

std::vector<std::vector<double>> random_rows(std::mt19937_64& gen, std::size_t n, std::size_t p) {
    std::normal_distribution<double> z(0, 1);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p, 1.0));
    for (auto& row : rows)
        for (std::size_t c = 1; c < p; ++c) row[c] = z(gen) * (1 + c);
    return rows;
}

}  // namespace

TEST_CASE("four-point line") {
    const auto fit = fit_ols(design_from({{1, 0}, {1, 1}, {1, 2}, {1, 3}}), std::vector<double>{0, 1, 1, 2});
    CHECK(fit.coefficients[0] == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(fit.coefficients[1] == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(fit.r_squared == doctest::Approx(0.9).epsilon(1e-13));
    CHECK(fit.adj_r_squared == doctest::Approx(0.85).epsilon(1e-13));
    CHECK(fit.sse == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(fit.std_errors[0] == doctest::Approx(std::sqrt(0.07)).epsilon(1e-12));
    CHECK(fit.std_errors[1] == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
    CHECK(fit.f_statistic == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(fit.f_p_value == doctest::Approx(f_sf(18.0, 1, 2)).epsilon(1e-12));
    CHECK(fit.durbin_watson == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(fit.names == std::vector<std::string>{"const", "x1"});
    CHECK(fit.n_obs == 4);
    CHECK(fit.df_model == 1);
    CHECK(fit.df_resid == 2);
    const double tcrit = t_quantile(0.975, 2);
    CHECK(fit.conf_low[1] == doctest::Approx(0.6 - tcrit * std::sqrt(0.02)).epsilon(1e-10));
    CHECK(fit.conf_high[1] == doctest::Approx(0.6 + tcrit * std::sqrt(0.02)).epsilon(1e-10));
    CHECK(fit.p_values[1] == doctest::Approx(t_two_sided_p(0.6 / std::sqrt(0.02), 2)).epsilon(1e-12));
    // Gaussian log-likelihood at the MLE variance.
    const double ll = -2.0 * (std::log(2 * M_PI * 0.05) + 1);
    CHECK(fit.log_likelihood == doctest::Approx(ll).epsilon(1e-12));
    CHECK(fit.aic == doctest::Approx(-2 * ll + 4).epsilon(1e-12));
    CHECK(fit.bic == doctest::Approx(-2 * ll + 2 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("exact fit leaves residual diagnostics undefined") {
    const auto fit = fit_ols(design_from({{1, 0}, {1, 1}, {1, 2}, {1, 3}}), std::vector<double>{1, 3, 5, 7});
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::isnan(fit.durbin_watson));
    CHECK(std::isnan(fit.jarque_bera));
    CHECK(fit.std_errors[1] == 0.0);
    CHECK(std::isinf(fit.t_values[1]));
    CHECK(fit.p_values[1] == 0.0);
}

TEST_CASE("rank-deficient and malformed designs") {
    // Third column is twice the second.
    CHECK_THROWS_AS(fit_ols(design_from({{1, 1, 2}, {1, 2, 4}, {1, 3, 6}, {1, 5, 10}}), std::vector<double>{1, 2, 3, 4}),
                    SingularityError);
    CHECK_THROWS_AS(fit_ols(design_from({{1, 1}, {1, 2}}), std::vector<double>{1, 2}), DomainError);
    CHECK_THROWS_AS(fit_ols(design_from({{1, 1}, {1, 2}, {1, 3}}), std::vector<double>{1, 2}), DomainError);
    CHECK_THROWS_AS(fit_ols(design_from({{2, 1}, {1, 2}, {1, 3}}), std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("Durbin-Watson") {
    CHECK(durbin_watson(std::vector<double>{1, 1, 1, 1}) == 0.0);
    CHECK(durbin_watson(std::vector<double>{1, -1, 1, -1}) == 3.0);
    CHECK_THROWS_AS(durbin_watson(std::vector<double>{1}), DomainError);
    CHECK_THROWS_AS(durbin_watson(std::vector<double>{0, 0, 0}), DomainError);
}

TEST_CASE("Jarque-Bera") {
    const auto jb = jarque_bera(std::vector<double>{-1, 1, -1, 1});
    CHECK(jb.skew == doctest::Approx(0.0));
    CHECK(jb.kurtosis == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(jb.statistic == doctest::Approx(4.0 / 6.0).epsilon(1e-14));
    CHECK(jb.p_value == doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-12));
    CHECK(std::fabs(chi2_sf(0.084, 2) - 0.9589) < 5e-5);
}

TEST_CASE("condition number") {
    const auto two = design_from({{1, 0}, {1, 2}});
    // Singular values are square roots of the eigenvalues of X^T X = [[2, 2], [2, 4]].
    const auto [hi, lo] = oracle::symmetric_2x2_eigen(2, 2, 4);
    CHECK(condition_number(two) == doctest::Approx(std::sqrt(hi / lo)).epsilon(1e-13));
    CHECK(condition_number(two) == doctest::Approx(2.6180339887498953).epsilon(1e-13));

    const double h = 0.5;
    const auto orthonormal = design_from({{h, h}, {h, -h}, {h, h}, {h, -h}});
    CHECK(condition_number(orthonormal) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("singular values of a random matrix match the 2x2 Gram eigenvalues") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0, 1);
    for (int c = 0; c < 200; ++c) {
        Matrix m(6, 2);
        double a = 0, b = 0, d = 0;
        for (std::size_t r = 0; r < 6; ++r) {
            m(r, 0) = z(gen);
            m(r, 1) = z(gen);
            a += m(r, 0) * m(r, 0);
            b += m(r, 0) * m(r, 1);
            d += m(r, 1) * m(r, 1);
        }
        const auto sv = singular_values(m);
        const auto [hi, lo] = oracle::symmetric_2x2_eigen(a, b, d);
        REQUIRE(sv[0] == doctest::Approx(std::sqrt(hi)).epsilon(1e-10));
        REQUIRE(sv[1] == doctest::Approx(std::sqrt(lo)).epsilon(1e-8));
    }
}

TEST_CASE("QR solution agrees with the normal-equation oracle") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> z(0, 1);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t p = 2 + gen() % 3;
        const std::size_t n = p + 3 + gen() % 20;
        const auto rows = random_rows(gen, n, p);
        std::vector<double> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            y[r] = 0.3 + z(gen);
            for (std::size_t k = 1; k < p; ++k) y[r] += 0.1 * k * rows[r][k];
        }
        const auto fit = fit_ols(design_from(rows), y);
        const auto want = oracle::normal_equations(rows, y);
        for (std::size_t k = 0; k < p; ++k)
            REQUIRE(fit.coefficients[k] == doctest::Approx(want.beta[k]).epsilon(1e-9).scale(1));
        REQUIRE(fit.r_squared == doctest::Approx(want.r_squared).epsilon(1e-9).scale(1));

        // Residuals are orthogonal to every design column.
        for (std::size_t k = 0; k < p; ++k) {
            double dot = 0, norm = 0;
            for (std::size_t r = 0; r < n; ++r) {
                dot += rows[r][k] * fit.residuals[r];
                norm += std::fabs(rows[r][k] * y[r]);
            }
            REQUIRE(std::fabs(dot) <= 1e-10 * norm);
        }
    }
}

TEST_CASE("affine response change and column scaling") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z(0, 1);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 12;
        const auto rows = random_rows(gen, n, 3);
        std::vector<double> y(n);
        for (std::size_t r = 0; r < n; ++r) y[r] = rows[r][1] - 0.4 * rows[r][2] + z(gen);
        const auto base = fit_ols(design_from(rows), y);

        // y -> a y + b: slopes scale by a, intercept becomes a b0 + b, R^2 unchanged.
        const double a = 0.5 + 2 * std::fabs(z(gen));
        const double b = z(gen);
        std::vector<double> y2;
        for (double v : y) y2.push_back(a * v + b);
        const auto moved = fit_ols(design_from(rows), y2);
        REQUIRE(moved.coefficients[0] == doctest::Approx(a * base.coefficients[0] + b).epsilon(1e-9).scale(1));
        REQUIRE(moved.coefficients[1] == doctest::Approx(a * base.coefficients[1]).epsilon(1e-9).scale(1));
        REQUIRE(moved.r_squared == doctest::Approx(base.r_squared).epsilon(1e-9));
        REQUIRE(moved.t_values[1] == doctest::Approx(base.t_values[1]).epsilon(1e-8));

        // Scaling column 2 by s divides its coefficient by s and leaves its t value.
        const double s = 0.1 + 10 * std::fabs(z(gen));
        auto scaled = rows;
        for (auto& row : scaled) row[2] *= s;
        const auto sfit = fit_ols(design_from(scaled), y);
        REQUIRE(sfit.coefficients[2] == doctest::Approx(base.coefficients[2] / s).epsilon(1e-9).scale(1e-12));
        REQUIRE(sfit.t_values[2] == doctest::Approx(base.t_values[2]).epsilon(1e-8));
    }
}

TEST_CASE("cohort regression") {
    const std::vector<ThemeParameters> params{
        {"T1", 4.1169, 0.2709, 0, 0}, {"T2", 4.1240, 0.0910, 0, 0}, {"T3", 3.7100, 0.2160, 0, 0}};
    SimulationConfig config;
    const Cohort cohort = run_simulation(params, config);
    const auto design = cohort_design(cohort);
    CHECK(design.rows() == 10000);
    CHECK(design.cols() == 4);
    CHECK(design(17, 0) == 1.0);
    CHECK(design(17, 2) == cohort.theme_scores[1][17]);

    const auto fit = fit_cohort(cohort);
    CHECK(fit.names == std::vector<std::string>{"const", "T1", "T2", "T3"});
    double total = 0;
    for (const auto& p : cohort.composites_echo) total += p.weight;
    for (std::size_t k = 0; k < 3; ++k) {
        const double w = cohort.composites_echo[k].weight / total;
        CHECK(std::fabs(fit.coefficients[k + 1] - w) < 4 * fit.std_errors[k + 1]);
    }
    CHECK(std::fabs(fit.r_squared - 0.7197) < 0.02);

    Cohort tiny = cohort;
    for (auto& col : tiny.theme_scores) col.resize(4);
    tiny.success.resize(4);
    CHECK_THROWS_AS(fit_cohort(tiny), DomainError);
}

TEST_CASE("p-value underflow floor") {
    CHECK(two_sided_p(1e8, 50) == 0.0);
    CHECK(two_sided_p(1e6, 50) > 0.0);
    CHECK(two_sided_p(2.0, 50) == doctest::Approx(t_two_sided_p(2.0, 50)));
}
