#include "fixtures.hpp"
#include "perceptsim/composer.hpp"
#include "perceptsim/error.hpp"
#include "perceptsim/histogram.hpp"
#include "perceptsim/report.hpp"
#include "perceptsim/simulator.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace perceptsim;

TEST_CASE("two values, two bins") {
    const auto bins = make_histogram(std::vector<double>{1, 5}, 2);
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].count == 1);
    CHECK(bins[1].count == 1);
    CHECK(bins[0].lower == 1.0);
    CHECK(bins[0].upper == 3.0);
    CHECK(bins[1].upper == 5.0);
}

TEST_CASE("maximum lands in the last bin, interior edges are half-open") {
    const auto bins = make_histogram(std::vector<double>{0, 1, 2, 3, 4}, 4);
    CHECK(bins[0].count == 1);
    CHECK(bins[1].count == 1);
    CHECK(bins[2].count == 1);
    CHECK(bins[3].count == 2);
}

TEST_CASE("constant data goes to the first bin") {
    const auto bins = make_histogram(std::vector<double>(9, 4.2), 3);
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].count == 9);
    CHECK(bins[1].count == 0);
    CHECK(bins[2].count == 0);
}

TEST_CASE("histogram errors") {
    CHECK_THROWS_AS(make_histogram(std::vector<double>{}, 3), DomainError);
    CHECK_THROWS_AS(make_histogram(std::vector<double>{1, 2}, 0), DomainError);
}

TEST_CASE("counts are conserved") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> z(0, 1);
    for (int c = 0; c < 1000; ++c) {
        std::vector<double> v(1 + gen() % 500);
        for (auto& x : v) x = z(gen) * (1 + c % 7);
        const std::size_t b = 1 + gen() % 80;
        const auto bins = make_histogram(v, b);
        REQUIRE(bins.size() == b);
        const auto total = std::accumulate(bins.begin(), bins.end(), std::size_t{0},
                                           [](std::size_t s, const HistogramBin& h) { return s + h.count; });
        REQUIRE(total == v.size());
    }
}

TEST_CASE("svg output is a standalone document") {
    const auto bins = make_histogram(std::vector<double>{1, 2, 2, 3}, 3);
    const auto svg = histogram_svg(bins, "Success <score>", "success");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("&lt;score&gt;") != std::string::npos);
}

TEST_CASE("format_fixed rounds exact ties to even") {
    CHECK(format_fixed(1.03125) == "1.0312");
    CHECK(format_fixed(1.09375) == "1.0938");
    CHECK(format_fixed(0.0625, 3) == "0.062");
    CHECK(format_fixed(3.670701) == "3.6707");
    CHECK(format_fixed(-0.5, 0) == "-0");
    CHECK(format_fixed(2.5, 0) == "2");
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cohort CSV round trip is exact") {
    const std::vector<ThemeParameters> params{{"a", 4, 0.3, 0, 0}, {"b", 3.5, 0.2, 0, 0}};
    SimulationConfig config;
    config.n = 500;
    const Cohort cohort = run_simulation(params, config);
    const auto text = cohort_csv(cohort);
    CHECK(text.rfind("theme_1,theme_2,success\n", 0) == 0);
    const Cohort back = parse_cohort_csv(text);
    CHECK(back.theme_scores == cohort.theme_scores);
    CHECK(back.success == cohort.success);
    CHECK(cohort_csv(back) == text);
}

TEST_CASE("cohort CSV parse errors") {
    CHECK_THROWS_AS(parse_cohort_csv(""), ParseError);
    CHECK_THROWS_AS(parse_cohort_csv("theme_1,score\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_cohort_csv("theme_2,success\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_cohort_csv("theme_1,success\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_cohort_csv("theme_1,success\n1,abc\n"), ParseError);
    CHECK_THROWS_AS(parse_cohort_csv("theme_1,success\n1,nan\n"), ParseError);
    const auto ok = parse_cohort_csv("theme_1,success\r\n1.5, 2\r\n");
    CHECK(ok.success == std::vector<double>{2.0});
}

TEST_CASE("published composites are compared and theme 3 diverges") {
    const auto spec = fixtures::veras();
    const auto errata = compare_published(spec, compose_all(spec));
    REQUIRE(errata.size() == 3);
    CHECK_FALSE(errata[0].diverges);
    CHECK_FALSE(errata[1].diverges);
    CHECK(errata[2].diverges);
    CHECK(errata[2].note == "theme T3: computed (3.6707, 0.1706) diverges from published (3.7100, 0.2163)");
}

TEST_CASE("SUS comparison against the published range") {
    const auto spec = fixtures::veras();
    const auto c = compare_sus(spec, 4.0666);
    REQUIRE(c.published.has_value());
    CHECK(c.published->low == 80.0);
    CHECK(c.published->high == 85.0);
    CHECK_FALSE(c.published_reproduced);
    CHECK(render_sus_line(c.items_based) == "SUS (items-based): 73.85 -> Acceptable");
}

TEST_CASE("CSV writers") {
    const std::vector<HistogramBin> bins{{0, 0.5, 3}, {0.5, 1, 4}};
    CHECK(histogram_csv(bins) == "bin_lower,bin_upper,count\n0,0.5,3\n0.5,1,4\n");
    const std::vector<ThemeComposite> comps{{"T1", 4.5, 0.25, 16, 2}};
    CHECK(composites_csv(comps) == "theme_id,weighted_mean,weighted_sd,total_weight,item_count\nT1,4.5,0.25,16,2\n");
}

TEST_CASE("report JSON carries every section") {
    RunReport report;
    report.cohort_summary = describe(std::vector<double>{1, 2, 3});
    const auto j = to_json(report);
    for (const char* key : {"study_echo", "composites", "errata", "simulation_parameters", "cohort_summary",
                            "clipped_count", "histogram", "ols", "sus", "config_echo", "warnings", "tool_version",
                            "timestamp"}) {
        CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["ols"].is_null());
    CHECK(j["tool_version"] == "1.0.0");
}

TEST_CASE("timestamp is ISO-8601 UTC") {
    const auto ts = utc_timestamp();
    CHECK(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}
