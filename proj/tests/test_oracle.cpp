#include "orbike/oracle.hpp"
#include "orbike/lct.hpp"

#include <doctest.h>

#include <cmath>

using namespace orbike;

namespace {

OracleConfig quick(unsigned workers = 1) {
    auto cfg = OracleConfig::defaults();
    cfg.samples_per_shell = 4000;
    cfg.workers = workers;
    return cfg;
}

}  // namespace

TEST_CASE("defaults are valid") {
    const auto cfg = OracleConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.cutoffs.size() == 41);
    CHECK(cfg.lambda_grid.size() == 59);
    CHECK(cfg.lambda_grid.front() == Rat(1, 10));
    CHECK(cfg.lambda_grid.back() == Rat(3, 2));
}

TEST_CASE("config validation") {
    auto cfg = quick();
    cfg.samples_per_shell = 999;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = quick();
    std::swap(cfg.cutoffs[3], cfg.cutoffs[4]);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = quick();
    cfg.cutoffs.front() = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = quick();
    cfg.cutoffs.resize(cfg.skip_outer_shells + 3);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = quick();
    cfg.lambda_grid = {Rat(1, 2)};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = quick();
    cfg.lambda_grid.front() = Rat(0);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    const std::vector<long> none;
    CHECK_THROWS_AS(estimate_monomial_threshold(none, quick()), std::invalid_argument);
    CHECK_THROWS_AS(estimate_bp_threshold(1, quick()), std::invalid_argument);
}

TEST_CASE("grid helpers") {
    const auto g = OracleConfig::linear_grid(Rat(0), Rat(1), 5);
    CHECK(g == std::vector<Rat>{Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)});
    const auto c = OracleConfig::geometric_cutoffs(0.5, 4);
    CHECK(c == std::vector<double>{1.0, 0.5, 0.25, 0.125});
}

TEST_CASE("bit-identical results for any worker count") {
    const std::vector<long> a{1, 2};
    const auto one = estimate_monomial_threshold(a, quick(1));
    const auto three = estimate_monomial_threshold(a, quick(3));
    CHECK(one.threshold_estimate == three.threshold_estimate);
    CHECK(one.confidence_halfwidth == three.confidence_halfwidth);
    REQUIRE(one.per_lambda_slopes.size() == three.per_lambda_slopes.size());
    for (std::size_t i = 0; i < one.per_lambda_slopes.size(); ++i) {
        CHECK(one.per_lambda_slopes[i].shell_exponent == three.per_lambda_slopes[i].shell_exponent);
        CHECK(one.per_lambda_slopes[i].cumulative_slope == three.per_lambda_slopes[i].cumulative_slope);
    }
    auto reseeded = quick(1);
    reseeded.seed = 2;
    CHECK(estimate_monomial_threshold(a, reseeded).threshold_estimate != one.threshold_estimate);
}

TEST_CASE("convergence direction at the grid extremes") {
    const std::vector<long> a{1};
    const auto est = estimate_monomial_threshold(a, quick());
    const auto& lo = est.per_lambda_slopes.front();
    const auto& hi = est.per_lambda_slopes.back();
    CHECK(lo.lambda == doctest::Approx(0.1));
    CHECK(std::abs(lo.cumulative_slope) < 0.05);
    CHECK(hi.lambda == doctest::Approx(1.5));
    CHECK(hi.cumulative_slope < -0.5);  // I ~ eps^(2 - 2 lambda)
    for (std::size_t i = 1; i < est.per_lambda_slopes.size(); ++i)
        CHECK(est.per_lambda_slopes[i].lambda > est.per_lambda_slopes[i - 1].lambda);

    const auto bp = estimate_bp_threshold(3, quick());
    CHECK(std::abs(bp.per_lambda_slopes.front().cumulative_slope) < 0.05);
    CHECK(bp.per_lambda_slopes.back().cumulative_slope < -0.5);
}

TEST_CASE("threshold outside the grid names the direction") {
    const std::vector<long> a{1};
    auto cfg = quick();
    cfg.lambda_grid = OracleConfig::linear_grid(Rat(1, 10), Rat(1, 2), 9);
    try {
        estimate_monomial_threshold(a, cfg);
        FAIL("expected ThresholdOutsideGrid");
    } catch (const ThresholdOutsideGrid& e) {
        CHECK(e.direction() == ThresholdOutsideGrid::Direction::Above);
    }
    cfg.lambda_grid = OracleConfig::linear_grid(Rat(6, 5), Rat(2), 9);
    try {
        estimate_monomial_threshold(a, cfg);
        FAIL("expected ThresholdOutsideGrid");
    } catch (const ThresholdOutsideGrid& e) {
        CHECK(e.direction() == ThresholdOutsideGrid::Direction::Below);
    }
}

TEST_CASE("verify_threshold") {
    ExponentEstimate e;
    e.threshold_estimate = 1.02;
    CHECK(verify_threshold(Rat(1), e, 0.1));
    e.threshold_estimate = 0.7;
    CHECK_FALSE(verify_threshold(Rat(1, 2), e, 0.1));
    CHECK_THROWS(verify_threshold(Rat(1), e, 0.0));
    CHECK_THROWS(verify_threshold(Rat(0), e, 0.1));
}

TEST_CASE("estimates agree with exact thresholds") {
    const auto cfg = OracleConfig::defaults();
    for (std::vector<long> a : {std::vector<long>{1}, std::vector<long>{2}, std::vector<long>{4}}) {
        const auto est = estimate_monomial_threshold(a, cfg);
        CHECK(verify_threshold(monomial_lct(a), est, 0.1));
        CHECK(est.threshold_estimate >= 0.1);
        CHECK(est.threshold_estimate <= 1.5);
    }
    CHECK(verify_threshold(Rat(2, 3), estimate_bp_threshold(3, cfg), 0.1));
}
