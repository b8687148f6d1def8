// oracle.hpp
// Monte-Carlo estimates of integrability thresholds, used only to cross-check
// the exact thresholds. Nothing in the criteria consumes these numbers.
//
// For each probed lambda the integral of |f|^{-2 lambda} is split into shells
// eps_{k+1} <= dist(z, {f = 0}) < eps_k. A shell integral scales like
// eps^gamma(lambda); gamma > 0 means the cutoff integral converges as
// eps -> 0, gamma < 0 means it grows like eps^gamma. The threshold is the
// zero crossing of the fitted gamma.

#pragma once

#include "orbike/exactmath.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbike {

struct OracleConfig {
    std::uint64_t samples_per_shell = 20000;
    std::vector<double> cutoffs;  // strictly decreasing, in (0, 1]
    std::vector<Rat> lambda_grid;
    std::uint64_t seed = 1;
    double tolerance = 0.1;
    /// Shells nearest the outer boundary that are left out of the exponent fit.
    unsigned skip_outer_shells = 2;
    unsigned workers = 1;

    /// cutoffs ratio^0, ratio^1, ..., ratio^(count-1).
    static std::vector<double> geometric_cutoffs(double ratio, unsigned count);
    /// count points spaced evenly in [lo, hi].
    static std::vector<Rat> linear_grid(const Rat& lo, const Rat& hi, unsigned count);
    /// 41 halving cutoffs, 8 skipped, 59-point grid on [0.1, 1.5].
    static OracleConfig defaults();

    /// Throws std::invalid_argument on a malformed configuration.
    void validate() const;
};

struct LambdaSlope {
    double lambda = 0;
    /// d log I / d log eps over the deepest cutoffs (>= 5), I the cutoff integral.
    double cumulative_slope = 0;
    /// Fitted shell growth exponent gamma(lambda) and its standard error.
    double shell_exponent = 0;
    double shell_exponent_se = 0;
};

struct ExponentEstimate {
    double threshold_estimate = 0;
    /// 95% statistical half-width; excludes the finite-cutoff bias, which
    /// dominates when two singular strata share the threshold (u^2 + v^2).
    double confidence_halfwidth = 0;
    std::vector<LambdaSlope> per_lambda_slopes;  // ascending lambda
};

class ThresholdOutsideGrid : public std::runtime_error {
public:
    enum class Direction { Below, Above };
    ThresholdOutsideGrid(Direction d, const std::string& what) : std::runtime_error(what), dir_(d) {}
    Direction direction() const { return dir_; }

private:
    Direction dir_;
};

/// |prod z_j^{a_j}|^{-2 lambda} on the unit polydisc in C^k, k = exponents.size().
ExponentEstimate estimate_monomial_threshold(std::span<const long> exponents, const OracleConfig& cfg);

/// |u^n + v^n|^{-2 lambda} on the unit ball of C^2, n >= 2.
ExponentEstimate estimate_bp_threshold(unsigned n, const OracleConfig& cfg);

/// |estimate - analytic| / analytic <= tol. Throws for tol <= 0 or analytic <= 0.
bool verify_threshold(const Rat& analytic, const ExponentEstimate& est, double tol);

}  // namespace orbike
