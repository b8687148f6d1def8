// oracle.cpp

#include "orbike/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <thread>

namespace orbike {

namespace {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Counter-based stream: every draw is a pure function of
// (seed, shell, sample, draw), so results do not depend on scheduling.

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t shell, std::uint64_t sample)
        : key_(mix64(mix64(mix64(seed) ^ (shell * 0xd1b54a32d192ed03ull)) ^ sample)) {}

    /// Uniform in [0, 1).
    double next() {
        const std::uint64_t bits = mix64(key_ ^ (draw_++ * 0xa0761d6478bd642full));
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t draw_ = 0;
};

// ---------------------------------------------------------------------------
// A function on a domain in C^k whose zero set is a union of hyperplanes
// through the origin, ell_m(w) = sum_j c_mj w_j with |c_m| = 1.

enum class Domain { Polydisc, Ball };

struct Component {
    CVec covector;              // c
    std::vector<CVec> frame;    // orthonormal basis; frame[0] = conj(c)
};

struct SingularProblem {
    unsigned dim = 1;
    Domain domain = Domain::Polydisc;
    std::vector<Component> components;
    std::function<double(const CVec&)> log_abs_f;
};

cplx hdot(const CVec& x, const CVec& y) {
    cplx s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

Component make_component(CVec covector) {
    const unsigned k = static_cast<unsigned>(covector.size());
    Component comp;
    CVec first(k);
    for (unsigned i = 0; i < k; ++i) first[i] = std::conj(covector[i]);
    comp.frame.push_back(first);
    for (unsigned axis = 0; axis < k && comp.frame.size() < k; ++axis) {
        CVec v(k, 0.0);
        v[axis] = 1.0;
        for (const auto& e : comp.frame) {
            const cplx p = hdot(v, e);
            for (unsigned i = 0; i < k; ++i) v[i] -= p * e[i];
        }
        double norm = 0;
        for (const auto& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm < 1e-9) continue;
        for (auto& z : v) z /= norm;
        comp.frame.push_back(v);
    }
    comp.covector = std::move(covector);
    return comp;
}

bool in_domain(const SingularProblem& p, const CVec& w) {
    if (p.domain == Domain::Polydisc)
        return std::all_of(w.begin(), w.end(), [](cplx z) { return std::abs(z) <= 1.0; });
    double s = 0;
    for (const auto& z : w) s += std::norm(z);
    return s <= 1.0;
}

double distance_to_zero_set(const SingularProblem& p, const CVec& w) {
    double d = INFINITY;
    for (const auto& c : p.components) {
        cplx ell = 0;
        for (std::size_t i = 0; i < w.size(); ++i) ell += c.covector[i] * w[i];
        d = std::min(d, std::abs(ell));
    }
    return d;
}

// Area densities on C.
struct RadialBand {
    double lo, hi, log_ratio;
    RadialBand(double a, double b) : lo(a), hi(b), log_ratio(std::log(b / a)) {}
    bool contains(double r) const { return r >= lo && r < hi; }
    double density(double r) const { return contains(r) ? 1.0 / (kTwoPi * r * r * log_ratio) : 0.0; }
    double draw_radius(double u) const { return lo * std::exp(u * log_ratio); }
};

// Tangential coordinates: even mixture of uniform on the unit disk and
// log-uniform radius in [floor, 1).
struct TangentialLaw {
    RadialBand band;
    explicit TangentialLaw(double floor) : band(floor, 1.0) {}
    double density(double r) const {
        const double uniform = r <= 1.0 ? 1.0 / std::numbers::pi : 0.0;
        return 0.5 * uniform + 0.5 * band.density(r);
    }
    double draw_radius(double pick, double u) const {
        return pick < 0.5 ? std::sqrt(u) : band.draw_radius(u);
    }
};

struct ShellSums {
    std::vector<double> sum, sumsq;  // per lambda
    std::uint64_t samples = 0;
};

// Estimate over the region a <= dist < b for every lambda at once.
ShellSums integrate_shell(const SingularProblem& p, const RadialBand& shell, const TangentialLaw& tangential,
                          const std::vector<double>& lambdas, std::uint64_t samples, std::uint64_t seed,
                          std::uint64_t shell_id) {
    ShellSums out;
    out.sum.assign(lambdas.size(), 0.0);
    out.sumsq.assign(lambdas.size(), 0.0);
    out.samples = samples;
    const unsigned k = p.dim;
    const double ncomp = static_cast<double>(p.components.size());
    CVec w(k);
    for (std::uint64_t i = 0; i < samples; ++i) {
        CounterStream rng(seed, shell_id, i);
        const auto m = std::min<std::size_t>(static_cast<std::size_t>(rng.next() * ncomp), p.components.size() - 1);
        const Component& comp = p.components[m];
        std::fill(w.begin(), w.end(), cplx(0.0));
        const double t_r = shell.draw_radius(rng.next());
        const cplx t = std::polar(t_r, kTwoPi * rng.next());
        for (unsigned j = 0; j < k; ++j) w[j] += t * comp.frame[0][j];
        for (unsigned f = 1; f < comp.frame.size(); ++f) {
            const double pick = rng.next();
            const double r = tangential.draw_radius(pick, rng.next());
            const cplx s = std::polar(r, kTwoPi * rng.next());
            for (unsigned j = 0; j < k; ++j) w[j] += s * comp.frame[f][j];
        }
        if (!in_domain(p, w)) continue;
        const double d = distance_to_zero_set(p, w);
        if (!shell.contains(d)) continue;

        // Mixture density over every component that could have produced w.
        double q = 0;
        for (const auto& c : p.components) {
            const double tr = std::abs(hdot(w, c.frame[0]));
            double dens = shell.density(tr);
            if (dens == 0) continue;
            for (unsigned f = 1; f < c.frame.size(); ++f) dens *= tangential.density(std::abs(hdot(w, c.frame[f])));
            q += dens;
        }
        q /= ncomp;
        if (q <= 0) continue;
        const double log_f = p.log_abs_f(w);
        const double log_q = std::log(q);
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            const double weight = std::exp(-2.0 * lambdas[l] * log_f - log_q);
            out.sum[l] += weight;
            out.sumsq[l] += weight * weight;
        }
    }
    return out;
}

struct LineFit {
    double slope = 0, slope_se = 0;
};

// Weighted least squares of y on x; weights may be all ones.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& wt) {
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += wt[i];
        sx += wt[i] * x[i];
        sy += wt[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += wt[i] * (x[i] - mx) * (x[i] - mx);
        sxy += wt[i] * (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    double chi2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - my - fit.slope * (x[i] - mx);
        chi2 += wt[i] * r * r;
    }
    const double dof = static_cast<double>(x.size()) - 2.0;
    const double scale = dof > 0 ? std::max(1.0, chi2 / dof) : 1.0;
    fit.slope_se = std::sqrt(scale / sxx);
    return fit;
}

ExponentEstimate run_protocol(const SingularProblem& p, const OracleConfig& cfg) {
    cfg.validate();
    std::vector<double> lambdas;
    for (const auto& l : cfg.lambda_grid) lambdas.push_back(l.to_double());
    std::sort(lambdas.begin(), lambdas.end());

    const auto& eps = cfg.cutoffs;
    const std::size_t nshells = eps.size() - 1;  // [eps[s+1], eps[s])
    const bool has_outer = eps.front() < 1.0;
    const TangentialLaw tangential(eps.back() * 0.25);

    std::vector<ShellSums> shells(nshells);
    ShellSums outer;
    auto job = [&](std::size_t s) {
        shells[s] = integrate_shell(p, RadialBand(eps[s + 1], eps[s]), tangential, lambdas,
                                    cfg.samples_per_shell, cfg.seed, s + 1);
    };
    const unsigned workers = std::max(1u, cfg.workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < nshells; s += workers) job(s);
                if (w == 0 && has_outer)
                    outer = integrate_shell(p, RadialBand(eps.front(), 1.0), tangential, lambdas,
                                            cfg.samples_per_shell, cfg.seed, 0);
            });
        }
    }

    ExponentEstimate est;
    const double n_samples = static_cast<double>(cfg.samples_per_shell);
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        LambdaSlope row;
        row.lambda = lambdas[l];

        std::vector<double> x, y, wt;
        for (std::size_t s = cfg.skip_outer_shells; s < nshells; ++s) {
            const double mean = shells[s].sum[l] / n_samples;
            if (!(mean > 0)) continue;
            const double var = std::max(shells[s].sumsq[l] / n_samples - mean * mean, 0.0) / n_samples;
            const double rel = std::sqrt(var) / mean;
            x.push_back(std::log(eps[s]));
            y.push_back(std::log(mean));
            wt.push_back(1.0 / std::max(rel * rel, 1e-8));
        }
        if (x.size() < 3) throw std::runtime_error("oracle: too few populated shells for a fit");
        const LineFit shell_fit = fit_line(x, y, wt);
        row.shell_exponent = shell_fit.slope;
        row.shell_exponent_se = shell_fit.slope_se;

        // Cumulative cutoff integral I(eps_k) = outer + shells above eps_k.
        std::vector<double> cx, cy;
        double running = has_outer ? outer.sum[l] / n_samples : 0.0;
        for (std::size_t s = 0; s < nshells; ++s) {
            running += shells[s].sum[l] / n_samples;
            if (running > 0) {
                cx.push_back(std::log(eps[s + 1]));
                cy.push_back(std::log(running));
            }
        }
        const std::size_t tail = std::min<std::size_t>(cx.size(), std::max<std::size_t>(5, cx.size() / 2));
        std::vector<double> tx(cx.end() - tail, cx.end()), ty(cy.end() - tail, cy.end());
        row.cumulative_slope = fit_line(tx, ty, std::vector<double>(tail, 1.0)).slope;
        est.per_lambda_slopes.push_back(row);
    }

    const auto& rows = est.per_lambda_slopes;
    if (rows.front().shell_exponent <= 0) {
        throw ThresholdOutsideGrid(ThresholdOutsideGrid::Direction::Below,
                                   "threshold lies below the probed lambda grid");
    }
    if (rows.back().shell_exponent > 0) {
        throw ThresholdOutsideGrid(ThresholdOutsideGrid::Direction::Above,
                                   "threshold lies above the probed lambda grid");
    }
    std::size_t i = 0;
    while (rows[i + 1].shell_exponent > 0) ++i;
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    const double dgamma = (b.shell_exponent - a.shell_exponent) / (b.lambda - a.lambda);
    est.threshold_estimate = a.lambda - a.shell_exponent / dgamma;
    const double se = std::max(a.shell_exponent_se, b.shell_exponent_se);
    est.confidence_halfwidth = 1.96 * se / std::abs(dgamma);
    return est;
}

}  // namespace

std::vector<double> OracleConfig::geometric_cutoffs(double ratio, unsigned count) {
    std::vector<double> out;
    double e = 1.0;
    for (unsigned i = 0; i < count; ++i) {
        out.push_back(e);
        e *= ratio;
    }
    return out;
}

std::vector<Rat> OracleConfig::linear_grid(const Rat& lo, const Rat& hi, unsigned count) {
    if (count < 2) throw std::invalid_argument("linear_grid: need at least two points");
    std::vector<Rat> out;
    for (unsigned i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * Rat(BigInt(i), BigInt(count - 1)));
    return out;
}

OracleConfig OracleConfig::defaults() {
    OracleConfig cfg;
    cfg.cutoffs = geometric_cutoffs(0.5, 41);
    cfg.skip_outer_shells = 8;
    cfg.lambda_grid = linear_grid(Rat(1, 10), Rat(3, 2), 59);
    return cfg;
}

void OracleConfig::validate() const {
    if (samples_per_shell < 1000) throw std::invalid_argument("OracleConfig: samples_per_shell must be >= 1000");
    if (cutoffs.size() < skip_outer_shells + 6)
        throw std::invalid_argument("OracleConfig: need at least 5 fitted shells");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > 0 && cutoffs[i] <= 1)) throw std::invalid_argument("OracleConfig: cutoffs must lie in (0, 1]");
        if (i > 0 && !(cutoffs[i] < cutoffs[i - 1]))
            throw std::invalid_argument("OracleConfig: cutoffs must be strictly decreasing");
    }
    if (lambda_grid.size() < 2) throw std::invalid_argument("OracleConfig: lambda grid needs two points");
    for (const auto& l : lambda_grid)
        if (l <= Rat(0)) throw std::invalid_argument("OracleConfig: lambda must be positive");
    if (!(tolerance > 0)) throw std::invalid_argument("OracleConfig: tolerance must be positive");
}

ExponentEstimate estimate_monomial_threshold(std::span<const long> exponents, const OracleConfig& cfg) {
    if (exponents.empty()) throw std::invalid_argument("estimate_monomial_threshold: empty exponents");
    for (long a : exponents)
        if (a < 1) throw std::invalid_argument("estimate_monomial_threshold: exponents must be >= 1");
    SingularProblem p;
    p.dim = static_cast<unsigned>(exponents.size());
    p.domain = Domain::Polydisc;
    for (unsigned j = 0; j < p.dim; ++j) {
        CVec c(p.dim, 0.0);
        c[j] = 1.0;
        p.components.push_back(make_component(std::move(c)));
    }
    std::vector<double> a(exponents.begin(), exponents.end());
    p.log_abs_f = [a](const CVec& w) {
        double s = 0;
        for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::log(std::abs(w[j]));
        return s;
    };
    return run_protocol(p, cfg);
}

ExponentEstimate estimate_bp_threshold(unsigned n, const OracleConfig& cfg) {
    if (n < 2) throw std::invalid_argument("estimate_bp_threshold: n must be >= 2");
    SingularProblem p;
    p.dim = 2;
    p.domain = Domain::Ball;
    // u^n + v^n = prod_k (u - zeta_k v), zeta_k^n = -1
    for (unsigned k = 0; k < n; ++k) {
        const cplx zeta = std::polar(1.0, std::numbers::pi * (2.0 * k + 1.0) / n);
        p.components.push_back(make_component({1.0 / std::sqrt(2.0), -zeta / std::sqrt(2.0)}));
    }
    p.log_abs_f = [n](const CVec& w) {
        return std::log(std::abs(std::pow(w[0], static_cast<int>(n)) + std::pow(w[1], static_cast<int>(n))));
    };
    return run_protocol(p, cfg);
}

bool verify_threshold(const Rat& analytic, const ExponentEstimate& est, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("verify_threshold: tol must be positive");
    if (analytic <= Rat(0)) throw std::invalid_argument("verify_threshold: analytic threshold must be positive");
    const double a = analytic.to_double();
    return std::abs(est.threshold_estimate - a) / a <= tol;
}

}  // namespace orbike
