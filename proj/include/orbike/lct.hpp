// lct.hpp
// Singularity-exponent criteria: the SNC identity-cover test, monomial
// thresholds, the criterion 1/c < beta, and the Del Pezzo case analyses.

#pragma once

#include "orbike/exactmath.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace orbike {

struct Infinity {
    friend bool operator==(Infinity, Infinity) { return true; }
};

/// A nonnegative rational or the explicit +infinity sentinel.
class ExtRat {
public:
    ExtRat(Rat r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ExtRat(Infinity) : v_(Infinity{}) {}  // NOLINT(google-explicit-constructor)
    static ExtRat infinity() { return ExtRat(Infinity{}); }

    bool is_infinite() const { return std::holds_alternative<Infinity>(v_); }
    const Rat& value() const { return std::get<Rat>(v_); }
    std::string str() const { return is_infinite() ? "inf" : value().str(); }

    friend bool operator==(const ExtRat&, const ExtRat&) = default;
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return a.value() < b.value();
    }

private:
    std::variant<Rat, Infinity> v_;
};

class NotFanoOrbifold : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidQuadricPencil : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One divisor D_i in |O(d_i)| with ramification order m_i.
struct SncDivisor {
    long degree = 1;  // d_i >= 1
    long order = 2;   // m_i > 1
};

/// Divisors on P^n, asserted by the caller to have simple normal crossings.
struct SncFanoData {
    unsigned n = 2;
    std::vector<SncDivisor> entries;

    /// Throws std::invalid_argument on d < 1, m <= 1 or n == 0.
    void validate() const;
};

enum class KeMethod { IdentityCover, DoubleCover, DisjointRamification, QuotientOfQuadric };

std::string_view to_string(KeMethod m);

struct Condition {
    std::string name;
    Rat lhs;
    std::optional<Rat> rhs;  // nullopt: +infinity
    bool holds = false;
};

/// passes means the sufficient criterion is met. A failing report does not
/// assert that no KE metric exists.
struct KeReport {
    std::optional<Rat> delta;
    std::optional<Rat> beta;
    std::optional<ExtRat> c;
    bool fano = true;
    bool passes = false;
    std::vector<Condition> conditions;
    KeMethod method = KeMethod::IdentityCover;
    std::vector<std::string> notes;
};

/// delta = sum d_i (1 - 1/m_i) / (n + 1).
Rat delta_pn(const SncFanoData& data);

/// beta = delta / (1 - delta). Throws NotFanoOrbifold unless 0 < delta < 1.
Rat beta_of_delta(const Rat& delta);

/// min 1/(m_i - 1); +infinity for no ramification.
ExtRat snc_threshold(std::span<const long> orders);

/// Integrability threshold of |prod z_j^{a_j}|^{-2 lambda}: min 1/a_j.
/// Throws std::invalid_argument on an empty list or a_j < 1.
Rat monomial_lct(std::span<const long> exponents);

/// 1/c < beta, always true for c = +infinity. Throws for beta <= 0.
bool ke_criterion(const ExtRat& c, const Rat& beta);

/// Identity-cover test on P^n: 0 < delta < 1 and max(m_i) - 1 < beta. The
/// equivalent form m_max (1 - delta) < 1 is evaluated too and must agree.
/// A delta outside (0, 1) yields a non-Fano report rather than an exception.
KeReport snc_ke_check(const SncFanoData& data);

/// Degree-2 Del Pezzo surface; each entry k stands for an A_k point, the
/// quotient C^2/Z_{k+1} with local threshold 2/(k+1).
struct DelPezzo2 {
    std::vector<unsigned> singularities;
};

/// beta = 2 from the anticanonical double cover of P^2.
KeReport dp2_check(const DelPezzo2& s);

/// Diagonal pencil lambda2 x2^2 + lambda3 x3^2 + lambda4 x4^2 against
/// x0^2 + ... + x4^2.
struct DelPezzo4 {
    Rat lambda2, lambda3, lambda4;
};

KeReport dp4_check(const DelPezzo4& s);

/// Parses "A1,A2" or "1,2" (case-insensitive prefix). Throws std::invalid_argument.
std::vector<unsigned> parse_singularity_list(std::string_view text);

}  // namespace orbike
