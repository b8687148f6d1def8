// exactmath.hpp
// Exact integers and rationals, factorization, coprime counting.
//
// Everything that decides a criterion goes through these types; no floating
// point is involved in any comparison.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orbike {

using BigInt = mpz_class;

/// Exact rational, always in lowest terms with a positive denominator.
class Rat {
public:
    Rat() = default;
    Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    explicit Rat(const BigInt& v) : q_(v) {}
    Rat(const BigInt& num, const BigInt& den);

    /// Parses "p", "-p" or "p/q". Throws std::invalid_argument.
    static Rat parse(std::string_view text);

    BigInt num() const { return BigInt(q_.get_num()); }
    BigInt den() const { return BigInt(q_.get_den()); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    /// Smallest integer >= value.
    BigInt ceil() const;
    /// Largest integer <= value.
    BigInt floor() const;

    /// "p/q", or "p" when the denominator is 1.
    std::string str() const;
    double to_double() const { return q_.get_d(); }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { Rat r; r.q_ = -a.q_; return r; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r);

private:
    mpq_class q_;
};

/// 1/m for a positive integer m.
Rat reciprocal(const BigInt& m);

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its complete prime factorization.
struct FactoredInt {
    BigInt value;
    std::vector<PrimePower> factors;  // strictly increasing primes

    std::vector<std::uint64_t> primes() const;
    /// Product of all prime powers; equals value.
    BigInt product() const;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Complete factorization by trial division followed by Pollard-Brent rho.
/// Supports n < 2^64. Throws std::invalid_argument for n < 1 and
/// std::out_of_range for n >= 2^64.
FactoredInt factorize(const BigInt& n);
FactoredInt factorize(std::uint64_t n);

/// Distinct primes dividing any of the given values, sorted.
std::vector<std::uint64_t> distinct_primes(std::span<const BigInt> values);

/// Number of k in the closed interval [lo, hi] with gcd(k, prod(primes)) = 1.
/// Inclusion-exclusion over subsets of the (distinct) primes. Empty range
/// (lo > hi) gives 0.
BigInt count_coprime_in_range(const BigInt& lo, const BigInt& hi,
                              std::span<const std::uint64_t> primes);

/// Sum of 1/m over the given orders (each >= 1).
Rat harmonic_sum(std::span<const BigInt> orders);

BigInt gcd(const BigInt& a, const BigInt& b);

}  // namespace orbike
