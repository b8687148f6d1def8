// exactmath.cpp

#include "orbike/exactmath.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace orbike {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialBound = 1u << 12;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1u) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool fits_u64(const BigInt& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

u64 to_u64(const BigInt& v) {
    if (mpz_fits_ulong_p(v.get_mpz_t()) != 0) return v.get_ui();
    // unsigned long is 64 bits on every supported platform; fall back anyway
    u64 out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

BigInt from_u64(u64 v) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return out;
}

// Brent's variant; deterministic in the polynomial constant, which is
// stepped on failure.
u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 block = 128;
        u64 r = 1;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = step(y);
            u64 k = 0;
            do {
                ys = y;
                const u64 lim = std::min(block, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += block;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

// Counts k in [1, x] (x may be <= 0, giving a floor-style count) that are
// divisible by no prime in primes[idx..], with sign/product accumulated.
void inclusion_exclusion(const BigInt& lo_minus_one, const BigInt& hi,
                         std::span<const u64> primes, std::size_t idx,
                         const BigInt& divisor, int sign, BigInt& acc) {
    BigInt q_hi, q_lo;
    mpz_fdiv_q(q_hi.get_mpz_t(), hi.get_mpz_t(), divisor.get_mpz_t());
    mpz_fdiv_q(q_lo.get_mpz_t(), lo_minus_one.get_mpz_t(), divisor.get_mpz_t());
    if (sign > 0) acc += q_hi - q_lo; else acc -= q_hi - q_lo;
    for (std::size_t i = idx; i < primes.size(); ++i) {
        const BigInt next = divisor * from_u64(primes[i]);
        // Once the divisor exceeds both |hi| and |lo-1| the interval holds
        // at most one multiple (zero); every superset contributes the same.
        if (next > abs(hi) && next > abs(lo_minus_one) && sgn(lo_minus_one) >= 0) continue;
        inclusion_exclusion(lo_minus_one, hi, primes, i + 1, next, -sign, acc);
    }
}

}  // namespace

Rat::Rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
    const auto slash = text.find('/');
    auto parse_int = [](std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rat::parse: empty component");
        std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (start == s.size()) throw std::invalid_argument("Rat::parse: bad integer");
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("Rat::parse: bad integer '" + std::string(s) + "'");
        std::string digits(s.front() == '+' ? s.substr(1) : s);
        return BigInt(digits, 10);
    };
    if (slash == std::string_view::npos) return Rat(parse_int(text));
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("Rat::parse: zero denominator");
    return Rat(parse_int(text.substr(0, slash)), den);
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    q_ /= o.q_;
    return *this;
}

BigInt Rat::ceil() const {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return out;
}

BigInt Rat::floor() const {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return out;
}

std::string Rat::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat reciprocal(const BigInt& m) {
    if (sgn(m) <= 0) throw std::domain_error("reciprocal: order must be positive");
    return Rat(BigInt(1), m);
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

std::vector<std::uint64_t> FactoredInt::primes() const {
    std::vector<std::uint64_t> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
}

BigInt FactoredInt::product() const {
    BigInt out = 1;
    for (const auto& f : factors) {
        BigInt p;
        mpz_pow_ui(p.get_mpz_t(), from_u64(f.prime).get_mpz_t(), f.exponent);
        out *= p;
    }
    return out;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a deterministic witness set below 3.3e24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FactoredInt factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    FactoredInt out;
    out.value = from_u64(n);
    std::vector<u64> raw;
    for (u64 p = 2; p < kTrialBound && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            raw.push_back(p);
            n /= p;
        }
    }
    split_into(n, raw);
    std::sort(raw.begin(), raw.end());
    for (u64 p : raw) {
        if (!out.factors.empty() && out.factors.back().prime == p)
            ++out.factors.back().exponent;
        else
            out.factors.push_back({p, 1});
    }
    return out;
}

FactoredInt factorize(const BigInt& n) {
    if (sgn(n) <= 0) throw std::invalid_argument("factorize: n must be >= 1");
    if (!fits_u64(n)) throw std::out_of_range("factorize: n exceeds 64 bits");
    FactoredInt out = factorize(to_u64(n));
    out.value = n;
    return out;
}

std::vector<std::uint64_t> distinct_primes(std::span<const BigInt> values) {
    std::vector<u64> out;
    for (const auto& v : values) {
        for (const auto& f : factorize(v).factors) out.push_back(f.prime);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BigInt count_coprime_in_range(const BigInt& lo, const BigInt& hi,
                              std::span<const std::uint64_t> primes) {
    if (lo > hi) return 0;
    BigInt acc = 0;
    inclusion_exclusion(lo - 1, hi, primes, 0, BigInt(1), +1, acc);
    return acc;
}

Rat harmonic_sum(std::span<const BigInt> orders) {
    Rat sum;
    for (const auto& m : orders) sum += reciprocal(m);
    return sum;
}

}  // namespace orbike
