// Exact arithmetic, factorization and coprime counting.

#include "orbike/exactmath.hpp"

#include <doctest.h>

#include <chrono>
#include <numeric>
#include <random>

using namespace orbike;

namespace {

// Independent references: a sieve and a plain gcd scan.
std::vector<bool> sieve(std::size_t limit) {
    std::vector<bool> prime(limit + 1, true);
    prime[0] = false;
    if (limit >= 1) prime[1] = false;
    for (std::size_t i = 2; i * i <= limit; ++i)
        if (prime[i])
            for (std::size_t j = i * i; j <= limit; j += i) prime[j] = false;
    return prime;
}

long gcd_scan(long lo, long hi, const std::vector<std::uint64_t>& primes) {
    long product = 1;
    for (auto p : primes) product *= static_cast<long>(p);
    long count = 0;
    for (long k = lo; k <= hi; ++k)
        if (std::gcd(k, product) == 1) ++count;
    return count;
}

std::vector<std::uint64_t> primes_of(const FactoredInt& f) { return f.primes(); }

}  // namespace

TEST_CASE("Rat normalizes and compares exactly") {
    const Rat a(BigInt(6), BigInt(-4));
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(a.str() == "-3/2");
    CHECK(Rat(BigInt(4), BigInt(2)).str() == "2");
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(47, 510) >= Rat(45, 510));
    CHECK(Rat(1, 3).ceil() == 1);
    CHECK(Rat(-1, 3).ceil() == 0);
    CHECK(Rat(-1, 3).floor() == -1);
    CHECK(Rat(60).ceil() == 60);
    CHECK_THROWS_AS(Rat(BigInt(1), BigInt(0)), std::domain_error);
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
}

TEST_CASE("Rat::parse") {
    CHECK(Rat::parse("47/510") == Rat(47, 510));
    CHECK(Rat::parse("-2/4") == Rat(-1, 2));
    CHECK(Rat::parse("7") == Rat(7));
    CHECK_THROWS(Rat::parse("1/0"));
    CHECK_THROWS(Rat::parse("x"));
    CHECK_THROWS(Rat::parse(""));
    CHECK_THROWS(Rat::parse("1/"));
}

TEST_CASE("Rat field laws on random triples") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        const Rat a(BigInt(num(rng)), BigInt(den(rng)));
        const Rat b(BigInt(num(rng)), BigInt(den(rng)));
        const Rat c(BigInt(num(rng)), BigInt(den(rng)));
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        // normalization is idempotent
        const Rat renorm(a.num(), a.den());
        CHECK(renorm.num() == a.num());
        CHECK(renorm.den() == a.den());
        CHECK(gcd(a.num(), a.den()) == 1);
        CHECK(a.den() > 0);
    }
}

TEST_CASE("factorize examples") {
    CHECK(factorize(1).factors.empty());
    CHECK(primes_of(factorize(510)) == std::vector<std::uint64_t>{2, 3, 5, 17});
    CHECK(primes_of(factorize(1807)) == std::vector<std::uint64_t>{13, 139});
    const auto f = factorize(BigInt(720));
    CHECK(f.factors == std::vector<PrimePower>{{2, 4}, {3, 2}, {5, 1}});
    CHECK_THROWS_AS(factorize(BigInt(0)), std::invalid_argument);
    CHECK_THROWS_AS(factorize(BigInt("100000000000000000000", 10)), std::out_of_range);
}

TEST_CASE("factorize agrees with a sieve up to 10^6") {
    constexpr std::size_t limit = 1000000;
    const auto prime = sieve(limit);
    for (std::uint64_t n = 1; n <= limit; ++n) {
        const auto f = factorize(n);
        REQUIRE(f.product() == f.value);
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            REQUIRE(prime[f.factors[i].prime]);
            if (i > 0) REQUIRE(f.factors[i - 1].prime < f.factors[i].prime);
        }
        REQUIRE(is_prime(n) == prime[n]);
    }
}

TEST_CASE("factorize large Sylvester-sized values quickly") {
    const auto started = std::chrono::steady_clock::now();
    for (const char* s : {"10650056950805", "10650056950807", "3263441", "99999999999973",
                          "18446744073709551557", "18446744030759878681"}) {
        const BigInt n(s, 10);
        const auto f = factorize(n);
        CHECK(f.product() == n);
        for (const auto& pp : f.factors) CHECK(is_prime(pp.prime));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    CHECK(secs < 1.0);
}

TEST_CASE("is_prime edge values") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(18446744073709551557ull));           // largest 64-bit prime
    CHECK_FALSE(is_prime(3215031751ull));               // strong pseudoprime to 2,3,5,7
    CHECK_FALSE(is_prime(4294967297ull));               // 641 * 6700417
}

TEST_CASE("count_coprime_in_range examples") {
    const std::vector<std::uint64_t> p235{2, 3, 5};
    CHECK(count_coprime_in_range(1, 30, p235) == 8);
    CHECK(count_coprime_in_range(6, 59, p235) == 15);
    CHECK(count_coprime_in_range(10, 9, std::vector<std::uint64_t>{2}) == 0);
    CHECK(count_coprime_in_range(1, 1, std::vector<std::uint64_t>{}) == 1);
    CHECK(count_coprime_in_range(-10, 10, std::vector<std::uint64_t>{2}) == gcd_scan(-10, 10, {2}));
}

TEST_CASE("count_coprime_in_range matches a gcd scan on random instances") {
    std::mt19937_64 rng(77);
    const std::vector<std::uint64_t> pool{2, 3, 5, 7, 11, 13};
    std::uniform_int_distribution<long> start(-500, 100000), width(0, 10000);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint64_t> primes;
        for (auto p : pool)
            if (rng() % 2 == 0) primes.push_back(p);
        const long lo = start(rng);
        const long hi = lo + width(rng) - (trial % 17 == 0 ? 20000 : 0);
        CHECK(count_coprime_in_range(lo, hi, primes) == (lo > hi ? 0 : gcd_scan(lo, hi, primes)));
    }
}

TEST_CASE("harmonic_sum") {
    const std::vector<BigInt> a{2, 3, 5};
    CHECK(harmonic_sum(a) == Rat(31, 30));
    CHECK(harmonic_sum(std::vector<BigInt>{}) == Rat(0));
    const std::vector<BigInt> syl{2, 3, 7, 43};
    CHECK(harmonic_sum(syl) == Rat(1805, 1806));
}

TEST_CASE("distinct_primes merges factor lists") {
    const std::vector<BigInt> v{2, 3, 7, 41};
    CHECK(distinct_primes(v) == std::vector<std::uint64_t>{2, 3, 7, 41});
    const std::vector<BigInt> w{12, 18, 35};
    CHECK(distinct_primes(w) == std::vector<std::uint64_t>{2, 3, 5, 7});
}
