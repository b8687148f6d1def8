// enumerate.hpp
// Branch-and-bound enumeration and exact counting of ramification tuples,
// plus the Sylvester-sequence family.

#pragma once

#include "orbike/exactmath.hpp"
#include "orbike/orbifold.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace orbike {

/// Closed integer interval [lo, hi]; hi == nullopt means unbounded above.
struct IntInterval {
    BigInt lo;
    std::optional<BigInt> hi;

    bool empty() const { return hi && *hi < lo; }
    bool bounded() const { return hi.has_value(); }
    bool contains(const BigInt& x) const { return x >= lo && (!hi || x <= *hi); }
    /// Intersection with (-inf, cap].
    IntInterval clipped(const BigInt& cap) const;
    friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

/// Where the last coordinate x = m_{n+1} (assumed >= every prefix entry)
/// satisfies each predicate, and the partition of [lower, inf) by label.
struct LastCoordinateIntervals {
    Rat prefix_sum;
    BigInt lower;
    IntInterval fano, old_bound, new_bound;
    IntInterval not_fano, old_ke, new_only, no_criterion;

    const IntInterval& for_class(Classification c) const;
};

/// Solves the three inequalities for the last coordinate exactly.
/// prefix: n+1 sorted, pairwise coprime orders. Throws std::invalid_argument
/// on an empty or wrongly sized prefix.
LastCoordinateIntervals admissible_last_interval(std::span<const BigInt> prefix, unsigned n,
                                                 unsigned min_order = 2);

/// First k Sylvester numbers c_1 = 2, c_{j+1} = c_1...c_j + 1. Both recursion
/// forms are evaluated and must agree. Requires 1 <= k <= 8.
std::vector<BigInt> sylvester_seq(unsigned k);
/// Same, without the size restriction (used by identity checks needing c_{k+1}).
std::vector<BigInt> sylvester_terms(unsigned k);

struct SylvesterFamily {
    unsigned n = 0;
    std::vector<BigInt> prefix;        // c_1..c_n, c_{n+1} - 2
    BigInt last_lo_exclusive;          // max(prefix)
    BigInt last_hi_exclusive;          // n (c_{n+1}-1)(c_{n+1}-2)
    std::vector<std::uint64_t> forbidden_primes;
    BigInt admissible_count;           // coprime m_{n+1} in the open interval
    BigInt new_only_count;             // of those, failing the older bound
    /// n (c_{n+1}-1)(c_{n+2}-2), kept for the discrepancy note.
    BigInt variant_hi_exclusive;
};

/// Requires 2 <= n <= 6 (factoring limit of the prefix).
SylvesterFamily sylvester_family(unsigned n);

enum class SearchMode { Materialize, Count };

/// Which classifications a search reports.
class ClassSet {
public:
    ClassSet() = default;
    ClassSet(std::initializer_list<Classification> cs) {
        for (auto c : cs) insert(c);
    }
    static ClassSet all() {
        return {Classification::NotFano, Classification::OldKE, Classification::NewOnlyKE,
                Classification::NoCriterion};
    }
    void insert(Classification c) { bits_ |= bit(c); }
    bool contains(Classification c) const { return (bits_ & bit(c)) != 0; }
    bool empty() const { return bits_ == 0; }
    /// True when every member is a criterion-certified (finite) class.
    bool ke_only() const { return !contains(Classification::NotFano) && !contains(Classification::NoCriterion); }
    bool new_only() const { return bits_ == bit(Classification::NewOnlyKE); }

private:
    static unsigned bit(Classification c) { return 1u << static_cast<unsigned>(c); }
    unsigned bits_ = 0;
};

struct SearchConfig {
    unsigned n = 2;
    unsigned min_order = 2;
    SearchMode mode = SearchMode::Materialize;
    ClassSet classes = {Classification::NewOnlyKE};
    std::vector<BigInt> prefix_filter;       // fixed leading orders
    unsigned parallel_width = 1;
    std::optional<BigInt> max_order;         // required for infinite classes
    std::optional<std::uint64_t> max_nodes;  // resource cap
};

struct TupleRecord {
    RamTuple tuple;
    FanoReport report;
};

struct ClassCounts {
    BigInt not_fano = 0, old_ke = 0, new_only = 0, no_criterion = 0;

    BigInt& operator[](Classification c);
    const BigInt& operator[](Classification c) const;
    BigInt total() const { return not_fano + old_ke + new_only + no_criterion; }
    ClassCounts& operator+=(const ClassCounts& o);
    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct EnumResult {
    std::vector<TupleRecord> tuples;  // materialize mode without a sink
    ClassCounts counts;
    std::chrono::nanoseconds elapsed{0};
    std::uint64_t nodes_visited = 0;
};

/// Thrown when max_nodes is exceeded; carries what was completed so far.
class ResourceLimitExceeded : public std::runtime_error {
public:
    ResourceLimitExceeded(const std::string& what, EnumResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const EnumResult& partial() const { return partial_; }

private:
    EnumResult partial_;
};

using TupleSink = std::function<void(const TupleRecord&)>;

/// Depth-first search over sorted pairwise-coprime prefixes with exact
/// pruning; the last coordinate is resolved by interval solving. Output
/// order is lexicographic on the sorted tuple for any parallel_width. When
/// a sink is supplied in materialize mode records are streamed to it instead
/// of being stored in the result.
EnumResult enumerate_tuples(const SearchConfig& cfg, const TupleSink& sink = {});

/// Exact number of new-only tuples in dimension n (1 <= n <= 5).
BigInt count_new(unsigned n, unsigned parallel_width = 1);

/// Unpruned scan of every sorted tuple with entries in [min_order, max_order].
/// Throws std::length_error if more than 1e8 raw candidates would be visited.
std::vector<TupleRecord> brute_force_oracle(unsigned n, unsigned max_order, unsigned min_order = 2);

}  // namespace orbike
