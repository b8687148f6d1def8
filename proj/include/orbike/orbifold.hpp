// orbifold.hpp
// Hyperplane-arrangement orbifolds (P^n, sum (1 - 1/m_i) D_i) with n + 2
// hyperplanes in general position, and the exact existence bounds on them.

#pragma once

#include "orbike/exactmath.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orbike {

enum class TupleErrorKind { WrongLength, OrderBelowMinimum, PairwiseCoprimeViolation, InvalidDimension };

class TupleError : public std::invalid_argument {
public:
    TupleError(TupleErrorKind kind, const std::string& what)
        : std::invalid_argument(what), kind_(kind) {}
    TupleErrorKind kind() const { return kind_; }

private:
    TupleErrorKind kind_;
};

std::string_view to_string(TupleErrorKind kind);

struct TupleOptions {
    /// 2 by default; 1 admits degenerate unit orders.
    unsigned min_order = 2;
};

/// Ramification orders m_0 <= ... <= m_{n+1} of a canonical arrangement.
/// Only constructible through make_tuple, so every instance is valid.
class RamTuple {
public:
    unsigned dim() const { return dim_; }
    const std::vector<BigInt>& orders() const { return orders_; }
    const BigInt& largest() const { return orders_.back(); }

    friend bool operator==(const RamTuple&, const RamTuple&) = default;
    friend bool operator<(const RamTuple& a, const RamTuple& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        return a.orders_ < b.orders_;
    }

private:
    friend RamTuple make_tuple(unsigned, std::vector<BigInt>, const TupleOptions&);
    friend RamTuple make_tuple_unchecked(unsigned, std::vector<BigInt>);
    unsigned dim_ = 0;
    std::vector<BigInt> orders_;
};

/// Validates and canonicalizes (sorts) the orders. Throws TupleError.
RamTuple make_tuple(unsigned n, std::vector<BigInt> orders, const TupleOptions& opts = {});
RamTuple make_tuple(unsigned n, std::span<const long> orders, const TupleOptions& opts = {});

/// For callers that already guarantee sortedness and coprimality
/// (the enumerator). Not checked.
RamTuple make_tuple_unchecked(unsigned n, std::vector<BigInt> sorted_orders);

bool is_pairwise_coprime(std::span<const BigInt> orders);

enum class Classification { NotFano, OldKE, NewOnlyKE, NoCriterion };

std::string_view to_string(Classification c);
Classification classification_from_string(std::string_view s);

struct FanoReport {
    Rat c1;
    bool fano = false;
    // Left-hand side is c1 for both bounds.
    Rat old_lhs, old_rhs, new_rhs;
    bool old_ok = false;
    bool new_ok = false;
    Classification classification = Classification::NotFano;
};

/// c1 = sum 1/m_i - 1.
Rat first_chern(const RamTuple& t);

/// Strict exact comparisons:
///   fano:   c1 > 0
///   old:    c1 < (n+1)/n * min 1/m_i
///   new:    c1 < (n+1)   * min 1/m_i
FanoReport classify(const RamTuple& t);

/// Label consistent with the three flags. Equality cases land on the weaker
/// label since every flag is a strict inequality.
Classification label_of(bool fano, bool old_ok, bool new_ok);

/// Brieskorn-Pham link data: M = prod m_i and w_i = M / m_i.
struct LinkData {
    BigInt M;
    std::vector<BigInt> weights;
};

LinkData link_weights(const RamTuple& t);

/// The sphere metric may fail to determine the orbifold when it carries a
/// holomorphic contact structure, which is only possible for odd n.
bool contact_caveat_applies(unsigned n);

}  // namespace orbike
