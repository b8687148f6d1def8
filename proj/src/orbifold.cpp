// orbifold.cpp

#include "orbike/orbifold.hpp"

#include <algorithm>

namespace orbike {

std::string_view to_string(TupleErrorKind kind) {
    switch (kind) {
        case TupleErrorKind::WrongLength: return "WrongLength";
        case TupleErrorKind::OrderBelowMinimum: return "OrderBelowMinimum";
        case TupleErrorKind::PairwiseCoprimeViolation: return "PairwiseCoprimeViolation";
        case TupleErrorKind::InvalidDimension: return "InvalidDimension";
    }
    return "?";
}

bool is_pairwise_coprime(std::span<const BigInt> orders) {
    for (std::size_t i = 0; i < orders.size(); ++i)
        for (std::size_t j = i + 1; j < orders.size(); ++j)
            if (gcd(orders[i], orders[j]) != 1) return false;
    return true;
}

RamTuple make_tuple(unsigned n, std::vector<BigInt> orders, const TupleOptions& opts) {
    if (n == 0) throw TupleError(TupleErrorKind::InvalidDimension, "dimension must be positive");
    if (opts.min_order != 1 && opts.min_order != 2)
        throw std::invalid_argument("min_order must be 1 or 2");
    if (orders.size() != n + 2) {
        throw TupleError(TupleErrorKind::WrongLength,
                         "expected " + std::to_string(n + 2) + " orders, got " +
                             std::to_string(orders.size()));
    }
    for (const auto& m : orders) {
        if (m < opts.min_order) {
            throw TupleError(TupleErrorKind::OrderBelowMinimum,
                             "order " + m.get_str() + " is below the minimum " +
                                 std::to_string(opts.min_order));
        }
    }
    std::sort(orders.begin(), orders.end());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        for (std::size_t j = i + 1; j < orders.size(); ++j) {
            if (gcd(orders[i], orders[j]) != 1) {
                throw TupleError(TupleErrorKind::PairwiseCoprimeViolation,
                                 "gcd(" + orders[i].get_str() + "," + orders[j].get_str() +
                                     ") = " + gcd(orders[i], orders[j]).get_str());
            }
        }
    }
    return make_tuple_unchecked(n, std::move(orders));
}

RamTuple make_tuple(unsigned n, std::span<const long> orders, const TupleOptions& opts) {
    std::vector<BigInt> big;
    big.reserve(orders.size());
    for (long v : orders) big.emplace_back(v);
    return orbike::make_tuple(n, std::move(big), opts);
}

RamTuple make_tuple_unchecked(unsigned n, std::vector<BigInt> sorted_orders) {
    RamTuple t;
    t.dim_ = n;
    t.orders_ = std::move(sorted_orders);
    return t;
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::NotFano: return "NotFano";
        case Classification::OldKE: return "OldKE";
        case Classification::NewOnlyKE: return "NewOnlyKE";
        case Classification::NoCriterion: return "NoCriterion";
    }
    return "?";
}

Classification classification_from_string(std::string_view s) {
    for (auto c : {Classification::NotFano, Classification::OldKE, Classification::NewOnlyKE,
                   Classification::NoCriterion}) {
        if (to_string(c) == s) return c;
    }
    throw std::invalid_argument("unknown classification '" + std::string(s) + "'");
}

Rat first_chern(const RamTuple& t) { return harmonic_sum(t.orders()) - Rat(1); }

Classification label_of(bool fano, bool old_ok, bool new_ok) {
    if (!fano) return Classification::NotFano;
    if (old_ok) return Classification::OldKE;
    if (new_ok) return Classification::NewOnlyKE;
    return Classification::NoCriterion;
}

FanoReport classify(const RamTuple& t) {
    const unsigned n = t.dim();
    const Rat min_recip = reciprocal(t.largest());
    FanoReport r;
    r.c1 = first_chern(t);
    r.fano = r.c1 > Rat(0);
    r.old_lhs = r.c1;
    r.old_rhs = Rat(BigInt(n + 1), BigInt(n)) * min_recip;
    r.new_rhs = Rat(static_cast<long>(n + 1)) * min_recip;
    r.old_ok = r.c1 < r.old_rhs;
    r.new_ok = r.c1 < r.new_rhs;
    r.classification = label_of(r.fano, r.old_ok, r.new_ok);
    return r;
}

LinkData link_weights(const RamTuple& t) {
    LinkData d;
    d.M = 1;
    for (const auto& m : t.orders()) d.M *= m;
    d.weights.reserve(t.orders().size());
    for (const auto& m : t.orders()) d.weights.push_back(d.M / m);
    return d;
}

bool contact_caveat_applies(unsigned n) { return n % 2 == 1; }

}  // namespace orbike
