// lct.cpp

#include "orbike/lct.hpp"

#include <algorithm>
#include <cctype>

namespace orbike {

std::string_view to_string(KeMethod m) {
    switch (m) {
        case KeMethod::IdentityCover: return "identity-cover";
        case KeMethod::DoubleCover: return "double-cover";
        case KeMethod::DisjointRamification: return "disjoint-ramification";
        case KeMethod::QuotientOfQuadric: return "quotient-of-quadric";
    }
    return "?";
}

void SncFanoData::validate() const {
    if (n == 0) throw std::invalid_argument("SncFanoData: dimension must be positive");
    for (const auto& e : entries) {
        if (e.degree < 1) throw std::invalid_argument("SncFanoData: degree must be >= 1");
        if (e.order <= 1) throw std::invalid_argument("SncFanoData: order must be > 1");
    }
}

Rat delta_pn(const SncFanoData& data) {
    data.validate();
    Rat sum;
    for (const auto& e : data.entries)
        sum += Rat(e.degree) * (Rat(1) - reciprocal(BigInt(e.order)));
    return sum / Rat(static_cast<long>(data.n + 1));
}

Rat beta_of_delta(const Rat& delta) {
    if (delta <= Rat(0) || delta >= Rat(1))
        throw NotFanoOrbifold("delta = " + delta.str() + " is outside (0, 1)");
    return delta / (Rat(1) - delta);
}

ExtRat snc_threshold(std::span<const long> orders) {
    if (orders.empty()) return ExtRat::infinity();
    const long largest = *std::max_element(orders.begin(), orders.end());
    if (largest <= 1) throw std::invalid_argument("snc_threshold: orders must be > 1");
    if (*std::min_element(orders.begin(), orders.end()) <= 1)
        throw std::invalid_argument("snc_threshold: orders must be > 1");
    return Rat(BigInt(1), BigInt(largest - 1));
}

Rat monomial_lct(std::span<const long> exponents) {
    if (exponents.empty()) throw std::invalid_argument("monomial_lct: empty exponent list");
    if (*std::min_element(exponents.begin(), exponents.end()) < 1)
        throw std::invalid_argument("monomial_lct: exponents must be >= 1");
    return Rat(BigInt(1), BigInt(*std::max_element(exponents.begin(), exponents.end())));
}

bool ke_criterion(const ExtRat& c, const Rat& beta) {
    if (beta <= Rat(0)) throw std::invalid_argument("ke_criterion: beta must be positive");
    if (c.is_infinite()) return true;
    if (c.value() <= Rat(0)) return false;
    return Rat(1) / c.value() < beta;
}

KeReport snc_ke_check(const SncFanoData& data) {
    data.validate();
    KeReport rep;
    rep.method = KeMethod::IdentityCover;
    rep.notes.emplace_back("simple normal crossings asserted by caller, not verified");
    const Rat delta = delta_pn(data);
    rep.delta = delta;

    const bool in_range = delta > Rat(0) && delta < Rat(1);
    rep.conditions.push_back({"delta > 0", delta, Rat(0), delta > Rat(0)});
    rep.conditions.push_back({"delta < 1", delta, Rat(1), delta < Rat(1)});
    if (!in_range) {
        rep.fano = delta < Rat(1);
        rep.passes = false;
        if (!rep.fano) rep.notes.emplace_back("NotFano: K_X + Delta is not negative");
        else rep.notes.emplace_back("empty boundary: no ramification to exploit");
        return rep;
    }
    const Rat beta = beta_of_delta(delta);
    rep.beta = beta;

    std::vector<long> orders;
    for (const auto& e : data.entries) orders.push_back(e.order);
    rep.c = snc_threshold(orders);
    const long m_max = *std::max_element(orders.begin(), orders.end());

    const Rat lhs = Rat(m_max - 1);
    const bool beta_form = lhs < beta;
    const Rat delta_lhs = Rat(m_max) * (Rat(1) - delta);
    const bool delta_form = delta_lhs < Rat(1);
    if (beta_form != delta_form)
        throw std::logic_error("snc_ke_check: equivalent forms of the condition disagree");
    if (beta_form != ke_criterion(*rep.c, beta))
        throw std::logic_error("snc_ke_check: 1/c < beta disagrees with m_max - 1 < beta");

    rep.conditions.push_back({"m_max - 1 < beta", lhs, beta, beta_form});
    rep.conditions.push_back({"m_max (1 - delta) < 1", delta_lhs, Rat(1), delta_form});
    rep.passes = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                             [](const Condition& c) { return c.holds; });
    return rep;
}

KeReport dp2_check(const DelPezzo2& s) {
    KeReport rep;
    rep.method = KeMethod::DoubleCover;
    const Rat beta(2);
    rep.beta = beta;
    ExtRat c = ExtRat::infinity();
    for (unsigned k : s.singularities) {
        if (k < 1) throw std::invalid_argument("dp2_check: A_k needs k >= 1");
        // A_k is C^2/Z_{k+1}; |u^{k+1} + v^{k+1}|^{-2 lambda} integrable iff lambda < 2/(k+1)
        const Rat local(BigInt(2), BigInt(k + 1));
        const bool ok = Rat(1) / local < beta;
        rep.conditions.push_back({"A" + std::to_string(k) + ": 1/c_x < beta", Rat(1) / local, beta, ok});
        if (ExtRat(local) < c) c = local;
    }
    rep.c = c;
    rep.passes = ke_criterion(c, beta);
    if (s.singularities.empty()) rep.notes.emplace_back("smooth surface: c = inf");
    return rep;
}

KeReport dp4_check(const DelPezzo4& s) {
    if (s.lambda2.is_zero() || s.lambda3.is_zero() || s.lambda4.is_zero())
        throw InvalidQuadricPencil("dp4_check: every lambda must be nonzero");
    KeReport rep;
    rep.passes = true;
    const bool distinct = s.lambda2 != s.lambda3 && s.lambda3 != s.lambda4 && s.lambda2 != s.lambda4;
    if (distinct) {
        // Three double covers onto smooth quadrics with pairwise disjoint
        // ramification, so eta > 0 everywhere.
        rep.method = KeMethod::DisjointRamification;
        rep.c = ExtRat::infinity();
        rep.conditions.push_back({"lambda_i pairwise distinct", Rat(1), Rat(1), true});
    } else {
        rep.method = KeMethod::QuotientOfQuadric;
        rep.notes.emplace_back("two lambda coincide: quotient of P^1 x P^1");
        rep.conditions.push_back({"two lambda_i coincide", Rat(1), Rat(1), true});
    }
    return rep;
}

std::vector<unsigned> parse_singularity_list(std::string_view text) {
    std::vector<unsigned> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (!item.empty()) {
            if (item.front() == 'A' || item.front() == 'a') item.remove_prefix(1);
            if (item.empty() || !std::all_of(item.begin(), item.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
                throw std::invalid_argument("bad singularity label '" + std::string(text) + "'");
            const unsigned long k = std::stoul(std::string(item));
            if (k < 1 || k > 1000000) throw std::invalid_argument("A_k needs 1 <= k");
            out.push_back(static_cast<unsigned>(k));
        } else if (comma != std::string_view::npos) {
            throw std::invalid_argument("empty singularity label");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace orbike
