// enumerate.cpp

#include "orbike/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

namespace orbike {

namespace {

using u64 = std::uint64_t;

IntInterval empty_from(const BigInt& lo) { return {lo, lo - 1}; }

IntInterval closed(const BigInt& lo, const BigInt& hi) { return {lo, hi}; }

IntInterval unbounded(const BigInt& lo) { return {lo, std::nullopt}; }

BigInt max_of(const BigInt& a, const BigInt& b) { return a < b ? b : a; }

// x < q for rational q > 0  <=>  x <= ceil(q) - 1
BigInt last_below(const Rat& q) { return q.ceil() - 1; }

LastCoordinateIntervals intervals_from_sum(const Rat& sum, const BigInt& lower, unsigned n) {
    LastCoordinateIntervals out;
    out.prefix_sum = sum;
    out.lower = lower;
    const Rat one(1);
    if (sum > one) {
        // c1 = (P-1) + 1/x > 0 always; new: P-1 < n/x; old: P-1 < 1/(n x)
        const Rat excess = sum - one;
        const Rat old_cap = Rat(1) / (Rat(static_cast<long>(n)) * excess);
        const Rat new_cap = Rat(static_cast<long>(n)) / excess;
        out.fano = unbounded(lower);
        out.old_bound = closed(lower, last_below(old_cap));
        out.new_bound = closed(lower, last_below(new_cap));
        out.not_fano = empty_from(lower);
        out.old_ke = out.old_bound;
        out.new_only = closed(max_of(lower, old_cap.ceil()), last_below(new_cap));
        out.no_criterion = unbounded(max_of(lower, new_cap.ceil()));
    } else if (sum == one) {
        out.fano = out.old_bound = out.new_bound = unbounded(lower);
        out.not_fano = empty_from(lower);
        out.old_ke = unbounded(lower);
        out.new_only = empty_from(lower);
        out.no_criterion = empty_from(lower);
    } else {
        // Fano needs 1/x > 1 - P; both bounds then hold because P - 1 < 0.
        const Rat fano_cap = Rat(1) / (one - sum);
        out.fano = closed(lower, last_below(fano_cap));
        out.old_bound = out.new_bound = unbounded(lower);
        out.not_fano = unbounded(max_of(lower, fano_cap.ceil()));
        out.old_ke = out.fano;
        out.new_only = empty_from(lower);
        out.no_criterion = empty_from(lower);
    }
    return out;
}

BigInt lower_for_last(const BigInt& largest_prefix, unsigned min_order) {
    return max_of(largest_prefix, BigInt(min_order));
}

}  // namespace

IntInterval IntInterval::clipped(const BigInt& cap) const {
    IntInterval out = *this;
    if (!out.hi || *out.hi > cap) out.hi = cap;
    return out;
}

const IntInterval& LastCoordinateIntervals::for_class(Classification c) const {
    switch (c) {
        case Classification::NotFano: return not_fano;
        case Classification::OldKE: return old_ke;
        case Classification::NewOnlyKE: return new_only;
        case Classification::NoCriterion: return no_criterion;
    }
    return not_fano;
}

LastCoordinateIntervals admissible_last_interval(std::span<const BigInt> prefix, unsigned n,
                                                 unsigned min_order) {
    if (prefix.empty()) throw std::invalid_argument("admissible_last_interval: empty prefix");
    if (prefix.size() != n + 1) {
        throw std::invalid_argument("admissible_last_interval: prefix must hold n+1 = " +
                                    std::to_string(n + 1) + " orders");
    }
    if (!std::is_sorted(prefix.begin(), prefix.end()))
        throw std::invalid_argument("admissible_last_interval: prefix must be sorted");
    return intervals_from_sum(harmonic_sum(prefix), lower_for_last(prefix.back(), min_order), n);
}

// ---------------------------------------------------------------------------
// Sylvester sequence

std::vector<BigInt> sylvester_terms(unsigned k) {
    std::vector<BigInt> by_product, by_square;
    BigInt product = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (i == 0) {
            by_product.emplace_back(2);
            by_square.emplace_back(2);
        } else {
            by_product.push_back(product + 1);
            const BigInt& prev = by_square.back();
            by_square.push_back(prev * prev - prev + 1);
        }
        product *= by_product.back();
    }
    if (by_product != by_square)
        throw std::logic_error("sylvester_terms: recursion forms disagree");
    return by_product;
}

std::vector<BigInt> sylvester_seq(unsigned k) {
    if (k < 1 || k > 8) throw std::invalid_argument("sylvester_seq: k must be in [1, 8]");
    return sylvester_terms(k);
}

SylvesterFamily sylvester_family(unsigned n) {
    if (n < 2 || n > 6) throw std::invalid_argument("sylvester_family: n must be in [2, 6]");
    const auto c = sylvester_terms(n + 2);  // c[i] = c_{i+1}
    SylvesterFamily fam;
    fam.n = n;
    fam.prefix.assign(c.begin(), c.begin() + n);
    fam.prefix.push_back(c[n] - 2);
    if (!is_pairwise_coprime(fam.prefix))
        throw std::logic_error("sylvester_family: prefix not pairwise coprime");

    const auto iv = admissible_last_interval(fam.prefix, n);
    fam.last_lo_exclusive = fam.prefix.back();
    fam.last_hi_exclusive = *iv.new_bound.hi + 1;
    const BigInt expected = BigInt(n) * (c[n] - 1) * (c[n] - 2);
    if (fam.last_hi_exclusive != expected)
        throw std::logic_error("sylvester_family: derived bound disagrees with closed form");
    fam.variant_hi_exclusive = BigInt(n) * (c[n] - 1) * (c[n + 1] - 2);

    fam.forbidden_primes = distinct_primes(fam.prefix);
    fam.admissible_count = count_coprime_in_range(fam.last_lo_exclusive + 1,
                                                  fam.last_hi_exclusive - 1, fam.forbidden_primes);
    fam.new_only_count = count_coprime_in_range(iv.new_only.lo, *iv.new_only.hi, fam.forbidden_primes);
    return fam;
}

// ---------------------------------------------------------------------------
// Class counts

BigInt& ClassCounts::operator[](Classification c) {
    switch (c) {
        case Classification::NotFano: return not_fano;
        case Classification::OldKE: return old_ke;
        case Classification::NewOnlyKE: return new_only;
        case Classification::NoCriterion: return no_criterion;
    }
    return not_fano;
}

const BigInt& ClassCounts::operator[](Classification c) const {
    return const_cast<ClassCounts&>(*this)[c];
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
    not_fano += o.not_fano;
    old_ke += o.old_ke;
    new_only += o.new_only;
    no_criterion += o.no_criterion;
    return *this;
}

// ---------------------------------------------------------------------------
// Search

namespace {

constexpr Classification kAllClasses[] = {Classification::NotFano, Classification::OldKE,
                                          Classification::NewOnlyKE, Classification::NoCriterion};

struct PrefixState {
    std::vector<BigInt> entries;
    Rat sum;
    BigInt product = 1;
    std::vector<u64> primes;

    void push(const BigInt& v) {
        entries.push_back(v);
        sum += reciprocal(v);
        product *= v;
        for (const auto& f : factorize(v).factors) primes.push_back(f.prime);
        std::sort(primes.begin(), primes.end());
    }
};

struct StopSearch {};

struct Output {
    std::vector<TupleRecord> records;
    ClassCounts counts;
    const TupleSink* sink = nullptr;

    void emit(TupleRecord rec) {
        counts[rec.report.classification] += 1;
        if (sink != nullptr && *sink) (*sink)(rec);
        else records.push_back(std::move(rec));
    }
};

class Searcher {
public:
    Searcher(const SearchConfig& cfg, std::atomic<u64>& nodes, std::atomic<bool>& stop)
        : cfg_(cfg), nodes_(nodes), stop_(stop) {}

    // Explores the subtree below state. When roots is given, prefixes of
    // length root_depth are collected instead of descended into.
    void descend(PrefixState& state, Output& out, std::vector<PrefixState>* roots = nullptr,
                 std::size_t root_depth = 0) {
        const u64 visited = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
        if (stop_.load(std::memory_order_relaxed)) throw StopSearch{};
        if (cfg_.max_nodes && visited > *cfg_.max_nodes) {
            stop_.store(true);
            throw StopSearch{};
        }
        const unsigned n = cfg_.n;
        const std::size_t k = state.entries.size();
        if (k == n + 1) {
            resolve_last(state, out);
            return;
        }
        if (roots != nullptr && k == root_depth) {
            roots->push_back(state);
            return;
        }
        const long r = static_cast<long>(n + 2 - (k + 1));  // entries still to choose after v
        BigInt v = start_value(state);
        for (;; ++v) {
            if (cfg_.max_order && v > *cfg_.max_order) break;
            const Rat with_v = state.sum + reciprocal(v);
            const Rat per_entry = reciprocal(v);
            if (cfg_.classes.ke_only()) {
                // Fano: remaining entries are each at most 1/v.
                if (with_v + Rat(r) * per_entry <= Rat(1)) break;
                // New bound: c1 < (n+1)/x with every later reciprocal >= 1/x
                // forces (sum so far) - 1 < k/x <= k/v.
                if (with_v - Rat(1) >= Rat(static_cast<long>(k)) * per_entry) {
                    if (k >= 1) break;  // monotone in v from here on
                    continue;
                }
                // New-only additionally needs the n+1 prefix reciprocals above 1.
                if (cfg_.classes.new_only() && with_v + Rat(r - 1) * per_entry <= Rat(1)) break;
            }
            if (gcd(v, state.product) != 1) continue;
            PrefixState next = state;
            next.push(v);
            descend(next, out, roots, root_depth);
        }
    }

private:
    BigInt start_value(const PrefixState& s) const {
        BigInt v(cfg_.min_order);
        if (!s.entries.empty()) {
            const BigInt& last = s.entries.back();
            const BigInt after = last == 1 ? BigInt(1) : BigInt(last + 1);
            v = max_of(v, after);
        }
        return v;
    }

    void resolve_last(const PrefixState& s, Output& out) {
        const auto iv = intervals_from_sum(s.sum, lower_for_last(s.entries.back(), cfg_.min_order), cfg_.n);
        std::vector<std::pair<IntInterval, Classification>> wanted;
        for (auto c : kAllClasses) {
            if (!cfg_.classes.contains(c)) continue;
            IntInterval part = iv.for_class(c);
            if (cfg_.max_order) part = part.clipped(*cfg_.max_order);
            if (part.empty()) continue;
            if (!part.bounded())
                throw std::logic_error("unbounded last-coordinate range; set max_order");
            wanted.emplace_back(std::move(part), c);
        }
        std::sort(wanted.begin(), wanted.end(),
                  [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
        for (const auto& [part, label] : wanted) {
            if (cfg_.mode == SearchMode::Count) {
                out.counts[label] += count_coprime_in_range(part.lo, *part.hi, s.primes);
                continue;
            }
            for (BigInt x = part.lo; x <= *part.hi; ++x) {
                if (gcd(x, s.product) != 1) continue;
                std::vector<BigInt> orders = s.entries;
                orders.push_back(x);
                RamTuple t = make_tuple_unchecked(cfg_.n, std::move(orders));
                FanoReport rep = classify(t);
                if (rep.classification != label)
                    throw std::logic_error("interval solving disagrees with classify");
                out.emit({std::move(t), std::move(rep)});
            }
        }
    }

    const SearchConfig& cfg_;
    std::atomic<u64>& nodes_;
    std::atomic<bool>& stop_;
};

void validate(const SearchConfig& cfg) {
    if (cfg.n == 0) throw std::invalid_argument("SearchConfig: n must be positive");
    if (cfg.min_order != 1 && cfg.min_order != 2)
        throw std::invalid_argument("SearchConfig: min_order must be 1 or 2");
    if (cfg.classes.empty()) throw std::invalid_argument("SearchConfig: no classes requested");
    if (!cfg.classes.ke_only() && !cfg.max_order)
        throw std::invalid_argument("SearchConfig: NotFano/NoCriterion are infinite; set max_order");
    if (cfg.prefix_filter.size() > cfg.n + 1)
        throw std::invalid_argument("SearchConfig: prefix_filter longer than n+1");
    for (std::size_t i = 0; i < cfg.prefix_filter.size(); ++i) {
        const BigInt& m = cfg.prefix_filter[i];
        if (m < cfg.min_order) throw std::invalid_argument("SearchConfig: prefix order below minimum");
        if (i > 0 && m < cfg.prefix_filter[i - 1])
            throw std::invalid_argument("SearchConfig: prefix_filter must be sorted");
    }
    if (!is_pairwise_coprime(cfg.prefix_filter))
        throw std::invalid_argument("SearchConfig: prefix_filter not pairwise coprime");
}

}  // namespace

EnumResult enumerate_tuples(const SearchConfig& cfg, const TupleSink& sink) {
    validate(cfg);
    const auto started = std::chrono::steady_clock::now();
    std::atomic<u64> nodes{0};
    std::atomic<bool> stop{false};

    PrefixState root;
    for (const auto& m : cfg.prefix_filter) root.push(m);

    EnumResult result;
    Output main_out;
    if (cfg.mode == SearchMode::Materialize) main_out.sink = &sink;

    auto finish = [&](Output& o) {
        result.tuples = std::move(o.records);
        result.counts = o.counts;
        result.nodes_visited = nodes.load();
        result.elapsed = std::chrono::steady_clock::now() - started;
    };

    if (cfg.parallel_width <= 1) {
        try {
            Searcher(cfg, nodes, stop).descend(root, main_out);
        } catch (const StopSearch&) {
            finish(main_out);
            throw ResourceLimitExceeded("node cap exceeded", std::move(result));
        }
        finish(main_out);
        return result;
    }

    // Split into disjoint subtrees; workers fill per-subtree buffers which
    // are emitted strictly in subtree order.
    std::vector<PrefixState> roots;
    const std::size_t root_depth = std::min<std::size_t>(cfg.n, root.entries.size() + 3);
    try {
        Searcher(cfg, nodes, stop).descend(root, main_out, &roots, root_depth);
    } catch (const StopSearch&) {
        finish(main_out);
        throw ResourceLimitExceeded("node cap exceeded", std::move(result));
    }

    std::vector<Output> buffers(roots.size());
    std::vector<char> done(roots.size(), 0);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stopped_early{false};
    std::exception_ptr failure;
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < cfg.parallel_width; ++w) {
            workers.emplace_back([&] {
                Searcher searcher(cfg, nodes, stop);
                for (std::size_t i = next++; i < roots.size(); i = next++) {
                    try {
                        searcher.descend(roots[i], buffers[i]);
                    } catch (const StopSearch&) {
                        stopped_early = true;
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (!failure) failure = std::current_exception();
                        stopped_early = true;
                        stop = true;
                    }
                    {
                        std::lock_guard lock(mu);
                        done[i] = 1;
                    }
                    cv.notify_all();
                    if (stopped_early) break;
                }
            });
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return done[i] != 0 || stopped_early.load(); });
                if (done[i] == 0 || stopped_early) break;
            }
            main_out.counts += buffers[i].counts;
            for (auto& rec : buffers[i].records) {
                if (cfg.mode == SearchMode::Materialize && sink) sink(rec);
                else main_out.records.push_back(std::move(rec));
            }
            buffers[i].records.clear();
            buffers[i].records.shrink_to_fit();
        }
        if (stopped_early) stop = true;
    }
    if (failure) std::rethrow_exception(failure);
    if (stopped_early || stop) {
        finish(main_out);
        throw ResourceLimitExceeded("node cap exceeded", std::move(result));
    }
    finish(main_out);
    return result;
}

BigInt count_new(unsigned n, unsigned parallel_width) {
    if (n < 1 || n > 5) throw std::invalid_argument("count_new: n must be in [1, 5]");
    SearchConfig cfg;
    cfg.n = n;
    cfg.mode = SearchMode::Count;
    cfg.classes = {Classification::NewOnlyKE};
    cfg.parallel_width = parallel_width;
    return enumerate_tuples(cfg).counts.new_only;
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

void brute_force_rec(unsigned n, long max_order, std::vector<BigInt>& current, long start,
                     std::vector<TupleRecord>& out) {
    if (current.size() == n + 2) {
        RamTuple t = make_tuple_unchecked(n, current);
        FanoReport rep = classify(t);
        out.push_back({std::move(t), std::move(rep)});
        return;
    }
    for (long v = start; v <= max_order; ++v) {
        bool coprime = true;
        for (const auto& m : current) {
            if (gcd(m, BigInt(v)) != 1) {
                coprime = false;
                break;
            }
        }
        if (!coprime) continue;
        current.emplace_back(v);
        brute_force_rec(n, max_order, current, v, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<TupleRecord> brute_force_oracle(unsigned n, unsigned max_order, unsigned min_order) {
    if (n == 0) throw std::invalid_argument("brute_force_oracle: n must be positive");
    if (min_order != 1 && min_order != 2)
        throw std::invalid_argument("brute_force_oracle: min_order must be 1 or 2");
    double raw = 1;
    for (unsigned i = 0; i < n + 2; ++i) raw *= max_order;
    if (raw > 1e8) throw std::length_error("brute_force_oracle: more than 1e8 raw candidates");
    std::vector<TupleRecord> out;
    std::vector<BigInt> current;
    brute_force_rec(n, max_order, current, min_order, out);
    return out;
}

}  // namespace orbike
