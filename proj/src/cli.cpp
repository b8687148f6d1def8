// cli.cpp

#include "orbike/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace orbike::cli {

namespace {

Record json_int(const BigInt& v) {
    if (mpz_fits_slong_p(v.get_mpz_t()) != 0) return Record(v.get_si());
    return Record(v.get_str());
}

Record json_ints(const std::vector<BigInt>& vs) {
    Record arr = Record::array();
    for (const auto& v : vs) arr.push_back(json_int(v));
    return arr;
}

BigInt parse_bigint(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
    return BigInt(s, 10);
}

BigInt bigint_from_json(const Record& v) {
    if (v.is_number_integer()) return BigInt(v.get<long>());
    if (v.is_string()) return parse_bigint(v.get<std::string>());
    throw std::invalid_argument("certificate: order must be an integer");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Record inequality(const char* name, const Rat& lhs, const char* op, const Rat& rhs, bool holds) {
    Record r;
    r["name"] = name;
    r["lhs"] = lhs.str();
    r["op"] = op;
    r["rhs"] = rhs.str();
    r["holds"] = holds;
    return r;
}

long elapsed_us(std::chrono::steady_clock::time_point since) {
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - since).count());
}

std::string contact_caveat() {
    return "odd n: an orbifold carrying a holomorphic contact structure may not be determined by the "
           "sphere metric; not checked";
}

// ---------------------------------------------------------------------------
// Output encodings

enum class Format { Json, Csv, Text };

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string scalar_text(const Record& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

void flatten_into(const Record& v, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (v.is_array()) {
        const bool scalars = std::all_of(v.begin(), v.end(), [](const Record& e) { return e.is_primitive(); });
        if (scalars) {
            std::string joined;
            for (const auto& e : v) {
                if (!joined.empty()) joined += ' ';
                joined += scalar_text(e);
            }
            out.emplace_back(prefix, joined);
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i) flatten_into(v[i], prefix + "." + std::to_string(i), out);
        return;
    }
    out.emplace_back(prefix, scalar_text(v));
}

class Emitter {
public:
    Emitter(Format fmt, std::ostream& os) : fmt_(fmt), os_(os) {}

    void emit(const Record& rec) {
        switch (fmt_) {
            case Format::Json:
                os_ << rec.dump() << '\n';
                break;
            case Format::Csv: {
                const auto flat = flatten(rec);
                std::vector<std::string> header;
                for (const auto& kv : flat) header.push_back(kv.first);
                if (header != header_) {
                    write_row(header);
                    header_ = header;
                }
                std::vector<std::string> row;
                for (const auto& kv : flat) row.push_back(kv.second);
                write_row(row);
                break;
            }
            case Format::Text:
                for (const auto& [k, v] : flatten(rec)) os_ << k << ": " << v << '\n';
                os_ << '\n';
                break;
        }
        os_.flush();
    }

private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_escape(cells[i]);
        os_ << '\n';
    }

    Format fmt_;
    std::ostream& os_;
    std::vector<std::string> header_;
};

Record with_input(Record r, const Record& input) {
    Record out;
    for (auto it = r.begin(); it != r.end(); ++it) {
        out[it.key()] = it.value();
        if (it.key() == "record") out["input"] = input;
    }
    return out;
}

Record counts_record(const ClassCounts& c) {
    Record r;
    for (auto cl : {Classification::NotFano, Classification::OldKE, Classification::NewOnlyKE,
                    Classification::NoCriterion})
        r[std::string(to_string(cl))] = json_int(c[cl]);
    return r;
}

ClassSet parse_class(const std::string& name) {
    if (name == "new-only") return {Classification::NewOnlyKE};
    if (name == "old") return {Classification::OldKE};
    if (name == "ke") return {Classification::OldKE, Classification::NewOnlyKE};
    if (name == "all") return ClassSet::all();
    throw std::invalid_argument("unknown class '" + name + "' (new-only|old|ke|all)");
}

std::vector<std::string> class_names(const ClassSet& s) {
    std::vector<std::string> out;
    for (auto cl : {Classification::NotFano, Classification::OldKE, Classification::NewOnlyKE,
                    Classification::NoCriterion})
        if (s.contains(cl)) out.emplace_back(to_string(cl));
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> flatten(const Record& rec) {
    std::vector<std::pair<std::string, std::string>> out;
    flatten_into(rec, "", out);
    return out;
}

// ---------------------------------------------------------------------------
// Records

Record check_certificate(const RamTuple& t, bool allow_unit_orders) {
    const auto started = std::chrono::steady_clock::now();
    const FanoReport rep = classify(t);
    const LinkData link = link_weights(t);
    Record r;
    r["record"] = "check";
    r["input"]["dim"] = t.dim();
    r["input"]["orders"] = json_ints(t.orders());
    r["input"]["allow_unit_orders"] = allow_unit_orders;
    r["c1"] = rep.c1.str();
    r["inequalities"] = Record::array({
        inequality("fano", rep.c1, ">", Rat(0), rep.fano),
        inequality("old_bound", rep.old_lhs, "<", rep.old_rhs, rep.old_ok),
        inequality("new_bound", rep.c1, "<", rep.new_rhs, rep.new_ok),
    });
    r["classification"] = to_string(rep.classification);
    r["link"]["M"] = json_int(link.M);
    r["link"]["weights"] = json_ints(link.weights);
    Record caveats = Record::array();
    if (contact_caveat_applies(t.dim())) caveats.push_back(contact_caveat());
    if (std::any_of(t.orders().begin(), t.orders().end(), [](const BigInt& m) { return m == 1; }))
        caveats.push_back("unit orders present: the arrangement degenerates to fewer hyperplanes");
    r["caveats"] = caveats;
    r["tool_version"] = kToolVersion;
    r["timing_us"] = elapsed_us(started);
    return r;
}

Record recheck_certificate(const Record& certificate) {
    const Record& in = certificate.at("input");
    const unsigned dim = in.at("dim").get<unsigned>();
    std::vector<BigInt> orders;
    for (const auto& v : in.at("orders")) orders.push_back(bigint_from_json(v));
    const bool units = in.value("allow_unit_orders", false);
    TupleOptions opts;
    opts.min_order = units ? 1 : 2;
    return check_certificate(orbike::make_tuple(dim, std::move(orders), opts), units);
}

Record tuple_record(const TupleRecord& rec) {
    Record r;
    r["record"] = "tuple";
    r["dim"] = rec.tuple.dim();
    r["orders"] = json_ints(rec.tuple.orders());
    r["classification"] = to_string(rec.report.classification);
    r["c1"] = rec.report.c1.str();
    r["old_rhs"] = rec.report.old_rhs.str();
    r["new_rhs"] = rec.report.new_rhs.str();
    return r;
}

Record family_record(const SylvesterFamily& fam) {
    Record r;
    r["record"] = "family";
    r["dim"] = fam.n;
    r["prefix"] = json_ints(fam.prefix);
    r["last_interval"]["lo_exclusive"] = json_int(fam.last_lo_exclusive);
    r["last_interval"]["hi_exclusive"] = json_int(fam.last_hi_exclusive);
    Record primes = Record::array();
    for (auto p : fam.forbidden_primes) primes.push_back(p);
    r["forbidden_primes"] = primes;
    r["admissible_count"] = json_int(fam.admissible_count);
    r["new_only_count"] = json_int(fam.new_only_count);
    Record caveats = Record::array();
    caveats.push_back("upper end derived by solving the new bound exactly: n(c_{n+1}-1)(c_{n+1}-2) = " +
                      fam.last_hi_exclusive.get_str() + "; the variant n(c_{n+1}-1)(c_{n+2}-2) = " +
                      fam.variant_hi_exclusive.get_str() + " admits tuples that fail the bound");
    if (contact_caveat_applies(fam.n)) caveats.push_back(contact_caveat());
    r["caveats"] = caveats;
    return r;
}

Record ke_record(const char* kind, const KeReport& rep) {
    Record r;
    r["record"] = kind;
    r["delta"] = rep.delta ? Record(rep.delta->str()) : Record();
    r["beta"] = rep.beta ? Record(rep.beta->str()) : Record();
    r["c"] = rep.c ? Record(rep.c->str()) : Record();
    r["fano"] = rep.fano;
    r["passes"] = rep.passes;
    r["verdict"] = !rep.fano ? "not-fano" : rep.passes ? "criterion-passes" : "criterion-fails";
    r["method"] = to_string(rep.method);
    Record conds = Record::array();
    for (const auto& c : rep.conditions) {
        Record cr;
        cr["name"] = c.name;
        cr["lhs"] = c.lhs.str();
        cr["rhs"] = c.rhs ? c.rhs->str() : "inf";
        cr["holds"] = c.holds;
        conds.push_back(cr);
    }
    r["conditions"] = conds;
    r["caveats"] = rep.notes;
    return r;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Globals {
    std::string format = "json";
    std::uint64_t seed = 1;
    std::uint64_t max_nodes = 0;
    std::string out_file;
    unsigned jobs = 1;
};

unsigned default_jobs() {
    if (const char* env = std::getenv("ORBIKE_JOBS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Kaehler-Einstein existence certificates for orbifold arrangements", "orbike"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Globals g;
    g.jobs = default_jobs();
    app.add_option("--format", g.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", g.seed, "random seed for the oracle");
    app.add_option("--max-nodes", g.max_nodes, "search node cap (0 = none)");
    app.add_option("--out", g.out_file, "write records to FILE instead of stdout");
    app.add_option("--jobs", g.jobs, "worker threads (default $ORBIKE_JOBS or 1)")->check(CLI::Range(1, 1024));

    // check
    unsigned check_dim = 0;
    std::vector<std::string> check_orders;
    bool check_units = false;
    auto* check = app.add_subcommand("check", "classify one ramification tuple");
    check->add_option("--dim", check_dim, "dimension n")->required();
    check->add_option("orders", check_orders, "m_0 ... m_{n+1}")->required();
    check->add_flag("--allow-unit-orders", check_units, "admit m_i = 1");

    // enumerate / count
    unsigned en_dim = 0;
    std::string en_class = "ke";
    bool en_count = false;
    bool en_units = false;
    std::string en_max_order;
    std::string en_prefix;
    auto* enumerate = app.add_subcommand("enumerate", "list or count tuples by classification");
    auto* count = app.add_subcommand("count", "alias of enumerate --count-only");
    for (auto* sub : {enumerate, count}) {
        sub->add_option("--dim", en_dim, "dimension n")->required();
        sub->add_option("--class", en_class, "new-only|old|ke|all");
        sub->add_flag("--allow-unit-orders", en_units, "admit m_i = 1");
        sub->add_option("--max-order", en_max_order, "bound every order (required for --class all)");
        sub->add_option("--prefix", en_prefix, "fixed leading orders, comma separated");
    }
    enumerate->add_flag("--count-only", en_count, "closed-form counts instead of tuples");

    // family
    unsigned fam_dim = 0;
    bool fam_total = false;
    auto* family = app.add_subcommand("family", "Sylvester-sequence family and its counts");
    family->add_option("--dim", fam_dim, "dimension n")->required();
    family->add_flag("--with-total", fam_total, "also count every new-only tuple in this dimension");

    // sylvester
    unsigned syl_k = 0;
    auto* sylvester = app.add_subcommand("sylvester", "first k Sylvester numbers");
    sylvester->add_option("--k", syl_k, "number of terms (1..8)")->required();

    // lct
    auto* lct = app.add_subcommand("lct", "singularity-exponent criteria");
    lct->require_subcommand(1);
    unsigned snc_dim = 0;
    std::vector<std::string> snc_divisors;
    auto* snc = lct->add_subcommand("snc", "identity-cover test for SNC divisors on P^n");
    snc->add_option("--dim", snc_dim, "dimension n")->required();
    snc->add_option("--divisor", snc_divisors, "degree:order, repeatable")->required();
    std::vector<long> mono_exponents;
    auto* mono = lct->add_subcommand("monomial", "threshold of |prod z_j^a_j|^{-2 lambda}");
    mono->add_option("exponents", mono_exponents, "a_1 a_2 ...")->required();

    // delpezzo
    auto* delpezzo = app.add_subcommand("delpezzo", "Del Pezzo case analyses");
    delpezzo->require_subcommand(1);
    std::string dp2_sing;
    auto* deg2 = delpezzo->add_subcommand("deg2", "degree 2 with A_k points");
    deg2->add_option("--sing", dp2_sing, "A1,A2,... (empty for smooth)");
    std::string dp4_lambda;
    auto* deg4 = delpezzo->add_subcommand("deg4", "diagonalizable degree 4");
    deg4->add_option("--lambda", dp4_lambda, "l2,l3,l4 (rationals)")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo integrability threshold");
    oracle->require_subcommand(1);
    std::vector<long> or_exponents;
    unsigned or_n = 0;
    double or_tol = 0.1;
    std::uint64_t or_samples = 0;
    std::string or_grid;
    unsigned or_cutoffs = 0;
    auto* or_mono = oracle->add_subcommand("monomial", "|prod z_j^a_j|^{-2 lambda} on the polydisc");
    auto* or_bp = oracle->add_subcommand("bp", "|u^n + v^n|^{-2 lambda} on the ball");
    or_mono->add_option("--exponents", or_exponents, "a_1 a_2 ...")->required();
    or_bp->add_option("--exponents,--n", or_n, "n >= 2")->required();
    for (auto* sub : {or_mono, or_bp}) {
        sub->add_option("--tol", or_tol, "relative tolerance against the exact value");
        sub->add_option("--samples", or_samples, "samples per shell (>= 1000)");
        sub->add_option("--grid", or_grid, "lambda grid lo:hi:count (rationals)");
        sub->add_option("--cutoffs", or_cutoffs, "number of halving cutoffs");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kComputed;
    } catch (const CLI::CallForVersion& e) {
        out << kToolVersion << '\n';
        return kComputed;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kComputed;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    std::unique_ptr<std::ofstream> file;
    std::ostream* sink = &out;
    if (!g.out_file.empty()) {
        file = std::make_unique<std::ofstream>(g.out_file);
        if (!*file) {
            err << "error: cannot open " << g.out_file << '\n';
            return kInvalidInput;
        }
        sink = file.get();
    }
    const Format fmt = g.format == "csv" ? Format::Csv : g.format == "text" ? Format::Text : Format::Json;
    Emitter emitter(fmt, *sink);

    try {
        if (check->parsed()) {
            std::vector<BigInt> orders;
            for (const auto& s : check_orders) orders.push_back(parse_bigint(s));
            TupleOptions opts;
            opts.min_order = check_units ? 1 : 2;
            emitter.emit(check_certificate(orbike::make_tuple(check_dim, std::move(orders), opts), check_units));
            return kComputed;
        }

        if (enumerate->parsed() || count->parsed()) {
            SearchConfig cfg;
            cfg.n = en_dim;
            cfg.min_order = en_units ? 1 : 2;
            cfg.mode = (count->parsed() || en_count) ? SearchMode::Count : SearchMode::Materialize;
            cfg.classes = parse_class(en_class);
            cfg.parallel_width = g.jobs;
            if (!en_max_order.empty()) cfg.max_order = parse_bigint(en_max_order);
            if (!en_prefix.empty())
                for (const auto& s : split(en_prefix, ',')) cfg.prefix_filter.push_back(parse_bigint(s));
            if (g.max_nodes != 0) cfg.max_nodes = g.max_nodes;

            auto summary = [&](const EnumResult& res, bool partial) {
                Record r;
                r["record"] = cfg.mode == SearchMode::Count ? "count" : "summary";
                r["dim"] = cfg.n;
                r["classes"] = class_names(cfg.classes);
                r["counts"] = counts_record(res.counts);
                r["total"] = json_int(res.counts.total());
                r["nodes_visited"] = res.nodes_visited;
                r["partial"] = partial;
                r["elapsed_ms"] = std::chrono::duration<double, std::milli>(res.elapsed).count();
                if (contact_caveat_applies(cfg.n)) r["caveats"] = Record::array({contact_caveat()});
                return r;
            };
            try {
                const auto res = enumerate_tuples(cfg, [&](const TupleRecord& rec) { emitter.emit(tuple_record(rec)); });
                emitter.emit(summary(res, false));
            } catch (const ResourceLimitExceeded& e) {
                emitter.emit(summary(e.partial(), true));
                err << "error: " << e.what() << '\n';
                return kResourceCap;
            }
            return kComputed;
        }

        if (family->parsed()) {
            Record r = family_record(sylvester_family(fam_dim));
            if (fam_total) r["all_new_only_count"] = json_int(count_new(fam_dim, g.jobs));
            emitter.emit(r);
            return kComputed;
        }

        if (sylvester->parsed()) {
            const auto seq = sylvester_seq(syl_k);
            const auto ext = sylvester_terms(syl_k + 1);
            Rat sum;
            for (const auto& c : seq) sum += reciprocal(c);
            Record r;
            r["record"] = "sylvester";
            r["k"] = syl_k;
            r["terms"] = json_ints(seq);
            r["reciprocal_sum"] = sum.str();
            r["identity_holds"] = sum + reciprocal(ext.back() - 1) == Rat(1);
            emitter.emit(r);
            return kComputed;
        }

        if (snc->parsed()) {
            SncFanoData data;
            data.n = snc_dim;
            Record divs = Record::array();
            for (const auto& d : snc_divisors) {
                const auto parts = split(d, ':');
                if (parts.size() != 2) throw std::invalid_argument("--divisor expects degree:order");
                SncDivisor div{std::stol(parse_bigint(parts[0]).get_str()), std::stol(parse_bigint(parts[1]).get_str())};
                data.entries.push_back(div);
                divs.push_back({{"degree", div.degree}, {"order", div.order}});
            }
            Record r = ke_record("lct-snc", snc_ke_check(data));
            Record in;
            in["dim"] = snc_dim;
            in["divisors"] = divs;
            r = with_input(std::move(r), in);
            emitter.emit(r);
            return kComputed;
        }

        if (mono->parsed()) {
            Record r;
            r["record"] = "lct-monomial";
            r["exponents"] = mono_exponents;
            r["threshold"] = monomial_lct(mono_exponents).str();
            emitter.emit(r);
            return kComputed;
        }

        if (deg2->parsed()) {
            DelPezzo2 s{parse_singularity_list(dp2_sing)};
            Record r = ke_record("delpezzo-deg2", dp2_check(s));
            Record labels = Record::array();
            for (unsigned k : s.singularities) labels.push_back("A" + std::to_string(k));
            r = with_input(std::move(r), Record{{"singularities", labels}});
            emitter.emit(r);
            return kComputed;
        }

        if (deg4->parsed()) {
            const auto parts = split(dp4_lambda, ',');
            if (parts.size() != 3) throw std::invalid_argument("--lambda expects three values");
            DelPezzo4 s{Rat::parse(parts[0]), Rat::parse(parts[1]), Rat::parse(parts[2])};
            Record r = ke_record("delpezzo-deg4", dp4_check(s));
            r = with_input(std::move(r),
                           Record{{"lambda", Record::array({s.lambda2.str(), s.lambda3.str(), s.lambda4.str()})}});
            emitter.emit(r);
            return kComputed;
        }

        if (or_mono->parsed() || or_bp->parsed()) {
            OracleConfig cfg = OracleConfig::defaults();
            cfg.seed = g.seed;
            cfg.tolerance = or_tol;
            cfg.workers = g.jobs;
            if (or_samples != 0) cfg.samples_per_shell = or_samples;
            if (or_cutoffs != 0) cfg.cutoffs = OracleConfig::geometric_cutoffs(0.5, or_cutoffs);
            if (!or_grid.empty()) {
                const auto parts = split(or_grid, ':');
                if (parts.size() != 3) throw std::invalid_argument("--grid expects lo:hi:count");
                cfg.lambda_grid = OracleConfig::linear_grid(Rat::parse(parts[0]), Rat::parse(parts[1]),
                                                            static_cast<unsigned>(std::stoul(parts[2])));
            }
            const bool bp = or_bp->parsed();
            const Rat analytic = bp ? Rat(BigInt(2), BigInt(or_n)) : monomial_lct(or_exponents);
            Record r;
            r["record"] = "oracle";
            r["kind"] = bp ? "bp" : "monomial";
            if (bp) r["n"] = or_n;
            else r["exponents"] = or_exponents;
            r["analytic"] = analytic.str();
            ExponentEstimate est;
            try {
                est = bp ? estimate_bp_threshold(or_n, cfg) : estimate_monomial_threshold(or_exponents, cfg);
            } catch (const ThresholdOutsideGrid& e) {
                r["outside_grid"] = e.direction() == ThresholdOutsideGrid::Direction::Below ? "below" : "above";
                r["agrees"] = false;
                r["seed"] = cfg.seed;
                emitter.emit(r);
                return kComputed;
            }
            r["threshold_estimate"] = est.threshold_estimate;
            r["confidence_halfwidth"] = est.confidence_halfwidth;
            r["relative_error"] = std::abs(est.threshold_estimate - analytic.to_double()) / analytic.to_double();
            r["tolerance"] = or_tol;
            r["agrees"] = verify_threshold(analytic, est, or_tol);
            r["seed"] = cfg.seed;
            r["samples_per_shell"] = cfg.samples_per_shell;
            Record slopes = Record::array();
            for (const auto& s : est.per_lambda_slopes) {
                slopes.push_back({{"lambda", s.lambda},
                                  {"cumulative_slope", s.cumulative_slope},
                                  {"shell_exponent", s.shell_exponent}});
            }
            r["slopes"] = slopes;
            emitter.emit(r);
            return kComputed;
        }
    } catch (const ResourceLimitExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kResourceCap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    err << "error: no command\n";
    return kInvalidInput;
}

}  // namespace orbike::cli
