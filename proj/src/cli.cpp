#include "cycloscope/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "cycloscope/errors.hpp"
#include "cycloscope/survey.hpp"

namespace cycloscope {

namespace {

using json = nlohmann::ordered_json;

enum class Format { json, csv, text };

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};

void check_precision_flag(double precision) {
    if (!(precision >= 1e-12 && precision <= 1e-2)) {
        std::ostringstream os;
        os << "--precision " << precision << " outside [1e-12, 1e-2]";
        throw UsageError(os.str());
    }
}

json poly_json(const Poly& f) {
    return json{{"text", f.to_string()}, {"degree", f.degree()}, {"coefficients", f.coeffs()}};
}

json estimate_json(const ConstantEstimate& c) {
    return json{{"label", c.label},           {"lo", c.lo},
                {"hi", c.hi},                 {"truncation", c.truncation},
                {"tail_bound", c.tail_bound}, {"arithmetic", c.arithmetic}};
}

json counts_json(const std::map<u32, u64>& m) {
    json j = json::object();
    for (auto [k, v] : m) j[std::to_string(k)] = v;
    return j;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// Flattens scalars, objects and arrays of scalars into key=value lines.
void emit_text(std::ostream& out, const json& j, const std::string& prefix = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            emit_text(out, *it, key);
        } else if (it->is_array() && !it->empty() && it->front().is_object()) {
            for (std::size_t i = 0; i < it->size(); ++i) emit_text(out, (*it)[i], key + "[" + std::to_string(i) + "]");
        } else if (it->is_string()) {
            out << key << " = " << it->get<std::string>() << "\n";
        } else {
            out << key << " = " << it->dump() << "\n";
        }
    }
}

std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

// record,key,value rows; see docs/report-schema.md.
void emit_csv(std::ostream& out, const json& j) {
    out << "record,key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_object()) {
            for (auto kt = it->begin(); kt != it->end(); ++kt) {
                out << it.key() << "," << csv_cell(kt.key()) << "," << csv_cell(*kt) << "\n";
            }
        } else if (it->is_array()) {
            for (const auto& el : *it) {
                if (!el.is_object()) {
                    out << it.key() << ",," << csv_cell(el) << "\n";
                    continue;
                }
                const std::string label = el.contains("label") ? el["label"].get<std::string>() : "";
                for (auto kt = el.begin(); kt != el.end(); ++kt) {
                    if (kt.key() == "label") continue;
                    out << it.key() << "," << csv_cell(label + "." + kt.key()) << "," << csv_cell(*kt) << "\n";
                }
            }
        } else {
            out << "field," << it.key() << "," << csv_cell(*it) << "\n";
        }
    }
}

void emit(std::ostream& out, const json& j, Format f) {
    switch (f) {
        case Format::json: emit_json(out, j); break;
        case Format::csv: emit_csv(out, j); break;
        case Format::text: emit_text(out, j); break;
    }
}

json membership_json(const MembershipResult& r) {
    json j{{"command", "member"},
           {"p", r.p},
           {"ell", r.ell},
           {"order", r.order},
           {"index", r.index},
           {"verdict", std::string(to_string(r.verdict))},
           {"reason", std::string(to_string(r.reason))}};
    if (r.zero_sum) j["zero_sum"] = counts_json(r.zero_sum->chosen);
    if (r.witness) {
        j["witness"] = json{{"g", poly_json(r.witness->g)}, {"h", poly_json(r.witness->h)}};
        j["identity"] = "X^" + std::to_string(r.p) + "-1 = (" + r.witness->g.to_string() + ")(" +
                        r.witness->h.to_string() + ") over F_" + std::to_string(r.ell);
    }
    if (r.note) j["note"] = *r.note;
    return j;
}

json survey_json(const SurveyReport& r) {
    json hist = json::object();
    for (auto [s, k] : r.index_histogram) hist[std::to_string(s)] = k;
    json reasons = json::object();
    for (const auto& [name, k] : r.reasons) reasons[name] = k;
    json refs = json::array();
    for (const auto& c : r.references) refs.push_back(estimate_json(c));
    return json{{"command", "survey"},
                {"ell", r.ell},
                {"limit", r.limit},
                {"deep_limit", r.deep_limit},
                {"total_primes", r.total_primes},
                {"members", r.members},
                {"nonmembers", r.nonmembers},
                {"undecided", r.undecided},
                {"member_density", r.member_density},
                {"member_density_upper", r.member_density_upper},
                {"primitive_root_density", r.primitive_root_density},
                {"index_histogram", hist},
                {"reasons", reasons},
                {"references", refs}};
}

json golomb_json(const GolombReport& r) {
    json j{{"command", "golomb-survey"},
           {"a", r.a},
           {"r", r.r},
           {"limit", r.limit},
           {"total_primes", r.total_primes},
           {"eligible", r.eligible},
           {"count", r.count},
           {"density", r.density}};
    json refs = json::array();
    if (r.reference) refs.push_back(estimate_json(*r.reference));
    j["references"] = refs;
    return j;
}

json lemma_json(const LemmaReport& r) {
    json per = json::array();
    for (const auto& e : r.per_ell) {
        per.push_back(json{{"label", "ell=" + std::to_string(e.ell)},
                           {"ell", e.ell},
                           {"primes", e.primes},
                           {"members", e.members},
                           {"index_ge_ell", e.index_ge_ell},
                           {"index_ge_ell_confirmed_by_traces", e.index_ge_ell_confirmed_by_traces},
                           {"small_index_members", e.small_index_members},
                           {"small_index_nonmembers", e.small_index_nonmembers}});
    }
    json bad = json::array();
    for (const auto& c : r.counterexamples) {
        bad.push_back(json{{"label", "ell=" + std::to_string(c.ell) + "/p=" + std::to_string(c.p)},
                           {"ell", c.ell},
                           {"p", c.p},
                           {"index", c.index},
                           {"claim", c.claim}});
    }
    return json{{"command", "lemma-checks"}, {"limit", r.limit}, {"passed", r.passed()}, {"per_ell", per},
                {"counterexamples", bad}};
}

json davenport_json(const DavenportReport& r) {
    return json{{"command", "davenport"},
                {"ell", r.ell},
                {"length_ell_forces_zero_sum", r.length_ell_forces_zero_sum},
                {"length_ell_minus_one_forces_zero_sum", r.length_ell_minus_one_forces_zero_sum},
                {"zero_sum_free_sequence", r.counterexample},
                {"davenport_constant_is_ell", r.confirms()}};
}

struct SelftestCheck {
    std::string name;
    bool passed;
    std::string detail;
};

SelftestCheck reversal_selftest() {
    std::mt19937_64 rng(0x5e1f);
    u64 cases = 0;
    for (int i = 0; i < 20000; ++i) {
        const u32 ell = std::array<u32, 5>{2, 3, 5, 7, 11}[i % 5];
        auto random_poly = [&] {
            std::vector<u32> c(3 + rng() % 20);
            for (auto& x : c) x = static_cast<u32>(rng() % ell);
            c[0] = 1 + static_cast<u32>(rng() % (ell - 1));
            c.back() = 1 + static_cast<u32>(rng() % (ell - 1));
            return Poly(ell, c);
        };
        const Poly f = random_poly();
        const Poly g = random_poly();
        ++cases;
        if (reversal(f * g) != reversal(f) * reversal(g) || reversal(reversal(f)) != f) {
            return {"reversal identities", false, "failed at case " + std::to_string(cases)};
        }
        std::vector<u32> m = f.coeffs();
        m[1] = 0;
        const Poly fm(ell, m);
        if (trace(reversal(fm)).value() != 0) {
            return {"reversal identities", false, "tr(R(f)) != 0 at case " + std::to_string(cases)};
        }
    }
    return {"reversal identities", true, std::to_string(cases) + " random cases"};
}

int run_selftest(std::ostream& out, Format fmt) {
    std::vector<SelftestCheck> checks;
    const auto lemmas = lemma_checks(10000);
    checks.push_back({"lemma checks to 10^4", lemmas.passed(),
                      std::to_string(lemmas.counterexamples.size()) + " counterexamples"});
    for (u64 ell : {2ULL, 3ULL, 5ULL}) {
        const auto d = davenport_report(ell);
        checks.push_back({"davenport ell=" + std::to_string(ell), d.confirms(), "D(F_l) = l"});
    }
    checks.push_back(reversal_selftest());
    u64 agree = 0;
    bool oracle_ok = true;
    for (u64 p : primes_in_range(2, 300)) {
        for (u64 ell : {2ULL, 3ULL, 5ULL, 7ULL}) {
            const bool a = e_membership(p, ell, false).verdict == Verdict::member;
            if (a != brute_force_membership(p, ell)) oracle_ok = false;
            ++agree;
        }
    }
    checks.push_back({"pipeline vs brute force, p <= 300", oracle_ok, std::to_string(agree) + " pairs"});

    bool all = true;
    json arr = json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        arr.push_back(json{{"label", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    emit(out, json{{"command", "selftest"}, {"passed", all}, {"checks", arr}}, fmt);
    return all ? exit_code::ok : exit_code::check_failed;
}

void add_format(CLI::App* sub, Format& fmt, bool allow_csv) {
    std::map<std::string, Format> allowed = kFormats;
    if (!allow_csv) allowed.erase("csv");
    sub->add_option("--format", fmt, "output format")->transform(CLI::CheckedTransformer(allowed, CLI::ignore_case));
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cycloscope: X^p - 1 in F_l[X; <2,3>], prime surveys, Artin-type constants"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Format fmt = Format::json;
    unsigned threads = 0;
    u64 p = 0, ell = 0, limit = 0, oracle_cap = kDefaultOracleCap;
    u64 deep_limit = kDefaultDeepLimit;
    bool witness = false;
    std::string out_path;
    i64 a = 0;
    u64 r = 1;
    double precision = kDefaultPrecision;

    auto* member = app.add_subcommand("member", "decide whether X^p - 1 is reducible in F_l[X;M]");
    member->add_option("p", p, "prime p")->required();
    member->add_option("--ell", ell, "characteristic l")->required();
    member->add_flag("--witness", witness, "print a factorization g*h = X^p - 1 in F_l[X;M]");
    member->add_option("--oracle-cap", oracle_cap, "largest p factored for witnesses");
    add_format(member, fmt, false);

    auto* factor = app.add_subcommand("factor-phi", "factor Phi_p over F_l");
    factor->add_option("p", p, "prime p")->required();
    factor->add_option("--ell", ell, "characteristic l")->required();
    factor->add_option("--oracle-cap", oracle_cap, "largest p factored");
    add_format(factor, fmt, false);

    auto* survey = app.add_subcommand("survey", "classify every prime p <= N for E(l)");
    survey->add_option("--ell", ell, "characteristic l")->required();
    survey->add_option("--limit", limit, "N")->required();
    survey->add_option("--deep-limit", deep_limit, "run the trace test for 2 <= s < l only when p <= D");
    survey->add_option("--out", out_path, "write the report here instead of standard output");
    survey->add_option("--threads", threads, "worker count (default: hardware concurrency)");
    add_format(survey, fmt, true);

    auto* golomb = app.add_subcommand("golomb-survey", "count p = 1 mod r with ord_p(a) = (p-1)/r");
    golomb->add_option("--a", a, "base a")->required();
    golomb->add_option("--r", r, "index r")->required();
    golomb->add_option("--limit", limit, "N")->required();
    golomb->add_option("--precision", precision, "reference enclosure width");
    golomb->add_option("--out", out_path, "write the report here instead of standard output");
    golomb->add_option("--threads", threads, "worker count");
    add_format(golomb, fmt, true);

    std::string which;
    auto* constants = app.add_subcommand("constants", "rigorous enclosures of density constants");
    constants->add_option("which", which, "artin | bound | hooley | golomb")
        ->required()
        ->check(CLI::IsMember({"artin", "bound", "hooley", "golomb"}));
    constants->add_option("--ell", ell, "l for bound");
    constants->add_option("--a", a, "a for hooley and golomb");
    constants->add_option("--r", r, "r for golomb");
    constants->add_option("--precision", precision, "requested enclosure width");
    add_format(constants, fmt, false);

    auto* davenport = app.add_subcommand("davenport", "check D(F_l) = l by enumeration");
    davenport->add_option("--ell", ell, "l")->required();
    add_format(davenport, fmt, false);

    auto* lemmas = app.add_subcommand("lemma-checks", "exhaustive index-lemma checks for l in {2,3,5,7}");
    lemmas->add_option("--limit", limit, "N")->required();
    lemmas->add_option("--threads", threads, "worker count");
    add_format(lemmas, fmt, true);

    auto* selftest = app.add_subcommand("selftest", "cross-module oracle suites");
    add_format(selftest, fmt, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }

    try {
        if (member->parsed()) {
            MembershipOptions opts;
            opts.oracle_cap = oracle_cap;
            emit(out, membership_json(e_membership(p, ell, witness, opts)), fmt);
        } else if (factor->parsed()) {
            const auto fl = factor_oracle(p, ell, oracle_cap);
            json factors = json::array();
            std::map<u32, u64> traces;
            for (const auto& f : fl.factors) {
                factors.push_back(poly_json(f));
                ++traces[trace(f).value()];
            }
            emit(out,
                 json{{"command", "factor-phi"},
                      {"p", fl.p},
                      {"ell", fl.ell},
                      {"factor_degree", fl.degree},
                      {"factor_count", fl.factors.size()},
                      {"trace_multiset", counts_json(traces)},
                      {"factors", factors}},
                 fmt);
        } else if (survey->parsed()) {
            SurveyOptions opts;
            opts.deep_limit = deep_limit;
            opts.threads = threads;
            opts.progress = &err;
            const auto rep = run_survey(ell, limit, opts);
            std::ostringstream body;
            emit(body, survey_json(rep), fmt);
            if (fmt == Format::text) body << "elapsed_seconds = " << std::fixed << std::setprecision(3)
                                          << rep.elapsed_seconds << "\n";
            if (out_path.empty()) {
                out << body.str();
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw UsageError("cannot write " + out_path);
                f << body.str();
            }
            err << "survey: done in " << std::fixed << std::setprecision(3) << rep.elapsed_seconds << " s\n";
        } else if (golomb->parsed()) {
            check_precision_flag(precision);
            GolombOptions opts;
            opts.threads = threads;
            opts.reference_precision = precision;
            opts.progress = &err;
            const auto rep = run_golomb_survey(a, r, limit, opts);
            std::ostringstream body;
            emit(body, golomb_json(rep), fmt);
            if (out_path.empty()) {
                out << body.str();
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw UsageError("cannot write " + out_path);
                f << body.str();
            }
            err << "golomb-survey: done in " << std::fixed << std::setprecision(3) << rep.elapsed_seconds << " s\n";
        } else if (constants->parsed()) {
            check_precision_flag(precision);
            ConstantEstimate c;
            if (which == "artin") {
                c = artin_constant(precision);
            } else if (which == "bound") {
                if (constants->count("--ell") == 0) throw UsageError("constants bound needs --ell");
                c = e_density_lower_bound(ell, precision);
            } else if (which == "hooley") {
                if (constants->count("--a") == 0) throw UsageError("constants hooley needs --a");
                c = hooley_constant(a, precision);
            } else {
                if (constants->count("--a") == 0) throw UsageError("constants golomb needs --a");
                c = golomb_constant(a, r, precision);
            }
            json j = estimate_json(c);
            if (which == "hooley") j["delta"] = hooley_delta(a);
            emit(out, j, fmt);
        } else if (davenport->parsed()) {
            const auto rep = davenport_report(ell);
            emit(out, davenport_json(rep), fmt);
            return rep.confirms() ? exit_code::ok : exit_code::check_failed;
        } else if (lemmas->parsed()) {
            const auto rep = lemma_checks(limit, threads);
            emit(out, lemma_json(rep), fmt);
            return rep.passed() ? exit_code::ok : exit_code::check_failed;
        } else if (selftest->parsed()) {
            return run_selftest(out, fmt);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << "\n";
        return exit_code::capacity;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_code::internal;
    }
    return exit_code::ok;
}

}  // namespace cycloscope
