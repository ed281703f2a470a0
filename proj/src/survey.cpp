#include "cycloscope/survey.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "cycloscope/errors.hpp"

namespace cycloscope {

namespace {

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

void check_limit(u64 limit) {
    if (limit < 2) throw UsageError("limit must be at least 2");
    const u64 cap = sieve_cap();
    if (limit > cap) {
        throw CapacityError("limit " + std::to_string(limit) + " exceeds the sieve cap " + std::to_string(cap));
    }
}

// Runs fn(c) for c in [0, n) on a pool of workers; results land in slot c, so
// the merge order never depends on scheduling.
template <class Partial, class Fn>
std::vector<Partial> map_chunks(u64 n, unsigned threads, Fn fn, std::ostream* progress, const char* what) {
    std::vector<Partial> out(n);
    std::atomic<u64> next{0};
    std::atomic<u64> finished{0};
    std::mutex mu;
    std::exception_ptr failure;
    const u64 step = std::max<u64>(1, n / 10);
    auto work = [&] {
        try {
            for (u64 c = next++; c < n; c = next++) {
                out[c] = fn(c);
                const u64 f = ++finished;
                if (progress != nullptr && (f % step == 0 || f == n)) {
                    std::lock_guard lock(mu);
                    *progress << what << ": " << f << "/" << n << " chunks\n" << std::flush;
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };
    const unsigned t = static_cast<unsigned>(std::min<u64>(resolve_threads(threads), std::max<u64>(n, 1)));
    if (t <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

PrimeClassification classify_with_table(u64 p, u64 ell, u64 deep_limit, std::span<const u32> table) {
    PrimeClassification c;
    c.p = p;
    c.order = p == 2 ? 1 : multiplicative_order(ell, p, table);
    c.index = (p - 1) / c.order;
    if (c.index == 1) {
        c.e_status = Verdict::nonmember;
        c.reason = Reason::primitive_root;
    } else if (c.index >= ell) {
        c.e_status = Verdict::member;
        c.reason = Reason::index_ge_ell;
    } else if (p <= deep_limit) {
        const bool zero_sum = zero_sum_subset(trace_multiset(p, ell)).has_value();
        c.e_status = zero_sum ? Verdict::member : Verdict::nonmember;
        c.reason = zero_sum ? Reason::zero_sum_subset : Reason::no_zero_sum;
    } else {
        c.e_status = Verdict::undecided;
        c.reason = Reason::deep_test_skipped;
    }
    return c;
}

void require_prime(u64 n, const char* what) {
    if (!is_prime(n)) throw UsageError(std::string(what) + " = " + std::to_string(n) + " is not prime");
}

struct SurveyPartial {
    u64 total = 0;
    std::array<u64, 3> verdicts{};
    std::array<u64, 6> reasons{};
    std::map<u64, u64> histogram;
};

struct GolombPartial {
    u64 total = 0;
    u64 eligible = 0;
    u64 count = 0;
};

u64 chunk_count(u64 limit, u64 chunk) { return (limit - 2) / chunk + 1; }

std::pair<u64, u64> chunk_range(u64 c, u64 limit, u64 chunk) {
    const u64 lo = 2 + c * chunk;
    return {lo, std::min(limit, lo + chunk - 1)};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

u64 sieve_cap() {
    if (const char* env = std::getenv("CYCLOSCOPE_MAX_SIEVE")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultSieveCap;
}

std::vector<u64> sieve_primes(u64 lo, u64 hi) {
    if (lo < 2 || lo > hi) throw UsageError("sieve range must satisfy 2 <= lo <= hi");
    const u64 cap = sieve_cap();
    if (hi > cap) throw CapacityError("sieve bound " + std::to_string(hi) + " exceeds the cap " + std::to_string(cap));
    return primes_in_range(lo, hi);
}

PrimeClassification classify_prime(u64 p, u64 ell, u64 deep_limit) {
    require_prime(p, "p");
    require_prime(ell, "ell");
    if (p == ell) throw UsageError("p = l is excluded from classification");
    const auto table = primes_up_to(isqrt(p) + 1);
    return classify_with_table(p, ell, deep_limit, table);
}

std::string fraction_decimal(u64 num, u64 den, bool round_up, int digits) {
    if (den == 0) return "0";
    u128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    const u128 scaled = static_cast<u128>(num) * scale;
    u128 q = scaled / den;
    if (round_up && scaled % den != 0) ++q;
    const u64 whole = static_cast<u64>(q / scale);
    std::string frac = std::to_string(static_cast<u64>(q % scale));
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    return std::to_string(whole) + "." + frac;
}

SurveyReport run_survey(u64 ell, u64 limit, const SurveyOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    require_prime(ell, "ell");
    if (ell > 0xFFFFFFFFULL) throw CapacityError("ell must fit in 32 bits");
    check_limit(limit);
    if (opts.chunk == 0) throw UsageError("chunk size must be positive");

    const auto table = primes_up_to(isqrt(limit) + 1);
    const u64 n = chunk_count(limit, opts.chunk);
    auto parts = map_chunks<SurveyPartial>(
        n, opts.threads,
        [&](u64 c) {
            SurveyPartial part;
            const auto [lo, hi] = chunk_range(c, limit, opts.chunk);
            for_each_prime(lo, hi, [&](u64 p) {
                if (p == ell) return;
                const auto cls = classify_with_table(p, ell, opts.deep_limit, table);
                ++part.total;
                ++part.verdicts[static_cast<std::size_t>(cls.e_status)];
                ++part.reasons[static_cast<std::size_t>(cls.reason)];
                ++part.histogram[cls.index];
            });
            return part;
        },
        opts.progress, "survey");

    SurveyReport rep;
    rep.ell = ell;
    rep.limit = limit;
    rep.deep_limit = opts.deep_limit;
    std::array<u64, 6> reasons{};
    for (const auto& part : parts) {
        rep.total_primes += part.total;
        rep.members += part.verdicts[static_cast<std::size_t>(Verdict::member)];
        rep.nonmembers += part.verdicts[static_cast<std::size_t>(Verdict::nonmember)];
        rep.undecided += part.verdicts[static_cast<std::size_t>(Verdict::undecided)];
        for (std::size_t i = 0; i < reasons.size(); ++i) reasons[i] += part.reasons[i];
        for (auto [s, k] : part.histogram) rep.index_histogram[s] += k;
    }
    for (std::size_t i = 0; i < reasons.size(); ++i) {
        if (reasons[i] != 0) rep.reasons[std::string(to_string(static_cast<Reason>(i)))] = reasons[i];
    }
    rep.member_density = fraction_decimal(rep.members, rep.total_primes, false);
    rep.member_density_upper = fraction_decimal(rep.members + rep.undecided, rep.total_primes, true);
    const auto it = rep.index_histogram.find(1);
    rep.primitive_root_density =
        fraction_decimal(it == rep.index_histogram.end() ? 0 : it->second, rep.total_primes, false);

    rep.references.push_back(e_density_lower_bound(ell, opts.reference_precision));
    const auto prim = hooley_constant(static_cast<i64>(ell), opts.reference_precision);
    rep.references.push_back(prim);
    if (ell == 2 || ell == 3) rep.references.push_back(one_minus(prim, "1-A(" + std::to_string(ell) + ")"));
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

GolombReport run_golomb_survey(i64 a, u64 r, u64 limit, const GolombOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    if (a < 2) throw UsageError("golomb-survey needs a >= 2");
    if (r == 0) throw UsageError("golomb-survey needs r >= 1");
    if (is_perfect_power(a)) {
        throw UsageError("a = " + std::to_string(a) + " is a perfect power (a must not be an l-th power for any prime l)");
    }
    check_limit(limit);
    if (opts.chunk == 0) throw UsageError("chunk size must be positive");
    const u64 ua = static_cast<u64>(a);

    const auto table = primes_up_to(isqrt(limit) + 1);
    const u64 n = chunk_count(limit, opts.chunk);
    auto parts = map_chunks<GolombPartial>(
        n, opts.threads,
        [&](u64 c) {
            GolombPartial part;
            const auto [lo, hi] = chunk_range(c, limit, opts.chunk);
            for_each_prime(lo, hi, [&](u64 p) {
                ++part.total;
                if (ua % p == 0 || (p - 1) % r != 0) return;
                ++part.eligible;
                const u64 m = (p - 1) / r;
                const u64 base = ua % p;
                if (powmod(base, m, p) != 1) return;
                for (const auto& q : factorize(m, table)) {
                    if (powmod(base, m / q.prime, p) == 1) return;
                }
                ++part.count;
            });
            return part;
        },
        opts.progress, "golomb-survey");

    GolombReport rep;
    rep.a = a;
    rep.r = r;
    rep.limit = limit;
    for (const auto& part : parts) {
        rep.total_primes += part.total;
        rep.eligible += part.eligible;
        rep.count += part.count;
    }
    rep.density = fraction_decimal(rep.count, rep.total_primes, false);
    if (opts.with_reference) rep.reference = golomb_constant(a, r, opts.reference_precision);
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

LemmaReport lemma_checks(u64 limit, unsigned threads, u64 cap) {
    if (limit < 2) throw UsageError("limit must be at least 2");
    if (limit > cap) {
        throw CapacityError("lemma checks run the trace test on every prime; limit " + std::to_string(limit) +
                            " exceeds " + std::to_string(cap));
    }
    const auto primes = primes_in_range(2, limit);
    const auto table = primes_up_to(isqrt(limit) + 1);
    constexpr u64 kPerChunk = 512;

    struct Partial {
        LemmaEllReport counts;
        std::vector<LemmaCounterexample> bad;
    };

    LemmaReport rep;
    rep.limit = limit;
    for (u64 ell : {2ULL, 3ULL, 5ULL, 7ULL}) {
        const u64 n = (primes.size() + kPerChunk - 1) / kPerChunk;
        auto parts = map_chunks<Partial>(
            n, threads,
            [&](u64 c) {
                Partial part;
                const std::size_t end = std::min<std::size_t>(primes.size(), (c + 1) * kPerChunk);
                for (std::size_t i = c * kPerChunk; i < end; ++i) {
                    const u64 p = primes[i];
                    if (p == ell) continue;
                    const auto cls = classify_with_table(p, ell, limit, table);
                    const bool member = cls.e_status == Verdict::member;
                    ++part.counts.primes;
                    if (member) ++part.counts.members;
                    if (cls.index >= ell) {
                        ++part.counts.index_ge_ell;
                        if (!member) part.bad.push_back({ell, p, cls.index, "index >= l but not a member"});
                        if (cls.index <= kPeriodMatrixMaxIndex) {
                            const auto t = trace_multiset(p, ell, TraceMethod::period_matrix);
                            if (zero_sum_subset(t)) {
                                ++part.counts.index_ge_ell_confirmed_by_traces;
                            } else {
                                part.bad.push_back({ell, p, cls.index, "index >= l but the traces have no zero-sum"});
                            }
                        }
                    } else if (cls.index >= 2) {
                        ++(member ? part.counts.small_index_members : part.counts.small_index_nonmembers);
                    }
                    if ((ell == 2 || ell == 3) && member != (cls.index >= 2)) {
                        part.bad.push_back({ell, p, cls.index, "member iff index >= 2 fails"});
                    }
                }
                return part;
            },
            nullptr, "lemma-checks");
        LemmaEllReport total;
        total.ell = ell;
        for (auto& part : parts) {
            total.primes += part.counts.primes;
            total.members += part.counts.members;
            total.index_ge_ell += part.counts.index_ge_ell;
            total.index_ge_ell_confirmed_by_traces += part.counts.index_ge_ell_confirmed_by_traces;
            total.small_index_members += part.counts.small_index_members;
            total.small_index_nonmembers += part.counts.small_index_nonmembers;
            rep.counterexamples.insert(rep.counterexamples.end(), part.bad.begin(), part.bad.end());
        }
        rep.per_ell.push_back(total);
    }
    return rep;
}

}  // namespace cycloscope
