#include "doctest.h"

#include <cstdlib>

#include "cycloscope/errors.hpp"
#include "cycloscope/survey.hpp"

using namespace cycloscope;

namespace {

bool prime_by_trial_division(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

u64 order_by_enumeration(u64 a, u64 p) {
    u64 x = a % p, k = 1;
    while (x != 1) {
        x = x * a % p;
        ++k;
    }
    return k;
}

bool same_report(const SurveyReport& a, const SurveyReport& b) {
    if (a.references.size() != b.references.size()) return false;
    for (std::size_t i = 0; i < a.references.size(); ++i) {
        if (a.references[i].lo != b.references[i].lo || a.references[i].hi != b.references[i].hi) return false;
    }
    return a.total_primes == b.total_primes && a.members == b.members && a.nonmembers == b.nonmembers &&
           a.undecided == b.undecided && a.index_histogram == b.index_histogram && a.reasons == b.reasons &&
           a.member_density == b.member_density && a.member_density_upper == b.member_density_upper;
}

}  // namespace

TEST_CASE("sieve") {
    CHECK(sieve_primes(2, 30) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(sieve_primes(90, 96).empty());
    CHECK(sieve_primes(90, 97) == std::vector<u64>{97});
    CHECK(sieve_primes(1'000'000, 1'000'000).empty());
    CHECK(sieve_primes(2, 1'000'000).size() == 78498);

    u64 trial = 0;
    for (u64 n = 2; n <= 10000; ++n) trial += prime_by_trial_division(n) ? 1 : 0;
    CHECK(sieve_primes(2, 10000).size() == trial);
    // segment boundaries: 2^18 sits inside the range
    const auto around = sieve_primes(262'000, 263'000);
    for (u64 n = 262'000; n <= 263'000; ++n) {
        REQUIRE(std::binary_search(around.begin(), around.end(), n) == prime_by_trial_division(n));
    }

    CHECK_THROWS_AS(sieve_primes(1, 10), UsageError);
    CHECK_THROWS_AS(sieve_primes(20, 10), UsageError);
    CHECK_THROWS_AS(sieve_primes(2, kDefaultSieveCap + 1), CapacityError);
    setenv("CYCLOSCOPE_MAX_SIEVE", "1000", 1);
    CHECK(sieve_cap() == 1000);
    CHECK_THROWS_AS(sieve_primes(2, 1001), CapacityError);
    unsetenv("CYCLOSCOPE_MAX_SIEVE");
    CHECK(sieve_cap() == kDefaultSieveCap);
}

TEST_CASE("classify_prime") {
    const auto a = classify_prime(7, 2, 0);
    CHECK(a.e_status == Verdict::member);
    CHECK(a.reason == Reason::index_ge_ell);
    CHECK(a.order * a.index == 6);

    const auto b = classify_prime(11, 5, 11);
    CHECK(b.e_status == Verdict::nonmember);
    CHECK(b.reason == Reason::no_zero_sum);
    const auto b0 = classify_prime(11, 5, 10);
    CHECK(b0.e_status == Verdict::undecided);
    CHECK(b0.reason == Reason::deep_test_skipped);

    CHECK(order_by_enumeration(5, 17) == 16);
    const auto c = classify_prime(17, 5, 0);
    CHECK(c.e_status == Verdict::nonmember);
    CHECK(c.reason == Reason::primitive_root);

    const auto two = classify_prime(2, 5, 0);
    CHECK(two.index == 1);
    CHECK(two.e_status == Verdict::nonmember);

    CHECK_THROWS_AS(classify_prime(5, 5, 0), UsageError);
    CHECK_THROWS_AS(classify_prime(9, 5, 0), UsageError);
}

TEST_CASE("survey agrees with the membership pipeline prime by prime") {
    for (u64 ell : {3ULL, 5ULL, 7ULL}) {
        SurveyOptions opts;
        opts.deep_limit = 3000;
        const auto rep = run_survey(ell, 3000, opts);
        u64 members = 0, total = 0;
        std::map<u64, u64> hist;
        for (u64 p = 2; p <= 3000; ++p) {
            if (!prime_by_trial_division(p) || p == ell) continue;
            ++total;
            const auto m = e_membership(p, ell, false);
            if (m.verdict == Verdict::member) ++members;
            ++hist[m.index];
        }
        CHECK(rep.total_primes == total);
        CHECK(rep.members == members);
        CHECK(rep.undecided == 0);
        CHECK(rep.index_histogram == hist);
    }
}

TEST_CASE("survey invariants") {
    SurveyOptions opts;
    opts.deep_limit = 5000;
    opts.chunk = 4096;
    const auto rep = run_survey(3, 40000, opts);
    CHECK(rep.members + rep.nonmembers + rep.undecided == rep.total_primes);
    u64 hist_total = 0;
    for (auto [s, k] : rep.index_histogram) hist_total += k;
    CHECK(hist_total == rep.total_primes);
    u64 prim = 0;
    for (u64 p = 2; p <= 40000; ++p) {
        if (p != 3 && prime_by_trial_division(p) && order_by_enumeration(3, p) == p - 1) ++prim;
    }
    CHECK(rep.index_histogram.at(1) == prim);
    CHECK(rep.undecided > 0);
    CHECK(rep.member_density <= rep.member_density_upper);

    const auto two = run_survey(2, 40000, opts);
    CHECK(two.undecided == 0);
    REQUIRE(two.references.size() == 3);
    CHECK(two.references[0].label == "1-B(2)");
    CHECK(two.references[1].label == "A(2)");
    CHECK(two.references[2].label == "1-A(2)");
}

TEST_CASE("survey is deterministic across thread counts and chunk sizes") {
    SurveyOptions opts;
    opts.deep_limit = 20000;
    opts.threads = 1;
    const auto one = run_survey(5, 60000, opts);
    for (unsigned t : {2u, 8u}) {
        opts.threads = t;
        CHECK(same_report(one, run_survey(5, 60000, opts)));
    }
    opts.chunk = 1000;
    CHECK(same_report(one, run_survey(5, 60000, opts)));
}

TEST_CASE("raising deep_limit only shrinks undecided") {
    SurveyOptions lo, mid, hi;
    lo.deep_limit = 0;
    mid.deep_limit = 3000;
    hi.deep_limit = 30000;
    const auto a = run_survey(7, 30000, lo);
    const auto b = run_survey(7, 30000, mid);
    const auto c = run_survey(7, 30000, hi);
    CHECK(a.undecided >= b.undecided);
    CHECK(b.undecided >= c.undecided);
    CHECK(c.undecided == 0);
    CHECK(a.members <= b.members);
    CHECK(b.members <= c.members);
    CHECK(a.nonmembers <= b.nonmembers);
    CHECK(b.nonmembers <= c.nonmembers);
}

TEST_CASE("survey errors") {
    CHECK_THROWS_AS(run_survey(4, 1000), UsageError);
    CHECK_THROWS_AS(run_survey(2, 1), UsageError);
    CHECK_THROWS_AS(run_survey(2, kDefaultSieveCap + 1), CapacityError);
}

TEST_CASE("empirical density near the predicted value") {
    SurveyOptions opts;
    const auto rep = run_survey(2, 300000, opts);
    const double frac = std::strtod(rep.member_density.c_str(), nullptr);
    CHECK(std::abs(frac - rep.references[2].midpoint()) < 0.02);
    const double prim = std::strtod(rep.primitive_root_density.c_str(), nullptr);
    CHECK(std::abs(prim - rep.references[1].midpoint()) < 0.02);
}

TEST_CASE("golomb survey") {
    GolombOptions opts;
    opts.with_reference = false;
    // r = 1 counts primitive roots, the same count as index 1 in the E(2) survey
    const auto g = run_golomb_survey(2, 1, 50000, opts);
    const auto s = run_survey(2, 50000);
    CHECK(g.count == s.index_histogram.at(1));
    CHECK(g.total_primes == s.total_primes + 1);

    for (auto [a, r] : {std::pair<i64, u64>{3, 2}, {5, 4}, {6, 3}, {10, 6}}) {
        const auto rep = run_golomb_survey(a, r, 5000, opts);
        u64 count = 0, eligible = 0, total = 0;
        for (u64 p = 2; p <= 5000; ++p) {
            if (!prime_by_trial_division(p)) continue;
            ++total;
            if (static_cast<u64>(a) % p == 0 || (p - 1) % r != 0) continue;
            ++eligible;
            if (order_by_enumeration(static_cast<u64>(a), p) == (p - 1) / r) ++count;
        }
        CHECK(rep.total_primes == total);
        CHECK(rep.eligible == eligible);
        CHECK(rep.count == count);
        CHECK(rep.count <= rep.eligible);
    }

    CHECK_THROWS_AS(run_golomb_survey(4, 1, 1000), UsageError);
    CHECK_THROWS_AS(run_golomb_survey(1, 1, 1000), UsageError);
    CHECK_THROWS_AS(run_golomb_survey(2, 0, 1000), UsageError);
}

TEST_CASE("golomb survey tracks the constant, including the index-2 case") {
    GolombOptions opts;
    opts.reference_precision = 1e-5;
    const auto rep = run_golomb_survey(2, 2, 300000, opts);
    REQUIRE(rep.reference);
    CHECK(std::abs(std::strtod(rep.density.c_str(), nullptr) - rep.reference->midpoint()) < 0.01);
}

TEST_CASE("lemma checks") {
    const auto rep = lemma_checks(10000);
    CHECK(rep.passed());
    REQUIRE(rep.per_ell.size() == 4);
    const auto& five = rep.per_ell[2];
    CHECK(five.ell == 5);
    CHECK(five.small_index_members > 0);
    CHECK(five.small_index_nonmembers > 0);
    for (const auto& e : rep.per_ell) CHECK(e.index_ge_ell_confirmed_by_traces > 0);

    const auto small = lemma_checks(1000);
    const auto& two = small.per_ell[0];
    u64 want = 0;
    for (u64 p = 3; p <= 1000; ++p) {
        if (prime_by_trial_division(p) && order_by_enumeration(2, p) < p - 1) ++want;
    }
    CHECK(two.members == want);

    CHECK_THROWS_AS(lemma_checks(kLemmaCheckCap + 1), CapacityError);
}

TEST_CASE("fraction rendering") {
    CHECK(fraction_decimal(1, 3, false) == "0.333333333333");
    CHECK(fraction_decimal(1, 3, true) == "0.333333333334");
    CHECK(fraction_decimal(2, 2, false) == "1.000000000000");
    CHECK(fraction_decimal(1, 8, true, 3) == "0.125");
}
