#ifndef CYCLOSCOPE_SURVEY_HPP
#define CYCLOSCOPE_SURVEY_HPP

// Prime surveys: E(l) status and index of l over all p <= N, order conditions
// for Golomb's variant, and exhaustive checks of the index lemmas.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cycloscope/densities.hpp"
#include "cycloscope/matsuda.hpp"

namespace cycloscope {

inline constexpr u64 kDefaultSieveCap = 100'000'000;
inline constexpr u64 kDefaultDeepLimit = 100'000;
inline constexpr u64 kDefaultChunk = u64{1} << 16;
inline constexpr u64 kLemmaCheckCap = 100'000;

// kDefaultSieveCap unless CYCLOSCOPE_MAX_SIEVE holds a positive integer.
u64 sieve_cap();

std::vector<u64> sieve_primes(u64 lo, u64 hi);

struct PrimeClassification {
    u64 p = 0;
    u64 order = 0;
    u64 index = 0;
    Verdict e_status = Verdict::undecided;
    Reason reason = Reason::deep_test_skipped;
};

// s = 1: nonmember. s >= l: member. Otherwise the trace test when p <= deep_limit.
PrimeClassification classify_prime(u64 p, u64 ell, u64 deep_limit);

struct SurveyOptions {
    u64 deep_limit = kDefaultDeepLimit;
    unsigned threads = 0;  // 0: hardware concurrency
    u64 chunk = kDefaultChunk;
    double reference_precision = 1e-8;
    std::ostream* progress = nullptr;
};

struct SurveyReport {
    u64 ell = 0;
    u64 limit = 0;
    u64 deep_limit = 0;
    u64 total_primes = 0;
    u64 members = 0;
    u64 nonmembers = 0;
    u64 undecided = 0;
    std::map<u64, u64> index_histogram;
    std::map<std::string, u64> reasons;
    // Fixed decimals; lower rounded down, upper rounded up.
    std::string member_density;
    std::string member_density_upper;
    std::string primitive_root_density;
    std::vector<ConstantEstimate> references;
    double elapsed_seconds = 0;  // not part of the machine-readable report
};

SurveyReport run_survey(u64 ell, u64 limit, const SurveyOptions& opts = {});

struct GolombReport {
    i64 a = 0;
    u64 r = 0;
    u64 limit = 0;
    u64 total_primes = 0;
    u64 eligible = 0;  // p = 1 mod r, p not dividing a
    u64 count = 0;     // eligible with ord_p(a) = (p - 1)/r
    std::string density;
    std::optional<ConstantEstimate> reference;
    double elapsed_seconds = 0;
};

struct GolombOptions {
    unsigned threads = 0;
    u64 chunk = kDefaultChunk;
    double reference_precision = 1e-6;
    bool with_reference = true;
    std::ostream* progress = nullptr;
};

GolombReport run_golomb_survey(i64 a, u64 r, u64 limit, const GolombOptions& opts = {});

struct LemmaCounterexample {
    u64 ell = 0;
    u64 p = 0;
    u64 index = 0;
    std::string claim;
};

struct LemmaEllReport {
    u64 ell = 0;
    u64 primes = 0;
    u64 members = 0;
    u64 index_ge_ell = 0;
    u64 index_ge_ell_confirmed_by_traces = 0;
    u64 small_index_members = 0;     // 2 <= s < l
    u64 small_index_nonmembers = 0;  // 2 <= s < l
};

struct LemmaReport {
    u64 limit = 0;
    std::vector<LemmaEllReport> per_ell;
    std::vector<LemmaCounterexample> counterexamples;
    bool passed() const { return counterexamples.empty(); }
};

// For l in {2,3,5,7}: s >= l implies membership, confirmed from the factor
// traces whenever s <= kPeriodMatrixMaxIndex; for l in {2,3}: member iff s >= 2.
LemmaReport lemma_checks(u64 limit, unsigned threads = 0, u64 cap = kLemmaCheckCap);

std::string fraction_decimal(u64 num, u64 den, bool round_up, int digits = 12);

}  // namespace cycloscope

#endif
