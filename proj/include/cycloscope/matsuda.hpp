#ifndef CYCLOSCOPE_MATSUDA_HPP
#define CYCLOSCOPE_MATSUDA_HPP

// F_l[X;M] for M = <2,3>: polynomials with no X^1 term. Decides whether X^p - 1
// is reducible there, with an explicit two-factor witness.

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cycloscope/cyclotomic.hpp"
#include "cycloscope/polyarith.hpp"

namespace cycloscope {

// X^deg f * f(1/X), i.e. the coefficient sequence reversed. f must be nonzero.
Poly reversal(const Poly& f);

// -a_{n-1}/a_n. f must be nonconstant.
FpElem trace(const Poly& f);

// True when the X^1 coefficient is zero (so f lies in F_l[X;M]).
bool in_m_ring(const Poly& f);

/// A nonempty sub-multiset of trace values summing to 0 mod l.
struct ZeroSumWitness {
    std::map<u32, u64> chosen;
};

// Bounded knapsack over Z/l. Values are scanned in increasing order and each
// is tried with the fewest copies first; the first zero-sum found is returned.
std::optional<ZeroSumWitness> zero_sum_subset(const TraceMultiset& t);

enum class Verdict { member, nonmember, undecided };

enum class Reason {
    self_prime,         // p = l
    primitive_root,     // index 1: Phi_p irreducible with trace -1
    index_ge_ell,       // index >= l: zero-sum subset guaranteed
    zero_sum_subset,    // found among the factor traces
    no_zero_sum,        // none among the factor traces
    deep_test_skipped,  // survey only
};

std::string_view to_string(Verdict v);
std::string_view to_string(Reason r);

struct Witness {
    Poly g;
    Poly h;
};

struct MembershipResult {
    u64 p = 0;
    u64 ell = 0;
    u64 order = 0;
    u64 index = 0;
    Verdict verdict = Verdict::undecided;
    Reason reason = Reason::deep_test_skipped;
    std::optional<ZeroSumWitness> zero_sum;
    std::optional<Witness> witness;
    std::optional<std::string> note;
};

struct MembershipOptions {
    u64 oracle_cap = kDefaultOracleCap;
    u64 trace_cap = kDefaultTraceCap;
};

// Whether X^p - 1 is reducible in F_l[X;M]. With want_witness and p within the
// oracle cap, also returns g, h in F_l[X;M], both nonconstant, with g*h = X^p - 1.
MembershipResult e_membership(u64 p, u64 ell, bool want_witness, const MembershipOptions& opts = {});

// Exhaustive referee: factors X^p - 1 with the oracle and looks for a split
// into two factors with zero X^1 coefficient.
bool brute_force_membership(u64 p, u64 ell, u64 oracle_cap = kDefaultOracleCap);

// Largest pool (irreducible factors of X^p - 1) enumerated subset by subset.
inline constexpr u64 kMaxEnumeratedFactors = 24;

// True when every length-n sequence over F_l has a nonempty zero-sum subsequence.
bool davenport_brute(u64 ell, u64 n);

struct DavenportReport {
    u64 ell = 0;
    bool length_ell_forces_zero_sum = false;
    bool length_ell_minus_one_forces_zero_sum = true;
    std::vector<u32> counterexample;  // a zero-sum-free length-(l-1) sequence, when found
    bool confirms() const { return length_ell_forces_zero_sum && !length_ell_minus_one_forces_zero_sum; }
};

DavenportReport davenport_report(u64 ell);

}  // namespace cycloscope

#endif
