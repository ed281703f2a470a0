#ifndef CYCLOSCOPE_CYCLOTOMIC_HPP
#define CYCLOSCOPE_CYCLOTOMIC_HPP

// The cyclotomic polynomial Phi_p over F_l: cyclotomic cosets, the multiset of
// traces of its irreducible factors, and a randomized factorization oracle.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cycloscope/arith.hpp"
#include "cycloscope/polyarith.hpp"

namespace cycloscope {

inline constexpr u64 kDefaultOracleCap = 3000;
inline constexpr u64 kDefaultTraceCap = 200000;

// Least k >= 1 with a^k = 1 (mod p). Throws UsageError when p divides a.
u64 multiplicative_order(u64 a, u64 p);
// Same, factoring p-1 with a table holding every prime up to sqrt(p).
u64 multiplicative_order(u64 a, u64 p, std::span<const u32> small_primes);

/// Orbits of multiplication by l on (Z/p)^*. Coset 0 contains 1; the rest are
/// ordered by smallest element, and each coset is sorted.
struct CosetPartition {
    u64 p = 0;
    u64 ell = 0;
    u64 order = 0;  // r, the multiplicative order of l mod p
    u64 index = 0;  // s = (p-1)/r
    std::vector<std::vector<u32>> cosets;

    // coset_of()[x] is the coset holding residue x, for 1 <= x < p.
    std::vector<u32> coset_of() const;
};

CosetPartition coset_partition(u64 p, u64 ell);

// 1 + X + ... + X^{p-1} over F_l.
Poly cyclotomic_poly(u64 p, u32 ell);

/// Traces of the irreducible factors of Phi_p mod l, as value -> multiplicity.
struct TraceMultiset {
    u32 ell = 0;
    std::map<u32, u64> counts;  // only nonzero multiplicities are stored
    u64 total = 0;

    u64 multiplicity(u32 t) const {
        auto it = counts.find(t);
        return it == counts.end() ? 0 : it->second;
    }
    friend bool operator==(const TraceMultiset&, const TraceMultiset&) = default;
};

TraceMultiset make_trace_multiset(u32 ell, std::span<const u32> traces);

enum class TraceMethod {
    // gcd(Phi_p, u0 - t) for every t, u0 the Gauss-period element of coset 0.
    gauss_gcd,
    // Characteristic polynomial of multiplication by the coset-0 period on the
    // period basis, built from cyclotomic numbers and reduced mod l.
    period_matrix,
    // period_matrix when the index is small, gauss_gcd otherwise.
    automatic,
};

// Index at or below which TraceMethod::automatic picks the period matrix.
inline constexpr u64 kPeriodMatrixMaxIndex = 256;

TraceMultiset trace_multiset(u64 p, u64 ell, TraceMethod method = TraceMethod::automatic,
                             u64 cap = kDefaultTraceCap);

/// Irreducible factors of Phi_p mod l in canonical order: sorted by their
/// coefficient sequences read from the top degree down.
struct FactorList {
    u64 p = 0;
    u32 ell = 0;
    u64 degree = 0;  // r
    std::vector<Poly> factors;
};

FactorList factor_oracle(u64 p, u64 ell, u64 cap = kDefaultOracleCap);

// The seed factor_oracle uses for (p, l): splitmix64 of (p << 32) ^ l.
u64 oracle_seed(u64 p, u64 ell);

// Rabin's test. f must be monic and nonconstant.
bool is_irreducible(const Poly& f);

// Roots in F_l, with multiplicity, of a polynomial that splits into linear
// factors over F_l. Throws InternalError when it does not split.
std::map<u32, u64> split_roots(const Poly& f);

}  // namespace cycloscope

#endif
