#ifndef CYCLOSCOPE_ARITH_HPP
#define CYCLOSCOPE_ARITH_HPP

// Word-sized integer number theory shared by every module.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace cycloscope {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 e, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (e != 0) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Trial division. The optional table must hold every prime up to sqrt(n) in
// increasing order; without it odd trial divisors are used.
std::vector<PrimePower> factorize(u64 n);
std::vector<PrimePower> factorize(u64 n, std::span<const u32> small_primes);

// Plain Eratosthenes; n must fit in 32 bits.
std::vector<u32> primes_up_to(u64 n);

// Segmented sieve over [lo, hi]; f sees each prime once, in increasing order.
// Memory is O(sqrt(hi) + segment).
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& f);
std::vector<u64> primes_in_range(u64 lo, u64 hi);

}  // namespace cycloscope

#endif
