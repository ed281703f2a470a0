#include "cycloscope/arith.hpp"

#include <algorithm>
#include <cmath>

namespace cycloscope {

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    unsigned twos = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++twos;
    }
    // These bases are sufficient for every n < 2^64.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < twos; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

void strip(u64& n, u64 q, std::vector<PrimePower>& out) {
    unsigned e = 0;
    while (n % q == 0) {
        n /= q;
        ++e;
    }
    if (e != 0) out.push_back({q, e});
}

}  // namespace

std::vector<PrimePower> factorize(u64 n) {
    std::vector<PrimePower> out;
    if (n <= 1) return out;
    strip(n, 2, out);
    for (u64 q = 3; q * q <= n; q += 2) {
        if (n % q == 0) strip(n, q, out);
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::vector<PrimePower> factorize(u64 n, std::span<const u32> small_primes) {
    std::vector<PrimePower> out;
    if (n <= 1) return out;
    for (u32 q : small_primes) {
        if (static_cast<u64>(q) * q > n) break;
        if (n % q == 0) strip(n, q, out);
    }
    if (n > 1) {
        if (!small_primes.empty() && static_cast<u64>(small_primes.back()) * small_primes.back() < n) {
            // Table too short for this n; finish with plain trial division.
            auto rest = factorize(n);
            out.insert(out.end(), rest.begin(), rest.end());
        } else {
            out.push_back({n, 1});
        }
    }
    return out;
}

std::vector<u32> primes_up_to(u64 n) {
    std::vector<u32> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<u32>(i));
        for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

namespace {

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

constexpr u64 kSegment = 1 << 18;

}  // namespace

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& f) {
    if (lo < 2) lo = 2;
    if (hi < lo) return;
    const auto base = primes_up_to(isqrt(hi));
    std::vector<char> seg;
    for (u64 start = lo; start <= hi; start += kSegment) {
        const u64 end = std::min(hi, start + kSegment - 1);
        seg.assign(end - start + 1, 1);
        for (u64 q : base) {
            if (q * q > end) break;
            u64 first = std::max(q * q, (start + q - 1) / q * q);
            for (u64 j = first; j <= end; j += q) seg[j - start] = 0;
        }
        for (u64 n = start; n <= end; ++n) {
            if (seg[n - start]) f(n);
        }
        if (end == hi) break;
    }
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); });
    return out;
}

}  // namespace cycloscope
