#include "cycloscope/cyclotomic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "cycloscope/errors.hpp"

namespace cycloscope {

namespace {

void require_prime(u64 n, const char* what) {
    if (!is_prime(n)) throw UsageError(std::string(what) + " = " + std::to_string(n) + " is not prime");
}

void require_distinct_primes(u64 p, u64 ell) {
    require_prime(p, "p");
    require_prime(ell, "ell");
    if (p == ell) throw UsageError("p and ell must differ (got p = ell = " + std::to_string(p) + ")");
    if (ell > std::numeric_limits<u32>::max()) throw CapacityError("ell must fit in 32 bits");
}

u64 order_from_factors(u64 a, u64 p, const std::vector<PrimePower>& factors_of_p_minus_1) {
    u64 k = p - 1;
    for (const auto& [q, e] : factors_of_p_minus_1) {
        for (unsigned i = 0; i < e; ++i) {
            if (powmod(a, k / q, p) != 1) break;
            k /= q;
        }
    }
    return k;
}

// f / (X - t) when t is a root; returns false (leaving f alone) otherwise.
bool divide_out_root(std::vector<u32>& f, u32 t, u32 m) {
    if (f.size() < 2) return false;
    std::vector<u32> q(f.size() - 1);
    u64 carry = 0;
    for (std::size_t k = f.size(); k-- > 1;) {
        carry = (carry * t + f[k]) % m;
        q[k - 1] = static_cast<u32>(carry);
    }
    if ((carry * t + f[0]) % m != 0) return false;
    f = std::move(q);
    return true;
}

// Characteristic polynomial of a square matrix over F_m, via reduction to
// upper Hessenberg form.
Poly charpoly(std::vector<std::vector<u32>> h, u32 m) {
    const std::size_t n = h.size();
    const PrimeField F(m);
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t piv = j + 1;
        while (piv < n && h[piv][j] == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            std::swap(h[piv], h[j + 1]);
            for (auto& row : h) std::swap(row[piv], row[j + 1]);
        }
        const u32 inv = F.inv(h[j + 1][j]);
        for (std::size_t k = j + 2; k < n; ++k) {
            const u32 u = F.mul(h[k][j], inv);
            if (u == 0) continue;
            for (std::size_t c = 0; c < n; ++c) h[k][c] = F.sub(h[k][c], F.mul(u, h[j + 1][c]));
            for (std::size_t r = 0; r < n; ++r) h[r][j + 1] = F.add(h[r][j + 1], F.mul(u, h[r][k]));
        }
    }
    std::vector<Poly> chain;
    chain.reserve(n + 1);
    chain.push_back(Poly::constant(m, 1));
    const Poly x(m, {0, 1});
    for (std::size_t k = 1; k <= n; ++k) {
        Poly next = mul(sub(x, Poly::constant(m, h[k - 1][k - 1])), chain[k - 1]);
        u32 sub_diag = 1;
        for (std::size_t i = 1; i < k; ++i) {
            sub_diag = F.mul(sub_diag, h[k - i][k - i - 1]);
            if (sub_diag == 0) break;
            const u32 c = F.mul(h[k - i - 1][k - 1], sub_diag);
            if (c != 0) next = sub(next, scale(chain[k - i - 1], c));
        }
        chain.push_back(std::move(next));
    }
    return chain.back();
}

TraceMultiset traces_by_gauss_gcd(const CosetPartition& part, u32 ell) {
    const u64 p = part.p;
    const Poly phi = cyclotomic_poly(p, ell);
    // u0 = sum of X^c over coset 0, with X^{p-1} = -(1 + ... + X^{p-2}).
    std::vector<u32> u(p - 1, 0);
    for (u32 c : part.cosets[0]) {
        if (c < p - 1) {
            u[c] = (u[c] + 1) % ell;
        } else {
            for (auto& x : u) x = (x + ell - 1) % ell;
        }
    }
    const Poly u0(ell, std::move(u));

    TraceMultiset out;
    out.ell = ell;
    for (u64 t = 0; t < ell && out.total < part.index; ++t) {
        const Poly g = gcd(phi, sub(u0, Poly::constant(ell, t)));
        const auto deg = static_cast<u64>(g.degree());
        if (deg % part.order != 0) {
            throw InternalError("gcd degree " + std::to_string(deg) + " not divisible by the order " +
                                std::to_string(part.order));
        }
        if (deg != 0) {
            out.counts[static_cast<u32>(t)] = deg / part.order;
            out.total += deg / part.order;
        }
    }
    return out;
}

TraceMultiset traces_by_period_matrix(const CosetPartition& part, u32 ell) {
    const u64 p = part.p;
    const std::size_t s = part.index;
    const auto where = part.coset_of();
    // counts[j][k] = #{x in C_j : x + 1 in C_k}
    std::vector<std::vector<u64>> counts(s, std::vector<u64>(s, 0));
    for (u64 x = 1; x + 1 < p; ++x) ++counts[where[x]][where[x + 1]];
    const u32 minus_one_coset = where[p - 1];

    std::vector<std::vector<u32>> t(s, std::vector<u32>(s));
    const u64 r_mod = part.order % ell;
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t k = 0; k < s; ++k) {
            u64 v = counts[j][k] % ell;
            if (j == minus_one_coset) v = (v + ell - r_mod) % ell;
            t[j][k] = static_cast<u32>(v);
        }
    }
    const auto roots = split_roots(charpoly(std::move(t), ell));
    TraceMultiset out;
    out.ell = ell;
    for (auto [value, mult] : roots) {
        out.counts[value] = mult;
        out.total += mult;
    }
    return out;
}

std::vector<u32> find_distinct_roots(const Poly& g, u32 m, u64 shift) {
    if (g.degree() <= 0) return {};
    if (g.degree() == 1) {
        const Poly mg = make_monic(g);
        return {static_cast<u32>((m - mg.coeff(0)) % m)};
    }
    const u64 half = (m - 1) / 2;
    for (u64 c = shift; c < shift + 4 * static_cast<u64>(m); ++c) {
        const Poly base(m, {c % m, 1});
        const Poly h = gcd(g, sub(powmod(base, half, g), Poly::constant(m, 1)));
        if (h.degree() > 0 && h.degree() < g.degree()) {
            auto left = find_distinct_roots(h, m, c + 1);
            auto right = find_distinct_roots(divrem(g, h).quotient, m, c + 1);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
    }
    throw InternalError("root splitting failed to make progress");
}

}  // namespace

u64 multiplicative_order(u64 a, u64 p) {
    require_prime(p, "p");
    if (a % p == 0) throw UsageError(std::to_string(a) + " is divisible by " + std::to_string(p));
    return order_from_factors(a % p, p, factorize(p - 1));
}

u64 multiplicative_order(u64 a, u64 p, std::span<const u32> small_primes) {
    if (a % p == 0) throw UsageError(std::to_string(a) + " is divisible by " + std::to_string(p));
    return order_from_factors(a % p, p, factorize(p - 1, small_primes));
}

std::vector<u32> CosetPartition::coset_of() const {
    std::vector<u32> where(p, 0);
    for (std::size_t i = 0; i < cosets.size(); ++i) {
        for (u32 x : cosets[i]) where[x] = static_cast<u32>(i);
    }
    return where;
}

CosetPartition coset_partition(u64 p, u64 ell) {
    require_distinct_primes(p, ell);
    if (p > std::numeric_limits<u32>::max()) throw CapacityError("p must fit in 32 bits for coset enumeration");
    CosetPartition part;
    part.p = p;
    part.ell = ell;
    if (p == 2) {
        part.order = 1;
        part.index = 1;
        part.cosets = {{1}};
        return part;
    }
    const u64 step = ell % p;
    std::vector<bool> seen(p, false);
    for (u64 x = 1; x < p; ++x) {
        if (seen[x]) continue;
        std::vector<u32> orbit;
        u64 y = x;
        do {
            seen[y] = true;
            orbit.push_back(static_cast<u32>(y));
            y = y * step % p;
        } while (y != x);
        std::sort(orbit.begin(), orbit.end());
        part.cosets.push_back(std::move(orbit));
    }
    part.order = part.cosets[0].size();
    part.index = part.cosets.size();
    return part;
}

Poly cyclotomic_poly(u64 p, u32 ell) { return Poly(ell, std::vector<u32>(p, 1)); }

TraceMultiset make_trace_multiset(u32 ell, std::span<const u32> traces) {
    TraceMultiset out;
    out.ell = ell;
    for (u32 t : traces) {
        ++out.counts[t % ell];
        ++out.total;
    }
    return out;
}

TraceMultiset trace_multiset(u64 p, u64 ell, TraceMethod method, u64 cap) {
    require_distinct_primes(p, ell);
    if (p > cap) {
        throw CapacityError("p = " + std::to_string(p) + " exceeds the trace cap " + std::to_string(cap));
    }
    const auto l = static_cast<u32>(ell);
    if (p == 2) {
        TraceMultiset out;
        out.ell = l;
        out.counts[l - 1] = 1;
        out.total = 1;
        return out;
    }
    const CosetPartition part = coset_partition(p, ell);
    if (method == TraceMethod::automatic) {
        method = part.index <= kPeriodMatrixMaxIndex ? TraceMethod::period_matrix : TraceMethod::gauss_gcd;
    }
    TraceMultiset out = method == TraceMethod::gauss_gcd ? traces_by_gauss_gcd(part, l)
                                                         : traces_by_period_matrix(part, l);
    if (out.total != part.index) {
        throw InternalError("trace extraction for p = " + std::to_string(p) + ", ell = " + std::to_string(ell) +
                            " found " + std::to_string(out.total) + " of " + std::to_string(part.index) +
                            " factors");
    }
    return out;
}

u64 oracle_seed(u64 p, u64 ell) {
    u64 z = (p << 32) ^ ell;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

FactorList factor_oracle(u64 p, u64 ell, u64 cap) {
    require_distinct_primes(p, ell);
    if (p > cap) {
        throw CapacityError("p = " + std::to_string(p) + " exceeds the oracle cap " + std::to_string(cap));
    }
    const auto l = static_cast<u32>(ell);
    FactorList out;
    out.p = p;
    out.ell = l;
    if (p == 2) {
        out.degree = 1;
        out.factors = {Poly(l, {1, 1})};
        return out;
    }
    const u64 r = multiplicative_order(ell, p);
    out.degree = r;
    const Poly phi = cyclotomic_poly(p, l);
    if (r == p - 1) {
        out.factors = {phi};
        return out;
    }

    // Work in F_l[X]/(X^p - 1), where the l-th power map is u(X) -> u(X^l):
    // coefficient c moves to l*c mod p.
    std::vector<u32> dest(p);
    for (u64 c = 0; c < p; ++c) dest[c] = static_cast<u32>(c * (ell % p) % p);

    const u64 seed = oracle_seed(p, ell);
    std::mt19937_64 rng(seed);
    constexpr int kMaxAttempts = 200;

    std::vector<Poly> pending{phi};
    while (!pending.empty()) {
        Poly f = std::move(pending.back());
        pending.pop_back();
        if (static_cast<u64>(f.degree()) == r) {
            out.factors.push_back(std::move(f));
            continue;
        }
        bool split = false;
        for (int attempt = 0; attempt < kMaxAttempts && !split; ++attempt) {
            std::vector<u32> u(p, 0), acc(p, 0), next(p);
            for (std::ptrdiff_t i = 0; i < f.degree(); ++i) u[i] = static_cast<u32>(rng() % ell);
            // acc = u + u^l + ... + u^{l^{r-1}}, the trace to F_l on every component.
            for (u64 i = 0; i < r; ++i) {
                for (u64 c = 0; c < p; ++c) {
                    acc[c] += u[c];
                    if (acc[c] >= l) acc[c] -= l;
                }
                for (u64 c = 0; c < p; ++c) next[dest[c]] = u[c];
                std::swap(u, next);
            }
            const Poly w = rem(Poly(l, std::move(acc)), f);
            const Poly g = l == 2 ? gcd(f, w)
                                  : gcd(f, sub(powmod(w, (ell - 1) / 2, f), Poly::constant(l, 1)));
            if (g.degree() > 0 && g.degree() < f.degree()) {
                pending.push_back(divrem(f, g).quotient);
                pending.push_back(g);
                split = true;
            }
        }
        if (!split) {
            throw InternalError("factor_oracle failed to split a degree-" + std::to_string(f.degree()) +
                                " factor of Phi_" + std::to_string(p) + " mod " + std::to_string(ell) +
                                " (seed " + std::to_string(seed) + ")");
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const Poly& a, const Poly& b) {
        return a.coeffs_descending() < b.coeffs_descending();
    });
    return out;
}

bool is_irreducible(const Poly& f) {
    if (f.is_constant() || !f.is_monic()) throw UsageError("is_irreducible expects a monic nonconstant polynomial");
    const u32 m = f.modulus();
    const auto n = static_cast<u64>(f.degree());
    if (n == 1) return true;
    const Poly x = rem(Poly(m, {0, 1}), f);
    std::vector<Poly> frob{x};  // frob[i] = X^{l^i} mod f
    for (u64 i = 1; i <= n; ++i) frob.push_back(powmod(frob.back(), m, f));
    if (frob[n] != x) return false;
    for (const auto& [q, e] : factorize(n)) {
        if (gcd(sub(frob[n / q], x), f).degree() != 0) return false;
    }
    return true;
}

std::map<u32, u64> split_roots(const Poly& f) {
    if (f.is_zero()) throw UsageError("split_roots of the zero polynomial");
    const u32 m = f.modulus();
    std::vector<u32> rest = make_monic(f).coeffs();
    std::vector<u32> candidates;
    if (m <= 64) {
        for (u32 t = 0; t < m; ++t) candidates.push_back(t);
    } else {
        const Poly mf = make_monic(f);
        const Poly x(m, {0, 1});
        const Poly distinct = f.degree() > 1 ? gcd(mf, sub(powmod(x, m, mf), x)) : mf;
        candidates = find_distinct_roots(distinct, m, 0);
        std::sort(candidates.begin(), candidates.end());
    }
    std::map<u32, u64> roots;
    for (u32 t : candidates) {
        while (divide_out_root(rest, t, m)) ++roots[t];
    }
    if (rest.size() != 1) {
        throw InternalError("polynomial " + f.to_string() + " does not split over F_" + std::to_string(m));
    }
    return roots;
}

}  // namespace cycloscope
