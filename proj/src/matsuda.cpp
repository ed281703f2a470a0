#include "cycloscope/matsuda.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "cycloscope/errors.hpp"

namespace cycloscope {

namespace {

void require_prime(u64 n, const char* what) {
    if (!is_prime(n)) {
        throw UsageError(std::string(what) == "p" ? std::to_string(n) + " is not prime"
                                                  : std::string(what) + " = " + std::to_string(n) + " is not prime");
    }
}

struct KnapsackStep {
    u64 copies = 0;       // copies of this layer's value; 0 means carried over
    u32 from = 0;         // sum before this layer
    bool from_empty = false;
    bool reached = false;
};

// Low-order coefficients (constant, X^1) of a product, updated one factor at a time.
struct LowTerms {
    u32 c0;
    u32 c1;
};

std::optional<std::vector<u32>> first_zero_sum_free(u32 ell, u64 n) {
    std::vector<u32> seq(n, 0);
    const u64 full = (1ULL << ell) - 1;
    auto rotate = [&](u64 mask, u32 by) { return ((mask << by) | (mask >> (ell - by))) & full; };
    while (true) {
        u64 reach = 0;  // bit k: some nonempty subsequence sums to k
        for (u32 x : seq) reach |= rotate(reach, x) | (1ULL << x);
        if ((reach & 1ULL) == 0) return seq;
        std::size_t i = 0;
        while (i < n && ++seq[i] == ell) seq[i++] = 0;
        if (i == n) return std::nullopt;
    }
}

}  // namespace

Poly reversal(const Poly& f) {
    if (f.is_zero()) throw UsageError("reversal of the zero polynomial");
    std::vector<u32> c(f.coeffs().rbegin(), f.coeffs().rend());
    return Poly(f.modulus(), std::move(c));
}

FpElem trace(const Poly& f) {
    if (f.is_constant()) throw UsageError("trace of a constant polynomial");
    const u32 m = f.modulus();
    const auto n = static_cast<std::size_t>(f.degree());
    const u64 inv = powmod(f.lead(), m - 2, m);
    return FpElem(static_cast<u64>(m - f.coeff(n - 1)) % m * inv % m, m);
}

bool in_m_ring(const Poly& f) { return f.coeff(1) == 0; }

std::optional<ZeroSumWitness> zero_sum_subset(const TraceMultiset& t) {
    const u32 ell = t.ell;
    if (ell < 2) throw UsageError("trace multiset has no modulus");
    if (t.counts.size() * static_cast<u64>(ell) > 50'000'000ULL) {
        throw CapacityError("zero-sum table too large for l = " + std::to_string(ell));
    }
    std::vector<std::pair<u32, u64>> values;
    for (auto [v, m] : t.counts) {
        if (m > 0) values.emplace_back(v % ell, m);
    }
    std::vector<std::vector<KnapsackStep>> layers;
    std::vector<bool> reach(ell, false);  // nonempty sub-multisets seen so far
    for (const auto& [v, mult] : values) {
        std::vector<KnapsackStep> layer(ell);
        for (u32 s = 0; s < ell; ++s) {
            if (reach[s]) layer[s] = {0, s, false, true};
        }
        const u64 max_copies = std::min<u64>(mult, ell);
        for (u64 c = 1; c <= max_copies; ++c) {
            const u64 add = c % ell * v % ell;
            // The empty sub-multiset first, then previous sums in increasing order.
            const auto target = static_cast<u32>(add);
            if (!layer[target].reached) layer[target] = {c, 0, true, true};
            for (u32 s = 0; s < ell; ++s) {
                if (!reach[s]) continue;
                const auto dst = static_cast<u32>((s + add) % ell);
                if (!layer[dst].reached) layer[dst] = {c, s, false, true};
            }
        }
        layers.push_back(layer);
        for (u32 s = 0; s < ell; ++s) reach[s] = layer[s].reached;
        if (reach[0]) {
            ZeroSumWitness w;
            u32 sum = 0;
            for (std::size_t i = layers.size(); i-- > 0;) {
                const KnapsackStep& step = layers[i][sum];
                if (step.copies != 0) w.chosen[values[i].first] = step.copies;
                if (step.from_empty) break;
                sum = step.from;
            }
            return w;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::member: return "member";
        case Verdict::nonmember: return "nonmember";
        case Verdict::undecided: return "undecided";
    }
    return "?";
}

std::string_view to_string(Reason r) {
    switch (r) {
        case Reason::self_prime: return "self_prime";
        case Reason::primitive_root: return "primitive_root";
        case Reason::index_ge_ell: return "index_ge_ell";
        case Reason::zero_sum_subset: return "zero_sum_subset";
        case Reason::no_zero_sum: return "no_zero_sum";
        case Reason::deep_test_skipped: return "deep_test_skipped";
    }
    return "?";
}

namespace {

Witness build_witness(u64 p, u32 ell, const MembershipOptions& opts, const std::optional<TraceMultiset>& expected) {
    const FactorList fl = factor_oracle(p, ell, opts.oracle_cap);
    std::vector<u32> traces;
    for (const auto& f : fl.factors) traces.push_back(trace(f).value());
    const TraceMultiset from_factors = make_trace_multiset(ell, traces);
    if (expected && !(*expected == from_factors)) {
        throw InternalError("trace multiset disagrees with the factor oracle at p = " + std::to_string(p));
    }
    const auto zs = zero_sum_subset(from_factors);
    if (!zs) throw InternalError("no zero-sum subset among factor traces at p = " + std::to_string(p));

    std::map<u32, u64> wanted = zs->chosen;
    Poly traceless = Poly::constant(ell, 1);
    Poly rest(ell, {ell - 1, 1});  // X - 1
    for (std::size_t i = 0; i < fl.factors.size(); ++i) {
        auto it = wanted.find(traces[i]);
        if (it != wanted.end() && it->second > 0) {
            --it->second;
            traceless = mul(traceless, fl.factors[i]);
        } else {
            rest = mul(rest, fl.factors[i]);
        }
    }
    Witness w{make_monic(reversal(rest)), make_monic(reversal(traceless))};
    if (w.g.degree() < w.h.degree()) std::swap(w.g, w.h);
    if (mul(w.g, w.h) != Poly::x_pow_minus_one(ell, p) || !in_m_ring(w.g) || !in_m_ring(w.h) ||
        w.g.is_constant() || w.h.is_constant()) {
        throw InternalError("witness construction failed at p = " + std::to_string(p));
    }
    return w;
}

}  // namespace

MembershipResult e_membership(u64 p, u64 ell, bool want_witness, const MembershipOptions& opts) {
    require_prime(p, "p");
    require_prime(ell, "ell");
    if (ell > std::numeric_limits<u32>::max()) throw CapacityError("ell must fit in 32 bits");
    MembershipResult res;
    res.p = p;
    res.ell = ell;
    if (p == ell) {
        res.verdict = Verdict::nonmember;
        res.reason = Reason::self_prime;
        return res;
    }
    res.order = p == 2 ? 1 : multiplicative_order(ell, p);
    res.index = (p - 1) / res.order;

    std::optional<TraceMultiset> traces;
    if (res.index == 1) {
        res.verdict = Verdict::nonmember;
        res.reason = Reason::primitive_root;
        return res;
    }
    if (res.index >= ell) {
        res.verdict = Verdict::member;
        res.reason = Reason::index_ge_ell;
    } else {
        traces = trace_multiset(p, ell, TraceMethod::automatic, opts.trace_cap);
        res.zero_sum = zero_sum_subset(*traces);
        res.verdict = res.zero_sum ? Verdict::member : Verdict::nonmember;
        res.reason = res.zero_sum ? Reason::zero_sum_subset : Reason::no_zero_sum;
    }
    if (res.verdict == Verdict::member && want_witness) {
        if (p > opts.oracle_cap) {
            res.note = "witness omitted: p exceeds the oracle cap " + std::to_string(opts.oracle_cap);
        } else {
            res.witness = build_witness(p, static_cast<u32>(ell), opts, traces);
        }
    }
    return res;
}

bool brute_force_membership(u64 p, u64 ell, u64 oracle_cap) {
    require_prime(p, "p");
    require_prime(ell, "ell");
    const auto l = static_cast<u32>(ell);
    if (p == ell) {
        // X^l - 1 = (X - 1)^l; the X^1 coefficient of (X - 1)^k is k(-1)^{k-1},
        // which vanishes for no 0 < k < l.
        return false;
    }
    const FactorList fl = factor_oracle(p, ell, oracle_cap);
    std::vector<Poly> pool = fl.factors;
    pool.emplace_back(Poly(l, {l - 1, 1}));
    const std::size_t n = pool.size();
    const PrimeField F(l);

    if (n <= kMaxEnumeratedFactors) {
        // Gray-code walk over every subset, tracking the constant and X^1
        // coefficients of the subset product and its degree.
        std::vector<u32> a0(n), a1(n), inv0(n);
        std::vector<u64> deg(n);
        for (std::size_t i = 0; i < n; ++i) {
            a0[i] = pool[i].coeff(0);
            a1[i] = pool[i].coeff(1);
            inv0[i] = F.inv(a0[i]);
            deg[i] = static_cast<u64>(pool[i].degree());
        }
        // X^p - 1: constant -1, X^1 coefficient 0.
        const u32 total0 = l - 1;
        LowTerms cur{1, 0};
        u64 cur_deg = 0;
        u64 mask = 0;
        const u64 limit = 1ULL << n;
        for (u64 k = 1; k < limit; ++k) {
            const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
            mask ^= 1ULL << bit;
            if (mask & (1ULL << bit)) {
                cur = {F.mul(cur.c0, a0[bit]), F.add(F.mul(cur.c0, a1[bit]), F.mul(cur.c1, a0[bit]))};
                cur_deg += deg[bit];
            } else {
                const u32 c0 = F.mul(cur.c0, inv0[bit]);
                cur = {c0, F.mul(F.sub(cur.c1, F.mul(c0, a1[bit])), inv0[bit])};
                cur_deg -= deg[bit];
            }
            if (mask == limit - 1 || cur_deg == 0) continue;
            if (cur.c1 != 0 || cur_deg == 1) continue;
            const u32 h0 = F.mul(total0, F.inv(cur.c0));
            const u32 h1 = F.mul(F.sub(0, F.mul(cur.c1, h0)), F.inv(cur.c0));
            if (h1 == 0 && p - cur_deg != 1) return true;
        }
        return false;
    }

    // Too many factors to walk subsets one by one. The X^1 coefficient of a
    // product with nonzero constant term vanishes iff the sum of a1/a0 over its
    // factors does, so sweep every reachable (sum, nonempty, proper) class.
    // reach[sum][nonempty][proper]
    std::vector<std::array<std::array<bool, 2>, 2>> reach(l), next(l);
    reach[0][0][0] = true;
    for (std::size_t i = 0; i < n; ++i) {
        const u32 v = F.mul(pool[i].coeff(1), F.inv(pool[i].coeff(0)));
        for (auto& a : next) a = {};
        for (u32 s = 0; s < l; ++s) {
            for (int ne = 0; ne < 2; ++ne) {
                for (int pr = 0; pr < 2; ++pr) {
                    if (!reach[s][ne][pr]) continue;
                    next[F.add(s, v)][1][pr] = true;  // take factor i
                    next[s][ne][1] = true;            // leave factor i out
                }
            }
        }
        std::swap(reach, next);
    }
    return reach[0][1][1];
}

bool davenport_brute(u64 ell, u64 n) {
    if (!is_prime(ell)) throw UsageError("ell = " + std::to_string(ell) + " is not prime");
    if (ell > 7 || n > ell) throw CapacityError("Davenport enumeration is limited to l <= 7 and n <= l");
    if (n == 0) throw UsageError("sequence length must be positive");
    return !first_zero_sum_free(static_cast<u32>(ell), n).has_value();
}

DavenportReport davenport_report(u64 ell) {
    DavenportReport r;
    r.ell = ell;
    r.length_ell_forces_zero_sum = davenport_brute(ell, ell);
    if (ell >= 2) {
        auto free_seq = first_zero_sum_free(static_cast<u32>(ell), ell - 1);
        r.length_ell_minus_one_forces_zero_sum = !free_seq.has_value();
        if (free_seq) r.counterexample = *free_seq;
    }
    return r;
}

}  // namespace cycloscope
