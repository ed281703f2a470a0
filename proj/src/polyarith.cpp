#include "cycloscope/polyarith.hpp"

#include <algorithm>

#include "cycloscope/errors.hpp"

namespace cycloscope {

PrimeField::PrimeField(u64 modulus) : modulus_(0) {
    if (modulus > std::numeric_limits<u32>::max()) {
        throw CapacityError("field modulus " + std::to_string(modulus) + " does not fit in 32 bits");
    }
    if (!is_prime(modulus)) throw UsageError(std::to_string(modulus) + " is not prime");
    modulus_ = static_cast<u32>(modulus);
}

namespace {

void require_modulus(u32 modulus) {
    if (modulus < 2) throw UsageError("polynomial modulus must be at least 2");
}

void require_same(const Poly& f, const Poly& g) {
    if (f.modulus() != g.modulus()) {
        throw UsageError("modulus mismatch: " + std::to_string(f.modulus()) + " vs " +
                         std::to_string(g.modulus()));
    }
}

void trim(std::vector<u32>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

// out[0 .. a.size()+b.size()-1) = a*b, schoolbook with delayed reduction.
void schoolbook(std::span<const u32> a, std::span<const u32> b, std::span<u32> out, u32 m) {
    const std::size_t n = a.size() + b.size() - 1;
    const u64 sq = static_cast<u64>(m - 1) * (m - 1);
    // Products that fit on top of a reduced accumulator without overflowing.
    const u64 budget = sq == 0 ? std::numeric_limits<u64>::max()
                               : std::max<u64>(1, (std::numeric_limits<u64>::max() - (m - 1)) / sq);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= b.size() ? k - b.size() + 1 : 0;
        const std::size_t hi = std::min(k, a.size() - 1);
        u64 acc = 0;
        u64 pending = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            acc += static_cast<u64>(a[i]) * b[k - i];
            if (++pending == budget) {
                acc %= m;
                pending = 0;
            }
        }
        out[k] = static_cast<u32>(acc % m);
    }
}

void add_into(std::span<u32> dst, std::span<const u32> src, u32 m) {
    for (std::size_t i = 0; i < src.size(); ++i) {
        u64 s = static_cast<u64>(dst[i]) + src[i];
        dst[i] = static_cast<u32>(s >= m ? s - m : s);
    }
}

void sub_into(std::span<u32> dst, std::span<const u32> src, u32 m) {
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = dst[i] >= src[i] ? dst[i] - src[i] : static_cast<u32>(dst[i] + static_cast<u64>(m) - src[i]);
    }
}

// out must hold a.size()+b.size()-1 entries and be zero on entry.
void karatsuba(std::span<const u32> a, std::span<const u32> b, std::span<u32> out, u32 m, std::size_t cutoff) {
    if (a.size() < b.size()) std::swap(a, b);
    if (b.size() < cutoff || b.size() < 2) {
        schoolbook(a, b, out, m);
        return;
    }
    const std::size_t half = (a.size() + 1) / 2;
    if (b.size() <= half) {
        // Unbalanced: split only the longer operand.
        std::vector<u32> part(std::min(half, a.size()) + b.size() - 1);
        karatsuba(a.first(half), b, part, m, cutoff);
        add_into(out, part, m);
        auto a1 = a.subspan(half);
        std::vector<u32> part1(a1.size() + b.size() - 1);
        karatsuba(a1, b, part1, m, cutoff);
        add_into(out.subspan(half), part1, m);
        return;
    }
    auto a0 = a.first(half), a1 = a.subspan(half);
    auto b0 = b.first(half), b1 = b.subspan(half);

    std::vector<u32> z0(2 * half - 1), z2(a1.size() + b1.size() - 1);
    karatsuba(a0, b0, z0, m, cutoff);
    karatsuba(a1, b1, z2, m, cutoff);

    std::vector<u32> sa(a0.begin(), a0.end()), sb(b0.begin(), b0.end());
    add_into(sa, a1, m);
    add_into(sb, b1, m);
    std::vector<u32> z1(2 * half - 1);
    karatsuba(sa, sb, z1, m, cutoff);
    sub_into(z1, z0, m);
    sub_into(std::span<u32>(z1).first(z2.size()), z2, m);

    add_into(out, z0, m);
    add_into(out.subspan(half), z1, m);
    add_into(out.subspan(2 * half), z2, m);
}

}  // namespace

Poly::Poly(u32 modulus, std::vector<u32> coeffs) : modulus_(modulus), coeffs_(std::move(coeffs)) {
    require_modulus(modulus_);
    for (auto& c : coeffs_) c %= modulus_;
    normalize();
}

Poly::Poly(u32 modulus, std::initializer_list<u64> coeffs) : modulus_(modulus) {
    require_modulus(modulus_);
    coeffs_.reserve(coeffs.size());
    for (u64 c : coeffs) coeffs_.push_back(static_cast<u32>(c % modulus_));
    normalize();
}

Poly Poly::constant(u32 modulus, u64 c) { return Poly(modulus, {c}); }

Poly Poly::monomial(u32 modulus, std::size_t degree, u64 c) {
    std::vector<u32> v(degree + 1, 0);
    v[degree] = static_cast<u32>(c % modulus);
    return Poly(modulus, std::move(v));
}

Poly Poly::x_pow_minus_one(u32 modulus, std::size_t n) {
    std::vector<u32> v(n + 1, 0);
    v[n] = 1;
    v[0] = modulus - 1;
    return Poly(modulus, std::move(v));
}

void Poly::normalize() { trim(coeffs_); }

std::string Poly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const u32 c = coeffs_[k];
        if (c == 0) continue;
        const bool negative = modulus_ > 2 && c > modulus_ / 2;
        const u32 mag = negative ? modulus_ - c : c;
        if (negative) {
            out += '-';
        } else if (!out.empty()) {
            out += '+';
        }
        if (mag != 1 || k == 0) out += std::to_string(mag);
        if (k >= 1) out += 'X';
        if (k >= 2) out += '^' + std::to_string(k);
    }
    return out;
}

Poly add(const Poly& f, const Poly& g) {
    require_same(f, g);
    const u32 m = f.modulus();
    std::vector<u32> out(std::max(f.coeffs().size(), g.coeffs().size()), 0);
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.begin());
    add_into(out, g.coeffs(), m);
    return Poly(m, std::move(out));
}

Poly sub(const Poly& f, const Poly& g) {
    require_same(f, g);
    const u32 m = f.modulus();
    std::vector<u32> out(std::max(f.coeffs().size(), g.coeffs().size()), 0);
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.begin());
    sub_into(out, g.coeffs(), m);
    return Poly(m, std::move(out));
}

Poly neg(const Poly& f) { return sub(Poly::zero(f.modulus()), f); }

Poly scale(const Poly& f, u32 c) {
    const u32 m = f.modulus();
    std::vector<u32> out(f.coeffs());
    for (auto& x : out) x = static_cast<u32>(static_cast<u64>(x) * (c % m) % m);
    return Poly(m, std::move(out));
}

Poly mul_schoolbook(const Poly& f, const Poly& g) {
    require_same(f, g);
    if (f.is_zero() || g.is_zero()) return Poly::zero(f.modulus());
    std::vector<u32> out(f.coeffs().size() + g.coeffs().size() - 1);
    schoolbook(f.coeffs(), g.coeffs(), out, f.modulus());
    return Poly(f.modulus(), std::move(out));
}

Poly mul(const Poly& f, const Poly& g, std::size_t karatsuba_cutoff) {
    require_same(f, g);
    if (f.is_zero() || g.is_zero()) return Poly::zero(f.modulus());
    std::vector<u32> out(f.coeffs().size() + g.coeffs().size() - 1, 0);
    karatsuba(f.coeffs(), g.coeffs(), out, f.modulus(), std::max<std::size_t>(karatsuba_cutoff, 2));
    return Poly(f.modulus(), std::move(out));
}

DivRem divrem(const Poly& f, const Poly& g) {
    require_same(f, g);
    if (g.is_zero()) throw UsageError("division by the zero polynomial");
    const u32 m = f.modulus();
    if (f.degree() < g.degree()) return {Poly::zero(m), f};

    std::vector<u32> r(f.coeffs());
    const auto& gc = g.coeffs();
    const std::size_t dg = gc.size() - 1;
    const u32 inv_lead = static_cast<u32>(cycloscope::powmod(gc.back(), m - 2, m));
    std::vector<u32> q(r.size() - dg, 0);
    for (std::size_t i = r.size() - 1 - dg + 1; i-- > 0;) {
        const u32 top = r[i + dg];
        if (top == 0) continue;
        const u32 c = static_cast<u32>(static_cast<u64>(top) * inv_lead % m);
        q[i] = c;
        const u64 nc = m - c;
        u32* dst = r.data() + i;
        for (std::size_t j = 0; j < dg; ++j) {
            dst[j] = static_cast<u32>((dst[j] + nc * gc[j]) % m);
        }
        dst[dg] = 0;
    }
    r.resize(dg);
    return {Poly(m, std::move(q)), Poly(m, std::move(r))};
}

Poly rem(const Poly& f, const Poly& g) { return std::move(divrem(f, g).remainder); }

Poly make_monic(const Poly& f) {
    if (f.is_zero() || f.is_monic()) return f;
    const u32 m = f.modulus();
    return scale(f, static_cast<u32>(cycloscope::powmod(f.lead(), m - 2, m)));
}

Poly gcd(const Poly& f, const Poly& g) {
    require_same(f, g);
    if (f.is_zero() && g.is_zero()) throw UsageError("gcd of two zero polynomials");
    Poly a = make_monic(f);
    Poly b = make_monic(g);
    while (!b.is_zero()) {
        Poly r = rem(a, b);
        a = std::move(b);
        b = make_monic(r);
    }
    return a;
}

FpElem eval(const Poly& f, const FpElem& x) {
    if (f.modulus() != x.modulus()) throw UsageError("modulus mismatch in eval");
    const u32 m = f.modulus();
    u64 acc = 0;
    const auto& c = f.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) acc = (acc * x.value() + c[k]) % m;
    return FpElem(acc, m);
}

// ---- Natural ----

Natural::Natural(u64 v) {
    while (v != 0) {
        limbs_.push_back(static_cast<u32>(v));
        v >>= 32;
    }
}

void Natural::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

Natural Natural::from_decimal(std::string_view digits) {
    if (digits.empty()) throw UsageError("empty exponent");
    Natural n;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw UsageError("exponent digits must be 0-9");
        n = n.times(10) + Natural(static_cast<u64>(ch - '0'));
    }
    return n;
}

Natural Natural::power(u64 base, u64 exp) {
    if (base > std::numeric_limits<u32>::max()) throw CapacityError("Natural::power base exceeds 32 bits");
    Natural n(1);
    for (u64 i = 0; i < exp; ++i) n = n.times(static_cast<u32>(base));
    return n;
}

std::size_t Natural::bit_length() const noexcept {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) + (32 - static_cast<std::size_t>(__builtin_clz(limbs_.back())));
}

bool Natural::bit(std::size_t i) const noexcept {
    const std::size_t w = i / 32;
    return w < limbs_.size() && ((limbs_[w] >> (i % 32)) & 1U) != 0;
}

Natural Natural::operator+(const Natural& other) const {
    Natural out;
    const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
    out.limbs_.resize(n + 1, 0);
    u64 carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        u64 s = carry;
        if (i < limbs_.size()) s += limbs_[i];
        if (i < other.limbs_.size()) s += other.limbs_[i];
        out.limbs_[i] = static_cast<u32>(s);
        carry = s >> 32;
    }
    out.limbs_[n] = static_cast<u32>(carry);
    out.trim();
    return out;
}

Natural Natural::minus(u32 v) const {
    Natural out = *this;
    u64 borrow = v;
    for (std::size_t i = 0; i < out.limbs_.size() && borrow != 0; ++i) {
        const u64 cur = out.limbs_[i];
        if (cur >= borrow) {
            out.limbs_[i] = static_cast<u32>(cur - borrow);
            borrow = 0;
        } else {
            out.limbs_[i] = static_cast<u32>((cur + (1ULL << 32)) - borrow);
            borrow = 1;
        }
    }
    if (borrow != 0) throw UsageError("Natural subtraction underflow");
    out.trim();
    return out;
}

Natural Natural::times(u32 v) const {
    Natural out;
    out.limbs_.resize(limbs_.size() + 1, 0);
    u64 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        const u64 p = static_cast<u64>(limbs_[i]) * v + carry;
        out.limbs_[i] = static_cast<u32>(p);
        carry = p >> 32;
    }
    out.limbs_[limbs_.size()] = static_cast<u32>(carry);
    out.trim();
    return out;
}

Natural Natural::divided_by(u32 v) const {
    if (v == 0) throw UsageError("Natural division by zero");
    Natural out;
    out.limbs_.resize(limbs_.size(), 0);
    u64 r = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        const u64 cur = (r << 32) | limbs_[i];
        out.limbs_[i] = static_cast<u32>(cur / v);
        r = cur % v;
    }
    out.trim();
    return out;
}

std::string Natural::to_decimal() const {
    if (limbs_.empty()) return "0";
    std::string digits;
    Natural n = *this;
    while (!n.is_zero()) {
        // Peel nine digits at a time.
        u64 r = 0;
        Natural q;
        q.limbs_.resize(n.limbs_.size(), 0);
        for (std::size_t i = n.limbs_.size(); i-- > 0;) {
            const u64 cur = (r << 32) | n.limbs_[i];
            q.limbs_[i] = static_cast<u32>(cur / 1000000000ULL);
            r = cur % 1000000000ULL;
        }
        q.trim();
        std::string chunk = std::to_string(r);
        if (!q.is_zero()) chunk.insert(0, 9 - chunk.size(), '0');
        digits.insert(0, chunk);
        n = std::move(q);
    }
    return digits;
}

Poly powmod(const Poly& f, const Natural& e, const Poly& m) {
    require_same(f, m);
    if (m.is_constant()) throw UsageError("powmod modulus must be nonconstant");
    Poly result = rem(Poly::constant(f.modulus(), 1), m);
    if (e.is_zero()) return result;
    const Poly base = rem(f, m);
    for (std::size_t i = e.bit_length(); i-- > 0;) {
        result = rem(mul(result, result), m);
        if (e.bit(i)) result = rem(mul(result, base), m);
    }
    return result;
}

Poly powmod(const Poly& f, u64 e, const Poly& m) { return powmod(f, Natural(e), m); }

}  // namespace cycloscope
