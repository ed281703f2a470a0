#include "cycloscope/densities.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "cycloscope/errors.hpp"

namespace cycloscope {

namespace {

constexpr mpfr_prec_t kBits = 128;
constexpr int kDigits = 20;
const char* const kArithmetic = "mpfr-128 outward rounding";

class Real {
public:
    Real() {
        mpfr_init2(v_, kBits);
        mpfr_set_ui(v_, 0, MPFR_RNDN);
    }
    explicit Real(unsigned long x) : Real() { mpfr_set_ui(v_, x, MPFR_RNDN); }
    ~Real() { mpfr_clear(v_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

class Rational {
public:
    Rational() { mpq_init(q_); }
    ~Rational() { mpq_clear(q_); }
    Rational(const Rational&) = delete;
    Rational& operator=(const Rational&) = delete;
    mpq_ptr get() { return q_; }
    mpq_srcptr get() const { return q_; }

private:
    mpq_t q_;
};

std::string render(mpfr_srcptr x, mpfr_rnd_t rnd) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, rnd == MPFR_RNDD ? "%.*RDf" : "%.*RUf", kDigits, x);
    std::string s(buf);
    mpfr_free_str(buf);
    if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s = s.substr(1);
    return s;
}

void check_precision(double precision) {
    if (!(precision >= kMinPrecision) || !(precision <= 1.0)) {
        std::ostringstream os;
        os << "precision " << precision << " outside [1e-12, 1]";
        throw UsageError(os.str());
    }
}

// Rendering costs at most 1e-20 per endpoint.
bool width_ok(mpfr_srcptr lo, mpfr_srcptr hi, double precision) {
    Real w;
    mpfr_sub(w.get(), hi, lo, MPFR_RNDU);
    mpfr_add_d(w.get(), w.get(), 2e-20, MPFR_RNDU);
    return mpfr_cmp_d(w.get(), precision) <= 0;
}

struct ProductEnclosure {
    Real lo, hi, tail;
    u64 cutoff = 0;
};

// Sum_{p > n} 1/(p(p-1)) <= 2 * 1.25506 / ((n - 1) log n), from pi(x) < 1.25506 x / log x
// and partial summation.
void prime_tail(u64 n, mpfr_ptr out) {
    Real t, c;
    mpfr_set_ui(t.get(), n, MPFR_RNDD);
    mpfr_log(t.get(), t.get(), MPFR_RNDD);
    mpfr_mul_ui(t.get(), t.get(), n - 1, MPFR_RNDD);
    mpfr_set_str(c.get(), "2.51012", 10, MPFR_RNDU);
    mpfr_div(out, c.get(), t.get(), MPFR_RNDU);
}

void restricted_product(u64 ell_min, double precision, const DensityLimits& lim, ProductEnclosure& e) {
    check_precision(precision);
    if (!is_prime(ell_min)) throw UsageError(std::to_string(ell_min) + " is not prime");
    if (ell_min > lim.max_product_cutoff) throw CapacityError("ell_min beyond the product cutoff cap");
    mpfr_set_ui(e.lo.get(), 1, MPFR_RNDN);
    mpfr_set_ui(e.hi.get(), 1, MPFR_RNDN);
    u64 done = ell_min - 1;
    u64 n = std::max<u64>(u64{1} << 20, ell_min);
    while (true) {
        for_each_prime(done + 1, n, [&](u64 p) {
            const u64 t = p * (p - 1);
            mpfr_mul_ui(e.lo.get(), e.lo.get(), t - 1, MPFR_RNDD);
            mpfr_div_ui(e.lo.get(), e.lo.get(), t, MPFR_RNDD);
            mpfr_mul_ui(e.hi.get(), e.hi.get(), t - 1, MPFR_RNDU);
            mpfr_div_ui(e.hi.get(), e.hi.get(), t, MPFR_RNDU);
        });
        done = n;
        prime_tail(n, e.tail.get());
        Real lo;
        mpfr_ui_sub(lo.get(), 1, e.tail.get(), MPFR_RNDD);
        mpfr_mul(lo.get(), lo.get(), e.lo.get(), MPFR_RNDD);
        if (width_ok(lo.get(), e.hi.get(), precision)) {
            mpfr_swap(e.lo.get(), lo.get());
            e.cutoff = n;
            return;
        }
        if (n >= lim.max_product_cutoff) {
            std::ostringstream os;
            os << "precision " << precision << " needs primes past the cutoff cap " << lim.max_product_cutoff;
            throw CapacityError(os.str());
        }
        n = std::min(2 * n, lim.max_product_cutoff);
    }
}

ConstantEstimate finish(std::string label, mpfr_srcptr lo, mpfr_srcptr hi, u64 truncation, mpfr_srcptr tail,
                        std::string arithmetic) {
    ConstantEstimate c;
    c.label = std::move(label);
    c.lo = render(lo, MPFR_RNDD);
    c.hi = render(hi, MPFR_RNDU);
    c.truncation = truncation;
    c.tail_bound = render(tail, MPFR_RNDU);
    c.arithmetic = std::move(arithmetic);
    return c;
}

// Decimal with exactly kDigits fractional digits, as an integer scaled by 10^kDigits.
void scaled(const std::string& s, mpz_ptr out) {
    std::string digits;
    for (char ch : s) {
        if (ch != '.') digits.push_back(ch);
    }
    if (mpz_set_str(out, digits.c_str(), 10) != 0) throw InternalError("malformed decimal " + s);
}

int compare_decimal(const std::string& a, const std::string& b) {
    mpz_t x, y;
    mpz_init(x);
    mpz_init(y);
    scaled(a, x);
    scaled(b, y);
    const int c = mpz_cmp(x, y);
    mpz_clear(x);
    mpz_clear(y);
    return c;
}

u64 abs_value(i64 a) { return a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a); }

void check_factorable(u64 n) {
    if (n > kMaxFactorable) throw CapacityError(std::to_string(n) + " exceeds the factorization cap 10^12");
}

i64 mod4(i64 x) { return ((x % 4) + 4) % 4; }

void delta_exact(i64 a, mpq_ptr out) {
    const auto sq = squarefree_part(a);
    mpq_set_ui(out, 1, 1);
    if (mod4(sq.b) != 1) return;
    const u64 b = abs_value(sq.b);
    Rational prod;
    mpq_set_ui(prod.get(), 1, 1);
    int mu = 1;
    for (const auto& pp : factorize(b)) {
        Rational f;
        mpq_set_ui(f.get(), 1, pp.prime * pp.prime - pp.prime - 1);
        mpq_mul(prod.get(), prod.get(), f.get());
        mu = -mu;
    }
    if (mu == 1) {
        mpq_sub(out, out, prod.get());
    } else {
        mpq_add(out, out, prod.get());
    }
}

void check_generic(i64 a, const char* what) {
    if (a == 0 || a == 1 || a == -1) throw UsageError(std::string(what) + " needs a not in {0, 1, -1}");
    check_factorable(abs_value(a));
    if (is_perfect_power(a)) {
        throw UsageError(std::string(what) + ": a = " + std::to_string(a) +
                         " is a perfect power (a must not be an l-th power for any prime l)");
    }
}

// mu and phi over a block [lo, hi] by sieving with primes up to sqrt(hi).
struct MuPhiBlock {
    u64 lo = 0;
    std::vector<signed char> mu;
    std::vector<u64> phi;

    MuPhiBlock(u64 lo_, u64 hi, const std::vector<u32>& base) : lo(lo_), mu(hi - lo_ + 1, 1), phi(hi - lo_ + 1) {
        std::vector<u64> rest(hi - lo + 1);
        for (u64 n = lo; n <= hi; ++n) {
            rest[n - lo] = n;
            phi[n - lo] = n;
        }
        for (u64 q : base) {
            if (q * q > hi) break;
            for (u64 j = (lo + q - 1) / q * q; j <= hi; j += q) {
                auto& r = rest[j - lo];
                unsigned e = 0;
                while (r % q == 0) {
                    r /= q;
                    ++e;
                }
                mu[j - lo] = e >= 2 ? 0 : static_cast<signed char>(-mu[j - lo]);
                phi[j - lo] = phi[j - lo] / q * (q - 1);
            }
        }
        for (u64 n = lo; n <= hi; ++n) {
            const u64 r = rest[n - lo];
            if (r > 1) {
                mu[n - lo] = static_cast<signed char>(-mu[n - lo]);
                phi[n - lo] = phi[n - lo] / r * (r - 1);
            }
        }
    }
};

// num / (x * y), one rounding when x * y fits in a word.
void divide(mpfr_ptr out, unsigned long num, u64 x, u64 y, mpfr_rnd_t rnd) {
    const u128 den = static_cast<u128>(x) * y;
    if (den >> 64 == 0) {
        mpfr_set_ui(out, num, MPFR_RNDN);
        mpfr_div_ui(out, out, static_cast<u64>(den), rnd);
    } else {
        mpfr_set_ui(out, num, rnd);
        mpfr_div_ui(out, out, x, rnd);
        mpfr_div_ui(out, out, y, rnd);
    }
}

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

double ConstantEstimate::lo_approx() const { return std::strtod(lo.c_str(), nullptr); }
double ConstantEstimate::hi_approx() const { return std::strtod(hi.c_str(), nullptr); }
double ConstantEstimate::midpoint() const { return (lo_approx() + hi_approx()) / 2; }
double ConstantEstimate::width() const { return hi_approx() - lo_approx(); }

bool overlaps(const ConstantEstimate& a, const ConstantEstimate& b) {
    return compare_decimal(a.lo, b.hi) <= 0 && compare_decimal(b.lo, a.hi) <= 0;
}

bool contains(const ConstantEstimate& outer, const ConstantEstimate& inner) {
    return compare_decimal(outer.lo, inner.lo) <= 0 && compare_decimal(inner.hi, outer.hi) <= 0;
}

ConstantEstimate one_minus(const ConstantEstimate& c, std::string label) {
    Real lo, hi;
    mpfr_set_str(lo.get(), c.hi.c_str(), 10, MPFR_RNDU);
    mpfr_set_str(hi.get(), c.lo.c_str(), 10, MPFR_RNDD);
    mpfr_ui_sub(lo.get(), 1, lo.get(), MPFR_RNDD);
    mpfr_ui_sub(hi.get(), 1, hi.get(), MPFR_RNDU);
    ConstantEstimate out = c;
    out.label = std::move(label);
    out.lo = render(lo.get(), MPFR_RNDD);
    out.hi = render(hi.get(), MPFR_RNDU);
    return out;
}

ConstantEstimate restricted_artin_product(u64 ell_min, double precision, const DensityLimits& lim) {
    ProductEnclosure e;
    restricted_product(ell_min, precision, lim, e);
    Real tail;
    mpfr_mul(tail.get(), e.hi.get(), e.tail.get(), MPFR_RNDU);
    const std::string label = ell_min == 2 ? "A" : "B(" + std::to_string(ell_min) + ")";
    return finish(label, e.lo.get(), e.hi.get(), e.cutoff, tail.get(), kArithmetic);
}

ConstantEstimate artin_constant(double precision, const DensityLimits& lim) {
    return restricted_artin_product(2, precision, lim);
}

ConstantEstimate e_density_lower_bound(u64 ell, double precision, const DensityLimits& lim) {
    ProductEnclosure e;
    restricted_product(ell, precision, lim, e);
    Real lo, hi, tail;
    mpfr_ui_sub(lo.get(), 1, e.hi.get(), MPFR_RNDD);
    mpfr_ui_sub(hi.get(), 1, e.lo.get(), MPFR_RNDU);
    mpfr_mul(tail.get(), e.hi.get(), e.tail.get(), MPFR_RNDU);
    return finish("1-B(" + std::to_string(ell) + ")", lo.get(), hi.get(), e.cutoff, tail.get(), kArithmetic);
}

u64 IntegerFactorization::reconstruct() const {
    u64 n = 1;
    for (auto [p, e] : factors) {
        for (unsigned i = 0; i < e; ++i) n *= p;
    }
    return n;
}

IntegerFactorization factor_integer(i64 a) {
    if (a == 0) throw UsageError("cannot factor 0");
    const u64 n = abs_value(a);
    check_factorable(n);
    IntegerFactorization f;
    f.value = a;
    for (const auto& pp : factorize(n)) f.factors[pp.prime] = pp.exponent;
    return f;
}

SquarefreeDecomposition squarefree_part(i64 a) {
    const auto f = factor_integer(a);
    i64 b = 1;
    u64 c = 1;
    for (auto [p, e] : f.factors) {
        if (e % 2 == 1) b *= static_cast<i64>(p);
        for (unsigned i = 0; i < e / 2; ++i) c *= p;
    }
    return {a < 0 ? -b : b, c};
}

i64 fundamental_discriminant(i64 d) {
    const auto sq = squarefree_part(d);
    if (sq.b == 1) throw UsageError(std::to_string(d) + " is a perfect square");
    return mod4(sq.b) == 1 ? sq.b : 4 * sq.b;
}

int moebius(u64 n) {
    if (n == 0) throw UsageError("moebius needs n >= 1");
    check_factorable(n);
    int mu = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.exponent > 1) return 0;
        mu = -mu;
    }
    return mu;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw UsageError("euler_phi needs n >= 1");
    check_factorable(n);
    u64 phi = n;
    for (const auto& pp : factorize(n)) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

bool is_perfect_power(i64 a) {
    if (a == 0 || a == 1 || a == -1) return true;
    const auto f = factor_integer(a);
    unsigned g = 0;
    for (auto [p, e] : f.factors) g = std::gcd(g, e);
    if (a > 0) return g >= 2;
    while (g % 2 == 0) g /= 2;
    return g > 1;
}

std::string hooley_delta(i64 a) {
    Rational d;
    delta_exact(a, d.get());
    char* s = mpq_get_str(nullptr, 10, d.get());
    std::string out(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, out.size() + 1);
    if (out.find('/') == std::string::npos) out += "/1";
    return out;
}

ConstantEstimate hooley_constant(i64 a, double precision, const DensityLimits& lim) {
    check_precision(precision);
    check_generic(a, "hooley_constant");
    Rational delta;
    delta_exact(a, delta.get());
    // delta <= 6/5, so this keeps the scaled width inside the request.
    ProductEnclosure e;
    restricted_product(2, precision / 1.25, lim, e);
    Real lo, hi, tail;
    mpfr_mul_q(lo.get(), e.lo.get(), delta.get(), MPFR_RNDD);
    mpfr_mul_q(hi.get(), e.hi.get(), delta.get(), MPFR_RNDU);
    mpfr_mul(tail.get(), e.hi.get(), e.tail.get(), MPFR_RNDU);
    mpfr_mul_q(tail.get(), tail.get(), delta.get(), MPFR_RNDU);
    return finish("A(" + std::to_string(a) + ")", lo.get(), hi.get(), e.cutoff, tail.get(),
                  std::string("exact rational delta; ") + kArithmetic);
}

unsigned golomb_m(i64 a, u64 r, u64 k) {
    const u64 rk = r * k;
    if (rk % 2 != 0) return 1;
    const u64 d = abs_value(fundamental_discriminant(a));
    return rk % d == 0 ? 2 : 1;
}

ConstantEstimate golomb_constant(i64 a, u64 r, double precision, const DensityLimits& lim) {
    check_precision(precision);
    if (a < 2) throw UsageError("golomb_constant needs a >= 2");
    check_generic(a, "golomb_constant");
    if (r == 0) throw UsageError("golomb_constant needs r >= 1");
    if (r > 1'000'000) throw CapacityError("r beyond 10^6");
    const u64 d = abs_value(fundamental_discriminant(a));
    const u64 phi_r = euler_phi(r);

    // The tail is at most (2/(r phi(r))) * sum_{k > K squarefree} 1/(k phi(k)), and the full
    // sum over squarefree k of 1/(k phi(k)) is zeta(2) zeta(3) / zeta(6).
    Real landau, z;
    mpfr_zeta_ui(landau.get(), 2, MPFR_RNDU);
    mpfr_zeta_ui(z.get(), 3, MPFR_RNDU);
    mpfr_mul(landau.get(), landau.get(), z.get(), MPFR_RNDU);
    mpfr_zeta_ui(z.get(), 6, MPFR_RNDD);
    mpfr_div(landau.get(), landau.get(), z.get(), MPFR_RNDU);

    Real sum_lo, sum_hi, partial, term, lo, hi, tail;
    const double guess = 2.2 / (static_cast<double>(r) * static_cast<double>(phi_r) * 0.45 * precision);
    u64 target = static_cast<u64>(std::min(guess, static_cast<double>(lim.max_series_cutoff)));
    target = std::max<u64>(target, 1000);
    u64 done = 0;
    const u64 block = 1 << 16;
    while (true) {
        const auto base = primes_up_to(isqrt(target));
        for (u64 start = done + 1; start <= target; start += block) {
            const u64 end = std::min(target, start + block - 1);
            const MuPhiBlock mp(start, end, base);
            for (u64 k = start; k <= end; ++k) {
                const int mu = mp.mu[k - start];
                if (mu == 0) continue;
                const u64 phi_k = mp.phi[k - start];
                const u64 g = std::gcd(r, k);
                // phi(rk) for squarefree k: phi(r) phi(k) g / phi(g)
                const u64 phi_rk = phi_r * phi_k / euler_phi(g) * g;
                const unsigned m = (r * k) % 2 == 0 && (r * k) % d == 0 ? 2 : 1;
                const mpfr_rnd_t down = mu > 0 ? MPFR_RNDD : MPFR_RNDU;
                const mpfr_rnd_t up = mu > 0 ? MPFR_RNDU : MPFR_RNDD;
                divide(term.get(), m, r * k, phi_rk, down);
                if (mu > 0) {
                    mpfr_add(sum_lo.get(), sum_lo.get(), term.get(), MPFR_RNDD);
                } else {
                    mpfr_sub(sum_hi.get(), sum_hi.get(), term.get(), MPFR_RNDU);
                }
                divide(term.get(), m, r * k, phi_rk, up);
                if (mu > 0) {
                    mpfr_add(sum_hi.get(), sum_hi.get(), term.get(), MPFR_RNDU);
                } else {
                    mpfr_sub(sum_lo.get(), sum_lo.get(), term.get(), MPFR_RNDD);
                }
                divide(term.get(), 1, k, phi_k, MPFR_RNDD);
                mpfr_add(partial.get(), partial.get(), term.get(), MPFR_RNDD);
            }
        }
        done = target;
        mpfr_sub(tail.get(), landau.get(), partial.get(), MPFR_RNDU);
        mpfr_mul_ui(tail.get(), tail.get(), 2, MPFR_RNDU);
        mpfr_div_ui(tail.get(), tail.get(), r, MPFR_RNDU);
        mpfr_div_ui(tail.get(), tail.get(), phi_r, MPFR_RNDU);
        mpfr_sub(lo.get(), sum_lo.get(), tail.get(), MPFR_RNDD);
        mpfr_add(hi.get(), sum_hi.get(), tail.get(), MPFR_RNDU);
        if (width_ok(lo.get(), hi.get(), precision)) break;
        if (target >= lim.max_series_cutoff) {
            std::ostringstream os;
            os << "precision " << precision << " needs more than " << lim.max_series_cutoff << " terms";
            throw CapacityError(os.str());
        }
        target = std::min(target + target / 2, lim.max_series_cutoff);
    }
    return finish("A(" + std::to_string(a) + "," + std::to_string(r) + ")", lo.get(), hi.get(), done, tail.get(),
                  kArithmetic);
}

}  // namespace cycloscope
