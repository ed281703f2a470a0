#ifndef CYCLOSCOPE_POLYARITH_HPP
#define CYCLOSCOPE_POLYARITH_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cycloscope/arith.hpp"

namespace cycloscope {

// Degree of the zero polynomial. Compare against it; never do arithmetic on it.
inline constexpr std::ptrdiff_t kZeroDegree = std::numeric_limits<std::ptrdiff_t>::min();

inline constexpr std::size_t kDefaultKaratsubaCutoff = 64;

/// Arithmetic context for the prime field F_l. The primality of the modulus is
/// checked once here, not per element.
class PrimeField {
public:
    explicit PrimeField(u64 modulus);

    u32 modulus() const noexcept { return modulus_; }

    u32 reduce(u64 x) const noexcept { return static_cast<u32>(x % modulus_); }
    u32 add(u32 a, u32 b) const noexcept {
        u64 s = static_cast<u64>(a) + b;
        return static_cast<u32>(s >= modulus_ ? s - modulus_ : s);
    }
    u32 sub(u32 a, u32 b) const noexcept { return a >= b ? a - b : static_cast<u32>(a + static_cast<u64>(modulus_) - b); }
    u32 neg(u32 a) const noexcept { return a == 0 ? 0 : modulus_ - a; }
    u32 mul(u32 a, u32 b) const noexcept { return static_cast<u32>(static_cast<u64>(a) * b % modulus_); }
    u32 pow(u32 a, u64 e) const noexcept { return static_cast<u32>(cycloscope::powmod(a, e, modulus_)); }
    // a must be nonzero.
    u32 inv(u32 a) const noexcept { return pow(a, modulus_ - 2); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    u32 modulus_;
};

/// An element of F_l carrying its modulus.
class FpElem {
public:
    FpElem(u64 value, u32 modulus) : value_(static_cast<u32>(value % modulus)), modulus_(modulus) {}

    u32 value() const noexcept { return value_; }
    u32 modulus() const noexcept { return modulus_; }

    friend bool operator==(const FpElem&, const FpElem&) = default;

private:
    u32 value_;
    u32 modulus_;
};

/// Dense polynomial over F_l. Coefficient i multiplies X^i; the highest stored
/// coefficient is nonzero, and the zero polynomial has no coefficients.
class Poly {
public:
    explicit Poly(u32 modulus) : modulus_(modulus) {}
    Poly(u32 modulus, std::vector<u32> coeffs);
    Poly(u32 modulus, std::initializer_list<u64> coeffs);

    static Poly zero(u32 modulus) { return Poly(modulus); }
    static Poly constant(u32 modulus, u64 c);
    static Poly monomial(u32 modulus, std::size_t degree, u64 c = 1);
    // X^n - 1
    static Poly x_pow_minus_one(u32 modulus, std::size_t n);

    u32 modulus() const noexcept { return modulus_; }
    const std::vector<u32>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    std::ptrdiff_t degree() const noexcept {
        return coeffs_.empty() ? kZeroDegree : static_cast<std::ptrdiff_t>(coeffs_.size()) - 1;
    }
    u32 coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
    // Leading coefficient; zero for the zero polynomial.
    u32 lead() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }

    // Renders with signed representatives, highest degree first: "X^6-X^5+X^2+1".
    std::string to_string() const;
    // Coefficients in [0, l), highest degree first.
    std::vector<u32> coeffs_descending() const { return {coeffs_.rbegin(), coeffs_.rend()}; }

    friend bool operator==(const Poly&, const Poly&) = default;

private:
    void normalize();

    u32 modulus_;
    std::vector<u32> coeffs_;
};

Poly add(const Poly& f, const Poly& g);
Poly sub(const Poly& f, const Poly& g);
Poly neg(const Poly& f);
Poly scale(const Poly& f, u32 c);
Poly mul(const Poly& f, const Poly& g, std::size_t karatsuba_cutoff = kDefaultKaratsubaCutoff);
Poly mul_schoolbook(const Poly& f, const Poly& g);

struct DivRem {
    Poly quotient;
    Poly remainder;
};
DivRem divrem(const Poly& f, const Poly& g);
Poly rem(const Poly& f, const Poly& g);

// Scaled to leading coefficient 1; the zero polynomial stays zero.
Poly make_monic(const Poly& f);
// Monic gcd. Throws UsageError when both arguments are zero.
Poly gcd(const Poly& f, const Poly& g);

FpElem eval(const Poly& f, const FpElem& x);

inline Poly operator+(const Poly& f, const Poly& g) { return add(f, g); }
inline Poly operator-(const Poly& f, const Poly& g) { return sub(f, g); }
inline Poly operator*(const Poly& f, const Poly& g) { return mul(f, g); }

/// Arbitrary-precision natural number, used only as an exponent. Stored as
/// little-endian base 2^32 limbs with no high zero limbs.
class Natural {
public:
    Natural() = default;
    Natural(u64 v);  // NOLINT: implicit from machine integers is intended

    static Natural from_decimal(std::string_view digits);
    // base^exp
    static Natural power(u64 base, u64 exp);

    bool is_zero() const noexcept { return limbs_.empty(); }
    std::size_t bit_length() const noexcept;
    bool bit(std::size_t i) const noexcept;

    Natural operator+(const Natural& other) const;
    // Requires *this >= v.
    Natural minus(u32 v) const;
    Natural times(u32 v) const;
    // Quotient by v; v nonzero.
    Natural divided_by(u32 v) const;
    std::string to_decimal() const;

    friend bool operator==(const Natural&, const Natural&) = default;

private:
    void trim();
    std::vector<u32> limbs_;
};

// f^e mod m by square-and-multiply. m must be nonconstant.
Poly powmod(const Poly& f, const Natural& e, const Poly& m);
Poly powmod(const Poly& f, u64 e, const Poly& m);

}  // namespace cycloscope

#endif
