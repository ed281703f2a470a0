#ifndef CYCLOSCOPE_DENSITIES_HPP
#define CYCLOSCOPE_DENSITIES_HPP

// Enclosures of Artin-type density constants. Bounds are carried in MPFR with
// outward rounding and rendered as fixed decimals (lo rounded down, hi up).

#include <map>
#include <string>

#include "cycloscope/arith.hpp"

namespace cycloscope {

struct ConstantEstimate {
    std::string label;
    std::string lo;
    std::string hi;
    u64 truncation = 0;  // last prime (products) or largest k (series) included
    std::string tail_bound;
    std::string arithmetic;

    double lo_approx() const;
    double hi_approx() const;
    double midpoint() const;
    double width() const;
};

// Exact comparison of the decimal endpoints.
bool overlaps(const ConstantEstimate& a, const ConstantEstimate& b);
bool contains(const ConstantEstimate& outer, const ConstantEstimate& inner);

// [1 - hi, 1 - lo], exact on the decimal endpoints.
ConstantEstimate one_minus(const ConstantEstimate& c, std::string label);

inline constexpr double kDefaultPrecision = 1e-6;
inline constexpr double kMinPrecision = 1e-12;
inline constexpr u64 kMaxFactorable = 1'000'000'000'000ULL;

struct DensityLimits {
    u64 max_product_cutoff = u64{1} << 30;
    u64 max_series_cutoff = u64{1} << 28;
};

// prod over primes p >= ell_min of (1 - 1/(p(p-1))). ell_min = 2 gives Artin's constant.
ConstantEstimate restricted_artin_product(u64 ell_min, double precision, const DensityLimits& lim = {});
ConstantEstimate artin_constant(double precision, const DensityLimits& lim = {});

// Lower bound for the density of E(ell): 1 - restricted_artin_product(ell).
ConstantEstimate e_density_lower_bound(u64 ell, double precision = 1e-9, const DensityLimits& lim = {});

struct IntegerFactorization {
    i64 value = 0;
    std::map<u64, unsigned> factors;  // of |value|
    u64 reconstruct() const;
};

IntegerFactorization factor_integer(i64 a);

// a = b * c^2 with b squarefree; b carries the sign.
struct SquarefreeDecomposition {
    i64 b = 0;
    u64 c = 0;
};
SquarefreeDecomposition squarefree_part(i64 a);

// Discriminant of Q(sqrt(d)).
i64 fundamental_discriminant(i64 d);

int moebius(u64 n);
u64 euler_phi(u64 n);

// Hooley's correction: 1 unless b = 1 mod 4, then 1 - mu(|b|) prod_{p | b} 1/(p^2 - p - 1).
// Returned as an exact fraction "num/den".
std::string hooley_delta(i64 a);

// delta(a) * A. a must not be 0, +-1, or a perfect power.
ConstantEstimate hooley_constant(i64 a, double precision = kDefaultPrecision, const DensityLimits& lim = {});

// m(k) in the Golomb series: 2 when rk is even and the discriminant of
// Q(sqrt(a)) divides rk, else 1.
unsigned golomb_m(i64 a, u64 r, u64 k);

// sum over squarefree k of mu(k) m(k) / (r k phi(rk)).
ConstantEstimate golomb_constant(i64 a, u64 r, double precision = kDefaultPrecision, const DensityLimits& lim = {});

// True when a = b^n for some n >= 2 with a prime divisor of n allowed by the
// sign (any n for a > 0, odd n for a < 0).
bool is_perfect_power(i64 a);

}  // namespace cycloscope

#endif
