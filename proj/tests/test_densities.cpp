#include "doctest.h"

#include <cmath>

#include "cycloscope/densities.hpp"
#include "cycloscope/errors.hpp"

using namespace cycloscope;

namespace {

// Partial product over primes <= n in long double, a sieve written out here,
// and the crude tail sum_{m > n} 1/(m(m-1)) = 1/n.
struct CrudeArtin {
    long double lo, hi;
};

CrudeArtin crude_artin(unsigned n) {
    std::vector<bool> composite(n + 1, false);
    long double prod = 1.0L;
    unsigned count = 0;
    for (unsigned i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        ++count;
        const long double q = static_cast<long double>(i);
        prod *= 1.0L - 1.0L / (q * (q - 1.0L));
        for (unsigned long long j = 1ULL * i * i; j <= n; j += i) composite[j] = true;
    }
    // each multiply and divide loses at most a few ulps of long double
    const long double slack = 8.0L * count * 1.1e-19L;
    return {prod * (1.0L - 1.0L / n) - slack, prod + slack};
}

bool decimal_shape(const std::string& s) {
    const auto dot = s.find('.');
    return dot != std::string::npos && s.size() - dot - 1 == 20;
}

}  // namespace

TEST_CASE("Artin constant enclosure") {
    const auto a = artin_constant(1e-9);
    CHECK(a.label == "A");
    CHECK(decimal_shape(a.lo));
    CHECK(decimal_shape(a.hi));
    CHECK(a.width() <= 1e-9);
    CHECK(a.width() <= 2 * std::strtod(a.tail_bound.c_str(), nullptr) + 1e-19);
    // golden digits, frozen from a first run: 0.3739558136...
    CHECK(a.lo_approx() < 0.3739558137);
    CHECK(a.hi_approx() > 0.3739558136);

    const auto crude = crude_artin(10'000'000);
    CHECK(static_cast<long double>(a.lo_approx()) <= crude.hi);
    CHECK(static_cast<long double>(a.hi_approx()) >= crude.lo);
    CHECK(crude.hi - crude.lo < 2e-7L);
}

TEST_CASE("restricted products") {
    const auto b2 = restricted_artin_product(2, 1e-8);
    const auto b3 = restricted_artin_product(3, 1e-8);
    const auto b5 = restricted_artin_product(5, 1e-8);
    CHECK(b3.label == "B(3)");
    CHECK(std::abs(b3.midpoint() - 2 * b2.midpoint()) <= b3.width() + 2 * b2.width());
    CHECK(b2.hi_approx() < b3.lo_approx());
    CHECK(b3.hi_approx() < b5.lo_approx());
    CHECK(b5.hi_approx() < 1.0);
    // 1 - 1/(2*1) and 1 - 1/(3*2) are the only factors between B(2) and B(5)
    CHECK(std::abs(b5.midpoint() * 0.5 * (5.0 / 6.0) - b2.midpoint()) < 1e-8);

    CHECK_THROWS_AS(restricted_artin_product(4, 1e-6), UsageError);
    CHECK_THROWS_AS(restricted_artin_product(2, 1e-13), UsageError);
    DensityLimits tight;
    tight.max_product_cutoff = 1 << 20;
    CHECK_THROWS_AS(restricted_artin_product(2, 1e-10, tight), CapacityError);
}

TEST_CASE("refining the cutoff gives nested enclosures") {
    const auto coarse = artin_constant(1e-6);
    const auto mid = artin_constant(1e-7);
    const auto fine = artin_constant(1e-8);
    CHECK(coarse.truncation < fine.truncation);
    CHECK(contains(coarse, mid));
    CHECK(contains(mid, fine));
}

TEST_CASE("lower bound for E(l)") {
    const auto a = artin_constant(1e-9);
    const auto l2 = e_density_lower_bound(2);
    const auto l3 = e_density_lower_bound(3);
    CHECK(std::abs(l2.midpoint() - (1 - a.midpoint())) <= 1e-9);
    CHECK(std::abs(l3.midpoint() - (1 - 2 * a.midpoint())) <= 1e-9);
    CHECK(l2.lo.substr(0, 11) == "0.626044186");
    CHECK(l3.lo.substr(0, 7) == "0.25208");

    double prev = 1.0;
    for (u64 ell : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 31ULL, 97ULL}) {
        const auto b = e_density_lower_bound(ell, 1e-8);
        CHECK(b.hi_approx() < prev);
        prev = b.lo_approx();
    }
    // sum_{p >= 97} 1/(p(p-1)) < 1/96, and 1 - prod(1 - x_p) <= sum x_p
    const auto l97 = e_density_lower_bound(97, 1e-8);
    CHECK(l97.hi_approx() < 1.0 / 96);
    // direct product over primes 97 <= p < 2*10^6; the rest of the tail is below 1e-7
    const unsigned n = 2'000'000;
    std::vector<bool> composite(n, false);
    long double prod = 1.0L;
    for (unsigned i = 2; i < n; ++i) {
        if (composite[i]) continue;
        for (unsigned long long j = 1ULL * i * i; j < n; j += i) composite[j] = true;
        if (i >= 97) prod *= 1.0L - 1.0L / (static_cast<long double>(i) * (i - 1));
    }
    const double direct = static_cast<double>(1.0L - prod);
    CHECK(direct <= l97.hi_approx());
    CHECK(l97.lo_approx() - direct < 1e-7);
}

TEST_CASE("integer helpers") {
    auto s8 = squarefree_part(8);
    CHECK(s8.b == 2);
    CHECK(s8.c == 2);
    auto s5 = squarefree_part(5);
    CHECK(s5.b == 5);
    CHECK(s5.c == 1);
    auto sm12 = squarefree_part(-12);
    CHECK(sm12.b == -3);
    CHECK(sm12.c == 2);
    CHECK_THROWS_AS(squarefree_part(0), UsageError);
    CHECK_THROWS_AS(squarefree_part(2'000'000'000'000LL), CapacityError);

    const auto f = factor_integer(-360);
    CHECK(f.reconstruct() == 360);
    CHECK(f.factors == std::map<u64, unsigned>{{2, 3}, {3, 2}, {5, 1}});

    CHECK(fundamental_discriminant(-1) == -4);
    CHECK(fundamental_discriminant(-3) == -3);
    CHECK(fundamental_discriminant(-2) == -8);
    CHECK(fundamental_discriminant(5) == 5);
    CHECK(fundamental_discriminant(12) == 12);
    CHECK_THROWS_AS(fundamental_discriminant(9), UsageError);

    CHECK(moebius(1) == 1);
    CHECK(moebius(4) == 0);
    CHECK(moebius(30) == -1);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    for (u64 n = 1; n <= 10000; ++n) {
        int s = 0;
        u64 phi_sum = 0;
        for (u64 d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            s += moebius(d);
            phi_sum += euler_phi(d);
            if (d * d != n) {
                s += moebius(n / d);
                phi_sum += euler_phi(n / d);
            }
        }
        REQUIRE(s == (n == 1 ? 1 : 0));
        REQUIRE(phi_sum == n);
    }

    CHECK(is_perfect_power(8));
    CHECK(is_perfect_power(-8));
    CHECK(is_perfect_power(36));
    CHECK_FALSE(is_perfect_power(-4));
    CHECK_FALSE(is_perfect_power(12));
    CHECK_FALSE(is_perfect_power(-2));
}

TEST_CASE("Hooley constants") {
    const auto a = artin_constant(1e-9);
    CHECK(hooley_delta(2) == "1/1");
    CHECK(hooley_delta(5) == "20/19");
    CHECK(hooley_delta(13) == "156/155");
    CHECK(hooley_delta(-3) == "6/5");
    CHECK(hooley_delta(21) == "204/205");  // mu(21) = 1: 1 - 1/(5*41)

    const auto h2 = hooley_constant(2);
    CHECK(overlaps(h2, a));
    const auto h5 = hooley_constant(5, 1e-8);
    CHECK(std::abs(h5.midpoint() - 20.0 / 19.0 * a.midpoint()) < 1e-8);
    CHECK(h5.width() <= 1e-8);
    CHECK(h5.label == "A(5)");

    for (i64 bad : {0LL, 1LL, -1LL, 4LL, 8LL, -8LL, 9LL, 1024LL}) {
        CHECK_THROWS_AS(hooley_constant(bad), UsageError);
    }
    CHECK_THROWS_AS(hooley_constant(1'000'000'000'007LL), CapacityError);
}

TEST_CASE("Golomb m(k)") {
    // rk odd forces m = 1
    for (u64 k : {1ULL, 3ULL, 5ULL, 15ULL}) CHECK(golomb_m(5, 3, k) == 1);
    CHECK(golomb_m(2, 2, 1) == 1);
    CHECK(golomb_m(2, 8, 1) == 2);
    CHECK(golomb_m(5, 1, 10) == 2);
    CHECK(golomb_m(5, 1, 5) == 1);
    for (i64 a : {2LL, 3LL, 6LL}) {
        for (u64 k = 1; k <= 2000; ++k) {
            if (moebius(k) != 0) REQUIRE(golomb_m(a, 1, k) == 1);
        }
    }
}

TEST_CASE("Golomb constants") {
    const auto a = artin_constant(1e-9);
    const auto g21 = golomb_constant(2, 1);
    CHECK(g21.label == "A(2,1)");
    CHECK(g21.width() <= 1e-6);
    CHECK(overlaps(g21, hooley_constant(2)));
    CHECK(overlaps(g21, a));
    for (i64 x : {3LL, 6LL, 5LL}) CHECK(overlaps(golomb_constant(x, 1), hooley_constant(x)));

    // the series converges into the product at three cutoffs, with nesting
    const auto c4 = golomb_constant(2, 1, 1e-4);
    const auto c5 = golomb_constant(2, 1, 1e-5);
    CHECK(overlaps(c4, a));
    CHECK(overlaps(c5, a));
    CHECK(contains(c4, c5));
    CHECK(contains(c5, g21));

    // r = 2 for a = 2: the k = 1 term is 1/2 and m(1) = 1
    const auto g22 = golomb_constant(2, 2);
    CHECK(g22.lo_approx() > 0.2);
    CHECK(g22.hi_approx() < 0.3);

    // a = 5, r = 5: the density vanishes because every such p splits sqrt(5)
    const auto g55 = golomb_constant(5, 5);
    CHECK(g55.lo_approx() <= 0.0);
    CHECK(g55.hi_approx() >= 0.0);

    CHECK_THROWS_AS(golomb_constant(4, 1), UsageError);
    CHECK_THROWS_AS(golomb_constant(1, 1), UsageError);
    CHECK_THROWS_AS(golomb_constant(2, 0), UsageError);
    DensityLimits tight;
    tight.max_series_cutoff = 5000;
    CHECK_THROWS_AS(golomb_constant(2, 1, 1e-9, tight), CapacityError);
}
