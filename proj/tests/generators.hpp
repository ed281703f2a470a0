#ifndef CYCLOSCOPE_TESTS_GENERATORS_HPP
#define CYCLOSCOPE_TESTS_GENERATORS_HPP

// Hand-rolled generators for property tests. Fixed seeds keep failures reproducible.

#include <random>

#include "cycloscope/polyarith.hpp"

namespace testgen {

using cycloscope::Poly;
using cycloscope::u32;

inline Poly random_poly(std::mt19937_64& rng, u32 ell, std::size_t max_degree) {
    std::vector<u32> c(std::uniform_int_distribution<std::size_t>(0, max_degree + 1)(rng));
    for (auto& x : c) x = static_cast<u32>(rng() % ell);
    return Poly(ell, std::move(c));
}

// Nonzero, exact degree in [min_degree, max_degree], optionally monic.
inline Poly random_poly_of_degree(std::mt19937_64& rng, u32 ell, std::size_t min_degree, std::size_t max_degree,
                                  bool monic) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(min_degree, max_degree)(rng);
    std::vector<u32> c(d + 1);
    for (auto& x : c) x = static_cast<u32>(rng() % ell);
    c[d] = monic ? 1 : static_cast<u32>(1 + rng() % (ell - 1));
    return Poly(ell, std::move(c));
}

inline constexpr u32 kSmallPrimes[] = {2, 3, 5, 7, 11};

}  // namespace testgen

#endif
