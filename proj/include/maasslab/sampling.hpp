#pragma once

#include "modgroup.hpp"
#include "subgroup.hpp"

#include <random>

namespace maasslab::sampling {

inline std::mt19937_64 rng(unsigned seed = 42) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Product of `len` random factors S^{+-1} or T^m with |m| <= 3.
inline GroupElement random_element(std::mt19937_64& g, int len) {
    const auto [S, T] = generators();
    std::uniform_int_distribution<int> coin(0, 1), shift(-3, 3);
    GroupElement r;
    for (int i = 0; i < len; ++i) {
        if (coin(g)) {
            r *= coin(g) ? S : S.inverse();
        } else {
            r *= T.pow(shift(g));
        }
    }
    return r;
}

/// Random element of the table's group: a random word moved into the group
/// by its coset representative.
inline GroupElement random_member(std::mt19937_64& g, const CosetTable& t, int len = 6) {
    return coset_index_of(t, t.group(), random_element(g, len)).second;
}

inline UHPoint random_point(std::mt19937_64& g, double ylo = 0.2, double yhi = 3.0) {
    return UHPoint(uniform(g, -1.0, 1.0), uniform(g, ylo, yhi));
}

} // namespace maasslab::sampling
