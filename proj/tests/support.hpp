#pragma once

#include <cstdint>
#include <vector>

#include "hamder/algebra.hpp"

namespace testsupport {

inline hamder::Params make_params(std::uint32_t p, int m, int n, std::vector<int> t, bool relaxed = false) {
    hamder::Params params;
    params.p = p;
    params.m = m;
    params.n = n;
    params.t = std::move(t);
    params.relaxed = relaxed;
    return params;
}

inline hamder::Params main_params() { return make_params(5, 2, 4, {1, 1, 1, 1}); }
inline hamder::Params family_params() { return make_params(5, 2, 4, {2, 1, 1, 1}); }
inline hamder::Params tiny_params() { return make_params(3, 1, 2, {1, 1}, true); }
inline hamder::Params small_params() { return make_params(5, 1, 2, {2, 1}, true); }

// Exact binomial from Pascal's triangle, valid for a <= 64.
inline std::uint64_t pascal(std::uint32_t a, std::uint32_t b) {
    if (b > a) return 0;
    std::vector<std::uint64_t> row(a + 1, 0);
    row[0] = 1;
    for (std::uint32_t i = 1; i <= a; ++i) {
        for (std::uint32_t j = i; j > 0; --j) row[j] += row[j - 1];
    }
    return row[b];
}

inline hamder::Monomial mono(std::vector<std::uint32_t> alpha, std::vector<int> exterior_offsets = {}) {
    hamder::Monomial m;
    m.alpha = std::move(alpha);
    for (const int k : exterior_offsets) m.mask |= 1U << k;
    return m;
}

}  // namespace testsupport
