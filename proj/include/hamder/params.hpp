#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamder {

// Parameters of O(2m, n; t). Variables are indexed from 0 internally:
// even (divided-power) variables 0..2m-1, exterior variables 2m..2m+n-1.
// The expression language and reports use 1-based absolute indices.
struct Params {
    std::uint32_t p = 5;
    int m = 2;                 // half the even-variable count
    int n = 4;                 // exterior variable count
    std::vector<int> t;        // 2m truncation heights
    bool relaxed = false;      // permits parameters below m > 1, n > 3, p > 3

    int even_count() const noexcept { return 2 * m; }
    int var_count() const noexcept { return 2 * m + n; }
    bool is_even(int i) const noexcept { return i < 2 * m; }

    // prime(i) = i' : swaps the two halves of the even variables.
    int prime(int i) const noexcept {
        if (i < m) return i + m;
        if (i < 2 * m) return i - m;
        return i;
    }
    // tau(i) = +1 for the first half of the even variables and all exterior
    // variables, -1 for the second half.
    int tau(int i) const noexcept { return (i >= m && i < 2 * m) ? -1 : 1; }
    // mu(i): parity of the partial derivative along variable i.
    int mu(int i) const noexcept { return i < 2 * m ? 0 : 1; }

    std::uint32_t pi(int i) const;     // p^{t_i} - 1
    std::uint64_t pi_total() const;    // |pi|
    std::uint64_t xi() const { return pi_total() + static_cast<std::uint64_t>(n); }

    friend bool operator==(const Params&, const Params&) = default;
};

class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws ParamError naming the violated hypothesis. In relaxed mode only
// structural requirements (p odd prime, m >= 1, n >= 0, t_i >= 1) apply.
void validate(const Params& params);

// True when the parameters satisfy m > 1, n > 3, p > 3.
bool satisfies_hypotheses(const Params& params);

std::string describe(const Params& params);

}  // namespace hamder
