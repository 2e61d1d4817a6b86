#include "hamder/params.hpp"

#include <sstream>

#include "hamder/field.hpp"

namespace hamder {

std::uint32_t Params::pi(int i) const {
    std::uint64_t v = 1;
    for (int k = 0; k < t.at(static_cast<std::size_t>(i)); ++k) v *= p;
    return static_cast<std::uint32_t>(v - 1);
}

std::uint64_t Params::pi_total() const {
    std::uint64_t total = 0;
    for (int i = 0; i < even_count(); ++i) total += pi(i);
    return total;
}

void validate(const Params& params) {
    if (!is_prime(params.p) || params.p < 3) {
        throw ParamError("p must be an odd prime (got " + std::to_string(params.p) + ")");
    }
    if (params.m < 1) throw ParamError("m must be at least 1");
    if (params.n < 0) throw ParamError("n must be nonnegative");
    if (params.n > 16) throw ParamError("n > 16 exterior variables is not supported");
    if (static_cast<int>(params.t.size()) != params.even_count()) {
        throw ParamError("t must list exactly 2m = " + std::to_string(params.even_count()) +
                         " heights (got " + std::to_string(params.t.size()) + ")");
    }
    std::uint64_t dim = 1ULL << params.n;
    for (const int ti : params.t) {
        if (ti < 1) throw ParamError("every t_i must be at least 1");
        for (int k = 0; k < ti; ++k) {
            dim *= params.p;
            if (dim > (1ULL << 26)) {
                throw ParamError("dim O(2m,n;t) exceeds the supported size 2^26");
            }
        }
    }
    if (dim * static_cast<std::uint64_t>(params.var_count()) > 0xFFFFFFFFULL) {
        throw ParamError("dim W(2m,n;t) does not fit 32-bit coordinates");
    }
    if (params.relaxed) return;
    if (params.m <= 1) throw ParamError("hypothesis m > 1 violated (m = " + std::to_string(params.m) + "); use relaxed mode");
    if (params.n <= 3) throw ParamError("hypothesis n > 3 violated (n = " + std::to_string(params.n) + "); use relaxed mode");
    if (params.p <= 3) throw ParamError("hypothesis p > 3 violated (p = " + std::to_string(params.p) + "); use relaxed mode");
}

bool satisfies_hypotheses(const Params& params) {
    return params.m > 1 && params.n > 3 && params.p > 3;
}

std::string describe(const Params& params) {
    std::ostringstream os;
    os << "p=" << params.p << " m=" << params.m << " n=" << params.n << " t=(";
    for (std::size_t i = 0; i < params.t.size(); ++i) os << (i ? "," : "") << params.t[i];
    os << ")" << (params.relaxed ? " relaxed" : "");
    return os.str();
}

}  // namespace hamder
