#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hamder/field.hpp"
#include "hamder/params.hpp"
#include "hamder/sparse.hpp"

namespace hamder {

// Index of a monomial x^(alpha) x^u in the canonical (graded-lex) order:
// by zdeg, then alpha lexicographically, then the exterior bitmask.
using MonoId = std::uint32_t;

// A basis monomial: divided-power exponents plus exterior bitmask (bit k is
// variable 2m+k).
struct Monomial {
    std::vector<std::uint32_t> alpha;
    std::uint32_t mask = 0;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Result of a monomial-level operation: coefficient 0 means the zero element.
struct ScaledMono {
    MonoId mono = 0;
    Scalar coeff = 0;
};

// Element of O(2m, n; t): sparse combination of monomials keyed by MonoId.
struct SuperPoly {
    SparseVec terms;

    bool is_zero() const noexcept { return terms.empty(); }
    friend bool operator==(const SuperPoly&, const SuperPoly&) = default;
};

// Parity or Z-degree of an element; nullopt encodes "inhomogeneous".
// The zero element reports nullopt as well.
using Grade = std::optional<int>;

struct MonomialFilter {
    std::optional<int> max_zdeg;
    std::optional<int> exact_zdeg;
    std::optional<int> parity;
};

// The truncated divided-power superalgebra O(2m, n; t) together with the
// tables that make its monomial arithmetic cheap. Immutable once built.
class Algebra {
public:
    explicit Algebra(Params params);

    const Params& params() const noexcept { return params_; }
    const PrimeField& field() const noexcept { return field_; }

    std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(zdeg_.size()); }
    int var_count() const noexcept { return params_.var_count(); }

    std::span<const std::uint32_t> alpha(MonoId id) const noexcept {
        return {alpha_.data() + static_cast<std::size_t>(id) * even_, static_cast<std::size_t>(even_)};
    }
    std::uint32_t mask(MonoId id) const noexcept { return mask_[id]; }
    int zdeg(MonoId id) const noexcept { return zdeg_[id]; }
    int parity(MonoId id) const noexcept { return parity_[id]; }
    Monomial monomial(MonoId id) const;

    std::optional<MonoId> find(const Monomial& mono) const;
    MonoId id_of(const Monomial& mono) const;  // throws on out-of-range
    MonoId one() const noexcept { return 0; }
    MonoId top() const;                          // x^(pi) x^omega
    MonoId divided_power_top() const;            // x^(pi)
    MonoId omega() const;                        // x^omega
    std::uint32_t omega_mask() const noexcept { return (1U << params_.n) - 1U; }
    int max_zdeg() const noexcept { return static_cast<int>(params_.xi()); }

    // Monomial kernels.
    ScaledMono mul(MonoId a, MonoId b) const noexcept;
    ScaledMono partial(int var, MonoId a) const noexcept;
    // d_var^k on a monomial (even variable only): x^(alpha - k eps_var).
    ScaledMono partial_power(int var, std::uint32_t k, MonoId a) const noexcept;

    // Element constructors.
    SuperPoly mono(MonoId id, Scalar c = 1) const;
    SuperPoly mono(const Monomial& m, Scalar c = 1) const { return mono(id_of(m), c); }
    SuperPoly divided_power(int var, std::uint32_t exponent) const;  // x^(k eps_i)
    SuperPoly variable(int var) const;                               // x_i

    std::vector<MonoId> enumerate(const MonomialFilter& filter = {}) const;

private:
    std::uint32_t packed_of(const Monomial& mono) const;

    Params params_;
    PrimeField field_;
    int even_ = 0;
    std::vector<std::uint32_t> radix_;        // packed stride of each even variable
    std::vector<std::uint32_t> alpha_;        // dim x 2m, canonical order
    std::vector<std::uint32_t> mask_;
    std::vector<std::int32_t> zdeg_;
    std::vector<std::uint8_t> parity_;
    std::vector<std::uint32_t> packed_;       // canonical -> packed
    std::vector<MonoId> canonical_;           // packed -> canonical
    // binom_[i] is a (pi_i+1)^2 table of C(a+b, a) mod p, 0 when a+b > pi_i.
    std::vector<std::vector<Scalar>> binom_;
};

// Free functions on SuperPoly.
SuperPoly add(const Algebra& alg, const SuperPoly& f, const SuperPoly& g);
SuperPoly sub(const Algebra& alg, const SuperPoly& f, const SuperPoly& g);
SuperPoly scale(const Algebra& alg, Scalar c, const SuperPoly& f);
SuperPoly mul(const Algebra& alg, const SuperPoly& f, const SuperPoly& g);
SuperPoly partial(const Algebra& alg, int var, const SuperPoly& f);
SuperPoly partial_power(const Algebra& alg, int var, std::uint32_t k, const SuperPoly& f);
Grade parity(const Algebra& alg, const SuperPoly& f);
Grade zdeg(const Algebra& alg, const SuperPoly& f);

}  // namespace hamder
