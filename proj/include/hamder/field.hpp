#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hamder {

using Scalar = std::uint32_t;

bool is_prime(std::uint64_t n);

// Arithmetic in F_p for a small odd prime p. Elements are least
// nonnegative residues.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t modulus() const noexcept { return p_; }

    Scalar add(Scalar a, Scalar b) const noexcept {
        const Scalar s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Scalar sub(Scalar a, Scalar b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const noexcept {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Scalar pow(Scalar a, std::uint64_t e) const noexcept;
    // Fermat inverse; a must be nonzero.
    Scalar inv(Scalar a) const;
    Scalar from_int(std::int64_t v) const noexcept;
    // Signed representative in (-p/2, p/2], used for printing diagnostics.
    std::int64_t to_signed(Scalar a) const noexcept;

    // C(a, b) mod p via Lucas' theorem; 0 when b > a.
    Scalar binom(std::uint64_t a, std::uint64_t b) const noexcept;

private:
    std::uint32_t p_;
    std::vector<Scalar> digit_binom_;  // p x p table of C(i, j) mod p
};

// Product of componentwise binomials C(a_i, b_i) mod p. Requires b <= a
// componentwise.
Scalar binom_mod_p(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                   const PrimeField& field);

}  // namespace hamder
