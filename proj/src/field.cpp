#include "hamder/field.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace hamder {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p < 3 || p > 65521) {
        throw std::invalid_argument("characteristic must be an odd prime below 2^16, got " +
                                    std::to_string(p));
    }
    digit_binom_.assign(static_cast<std::size_t>(p) * p, 0);
    for (std::uint32_t i = 0; i < p; ++i) {
        digit_binom_[i * p] = 1;
        for (std::uint32_t j = 1; j <= i; ++j) {
            const Scalar left = digit_binom_[(i - 1) * p + j - 1];
            const Scalar up = j < i ? digit_binom_[(i - 1) * p + j] : 0;
            digit_binom_[i * p + j] = add(left, up);
        }
    }
}

Scalar PrimeField::pow(Scalar a, std::uint64_t e) const noexcept {
    Scalar result = 1 % p_;
    Scalar base = a % p_;
    while (e > 0) {
        if (e & 1U) result = mul(result, base);
        base = mul(base, base);
        e >>= 1U;
    }
    return result;
}

Scalar PrimeField::inv(Scalar a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
    return pow(a, p_ - 2);
}

Scalar PrimeField::from_int(std::int64_t v) const noexcept {
    const std::int64_t p = p_;
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return static_cast<Scalar>(r);
}

std::int64_t PrimeField::to_signed(Scalar a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
}

Scalar PrimeField::binom(std::uint64_t a, std::uint64_t b) const noexcept {
    if (b > a) return 0;
    Scalar result = 1;
    while (b > 0 || a > 0) {
        const std::uint64_t da = a % p_;
        const std::uint64_t db = b % p_;
        if (db > da) return 0;
        result = mul(result, digit_binom_[da * p_ + db]);
        a /= p_;
        b /= p_;
    }
    return result;
}

Scalar binom_mod_p(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                   const PrimeField& field) {
    assert(a.size() == b.size());
    Scalar result = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        assert(b[i] <= a[i]);
        result = field.mul(result, field.binom(a[i], b[i]));
        if (result == 0) break;
    }
    return result;
}

}  // namespace hamder
