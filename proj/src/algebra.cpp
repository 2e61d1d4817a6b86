#include "hamder/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hamder {

namespace {

// Sign of x^u x^v -> x^(u|v) for disjoint exterior masks.
inline bool merge_sign_negative(std::uint32_t u, std::uint32_t v) noexcept {
    unsigned inversions = 0;
    while (v != 0) {
        const int j = std::countr_zero(v);
        v &= v - 1;
        const std::uint32_t above = (j >= 31) ? 0U : (u >> (j + 1));
        inversions += static_cast<unsigned>(std::popcount(above));
    }
    return (inversions & 1U) != 0;
}

}  // namespace

Algebra::Algebra(Params params) : params_(std::move(params)), field_(params_.p) {
    validate(params_);
    even_ = params_.even_count();
    const std::uint32_t ext = 1U << params_.n;
    radix_.resize(static_cast<std::size_t>(even_));
    std::uint64_t stride = ext;
    for (int i = 0; i < even_; ++i) {
        radix_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(stride);
        stride *= static_cast<std::uint64_t>(params_.pi(i)) + 1;
    }
    const auto total = static_cast<std::uint32_t>(stride);

    struct Key {
        std::uint32_t packed;
        int zdeg;
    };
    std::vector<Key> keys(total);
    std::vector<std::uint32_t> digits(static_cast<std::size_t>(even_));
    for (std::uint32_t packed = 0; packed < total; ++packed) {
        std::uint32_t rest = packed / ext;
        int degree = std::popcount(packed % ext);
        for (int i = 0; i < even_; ++i) {
            const std::uint32_t base = params_.pi(i) + 1;
            degree += static_cast<int>(rest % base);
            rest /= base;
        }
        keys[packed] = {packed, degree};
    }
    auto alpha_of = [&](std::uint32_t packed, int i) {
        return (packed / radix_[static_cast<std::size_t>(i)]) % (params_.pi(i) + 1);
    };
    std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
        if (a.zdeg != b.zdeg) return a.zdeg < b.zdeg;
        for (int i = 0; i < even_; ++i) {
            const auto x = alpha_of(a.packed, i);
            const auto y = alpha_of(b.packed, i);
            if (x != y) return x < y;
        }
        return (a.packed % ext) < (b.packed % ext);
    });

    alpha_.resize(static_cast<std::size_t>(total) * static_cast<std::size_t>(even_));
    mask_.resize(total);
    zdeg_.resize(total);
    parity_.resize(total);
    packed_.resize(total);
    canonical_.resize(total);
    for (std::uint32_t id = 0; id < total; ++id) {
        const std::uint32_t packed = keys[id].packed;
        packed_[id] = packed;
        canonical_[packed] = id;
        mask_[id] = packed % ext;
        zdeg_[id] = keys[id].zdeg;
        parity_[id] = static_cast<std::uint8_t>(std::popcount(mask_[id]) & 1);
        for (int i = 0; i < even_; ++i) {
            alpha_[static_cast<std::size_t>(id) * even_ + i] = alpha_of(packed, i);
        }
    }

    binom_.resize(static_cast<std::size_t>(even_));
    for (int i = 0; i < even_; ++i) {
        const std::uint32_t side = params_.pi(i) + 1;
        auto& table = binom_[static_cast<std::size_t>(i)];
        table.assign(static_cast<std::size_t>(side) * side, 0);
        for (std::uint32_t a = 0; a < side; ++a) {
            for (std::uint32_t b = 0; a + b < side; ++b) {
                table[a * side + b] = field_.binom(a + b, a);
            }
        }
    }
}

Monomial Algebra::monomial(MonoId id) const {
    const auto a = alpha(id);
    return {std::vector<std::uint32_t>(a.begin(), a.end()), mask_[id]};
}

std::uint32_t Algebra::packed_of(const Monomial& mono) const {
    std::uint32_t packed = mono.mask;
    for (int i = 0; i < even_; ++i) packed += mono.alpha[static_cast<std::size_t>(i)] * radix_[static_cast<std::size_t>(i)];
    return packed;
}

std::optional<MonoId> Algebra::find(const Monomial& mono) const {
    if (static_cast<int>(mono.alpha.size()) != even_) return std::nullopt;
    if (mono.mask > omega_mask()) return std::nullopt;
    for (int i = 0; i < even_; ++i) {
        if (mono.alpha[static_cast<std::size_t>(i)] > params_.pi(i)) return std::nullopt;
    }
    return canonical_[packed_of(mono)];
}

MonoId Algebra::id_of(const Monomial& mono) const {
    const auto id = find(mono);
    if (!id) throw std::out_of_range("monomial outside O(2m,n;t)");
    return *id;
}

MonoId Algebra::top() const { return dim() - 1; }

MonoId Algebra::divided_power_top() const {
    Monomial m;
    m.alpha.resize(static_cast<std::size_t>(even_));
    for (int i = 0; i < even_; ++i) m.alpha[static_cast<std::size_t>(i)] = params_.pi(i);
    return id_of(m);
}

MonoId Algebra::omega() const {
    Monomial m;
    m.alpha.assign(static_cast<std::size_t>(even_), 0);
    m.mask = omega_mask();
    return id_of(m);
}

ScaledMono Algebra::mul(MonoId a, MonoId b) const noexcept {
    const std::uint32_t ma = mask_[a];
    const std::uint32_t mb = mask_[b];
    if ((ma & mb) != 0) return {};
    Scalar coeff = 1;
    const std::uint32_t* pa = alpha_.data() + static_cast<std::size_t>(a) * even_;
    const std::uint32_t* pb = alpha_.data() + static_cast<std::size_t>(b) * even_;
    for (int i = 0; i < even_; ++i) {
        if (pb[i] == 0) continue;
        const auto& table = binom_[static_cast<std::size_t>(i)];
        const std::uint32_t side = params_.pi(i) + 1;
        if (pa[i] + pb[i] >= side) {
            // C(a+b, a) vanishes mod p whenever a+b exceeds p^t - 1.
            assert(field_.binom(pa[i] + pb[i], pa[i]) == 0);
            return {};
        }
        coeff = field_.mul(coeff, table[pa[i] * side + pb[i]]);
        if (coeff == 0) return {};
    }
    if (merge_sign_negative(ma, mb)) coeff = field_.neg(coeff);
    return {canonical_[packed_[a] + packed_[b]], coeff};
}

ScaledMono Algebra::partial(int var, MonoId a) const noexcept {
    if (var < even_) {
        if (alpha_[static_cast<std::size_t>(a) * even_ + var] == 0) return {};
        return {canonical_[packed_[a] - radix_[static_cast<std::size_t>(var)]], 1};
    }
    const int k = var - even_;
    const std::uint32_t bit = 1U << k;
    const std::uint32_t m = mask_[a];
    if ((m & bit) == 0) return {};
    const bool negative = (std::popcount(m & (bit - 1U)) & 1) != 0;
    return {canonical_[packed_[a] - bit], negative ? field_.neg(1) : Scalar{1}};
}

ScaledMono Algebra::partial_power(int var, std::uint32_t k, MonoId a) const noexcept {
    assert(var < even_);
    if (alpha_[static_cast<std::size_t>(a) * even_ + var] < k) return {};
    return {canonical_[packed_[a] - k * radix_[static_cast<std::size_t>(var)]], 1};
}

SuperPoly Algebra::mono(MonoId id, Scalar c) const {
    return SuperPoly{SparseVec::unit(id, c % params_.p)};
}

SuperPoly Algebra::divided_power(int var, std::uint32_t exponent) const {
    Monomial m;
    m.alpha.assign(static_cast<std::size_t>(even_), 0);
    m.alpha.at(static_cast<std::size_t>(var)) = exponent;
    return mono(id_of(m));
}

SuperPoly Algebra::variable(int var) const {
    Monomial m;
    m.alpha.assign(static_cast<std::size_t>(even_), 0);
    if (var < even_) {
        m.alpha[static_cast<std::size_t>(var)] = 1;
    } else {
        m.mask = 1U << (var - even_);
    }
    return mono(id_of(m));
}

std::vector<MonoId> Algebra::enumerate(const MonomialFilter& filter) const {
    std::vector<MonoId> out;
    for (MonoId id = 0; id < dim(); ++id) {
        if (filter.max_zdeg && zdeg_[id] > *filter.max_zdeg) break;
        if (filter.exact_zdeg && zdeg_[id] != *filter.exact_zdeg) continue;
        if (filter.parity && parity_[id] != *filter.parity) continue;
        out.push_back(id);
    }
    return out;
}

SuperPoly add(const Algebra& alg, const SuperPoly& f, const SuperPoly& g) {
    return {add(f.terms, g.terms, alg.field())};
}

SuperPoly sub(const Algebra& alg, const SuperPoly& f, const SuperPoly& g) {
    return {sub(f.terms, g.terms, alg.field())};
}

SuperPoly scale(const Algebra& alg, Scalar c, const SuperPoly& f) {
    return {scaled(f.terms, c, alg.field())};
}

SuperPoly mul(const Algebra& alg, const SuperPoly& f, const SuperPoly& g) {
    const auto& field = alg.field();
    std::vector<Entry> acc;
    acc.reserve(f.terms.size() * g.terms.size());
    for (const auto& a : f.terms) {
        for (const auto& b : g.terms) {
            const auto r = alg.mul(a.index, b.index);
            if (r.coeff == 0) continue;
            acc.push_back({r.mono, field.mul(r.coeff, field.mul(a.value, b.value))});
        }
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

SuperPoly partial(const Algebra& alg, int var, const SuperPoly& f) {
    if (var < 0 || var >= alg.var_count()) {
        throw std::out_of_range("variable index " + std::to_string(var) + " out of range");
    }
    const auto& field = alg.field();
    std::vector<Entry> acc;
    for (const auto& a : f.terms) {
        const auto r = alg.partial(var, a.index);
        if (r.coeff != 0) acc.push_back({r.mono, field.mul(r.coeff, a.value)});
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

SuperPoly partial_power(const Algebra& alg, int var, std::uint32_t k, const SuperPoly& f) {
    if (var < 0 || var >= alg.params().even_count()) {
        throw std::out_of_range("divided-power derivative needs an even variable");
    }
    std::vector<Entry> acc;
    for (const auto& a : f.terms) {
        const auto r = alg.partial_power(var, k, a.index);
        if (r.coeff != 0) acc.push_back({r.mono, a.value});
    }
    return {SparseVec::from_unsorted(std::move(acc), alg.field())};
}

Grade parity(const Algebra& alg, const SuperPoly& f) {
    Grade g;
    for (const auto& e : f.terms) {
        const int v = alg.parity(e.index);
        if (g && *g != v) return std::nullopt;
        g = v;
    }
    return g;
}

Grade zdeg(const Algebra& alg, const SuperPoly& f) {
    Grade g;
    for (const auto& e : f.terms) {
        const int v = alg.zdeg(e.index);
        if (g && *g != v) return std::nullopt;
        g = v;
    }
    return g;
}

}  // namespace hamder
