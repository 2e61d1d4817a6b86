#include "hamder/sparse.hpp"

#include <algorithm>

namespace hamder {

SparseVec SparseVec::from_unsorted(std::vector<Entry> entries, const PrimeField& field) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVec out;
    out.entries_.reserve(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        const std::uint32_t index = entries[i].index;
        Scalar sum = 0;
        while (i < entries.size() && entries[i].index == index) {
            sum = field.add(sum, entries[i].value);
            ++i;
        }
        if (sum != 0) out.entries_.push_back({index, sum});
    }
    return out;
}

SparseVec SparseVec::unit(std::uint32_t index, Scalar value) {
    SparseVec out;
    if (value != 0) out.entries_.push_back({index, value});
    return out;
}

Scalar SparseVec::at(std::uint32_t index) const noexcept {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                     [](const Entry& e, std::uint32_t i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->value : 0;
}

SparseVec axpy(const SparseVec& a, Scalar s, const SparseVec& b, const PrimeField& field) {
    if (s == 0 || b.empty()) return a;
    SparseVec out;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->index < ib->index)) {
            out.push_back_unchecked(ia->index, ia->value);
            ++ia;
        } else if (ia == a.end() || ib->index < ia->index) {
            out.push_back_unchecked(ib->index, field.mul(s, ib->value));
            ++ib;
        } else {
            const Scalar v = field.add(ia->value, field.mul(s, ib->value));
            if (v != 0) out.push_back_unchecked(ia->index, v);
            ++ia;
            ++ib;
        }
    }
    return out;
}

SparseVec scaled(const SparseVec& a, Scalar s, const PrimeField& field) {
    SparseVec out;
    if (s == 0) return out;
    for (const auto& e : a) out.push_back_unchecked(e.index, field.mul(s, e.value));
    return out;
}

SparseVec add(const SparseVec& a, const SparseVec& b, const PrimeField& field) {
    return axpy(a, 1, b, field);
}

SparseVec sub(const SparseVec& a, const SparseVec& b, const PrimeField& field) {
    return axpy(a, field.neg(1), b, field);
}

void Accumulator::add(const SparseVec& v, Scalar s, const PrimeField& field) {
    if (s == 0) return;
    for (const auto& e : v) add(e.index, field.mul(s, e.value), field);
}

SparseVec Accumulator::take() {
    std::sort(touched_.begin(), touched_.end());
    SparseVec out;
    for (const std::uint32_t index : touched_) {
        if (values_[index] != 0) out.push_back_unchecked(index, values_[index]);
        values_[index] = 0;
        seen_[index] = 0;
    }
    touched_.clear();
    return out;
}

}  // namespace hamder
