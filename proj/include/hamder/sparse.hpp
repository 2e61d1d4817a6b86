#pragma once

#include <cstdint>
#include <vector>

#include "hamder/field.hpp"

namespace hamder {

struct Entry {
    std::uint32_t index;
    Scalar value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

// Sparse vector over F_p: entries sorted by strictly increasing index, no
// stored zeros.
class SparseVec {
public:
    SparseVec() = default;

    // Sorts, merges duplicate indices and drops zeros.
    static SparseVec from_unsorted(std::vector<Entry> entries, const PrimeField& field);
    static SparseVec unit(std::uint32_t index, Scalar value = 1);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    Scalar at(std::uint32_t index) const noexcept;
    const Entry& front() const { return entries_.front(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    // Appends assuming index is larger than every stored index and value != 0.
    void push_back_unchecked(std::uint32_t index, Scalar value) { entries_.push_back({index, value}); }

    friend bool operator==(const SparseVec&, const SparseVec&) = default;

private:
    std::vector<Entry> entries_;
};

// a + s * b
SparseVec axpy(const SparseVec& a, Scalar s, const SparseVec& b, const PrimeField& field);
SparseVec scaled(const SparseVec& a, Scalar s, const PrimeField& field);
SparseVec add(const SparseVec& a, const SparseVec& b, const PrimeField& field);
SparseVec sub(const SparseVec& a, const SparseVec& b, const PrimeField& field);

// Dense scratch accumulator over a fixed index range with a touched list.
class Accumulator {
public:
    explicit Accumulator(std::size_t dim) : values_(dim, 0), seen_(dim, 0) {}

    void add(std::uint32_t index, Scalar value, const PrimeField& field) {
        if (!seen_[index]) {
            seen_[index] = 1;
            touched_.push_back(index);
        }
        values_[index] = field.add(values_[index], value);
    }
    void add(const SparseVec& v, Scalar s, const PrimeField& field);
    // Returns the accumulated vector and resets the accumulator.
    SparseVec take();

private:
    std::vector<Scalar> values_;
    std::vector<std::uint8_t> seen_;
    std::vector<std::uint32_t> touched_;
};

}  // namespace hamder
