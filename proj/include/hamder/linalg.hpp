#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamder/field.hpp"
#include "hamder/sparse.hpp"

namespace hamder {

struct SparseMatrix {
    std::uint32_t cols = 0;
    std::vector<SparseVec> rows;
};

struct RrefResult {
    SparseMatrix reduced;               // nonzero rows only, pivots increasing
    std::size_t rank = 0;
    std::vector<std::uint32_t> pivots;  // pivot column of each reduced row
};

RrefResult rref(const SparseMatrix& m, const PrimeField& field);
// Basis of {v : M v = 0}, one vector per free column, fully reduced.
std::vector<SparseVec> kernel(const SparseMatrix& m, const PrimeField& field);

// Incremental semi-echelon form. Each stored row has a distinct leading
// index with value 1. With tracking enabled, every row also remembers its
// expression in terms of the vectors passed to insert() (numbered from 0),
// which makes solve() available.
class Echelon {
public:
    Echelon(std::uint32_t ambient_dim, const PrimeField& field, bool track = false);

    std::uint32_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t rank() const noexcept { return rows_.size(); }
    std::size_t inserted_count() const noexcept { return inserted_; }

    SparseVec reduce(const SparseVec& v) const;
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    // Inserts v (counted as input number inserted_count()); returns whether
    // it was independent of the current rows.
    bool insert(const SparseVec& v);
    // With tracking: inserts v and, when v was dependent, returns the
    // combination of earlier inputs equal to it.
    std::optional<SparseVec> insert_tracked(const SparseVec& v);
    // With tracking: when v reduces to zero, the combination of inputs
    // equal to v. Returns nullopt otherwise.
    std::optional<SparseVec> solve(const SparseVec& v) const;
    // With tracking: v's residual and the combination of inputs subtracted.
    std::pair<SparseVec, SparseVec> reduce_tracked(const SparseVec& v) const;

    const std::vector<SparseVec>& rows() const noexcept { return rows_; }

private:
    SparseVec reduce_impl(const SparseVec& v, std::vector<Entry>* used) const;
    SparseVec combine(const std::vector<Entry>& used) const;
    void push_row(SparseVec residual, const std::vector<Entry>& used);

    std::uint32_t ambient_dim_;
    const PrimeField* field_;
    bool track_;
    std::size_t inserted_ = 0;
    std::vector<SparseVec> rows_;
    std::vector<SparseVec> combos_;
    std::vector<std::int32_t> row_of_pivot_;
    mutable std::vector<Scalar> scratch_;
    mutable std::vector<std::uint8_t> mark_;
};

// Kernel of the linear map sending unit vector j to columns[j]. Vectors are
// expressed in column-index space.
std::vector<SparseVec> kernel_of_columns(const std::vector<SparseVec>& columns, const PrimeField& field);
// Coefficients c with sum_j c_j columns[j] = target, or nullopt.
std::optional<SparseVec> solve_in_span(const std::vector<SparseVec>& columns, const SparseVec& target,
                                       const PrimeField& field);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::size_t partial)
        : std::runtime_error(what), partial_(partial) {}
    std::size_t partial() const noexcept { return partial_; }

private:
    std::size_t partial_;
};

using BilinearOp = std::function<SparseVec(const SparseVec&, const SparseVec&)>;

struct ClosureResult {
    std::vector<SparseVec> basis;  // spanning vectors in insertion order
    std::size_t dim = 0;
    std::size_t products = 0;      // number of op evaluations
};

enum class ClosureMode {
    // Pair each accepted vector with every generator. For a Lie
    // (super)bracket the span of right-normed brackets of generators is
    // already a subalgebra, so this equals the all-pairs closure.
    lie_generators,
    // Pair each accepted vector with every accepted vector, both orders.
    all_pairs,
};

// Smallest op-closed subspace containing gens, FIFO worklist over the raw
// (unreduced) accepted vectors. Throws BudgetExceeded when the dimension
// would pass max_dim.
ClosureResult closure(const std::vector<SparseVec>& gens, const BilinearOp& op,
                      std::uint32_t ambient_dim, const PrimeField& field, std::size_t max_dim,
                      ClosureMode mode = ClosureMode::lie_generators);

}  // namespace hamder
