#include "hamder/linalg.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace hamder {

Echelon::Echelon(std::uint32_t ambient_dim, const PrimeField& field, bool track)
    : ambient_dim_(ambient_dim),
      field_(&field),
      track_(track),
      row_of_pivot_(ambient_dim, -1),
      scratch_(ambient_dim, 0),
      mark_(ambient_dim, 0) {}

SparseVec Echelon::reduce_impl(const SparseVec& v, std::vector<Entry>* used) const {
    if (rows_.empty() || v.empty()) return v;
    const PrimeField& field = *field_;
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
    std::vector<std::uint32_t> touched;
    auto touch = [&](std::uint32_t i) {
        if (!mark_[i]) {
            mark_[i] = 1;
            touched.push_back(i);
            heap.push(i);
        }
    };
    for (const auto& e : v) {
        touch(e.index);
        scratch_[e.index] = e.value;
    }
    while (!heap.empty()) {
        const std::uint32_t i = heap.top();
        heap.pop();
        const Scalar c = scratch_[i];
        const std::int32_t r = row_of_pivot_[i];
        if (c == 0 || r < 0) continue;
        for (const auto& e : rows_[static_cast<std::size_t>(r)]) {
            touch(e.index);
            scratch_[e.index] = field.sub(scratch_[e.index], field.mul(c, e.value));
        }
        if (used) used->push_back({static_cast<std::uint32_t>(r), c});
    }
    std::sort(touched.begin(), touched.end());
    SparseVec out;
    for (const std::uint32_t i : touched) {
        if (scratch_[i] != 0) out.push_back_unchecked(i, scratch_[i]);
        scratch_[i] = 0;
        mark_[i] = 0;
    }
    return out;
}

SparseVec Echelon::reduce(const SparseVec& v) const { return reduce_impl(v, nullptr); }

SparseVec Echelon::combine(const std::vector<Entry>& used) const {
    std::vector<Entry> acc;
    for (const auto& u : used) {
        for (const auto& e : combos_[u.index]) acc.push_back({e.index, field_->mul(u.value, e.value)});
    }
    return SparseVec::from_unsorted(std::move(acc), *field_);
}

std::pair<SparseVec, SparseVec> Echelon::reduce_tracked(const SparseVec& v) const {
    if (!track_) throw std::logic_error("Echelon::reduce_tracked needs tracking");
    std::vector<Entry> used;
    SparseVec residual = reduce_impl(v, &used);
    return {std::move(residual), combine(used)};
}

void Echelon::push_row(SparseVec residual, const std::vector<Entry>& used) {
    const PrimeField& field = *field_;
    const Scalar inv = field.inv(residual.front().value);
    const std::uint32_t lead = residual.front().index;
    if (track_) {
        SparseVec combo = sub(SparseVec::unit(static_cast<std::uint32_t>(inserted_), 1), combine(used), field);
        combos_.push_back(scaled(combo, inv, field));
    }
    row_of_pivot_[lead] = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(scaled(residual, inv, field));
}

bool Echelon::insert(const SparseVec& v) {
    std::vector<Entry> used;
    SparseVec residual = reduce_impl(v, track_ ? &used : nullptr);
    const bool independent = !residual.empty();
    if (independent) push_row(std::move(residual), used);
    ++inserted_;
    return independent;
}

std::optional<SparseVec> Echelon::insert_tracked(const SparseVec& v) {
    if (!track_) throw std::logic_error("Echelon::insert_tracked needs tracking");
    std::vector<Entry> used;
    SparseVec residual = reduce_impl(v, &used);
    std::optional<SparseVec> dependency;
    if (residual.empty()) {
        dependency = combine(used);
    } else {
        push_row(std::move(residual), used);
    }
    ++inserted_;
    return dependency;
}

std::optional<SparseVec> Echelon::solve(const SparseVec& v) const {
    auto [residual, combo] = reduce_tracked(v);
    if (!residual.empty()) return std::nullopt;
    return combo;
}

RrefResult rref(const SparseMatrix& m, const PrimeField& field) {
    Echelon ech(m.cols, field);
    for (const auto& row : m.rows) ech.insert(row);
    std::vector<SparseVec> rows = ech.rows();
    std::sort(rows.begin(), rows.end(),
              [](const SparseVec& a, const SparseVec& b) { return a.front().index > b.front().index; });
    // Back substitution from the largest pivot down.
    std::vector<std::int32_t> finished_of(m.cols, -1);
    std::vector<SparseVec> finished;
    finished.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<Entry> acc(row.begin(), row.end());
        for (const auto& e : row) {
            const std::int32_t f = finished_of[e.index];
            if (f < 0 || e.index == row.front().index) continue;
            for (const auto& fe : finished[static_cast<std::size_t>(f)]) {
                acc.push_back({fe.index, field.neg(field.mul(e.value, fe.value))});
            }
        }
        finished_of[row.front().index] = static_cast<std::int32_t>(finished.size());
        finished.push_back(SparseVec::from_unsorted(std::move(acc), field));
    }
    std::reverse(finished.begin(), finished.end());
    RrefResult out;
    out.reduced.cols = m.cols;
    out.rank = finished.size();
    for (const auto& row : finished) out.pivots.push_back(row.front().index);
    out.reduced.rows = std::move(finished);
    return out;
}

std::vector<SparseVec> kernel(const SparseMatrix& m, const PrimeField& field) {
    const RrefResult r = rref(m, field);
    std::vector<std::uint8_t> is_pivot(m.cols, 0);
    for (const auto p : r.pivots) is_pivot[p] = 1;
    std::vector<std::vector<Entry>> by_free(m.cols);
    for (std::size_t i = 0; i < r.reduced.rows.size(); ++i) {
        for (const auto& e : r.reduced.rows[i]) {
            if (!is_pivot[e.index]) by_free[e.index].push_back({r.pivots[i], field.neg(e.value)});
        }
    }
    std::vector<SparseVec> out;
    for (std::uint32_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        auto entries = std::move(by_free[f]);
        entries.push_back({f, 1});
        out.push_back(SparseVec::from_unsorted(std::move(entries), field));
    }
    return out;
}

namespace {

// Renumbers the coordinates that occur in the given vectors to 0..k-1 so
// that elimination scratch space scales with the data, not the ambient.
struct Compactor {
    std::vector<std::uint32_t> used;

    explicit Compactor(const std::vector<const SparseVec*>& vectors) {
        for (const auto* v : vectors) {
            for (const auto& e : *v) used.push_back(e.index);
        }
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
    }
    std::uint32_t dim() const { return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(used.size())); }
    std::optional<SparseVec> map(const SparseVec& v) const {
        SparseVec out;
        for (const auto& e : v) {
            const auto it = std::lower_bound(used.begin(), used.end(), e.index);
            if (it == used.end() || *it != e.index) return std::nullopt;
            out.push_back_unchecked(static_cast<std::uint32_t>(it - used.begin()), e.value);
        }
        return out;
    }
};

}  // namespace

std::vector<SparseVec> kernel_of_columns(const std::vector<SparseVec>& columns, const PrimeField& field) {
    std::vector<const SparseVec*> refs;
    for (const auto& c : columns) refs.push_back(&c);
    const Compactor compact(refs);
    Echelon ech(compact.dim(), field, true);
    std::vector<SparseVec> out;
    for (std::uint32_t j = 0; j < columns.size(); ++j) {
        if (auto dep = ech.insert_tracked(*compact.map(columns[j]))) {
            out.push_back(sub(SparseVec::unit(j, 1), *dep, field));
        }
    }
    return out;
}

std::optional<SparseVec> solve_in_span(const std::vector<SparseVec>& columns, const SparseVec& target,
                                       const PrimeField& field) {
    std::vector<const SparseVec*> refs;
    for (const auto& c : columns) refs.push_back(&c);
    const Compactor compact(refs);
    const auto mapped_target = compact.map(target);
    if (!mapped_target) return std::nullopt;
    Echelon ech(compact.dim(), field, true);
    for (const auto& c : columns) ech.insert(*compact.map(c));
    return ech.solve(*mapped_target);
}

ClosureResult closure(const std::vector<SparseVec>& gens, const BilinearOp& op, std::uint32_t ambient_dim,
                      const PrimeField& field, std::size_t max_dim, ClosureMode mode) {
    Echelon ech(ambient_dim, field);
    ClosureResult out;
    auto accept = [&](const SparseVec& v) {
        if (v.empty() || !ech.insert(v)) return;
        out.basis.push_back(v);
        if (out.basis.size() > max_dim) {
            throw BudgetExceeded("closure exceeded the dimension budget " + std::to_string(max_dim),
                                 out.basis.size());
        }
    };
    for (const auto& g : gens) accept(g);
    std::size_t next = 0;
    while (next < out.basis.size()) {
        const SparseVec w = out.basis[next++];
        if (mode == ClosureMode::lie_generators) {
            for (const auto& g : gens) {
                ++out.products;
                accept(op(g, w));
            }
        } else {
            for (std::size_t j = 0; j < next; ++j) {
                const SparseVec other = out.basis[j];
                ++out.products;
                accept(op(other, w));
                if (j + 1 != next) {
                    ++out.products;
                    accept(op(w, other));
                }
            }
        }
    }
    out.dim = out.basis.size();
    return out;
}

}  // namespace hamder
