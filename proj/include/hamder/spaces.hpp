#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamder/witt.hpp"

namespace hamder {

enum class SpaceKind { O, W, W_even, H, H_even, N, G, G_even_part, G_odd_part };

std::string to_string(SpaceKind kind);
std::optional<SpaceKind> parse_space_kind(const std::string& name);

struct SpaceId {
    SpaceKind kind = SpaceKind::N;
    std::optional<int> degree;  // graded slice
    bool top = false;           // sum of the non-positive degree components
};

// Ordered basis of a subspace of a fixed coordinate space. The basis is
// pivot-diagonal: vector j is the only one with a nonzero entry at
// pivots[j], so coordinates are read off at the pivots and then confirmed
// by reconstruction. Pivots are distinct but need not increase.
class SubspaceBasis {
public:
    SubspaceBasis() = default;
    SubspaceBasis(std::string name, std::uint32_t ambient_dim);

    const std::string& name() const noexcept { return name_; }
    std::uint32_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t dim() const noexcept { return vectors_.size(); }

    const SparseVec& vector(std::size_t j) const { return vectors_[j]; }
    VectorField field(std::size_t j) const { return {vectors_[j]}; }
    const std::vector<SparseVec>& vectors() const noexcept { return vectors_; }
    std::uint32_t pivot(std::size_t j) const { return pivots_[j]; }
    int zdeg(std::size_t j) const { return zdegs_[j]; }
    const std::vector<int>& zdegs() const noexcept { return zdegs_; }

    // Hamiltonian bases remember the monomial a of each D_H(a).
    bool has_sources() const noexcept { return hamiltonian_; }
    MonoId source(std::size_t j) const { return sources_.at(j); }
    std::optional<std::size_t> index_of_source(MonoId mono) const;

    // Appends v; throws std::logic_error if pivot-diagonality would break.
    void add(SparseVec v, std::uint32_t pivot, int zdeg, std::optional<MonoId> source = std::nullopt);

    std::optional<SparseVec> coords(const SparseVec& v, const PrimeField& field) const;
    bool contains(const SparseVec& v, const PrimeField& field) const { return coords(v, field).has_value(); }
    SparseVec combine(const SparseVec& coords, const PrimeField& field) const;

    // Sub-basis of the vectors with lo <= zdeg <= hi.
    SubspaceBasis filter_degree(int lo, int hi, const std::string& name) const;

private:
    std::string name_;
    std::uint32_t ambient_dim_ = 0;
    std::vector<SparseVec> vectors_;
    std::vector<std::uint32_t> pivots_;
    std::vector<Scalar> pivot_values_;
    std::vector<int> zdegs_;
    std::vector<MonoId> sources_;
    std::vector<std::int32_t> index_of_pivot_;
    std::vector<std::int32_t> index_of_source_;
    bool hamiltonian_ = false;
};

SubspaceBasis build_space(const Algebra& alg, const SpaceId& id);
SubspaceBasis build_space(const Algebra& alg, SpaceKind kind);
SubspaceBasis graded_slice(const SubspaceBasis& basis, int k);

// Basis of the D_H images of the given monomials (none of them constant).
SubspaceBasis hamiltonian_basis(const Algebra& alg, const std::vector<MonoId>& monos, const std::string& name);

enum class GeneratorSet { M, Nset, N0 };
std::vector<VectorField> generators(const Algebra& alg, GeneratorSet which);

struct SpaceDims {
    std::size_t o = 0, w = 0, w_even = 0, h = 0, h_even = 0, n = 0, g = 0;
};
SpaceDims space_dims(const Algebra& alg);

}  // namespace hamder
