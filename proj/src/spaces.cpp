#include "hamder/spaces.hpp"

#include <bit>
#include <stdexcept>

namespace hamder {

std::string to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::O: return "O";
        case SpaceKind::W: return "W";
        case SpaceKind::W_even: return "Weven";
        case SpaceKind::H: return "H";
        case SpaceKind::H_even: return "Heven";
        case SpaceKind::N: return "N";
        case SpaceKind::G: return "G";
        case SpaceKind::G_even_part: return "EG";
        case SpaceKind::G_odd_part: return "OG";
    }
    return "?";
}

std::optional<SpaceKind> parse_space_kind(const std::string& name) {
    for (const auto kind : {SpaceKind::O, SpaceKind::W, SpaceKind::W_even, SpaceKind::H, SpaceKind::H_even,
                            SpaceKind::N, SpaceKind::G, SpaceKind::G_even_part, SpaceKind::G_odd_part}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

SubspaceBasis::SubspaceBasis(std::string name, std::uint32_t ambient_dim)
    : name_(std::move(name)), ambient_dim_(ambient_dim), index_of_pivot_(ambient_dim, -1) {}

void SubspaceBasis::add(SparseVec v, std::uint32_t pivot, int zdeg, std::optional<MonoId> source) {
    if (pivot >= ambient_dim_) throw std::out_of_range("pivot outside the ambient space");
    if (index_of_pivot_[pivot] >= 0) throw std::logic_error("duplicate pivot in " + name_);
    const Scalar value = v.at(pivot);
    if (value == 0) throw std::logic_error("pivot entry is zero in " + name_);
    if (source) {
        if (!vectors_.empty() && !hamiltonian_) throw std::logic_error("mixed basis kinds in " + name_);
        hamiltonian_ = true;
        if (index_of_source_.size() <= *source) index_of_source_.resize(*source + 1U, -1);
        index_of_source_[*source] = static_cast<std::int32_t>(vectors_.size());
        sources_.push_back(*source);
    } else if (hamiltonian_) {
        throw std::logic_error("mixed basis kinds in " + name_);
    }
    index_of_pivot_[pivot] = static_cast<std::int32_t>(vectors_.size());
    vectors_.push_back(std::move(v));
    pivots_.push_back(pivot);
    pivot_values_.push_back(value);
    zdegs_.push_back(zdeg);
}

std::optional<std::size_t> SubspaceBasis::index_of_source(MonoId mono) const {
    if (mono >= index_of_source_.size() || index_of_source_[mono] < 0) return std::nullopt;
    return static_cast<std::size_t>(index_of_source_[mono]);
}

std::optional<SparseVec> SubspaceBasis::coords(const SparseVec& v, const PrimeField& field) const {
    std::vector<Entry> c;
    std::vector<Entry> rebuilt;
    for (const auto& e : v) {
        if (e.index >= ambient_dim_) return std::nullopt;
        const std::int32_t j = index_of_pivot_[e.index];
        if (j < 0) continue;
        const auto jj = static_cast<std::size_t>(j);
        const Scalar cj = field.mul(e.value, field.inv(pivot_values_[jj]));
        c.push_back({static_cast<std::uint32_t>(j), cj});
        for (const auto& b : vectors_[jj]) rebuilt.push_back({b.index, field.mul(cj, b.value)});
    }
    if (SparseVec::from_unsorted(std::move(rebuilt), field) != v) return std::nullopt;
    return SparseVec::from_unsorted(std::move(c), field);
}

SparseVec SubspaceBasis::combine(const SparseVec& coords, const PrimeField& field) const {
    std::vector<Entry> acc;
    for (const auto& c : coords) {
        for (const auto& b : vectors_.at(c.index)) acc.push_back({b.index, field.mul(c.value, b.value)});
    }
    return SparseVec::from_unsorted(std::move(acc), field);
}

SubspaceBasis SubspaceBasis::filter_degree(int lo, int hi, const std::string& name) const {
    SubspaceBasis out(name, ambient_dim_);
    for (std::size_t j = 0; j < vectors_.size(); ++j) {
        if (zdegs_[j] < lo || zdegs_[j] > hi) continue;
        out.add(vectors_[j], pivots_[j], zdegs_[j],
                hamiltonian_ ? std::optional<MonoId>(sources_[j]) : std::nullopt);
    }
    return out;
}

SubspaceBasis hamiltonian_basis(const Algebra& alg, const std::vector<MonoId>& monos, const std::string& name) {
    SubspaceBasis out(name, witt_dim(alg));
    for (const MonoId a : monos) {
        const auto pivot = hamiltonian_pivot(alg, a);
        out.add(d_h(alg, a).terms, pivot.key, alg.zdeg(a) - 2, a);
    }
    return out;
}

namespace {

SubspaceBasis build_whole(const Algebra& alg, SpaceKind kind) {
    const auto& params = alg.params();
    const std::string name = to_string(kind);
    switch (kind) {
        case SpaceKind::O: {
            SubspaceBasis out(name, alg.dim());
            for (MonoId a = 0; a < alg.dim(); ++a) out.add(SparseVec::unit(a), a, alg.zdeg(a));
            return out;
        }
        case SpaceKind::W:
        case SpaceKind::W_even: {
            SubspaceBasis out(name, witt_dim(alg));
            for (FieldKey k = 0; k < witt_dim(alg); ++k) {
                if (kind == SpaceKind::W_even && key_parity(alg, k) != 0) continue;
                out.add(SparseVec::unit(k), k, key_zdeg(alg, k));
            }
            return out;
        }
        case SpaceKind::H:
        case SpaceKind::H_even:
        case SpaceKind::N: {
            const MonoId top = alg.top();
            const MonoId dtop = alg.divided_power_top();
            std::vector<MonoId> monos;
            for (MonoId a = 1; a < alg.dim(); ++a) {
                if (a == top) continue;
                if (kind != SpaceKind::H && alg.parity(a) != 0) continue;
                if (kind == SpaceKind::N && a == dtop) continue;
                monos.push_back(a);
            }
            return hamiltonian_basis(alg, monos, name);
        }
        case SpaceKind::G:
        case SpaceKind::G_even_part:
        case SpaceKind::G_odd_part: {
            SubspaceBasis out(name, witt_dim(alg));
            Monomial m;
            m.alpha.assign(static_cast<std::size_t>(params.even_count()), 0);
            for (int r = 0; r < params.var_count(); ++r) {
                for (MonoId a = 0; a < alg.dim(); ++a) {
                    if (alg.zdeg(a) != std::popcount(alg.mask(a))) continue;
                    const FieldKey k = field_key(alg, a, r);
                    if (key_parity(alg, k) != 0) continue;
                    const int z = key_zdeg(alg, k);
                    const bool even_degree = (z % 2 + 2) % 2 == 0;
                    if (kind == SpaceKind::G_even_part && !even_degree) continue;
                    if (kind == SpaceKind::G_odd_part && even_degree) continue;
                    out.add(SparseVec::unit(k), k, z);
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown space");
}

}  // namespace

SubspaceBasis build_space(const Algebra& alg, SpaceKind kind) { return build_whole(alg, kind); }

SubspaceBasis build_space(const Algebra& alg, const SpaceId& id) {
    SubspaceBasis whole = build_whole(alg, id.kind);
    const int xi = alg.max_zdeg();
    if (id.degree) {
        const int lo = id.kind == SpaceKind::O ? 0 : -1;
        const int hi = id.kind == SpaceKind::O ? xi : xi - 1;
        if (*id.degree < lo || *id.degree > hi) {
            throw std::invalid_argument("slice degree " + std::to_string(*id.degree) + " outside " +
                                        std::to_string(lo) + ".." + std::to_string(hi));
        }
        return graded_slice(whole, *id.degree);
    }
    if (id.top) return whole.filter_degree(-1, 0, whole.name() + "_top");
    return whole;
}

SubspaceBasis graded_slice(const SubspaceBasis& basis, int k) {
    return basis.filter_degree(k, k, basis.name() + "[" + std::to_string(k) + "]");
}

std::vector<VectorField> generators(const Algebra& alg, GeneratorSet which) {
    const auto& params = alg.params();
    std::vector<VectorField> out;
    switch (which) {
        case GeneratorSet::M:
            for (int i = 0; i < params.even_count(); ++i) {
                for (std::uint32_t q = 1; q <= params.pi(i); ++q) out.push_back(d_h(alg, alg.divided_power(i, q)));
            }
            break;
        case GeneratorSet::Nset: {
            Monomial m;
            m.alpha.assign(static_cast<std::size_t>(params.even_count()), 0);
            for (int i = 0; i < params.even_count(); ++i) {
                for (int k = 0; k < params.n; ++k) {
                    for (int l = k + 1; l < params.n; ++l) {
                        Monomial a = m;
                        a.alpha[static_cast<std::size_t>(i)] = 1;
                        a.mask = (1U << k) | (1U << l);
                        out.push_back(d_h(alg, alg.id_of(a)));
                    }
                }
            }
            break;
        }
        case GeneratorSet::N0:
            {
            MonomialFilter filter;
            filter.exact_zdeg = 2;
            filter.parity = 0;
            for (const MonoId a : alg.enumerate(filter)) out.push_back(d_h(alg, a));
        }
            break;
    }
    return out;
}

SpaceDims space_dims(const Algebra& alg) {
    const auto& params = alg.params();
    SpaceDims d;
    d.o = alg.dim();
    d.w = witt_dim(alg);
    std::size_t even_monos = 0;
    for (MonoId a = 0; a < alg.dim(); ++a) even_monos += alg.parity(a) == 0 ? 1 : 0;
    const std::size_t odd_monos = d.o - even_monos;
    d.w_even = even_monos * static_cast<std::size_t>(params.even_count()) + odd_monos * static_cast<std::size_t>(params.n);
    d.h = d.o - 2;
    d.h_even = even_monos - 1 - (params.n % 2 == 0 ? 1 : 0);
    d.n = d.h_even - 1;
    d.g = params.n == 0 ? static_cast<std::size_t>(params.even_count())
                        : static_cast<std::size_t>(params.var_count()) << (params.n - 1);
    return d;
}

}  // namespace hamder
