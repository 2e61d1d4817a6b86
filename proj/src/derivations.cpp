#include "hamder/derivations.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace hamder {

namespace {

void require_same_domain(const LinearMapOnBasis& a, const LinearMapOnBasis& b) {
    if (a.domain.get() != b.domain.get() && a.domain->vectors() != b.domain->vectors()) {
        throw std::invalid_argument("maps have different domains");
    }
}

std::optional<int> combined_degree(const LinearMapOnBasis& a, const LinearMapOnBasis& b) {
    if (is_zero_map(a)) return b.zdeg;
    if (is_zero_map(b)) return a.zdeg;
    return a.zdeg == b.zdeg ? a.zdeg : std::nullopt;
}

VectorField combine_images(const Algebra& alg, const LinearMapOnBasis& d, const SparseVec& coords) {
    std::vector<Entry> acc;
    const auto& field = alg.field();
    for (const auto& c : coords) {
        for (const auto& e : d.images[c.index].terms) acc.push_back({e.index, field.mul(c.value, e.value)});
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

// Groups (row, column, value) triples into sparse rows keyed by row id.
std::vector<SparseVec> rows_from_triples(std::vector<std::pair<std::uint64_t, Entry>>& triples, const PrimeField& field) {
    std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.index < b.second.index;
    });
    std::vector<SparseVec> rows;
    std::size_t i = 0;
    while (i < triples.size()) {
        const std::uint64_t r = triples[i].first;
        std::vector<Entry> entries;
        while (i < triples.size() && triples[i].first == r) entries.push_back(triples[i++].second);
        SparseVec row = SparseVec::from_unsorted(std::move(entries), field);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

LinearMapOnBasis zero_map(BasisPtr domain, std::string label) {
    LinearMapOnBasis out;
    out.images.resize(domain->dim());
    out.domain = std::move(domain);
    out.label = std::move(label);
    return out;
}

bool is_zero_map(const LinearMapOnBasis& a) {
    return std::all_of(a.images.begin(), a.images.end(), [](const VectorField& v) { return v.is_zero(); });
}

LinearMapOnBasis add_maps(const Algebra& alg, const LinearMapOnBasis& a, const LinearMapOnBasis& b) {
    require_same_domain(a, b);
    LinearMapOnBasis out = a;
    for (std::size_t j = 0; j < out.images.size(); ++j) out.images[j] = add(alg, a.images[j], b.images[j]);
    out.zdeg = combined_degree(a, b);
    out.label = a.label + " + " + b.label;
    return out;
}

LinearMapOnBasis scale_map(const Algebra& alg, Scalar c, const LinearMapOnBasis& a) {
    LinearMapOnBasis out = a;
    for (auto& v : out.images) v = scale(alg, c, v);
    return out;
}

LinearMapOnBasis sub_maps(const Algebra& alg, const LinearMapOnBasis& a, const LinearMapOnBasis& b) {
    LinearMapOnBasis out = add_maps(alg, a, scale_map(alg, alg.field().neg(1), b));
    out.label = a.label + " - " + b.label;
    return out;
}

bool maps_equal(const LinearMapOnBasis& a, const LinearMapOnBasis& b) { return a.images == b.images; }

LinearMapOnBasis restrict_to(const Algebra& alg, const LinearMapOnBasis& d, BasisPtr sub) {
    LinearMapOnBasis out;
    out.zdeg = d.zdeg;
    out.parity = d.parity;
    out.label = d.label;
    out.images.reserve(sub->dim());
    for (std::size_t j = 0; j < sub->dim(); ++j) out.images.push_back(evaluate(alg, d, sub->field(j)));
    out.domain = std::move(sub);
    return out;
}

VectorField evaluate(const Algebra& alg, const LinearMapOnBasis& d, const VectorField& x) {
    const auto coords = d.domain->coords(x.terms, alg.field());
    if (!coords) throw OutsideDomain("element is outside the span of " + d.domain->name());
    return combine_images(alg, d, *coords);
}

VectorField leibniz_defect(const Algebra& alg, const LinearMapOnBasis& d, const VectorField& x, const VectorField& y) {
    const VectorField dxy = evaluate(alg, d, bracket(alg, x, y));
    const VectorField rhs = add(alg, bracket(alg, evaluate(alg, d, x), y), bracket(alg, x, evaluate(alg, d, y)));
    return sub(alg, dxy, rhs);
}

VectorField leibniz_defect_basis(const Algebra& alg, const LinearMapOnBasis& d, std::size_t i, std::size_t j) {
    const auto& basis = *d.domain;
    const VectorField x = basis.field(i);
    const VectorField y = basis.field(j);
    const VectorField xy = bracket(alg, x, y);
    const auto coords = basis.coords(xy.terms, alg.field());
    if (!coords) throw OutsideDomain("bracket of basis vectors leaves " + basis.name());
    VectorField out = combine_images(alg, d, *coords);
    out = sub(alg, out, bracket(alg, d.images[i], y));
    out = sub(alg, out, bracket(alg, x, d.images[j]));
    return out;
}

DerivationReport is_derivation(const Algebra& alg, const LinearMapOnBasis& d, const DerivationPolicy& policy) {
    DerivationReport report;
    const auto& basis = *d.domain;
    const std::size_t dim = basis.dim();
    auto check = [&](std::size_t i, std::size_t j) {
        ++report.pairs_checked;
        const VectorField defect = leibniz_defect_basis(alg, d, i, j);
        if (!defect.is_zero() && report.pass) {
            report.pass = false;
            report.failure = PairFailure{basis.field(i), basis.field(j), defect};
        }
        return report.pass;
    };
    const bool exhaustive = policy.mode == DerivationPolicy::Mode::exhaustive ||
                            (policy.mode == DerivationPolicy::Mode::automatic && dim <= policy.exhaustive_limit);
    if (exhaustive) {
        report.mode = "exhaustive";
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j) {
                if (!check(i, j)) return report;
            }
        }
        return report;
    }
    report.mode = "structured";
    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < dim; ++i) {
        if (basis.zdeg(i) <= policy.cap) low.push_back(i);
    }
    for (std::size_t a = 0; a < low.size(); ++a) {
        for (std::size_t b = a; b < low.size(); ++b) {
            ++report.low_degree_pairs;
            if (!check(low[a], low[b])) return report;
        }
    }
    for (const auto& g : policy.generators) {
        const VectorField dg = evaluate(alg, d, g);
        for (std::size_t j = 0; j < dim; ++j) {
            ++report.generator_pairs;
            ++report.pairs_checked;
            const VectorField y = basis.field(j);
            const VectorField gy = bracket(alg, g, y);
            VectorField defect = evaluate(alg, d, gy);
            defect = sub(alg, defect, bracket(alg, dg, y));
            defect = sub(alg, defect, bracket(alg, g, d.images[j]));
            if (!defect.is_zero()) {
                report.pass = false;
                report.failure = PairFailure{g, y, defect};
                return report;
            }
        }
    }
    for (const std::size_t i : policy.full_indices) {
        for (std::size_t j = 0; j < dim; ++j) {
            ++report.full_index_pairs;
            if (!check(i, j)) return report;
        }
    }
    std::mt19937_64 rng(policy.seed);
    for (std::size_t s = 0; s < policy.samples && dim > 0; ++s) {
        const std::size_t i = static_cast<std::size_t>(rng() % dim);
        const std::size_t j = static_cast<std::size_t>(rng() % dim);
        ++report.sampled_pairs;
        if (!check(i, j)) return report;
    }
    return report;
}

LinearMapOnBasis ad(const Algebra& alg, const VectorField& e, BasisPtr domain, std::string label) {
    LinearMapOnBasis out;
    out.images.reserve(domain->dim());
    for (std::size_t j = 0; j < domain->dim(); ++j) out.images.push_back(bracket(alg, e, domain->field(j)));
    out.domain = std::move(domain);
    out.zdeg = field_zdeg(alg, e);
    out.parity = field_parity(alg, e).value_or(0);
    out.label = std::move(label);
    return out;
}

std::map<int, LinearMapOnBasis> graded_components(const Algebra& alg, const LinearMapOnBasis& d) {
    std::map<int, std::vector<std::vector<Entry>>> parts;
    for (std::size_t j = 0; j < d.images.size(); ++j) {
        for (const auto& e : d.images[j].terms) {
            const int k = key_zdeg(alg, e.index) - d.domain->zdeg(j);
            auto& slot = parts[k];
            if (slot.empty()) slot.resize(d.images.size());
            slot[j].push_back(e);
        }
    }
    std::map<int, LinearMapOnBasis> out;
    for (auto& [k, images] : parts) {
        LinearMapOnBasis m = zero_map(d.domain, d.label + "[" + std::to_string(k) + "]");
        m.zdeg = k;
        m.parity = d.parity;
        for (std::size_t j = 0; j < images.size(); ++j) {
            m.images[j] = {SparseVec::from_unsorted(std::move(images[j]), alg.field())};
        }
        out.emplace(k, std::move(m));
    }
    return out;
}

SubspaceBasis span_basis(const Algebra& alg, const std::vector<SparseVec>& vectors, std::uint32_t ambient_dim,
                         const std::string& name) {
    SparseMatrix m;
    m.cols = ambient_dim;
    m.rows = vectors;
    const RrefResult r = rref(m, alg.field());
    SubspaceBasis out(name, ambient_dim);
    for (std::size_t i = 0; i < r.rank; ++i) {
        const auto& v = r.reduced.rows[i];
        const bool field_space = ambient_dim == witt_dim(alg);
        int z = 0;
        if (field_space) z = field_zdeg(alg, {v}).value_or(key_zdeg(alg, v.front().index));
        out.add(v, r.pivots[i], z);
    }
    return out;
}

namespace {

// Kernel of x -> ([x, s])_s restricted to span(candidates).
std::vector<SparseVec> commuting_part(const Algebra& alg, std::vector<SparseVec> candidates,
                                      const std::vector<VectorField>& s) {
    const auto& field = alg.field();
    for (const auto& element : s) {
        if (candidates.empty()) break;
        std::vector<SparseVec> columns;
        columns.reserve(candidates.size());
        for (const auto& c : candidates) columns.push_back(bracket(alg, {c}, element).terms);
        const auto kernel = kernel_of_columns(columns, field);
        std::vector<SparseVec> next;
        next.reserve(kernel.size());
        for (const auto& k : kernel) {
            std::vector<Entry> acc;
            for (const auto& e : k) {
                for (const auto& t : candidates[e.index]) acc.push_back({t.index, field.mul(e.value, t.value)});
            }
            next.push_back(SparseVec::from_unsorted(std::move(acc), field));
        }
        candidates = std::move(next);
    }
    return candidates;
}

std::vector<VectorField> homogeneous_parts(const Algebra& alg, const std::vector<VectorField>& s) {
    std::vector<VectorField> out;
    for (const auto& element : s) {
        std::map<int, std::vector<Entry>> parts;
        for (const auto& e : element.terms) parts[key_zdeg(alg, e.index)].push_back(e);
        for (auto& [k, entries] : parts) out.push_back({SparseVec::from_unsorted(std::move(entries), alg.field())});
    }
    std::stable_sort(out.begin(), out.end(), [&](const VectorField& a, const VectorField& b) {
        return *field_zdeg(alg, a) < *field_zdeg(alg, b);
    });
    return out;
}

}  // namespace

SubspaceBasis centralizer(const Algebra& alg, const std::vector<VectorField>& s, const SubspaceBasis& ambient,
                          CentralizerMethod method, CentralizerMethod* used) {
    const auto& params = alg.params();
    const auto parts = homogeneous_parts(alg, s);
    if (method == CentralizerMethod::automatic) {
        method = CentralizerMethod::slice_wise;
        if (ambient.ambient_dim() == witt_dim(alg) && !s.empty()) {
            const SubspaceBasis span = span_basis(alg, [&] {
                std::vector<SparseVec> v;
                for (const auto& x : s) v.push_back(x.terms);
                return v;
            }(), witt_dim(alg), "S");
            bool contains_minus_one = true;
            for (int i = 0; i < params.even_count() && contains_minus_one; ++i) {
                contains_minus_one = span.contains(partial_field(alg, i).terms, alg.field());
            }
            if (contains_minus_one) method = CentralizerMethod::staged;
        }
    }
    if (used) *used = method;
    const std::string name = "C(" + ambient.name() + ")";
    std::vector<SparseVec> result;
    if (method == CentralizerMethod::staged) {
        // C_W(W_{-1}) is G; intersect the ambient with it first.
        const SubspaceBasis g = build_space(alg, SpaceKind::G);
        std::vector<SparseVec> columns;
        for (const auto& v : ambient.vectors()) columns.push_back(v);
        for (const auto& v : g.vectors()) columns.push_back(scaled(v, alg.field().neg(1), alg.field()));
        const auto kernel = kernel_of_columns(columns, alg.field());
        std::vector<SparseVec> candidates;
        for (const auto& k : kernel) {
            std::vector<Entry> acc;
            for (const auto& e : k) {
                if (e.index >= ambient.dim()) break;
                for (const auto& t : ambient.vector(e.index)) acc.push_back({t.index, alg.field().mul(e.value, t.value)});
            }
            auto v = SparseVec::from_unsorted(std::move(acc), alg.field());
            if (!v.empty()) candidates.push_back(std::move(v));
        }
        result = commuting_part(alg, span_basis(alg, candidates, ambient.ambient_dim(), "AG").vectors(), parts);
    } else {
        std::map<int, std::vector<SparseVec>> slices;
        for (std::size_t j = 0; j < ambient.dim(); ++j) slices[ambient.zdeg(j)].push_back(ambient.vector(j));
        for (auto& [k, vectors] : slices) {
            auto found = commuting_part(alg, std::move(vectors), parts);
            result.insert(result.end(), found.begin(), found.end());
        }
    }
    return span_basis(alg, result, ambient.ambient_dim(), name);
}

IdealReport is_ideal(const Algebra& alg, const SubspaceBasis& sub, const SubspaceBasis& amb) {
    IdealReport report;
    const auto& field = alg.field();
    // Ambient vectors that coincide with a sub-basis vector; such pairs are
    // symmetric up to sign and only one order is bracketed.
    std::vector<std::int64_t> sub_index(amb.dim(), -1);
    for (std::size_t i = 0; i < amb.dim(); ++i) {
        const auto c = sub.coords(amb.vector(i), field);
        if (c && c->size() == 1 && c->front().value == 1) sub_index[i] = c->front().index;
    }
    for (std::size_t i = 0; i < amb.dim(); ++i) {
        const VectorField a = amb.field(i);
        for (std::size_t j = 0; j < sub.dim(); ++j) {
            if (sub_index[i] >= 0 && static_cast<std::size_t>(sub_index[i]) > j) {
                ++report.pairs_skipped;
                continue;
            }
            ++report.pairs_checked;
            const VectorField v = bracket(alg, a, sub.field(j));
            if (!sub.contains(v.terms, field)) {
                report.ideal = false;
                report.witness = std::make_pair(i, j);
                return report;
            }
        }
    }
    return report;
}

InnerCorrection find_inner_correction(const Algebra& alg, const LinearMapOnBasis& d, CorrectionStage stage) {
    if (!d.zdeg) throw std::invalid_argument("inner correction needs a homogeneous map");
    const int t = *d.zdeg;
    const auto& basis = *d.domain;
    const auto& field = alg.field();
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const int z = basis.zdeg(j);
        if (z == -1 || (stage == CorrectionStage::zero && z == 0)) targets.push_back(j);
    }
    std::vector<SparseVec> candidates;
    if (t >= -1 && t <= alg.max_zdeg() - 1) {
        const SubspaceBasis slice = stage == CorrectionStage::minus_one
                                        ? build_space(alg, SpaceId{SpaceKind::W_even, t, false})
                                        : graded_slice(build_space(alg, SpaceKind::G), t);
        candidates = slice.vectors();
    }
    // Stack the equations [E, b] = D(b) over the target basis vectors, with
    // the W coordinates of each block compacted to the ones that occur.
    std::unordered_map<std::uint64_t, std::uint32_t> compact;
    auto row_id = [&](std::size_t block, std::uint32_t key) {
        const std::uint64_t id = static_cast<std::uint64_t>(block) * witt_dim(alg) + key;
        auto [it, inserted] = compact.emplace(id, static_cast<std::uint32_t>(compact.size()));
        return it->second;
    };
    std::vector<std::vector<Entry>> column_entries(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t b = 0; b < targets.size(); ++b) {
            const VectorField v = bracket(alg, {candidates[c]}, basis.field(targets[b]));
            for (const auto& e : v.terms) column_entries[c].push_back({row_id(b, e.index), e.value});
        }
    }
    std::vector<Entry> target_entries;
    for (std::size_t b = 0; b < targets.size(); ++b) {
        for (const auto& e : d.images[targets[b]].terms) target_entries.push_back({row_id(b, e.index), e.value});
    }
    std::vector<SparseVec> columns;
    for (auto& entries : column_entries) columns.push_back(SparseVec::from_unsorted(std::move(entries), field));
    const SparseVec target = SparseVec::from_unsorted(std::move(target_entries), field);
    const auto solution = solve_in_span(columns, target, field);
    if (!solution) {
        throw CorrectionFailed(std::string("no inner correction on the ") +
                               (stage == CorrectionStage::minus_one ? "degree -1" : "degree -1 and 0") +
                               " slice for a map of degree " + std::to_string(t) + " (" +
                               std::to_string(target.size()) + " target coordinates)");
    }
    std::vector<Entry> acc;
    for (const auto& s : *solution) {
        for (const auto& e : candidates[s.index]) acc.push_back({e.index, field.mul(s.value, e.value)});
    }
    InnerCorrection out;
    out.e = {SparseVec::from_unsorted(std::move(acc), field)};
    out.corrected = sub_maps(alg, d, ad(alg, out.e, d.domain, "ad E"));
    out.corrected.zdeg = d.zdeg;
    out.corrected.label = d.label;
    return out;
}

std::vector<LinearMapOnBasis> der_space_homogeneous(const Algebra& alg, BasisPtr domain, const SubspaceBasis& codomain,
                                                    int k, std::size_t budget) {
    const auto& field = alg.field();
    const auto& l = *domain;
    // Variables: (domain j, codomain c) with zd(c) = zd(j) + k.
    std::map<int, std::vector<std::uint32_t>> codomain_by_degree;
    for (std::size_t c = 0; c < codomain.dim(); ++c) {
        codomain_by_degree[codomain.zdeg(c)].push_back(static_cast<std::uint32_t>(c));
    }
    std::vector<std::uint64_t> offset(l.dim() + 1, 0);
    std::vector<const std::vector<std::uint32_t>*> targets(l.dim(), nullptr);
    static const std::vector<std::uint32_t> none;
    for (std::size_t j = 0; j < l.dim(); ++j) {
        const auto it = codomain_by_degree.find(l.zdeg(j) + k);
        targets[j] = it == codomain_by_degree.end() ? &none : &it->second;
        offset[j + 1] = offset[j] + targets[j]->size();
    }
    const std::uint64_t unknowns = offset[l.dim()];
    if (unknowns > budget) {
        throw BudgetExceeded("degree " + std::to_string(k) + " needs " + std::to_string(unknowns) +
                                 " unknowns, above the budget " + std::to_string(budget) +
                                 "; use smaller (relaxed) parameters or split the computation by degree",
                             0);
    }
    auto make_map = [&](const SparseVec& vars) {
        LinearMapOnBasis m = zero_map(domain, "D");
        m.zdeg = k;
        std::vector<std::vector<Entry>> parts(l.dim());
        for (const auto& e : vars) {
            const auto j = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), e.index) - offset.begin() - 1);
            const std::uint32_t c = (*targets[j])[e.index - offset[j]];
            for (const auto& t : codomain.vector(c)) parts[j].push_back({t.index, field.mul(e.value, t.value)});
        }
        for (std::size_t j = 0; j < l.dim(); ++j) m.images[j] = {SparseVec::from_unsorted(std::move(parts[j]), field)};
        return m;
    };
    if (unknowns == 0) return {};

    // Phase A: pairs involving the degree -1 slice, linearised directly.
    std::vector<std::size_t> minus_one;
    for (std::size_t j = 0; j < l.dim(); ++j) {
        if (l.zdeg(j) == -1) minus_one.push_back(j);
    }
    SparseMatrix constraints;
    constraints.cols = static_cast<std::uint32_t>(unknowns);
    std::vector<std::vector<std::uint8_t>> done(l.dim());
    for (std::size_t a : minus_one) {
        done[a].assign(l.dim(), 0);
        const VectorField x = l.field(a);
        for (std::size_t y = 0; y < l.dim(); ++y) {
            done[a][y] = 1;
            const VectorField by = l.field(y);
            std::vector<std::pair<std::uint64_t, Entry>> triples;
            const auto coords = l.coords(bracket(alg, x, by).terms, field);
            if (!coords) throw OutsideDomain("domain is not closed under the bracket");
            for (const auto& ce : *coords) {
                const auto& tj = *targets[ce.index];
                for (std::size_t c = 0; c < tj.size(); ++c) {
                    for (const auto& t : codomain.vector(tj[c])) {
                        triples.push_back({t.index, {static_cast<std::uint32_t>(offset[ce.index] + c), field.mul(ce.value, t.value)}});
                    }
                }
            }
            const auto& ta = *targets[a];
            for (std::size_t c = 0; c < ta.size(); ++c) {
                for (const auto& t : bracket(alg, codomain.field(ta[c]), by).terms) {
                    triples.push_back({t.index, {static_cast<std::uint32_t>(offset[a] + c), field.neg(t.value)}});
                }
            }
            const auto& ty = *targets[y];
            for (std::size_t c = 0; c < ty.size(); ++c) {
                for (const auto& t : bracket(alg, x, codomain.field(ty[c])).terms) {
                    triples.push_back({t.index, {static_cast<std::uint32_t>(offset[y] + c), field.neg(t.value)}});
                }
            }
            for (auto& row : rows_from_triples(triples, field)) constraints.rows.push_back(std::move(row));
        }
    }
    std::vector<LinearMapOnBasis> current;
    for (const auto& v : kernel(constraints, field)) current.push_back(make_map(v));

    // Phase B: shrink the candidate space with the remaining pairs.
    std::size_t batch_pairs = 0;
    std::vector<SparseVec> batch_rows;
    auto shrink = [&]() {
        if (batch_rows.empty()) return;
        SparseMatrix m;
        m.cols = static_cast<std::uint32_t>(current.size());
        m.rows = std::move(batch_rows);
        batch_rows.clear();
        const auto kern = kernel(m, field);
        if (kern.size() == current.size()) return;
        std::vector<LinearMapOnBasis> next;
        for (const auto& v : kern) {
            LinearMapOnBasis mm = zero_map(domain, "D");
            mm.zdeg = k;
            for (const auto& e : v) mm = add_maps(alg, mm, scale_map(alg, e.value, current[e.index]));
            mm.zdeg = k;
            next.push_back(std::move(mm));
        }
        current = std::move(next);
    };
    for (std::size_t i = 0; i < l.dim() && !current.empty(); ++i) {
        for (std::size_t j = i; j < l.dim() && !current.empty(); ++j) {
            if ((!done[i].empty() && done[i][j]) || (!done[j].empty() && done[j][i])) continue;
            std::vector<std::pair<std::uint64_t, Entry>> triples;
            for (std::size_t t = 0; t < current.size(); ++t) {
                for (const auto& e : leibniz_defect_basis(alg, current[t], i, j).terms) {
                    triples.push_back({e.index, {static_cast<std::uint32_t>(t), e.value}});
                }
            }
            for (auto& row : rows_from_triples(triples, field)) batch_rows.push_back(std::move(row));
            if (++batch_pairs % 256 == 0) shrink();
        }
    }
    shrink();
    for (auto& m : current) {
        DerivationPolicy policy;
        policy.mode = DerivationPolicy::Mode::exhaustive;
        if (!is_derivation(alg, m, policy).pass) throw std::logic_error("der_space_homogeneous: re-verification failed");
        m.label = "D";
        m.zdeg = k;
    }
    return current;
}

}  // namespace hamder
