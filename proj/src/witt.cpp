#include "hamder/witt.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace hamder {

VectorField field_term(const Algebra& alg, MonoId mono, int direction, Scalar c) {
    if (direction < 0 || direction >= alg.var_count()) {
        throw std::out_of_range("direction " + std::to_string(direction) + " out of range");
    }
    return {SparseVec::unit(field_key(alg, mono, direction), c % alg.params().p)};
}

VectorField partial_field(const Algebra& alg, int direction) {
    return field_term(alg, alg.one(), direction);
}

VectorField make_field(const Algebra& alg, const SuperPoly& coefficient, int direction) {
    if (direction < 0 || direction >= alg.var_count()) {
        throw std::out_of_range("direction " + std::to_string(direction) + " out of range");
    }
    VectorField out;
    for (const auto& e : coefficient.terms) {
        out.terms.push_back_unchecked(field_key(alg, e.index, direction), e.value);
    }
    return out;
}

SuperPoly field_coefficient(const Algebra& alg, const VectorField& d, int direction) {
    SuperPoly out;
    for (const auto& e : d.terms) {
        if (key_direction(alg, e.index) == direction) {
            out.terms.push_back_unchecked(key_mono(alg, e.index), e.value);
        }
    }
    return out;
}

VectorField add(const Algebra& alg, const VectorField& a, const VectorField& b) {
    return {add(a.terms, b.terms, alg.field())};
}

VectorField sub(const Algebra& alg, const VectorField& a, const VectorField& b) {
    return {sub(a.terms, b.terms, alg.field())};
}

VectorField scale(const Algebra& alg, Scalar c, const VectorField& a) {
    return {scaled(a.terms, c, alg.field())};
}

SuperPoly apply(const Algebra& alg, const VectorField& d, const SuperPoly& f) {
    const auto& field = alg.field();
    std::vector<Entry> acc;
    for (const auto& term : d.terms) {
        const MonoId a = key_mono(alg, term.index);
        const int i = key_direction(alg, term.index);
        for (const auto& fe : f.terms) {
            const auto df = alg.partial(i, fe.index);
            if (df.coeff == 0) continue;
            const auto prod = alg.mul(a, df.mono);
            if (prod.coeff == 0) continue;
            const Scalar c = field.mul(field.mul(term.value, fe.value), field.mul(df.coeff, prod.coeff));
            acc.push_back({prod.mono, c});
        }
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

VectorField module_scale(const Algebra& alg, const SuperPoly& a, const VectorField& d) {
    const auto& field = alg.field();
    std::vector<Entry> acc;
    for (const auto& ae : a.terms) {
        for (const auto& term : d.terms) {
            const auto prod = alg.mul(ae.index, key_mono(alg, term.index));
            if (prod.coeff == 0) continue;
            acc.push_back({field_key(alg, prod.mono, key_direction(alg, term.index)),
                           field.mul(prod.coeff, field.mul(ae.value, term.value))});
        }
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

VectorField bracket(const Algebra& alg, const VectorField& a, const VectorField& b) {
    const auto& field = alg.field();
    const auto& params = alg.params();
    std::vector<Entry> acc;
    acc.reserve(2 * a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms) {
        const MonoId ma = key_mono(alg, ta.index);
        const int i = key_direction(alg, ta.index);
        const int pa = (alg.parity(ma) + params.mu(i)) & 1;
        for (const auto& tb : b.terms) {
            const MonoId mb = key_mono(alg, tb.index);
            const int j = key_direction(alg, tb.index);
            const int pb = (alg.parity(mb) + params.mu(j)) & 1;
            const Scalar cab = field.mul(ta.value, tb.value);
            // a d_i(b) d_j
            const auto dib = alg.partial(i, mb);
            if (dib.coeff != 0) {
                const auto prod = alg.mul(ma, dib.mono);
                if (prod.coeff != 0) {
                    acc.push_back({field_key(alg, prod.mono, j),
                                   field.mul(cab, field.mul(dib.coeff, prod.coeff))});
                }
            }
            // - (-1)^{pa pb} b d_j(a) d_i
            const auto dja = alg.partial(j, ma);
            if (dja.coeff != 0) {
                const auto prod = alg.mul(mb, dja.mono);
                if (prod.coeff != 0) {
                    Scalar c = field.mul(cab, field.mul(dja.coeff, prod.coeff));
                    if ((pa & pb) == 0) c = field.neg(c);
                    acc.push_back({field_key(alg, prod.mono, i), c});
                }
            }
        }
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

VectorField d_h(const Algebra& alg, MonoId mono, Scalar c) {
    const auto& field = alg.field();
    const auto& params = alg.params();
    c %= params.p;
    std::vector<Entry> acc;
    if (c == 0) return {};
    const int pa = alg.parity(mono);
    for (int i = 0; i < params.var_count(); ++i) {
        const auto r = alg.partial(i, mono);
        if (r.coeff == 0) continue;
        Scalar v = field.mul(c, r.coeff);
        const bool negative = (params.tau(i) < 0) != ((params.mu(i) & pa) != 0);
        if (negative) v = field.neg(v);
        acc.push_back({field_key(alg, r.mono, params.prime(i)), v});
    }
    return {SparseVec::from_unsorted(std::move(acc), field)};
}

VectorField d_h(const Algebra& alg, const SuperPoly& a) {
    std::vector<Entry> acc;
    for (const auto& e : a.terms) {
        const auto part = d_h(alg, e.index, e.value);
        acc.insert(acc.end(), part.terms.begin(), part.terms.end());
    }
    return {SparseVec::from_unsorted(std::move(acc), alg.field())};
}

Grade field_parity(const Algebra& alg, const VectorField& d) {
    Grade g;
    for (const auto& e : d.terms) {
        const int v = key_parity(alg, e.index);
        if (g && *g != v) return std::nullopt;
        g = v;
    }
    return g;
}

Grade field_zdeg(const Algebra& alg, const VectorField& d) {
    Grade g;
    for (const auto& e : d.terms) {
        const int v = key_zdeg(alg, e.index);
        if (g && *g != v) return std::nullopt;
        g = v;
    }
    return g;
}

VectorField gamma_prime(const Algebra& alg) {
    const auto& params = alg.params();
    VectorField out;
    for (int r = params.even_count(); r < params.var_count(); ++r) {
        out = add(alg, out, module_scale(alg, alg.variable(r), partial_field(alg, r)));
    }
    return out;
}

HamiltonianPivot hamiltonian_pivot(const Algebra& alg, MonoId mono) {
    const auto& params = alg.params();
    const auto& field = alg.field();
    const auto alpha = alg.alpha(mono);
    for (int i = 0; i < params.even_count(); ++i) {
        if (alpha[static_cast<std::size_t>(i)] == 0) continue;
        const auto r = alg.partial(i, mono);
        return {field_key(alg, r.mono, params.prime(i)), params.tau(i) < 0 ? field.neg(1) : Scalar{1}};
    }
    const std::uint32_t mask = alg.mask(mono);
    if (mask == 0) throw std::invalid_argument("D_H vanishes on constants");
    const int i = params.even_count() + std::countr_zero(mask);
    const auto r = alg.partial(i, mono);
    return {field_key(alg, r.mono, i), alg.parity(mono) != 0 ? field.neg(1) : Scalar{1}};
}

std::optional<SuperPoly> d_h_preimage(const Algebra& alg, const VectorField& v) {
    const auto& params = alg.params();
    const auto& field = alg.field();
    const int even = params.even_count();
    std::vector<Entry> acc;
    for (const auto& e : v.terms) {
        const MonoId b = key_mono(alg, e.index);
        const int d = key_direction(alg, e.index);
        const auto alpha = alg.alpha(b);
        std::optional<MonoId> source;
        if (d < even) {
            const int i = params.prime(d);
            bool first = alpha[static_cast<std::size_t>(i)] < params.pi(i);
            for (int j = 0; j < i && first; ++j) first = alpha[static_cast<std::size_t>(j)] == 0;
            if (first) {
                Monomial m = alg.monomial(b);
                m.alpha[static_cast<std::size_t>(i)] += 1;
                source = alg.id_of(m);
            }
        } else {
            const std::uint32_t bit = 1U << (d - even);
            const std::uint32_t mask = alg.mask(b);
            bool first = (mask & (bit | (bit - 1U))) == 0;
            for (int j = 0; j < even && first; ++j) first = alpha[static_cast<std::size_t>(j)] == 0;
            if (first) {
                Monomial m = alg.monomial(b);
                m.mask |= bit;
                source = alg.id_of(m);
            }
        }
        if (!source) continue;
        const auto pivot = hamiltonian_pivot(alg, *source);
        if (pivot.key != e.index) continue;
        acc.push_back({*source, field.mul(e.value, field.inv(pivot.value))});
    }
    SuperPoly f{SparseVec::from_unsorted(std::move(acc), field)};
    if (!(d_h(alg, f) == v)) return std::nullopt;
    return f;
}

}  // namespace hamder
