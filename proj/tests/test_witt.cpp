#include <random>

#include "doctest.h"
#include "hamder/witt.hpp"
#include "support.hpp"

using namespace hamder;
using testsupport::mono;

namespace {

// The coefficient of d_j in a vector field D is D(x_j). This rebuilds the
// bracket from the commutator of the two operators acting on variables.
VectorField oracle_bracket(const Algebra& alg, const VectorField& a, const VectorField& b) {
    const auto& f = alg.field();
    const auto pa = field_parity(alg, a).value_or(0);
    const auto pb = field_parity(alg, b).value_or(0);
    const Scalar sign = (pa & pb) ? f.neg(1) : 1;
    VectorField out;
    for (int j = 0; j < alg.var_count(); ++j) {
        const auto xj = alg.variable(j);
        const auto c = sub(alg, apply(alg, a, apply(alg, b, xj)), scale(alg, sign, apply(alg, b, apply(alg, a, xj))));
        out = add(alg, out, make_field(alg, c, j));
    }
    return out;
}

std::vector<VectorField> field_basis(const Algebra& alg, int max_zdeg) {
    std::vector<VectorField> out;
    for (FieldKey k = 0; k < witt_dim(alg); ++k) {
        if (key_zdeg(alg, k) <= max_zdeg) out.push_back({SparseVec::unit(k)});
    }
    return out;
}

}  // namespace

TEST_CASE("apply and module_scale examples") {
    const Algebra alg(testsupport::main_params());
    const auto d = make_field(alg, alg.divided_power(0, 1), 1);
    CHECK(apply(alg, d, alg.divided_power(1, 1)) == alg.divided_power(0, 1));
    CHECK(apply(alg, partial_field(alg, 0), alg.divided_power(0, 2)) == alg.divided_power(0, 1));
    const auto e = make_field(alg, alg.variable(4), 5);
    CHECK(apply(alg, e, alg.mono(mono({0, 0, 0, 0}, {1, 2}))) == alg.mono(mono({0, 0, 0, 0}, {0, 2})));
    CHECK(module_scale(alg, alg.mono(alg.one()), e) == e);
    CHECK(module_scale(alg, alg.mono(alg.omega()), make_field(alg, alg.variable(4), 0)).is_zero());
    CHECK(module_scale(alg, alg.divided_power(0, 1), partial_field(alg, 1)) == make_field(alg, alg.divided_power(0, 1), 1));
}

TEST_CASE("bracket examples") {
    const Algebra alg(testsupport::main_params());
    const auto& f = alg.field();
    const auto h11 = d_h(alg, mul(alg, alg.variable(0), alg.variable(2)));
    const auto h3 = d_h(alg, alg.divided_power(0, 3));
    CHECK(bracket(alg, h11, h3) == scale(alg, f.from_int(-3), h3));
    const auto hp = d_h(alg, mul(alg, alg.variable(2), alg.variable(3)));
    const auto expected = d_h(alg, mul(alg, alg.divided_power(0, 2), alg.variable(3)));
    CHECK(bracket(alg, h3, hp) == expected);
    CHECK(bracket(alg, partial_field(alg, 0), partial_field(alg, 1)).is_zero());
}

TEST_CASE("d_h examples and kernel") {
    const Algebra alg(testsupport::main_params());
    const auto& f = alg.field();
    for (int k = 4; k < 8; ++k) {
        for (int l = k + 1; l < 8; ++l) {
            const auto expected = sub(alg, make_field(alg, alg.variable(l), k), make_field(alg, alg.variable(k), l));
            CHECK(d_h(alg, mul(alg, alg.variable(k), alg.variable(l))) == expected);
        }
    }
    CHECK(d_h(alg, alg.mono(alg.one())).is_zero());
    const auto expected = sub(alg, make_field(alg, alg.variable(2), 2), make_field(alg, alg.variable(0), 0));
    CHECK(d_h(alg, mul(alg, alg.variable(0), alg.variable(2))) == expected);
    // kernel is exactly the constants: distinct monomials have independent images
    for (MonoId a = 1; a < alg.dim(); ++a) {
        const auto v = d_h(alg, a);
        REQUIRE_FALSE(v.is_zero());
        const auto back = d_h_preimage(alg, v);
        REQUIRE(back.has_value());
        CHECK(*back == alg.mono(a));
    }
    CHECK(d_h_preimage(alg, partial_field(alg, 4)) == SuperPoly{scale(alg, f.neg(1), alg.variable(4))});
    CHECK_FALSE(d_h_preimage(alg, make_field(alg, alg.variable(0), 0)).has_value());
    (void)f;
}

TEST_CASE("degree and parity metadata") {
    const Algebra alg(testsupport::main_params());
    CHECK(field_zdeg(alg, partial_field(alg, 0)) == -1);
    CHECK(field_parity(alg, partial_field(alg, 0)) == 0);
    const auto e = make_field(alg, alg.variable(4), 5);
    CHECK(field_zdeg(alg, e) == 0);
    CHECK(field_parity(alg, e) == 0);
    const auto top = d_h(alg, alg.divided_power_top());
    CHECK(field_zdeg(alg, top) == static_cast<int>(alg.params().pi_total()) - 2);
}

TEST_CASE("bracket equals the operator commutator") {
    const Algebra alg(testsupport::small_params());
    const auto basis = field_basis(alg, 2);
    for (const auto& a : basis) {
        for (const auto& b : basis) CHECK(bracket(alg, a, b) == oracle_bracket(alg, a, b));
    }
}

TEST_CASE("super skew symmetry and Jacobi on sampled triples") {
    const Algebra alg(testsupport::small_params());
    const auto& f = alg.field();
    const auto basis = field_basis(alg, alg.max_zdeg());
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    for (int s = 0; s < 3000; ++s) {
        const auto& a = basis[pick(rng)];
        const auto& b = basis[pick(rng)];
        const auto& c = basis[pick(rng)];
        const int pa = *field_parity(alg, a), pb = *field_parity(alg, b), pc = *field_parity(alg, c);
        const Scalar sab = (pa & pb) ? 1 : f.neg(1);
        CHECK(bracket(alg, a, b) == scale(alg, sab, bracket(alg, b, a)));
        // [a,[b,c]] = [[a,b],c] + (-1)^{pa pb} [b,[a,c]]
        const auto lhs = bracket(alg, a, bracket(alg, b, c));
        const Scalar s2 = (pa & pb) ? f.neg(1) : 1;
        const auto rhs = add(alg, bracket(alg, bracket(alg, a, b), c), scale(alg, s2, bracket(alg, b, bracket(alg, a, c))));
        CHECK(lhs == rhs);
        (void)pc;
    }
}

TEST_CASE("Hamiltonian identity on low-degree pairs") {
    const Algebra alg(testsupport::small_params());
    for (MonoId a = 0; a < alg.dim(); ++a) {
        if (alg.zdeg(a) > 4) break;
        for (MonoId b = 0; b < alg.dim(); ++b) {
            if (alg.zdeg(b) > 4) break;
            const auto ha = d_h(alg, a);
            const auto hb = d_h(alg, b);
            CHECK(bracket(alg, ha, hb) == d_h(alg, apply(alg, ha, alg.mono(b))));
        }
    }
}

TEST_CASE("apply(d_h(a)) is a superderivation") {
    const Algebra alg(testsupport::small_params());
    const auto& f = alg.field();
    for (MonoId a = 1; a < alg.dim(); a += 7) {
        const auto d = d_h(alg, a);
        const int pd = alg.parity(a);
        for (MonoId b = 0; b < alg.dim(); b += 5) {
            for (MonoId c = 0; c < alg.dim(); c += 11) {
                const auto fb = alg.mono(b), fc = alg.mono(c);
                const Scalar sign = (pd & alg.parity(b)) ? f.neg(1) : 1;
                const auto lhs = apply(alg, d, mul(alg, fb, fc));
                const auto rhs = add(alg, mul(alg, apply(alg, d, fb), fc), scale(alg, sign, mul(alg, fb, apply(alg, d, fc))));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("le0 two-term formula for module-scaled partials") {
    const Algebra alg(testsupport::small_params());
    const auto& f = alg.field();
    for (MonoId a = 0; a < alg.dim(); a += 3) {
        for (MonoId b = 0; b < alg.dim(); b += 3) {
            for (int i = 0; i < alg.var_count(); ++i) {
                for (int j = 0; j < alg.var_count(); ++j) {
                    const auto fa = alg.mono(a), fb = alg.mono(b);
                    const auto A = make_field(alg, fa, i);
                    const auto B = make_field(alg, fb, j);
                    const int pa = (alg.parity(a) + alg.params().mu(i)) & 1;
                    const int pb = (alg.parity(b) + alg.params().mu(j)) & 1;
                    const Scalar sign = (pa & pb) ? 1 : f.neg(1);
                    const auto expected = add(alg, make_field(alg, mul(alg, fa, partial(alg, i, fb)), j),
                                              scale(alg, sign, make_field(alg, mul(alg, fb, partial(alg, j, fa)), i)));
                    CHECK(bracket(alg, A, B) == expected);
                }
            }
        }
    }
}

TEST_CASE("Euler field on the exterior variables") {
    const Algebra alg(testsupport::main_params());
    const auto g = gamma_prime(alg);
    CHECK(g.terms.size() == 4);
    CHECK(field_zdeg(alg, g) == 0);
}
