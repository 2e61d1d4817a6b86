#include <doctest.h>

#include "hamder/exceptional.hpp"
#include "support.hpp"

using namespace hamder;
using testsupport::mono;

namespace {

BasisPtr space(const Algebra& alg, SpaceKind kind) { return std::make_shared<SubspaceBasis>(build_space(alg, kind)); }

VectorField image_of(const Algebra& alg, const LinearMapOnBasis& d, const Monomial& m) {
    const auto j = d.domain->index_of_source(alg.id_of(m));
    REQUIRE(j.has_value());
    return d.images[*j];
}

DerivationPolicy exhaustive() {
    DerivationPolicy p;
    p.mode = DerivationPolicy::Mode::exhaustive;
    return p;
}

}  // namespace

TEST_CASE("Gamma_lambda") {
    const Algebra alg(testsupport::main_params());
    const auto h = space(alg, SpaceKind::H_even);
    const auto g = gamma_lambda(alg, h, 3);
    CHECK(image_of(alg, g, mono({2, 0, 0, 0})).is_zero());
    CHECK(image_of(alg, g, mono({4, 4, 4, 4})) == d_h(alg, alg.omega(), 3));
    CHECK(g.zdeg == std::optional<int>(-12));
    CHECK(declared_zdeg(alg.params(), {FamilyKind::GammaLambda}) == -12);

    const Algebra odd(testsupport::make_params(5, 2, 5, {1, 1, 1, 1}));
    const auto ho = space(odd, SpaceKind::H_even);
    CHECK_THROWS(gamma_lambda(odd, ho, 1));
    CHECK(is_zero_map(gamma_lambda(odd, ho, 0)));
}

TEST_CASE("Phi, Theta and the p-th power of ad d1 at t = (2,1,1,1)") {
    const Algebra alg(testsupport::family_params());
    const auto h = space(alg, SpaceKind::H_even);
    const auto dh_omega = d_h(alg, alg.omega());

    const auto f = phi(alg, h, 0, 1);
    CHECK(image_of(alg, f, mono({5, 0, 0, 0})) == dh_omega);
    CHECK(image_of(alg, f, mono({6, 0, 0, 0})) == module_scale(alg, alg.divided_power(0, 1), dh_omega));
    CHECK(image_of(alg, f, mono({4, 1, 0, 0})).is_zero());
    CHECK(f.zdeg == std::optional<int>(-1));

    const auto th = theta(alg, h, 0, 1);
    CHECK(image_of(alg, th, mono({6, 0, 0, 0})) == module_scale(alg, alg.mono(alg.omega()), partial_field(alg, 2)));
    CHECK(image_of(alg, th, mono({4, 3, 2, 1})).is_zero());

    const auto a = ad_partial_power(alg, h, 0, 1);
    CHECK(image_of(alg, a, mono({6, 0, 0, 0})) == d_h(alg, alg.divided_power(0, 1)));
    CHECK(maps_equal(a, ad_partial_power_iterated(alg, h, 0, 1)));
    CHECK(a.zdeg == std::optional<int>(-5));

    // p^q beyond the truncation height gives the zero map
    CHECK(is_zero_map(phi(alg, h, 1, 1)));
    CHECK(is_zero_map(theta(alg, h, 0, 2)));
    CHECK(is_zero_map(ad_partial_power(alg, h, 1, 1)));
    CHECK(is_zero_map(ad_partial_power_iterated(alg, h, 1, 1)));

    const Algebra base(testsupport::main_params());
    CHECK(is_zero_map(phi(base, space(base, SpaceKind::H_even), 0, 1)));
}

TEST_CASE("Psi") {
    const Algebra alg(testsupport::main_params());
    const auto h = space(alg, SpaceKind::H_even);
    const auto s = psi(alg, h, 0);
    CHECK(image_of(alg, s, mono({1, 0, 1, 0})) == d_h(alg, alg.omega()));
    CHECK(image_of(alg, s, mono({0, 0, 0, 0}, {0, 1})).is_zero());
    CHECK(image_of(alg, s, mono({1, 1, 0, 0})).is_zero());
    CHECK(s.zdeg == std::optional<int>(2));
    CHECK_THROWS(psi(alg, h, 2));
    const Algebra odd(testsupport::make_params(5, 2, 5, {1, 1, 1, 1}));
    CHECK_THROWS(psi(odd, space(odd, SpaceKind::H_even), 0));
    CHECK_THROWS(phi(odd, space(odd, SpaceKind::H_even), 0, 1));
    CHECK_THROWS(theta(odd, space(odd, SpaceKind::H_even), 0, 1));
}

TEST_CASE("ad Gamma' on the degree one Hamiltonian fields") {
    const Algebra alg(testsupport::main_params());
    const auto h = space(alg, SpaceKind::H_even);
    const auto g = ad_gamma_prime(alg, h);
    for (int i = 0; i < 4; ++i) {
        Monomial m = mono({0, 0, 0, 0}, {0, 1});
        m.alpha[static_cast<std::size_t>(i)] = 1;
        const Scalar two_tau = alg.params().tau(i) > 0 ? 2 : 3;
        CHECK(image_of(alg, g, m) == module_scale(alg, alg.mono(mono({0, 0, 0, 0}, {0, 1}), two_tau),
                                                   partial_field(alg, alg.params().prime(i))));
    }
}

TEST_CASE("families are derivations, exhaustively at small parameters") {
    const Algebra alg(testsupport::make_params(5, 1, 2, {2, 1}, true));
    const auto h = space(alg, SpaceKind::H_even);
    const std::vector<LinearMapOnBasis> maps{gamma_lambda(alg, h, 1), phi(alg, h, 0, 1), theta(alg, h, 0, 1),
                                             ad_gamma_prime(alg, h), ad_partial_power(alg, h, 0, 1)};
    for (const auto& d : maps) {
        INFO(d.label);
        CHECK_FALSE(is_zero_map(d));
        CHECK(is_derivation(alg, d, exhaustive()).pass);
    }
    // a family with the wrong index sign is not a derivation
    auto broken = phi(alg, h, 0, 1);
    broken = add_maps(alg, broken, gamma_lambda(alg, h, 1));
    broken.images[0] = add(alg, broken.images[0], partial_field(alg, 0));
    CHECK_FALSE(is_derivation(alg, broken, exhaustive()).pass);
}

TEST_CASE("Psi has a Leibniz defect on D_H(x_i^(2)), D_H(x_i'^(2))") {
    for (const auto& params : {testsupport::main_params(), testsupport::make_params(5, 1, 2, {2, 1}, true)}) {
        const Algebra alg(params);
        const auto h = space(alg, SpaceKind::H_even);
        const int m = params.m;
        for (int i = 0; i < m; ++i) {
            const auto d = psi(alg, h, i);
            const VectorField x = d_h(alg, alg.divided_power(i, 2));
            const VectorField y = d_h(alg, alg.divided_power(i + m, 2));
            // x = x_i d_i', so [x, y] = D_H(x_i x_i') and Psi^(i) sends it to D_H(x^omega)
            CHECK(x == module_scale(alg, alg.variable(i), partial_field(alg, i + m)));
            const SuperPoly xixj = mul(alg, alg.variable(i), alg.variable(i + m));
            CHECK(bracket(alg, x, y) == d_h(alg, xixj));
            CHECK(evaluate(alg, d, x).is_zero());
            CHECK(evaluate(alg, d, y).is_zero());
            CHECK(leibniz_defect(alg, d, x, y) == d_h(alg, alg.omega()));
            CHECK_FALSE(is_derivation(alg, d).pass);
        }
    }
}

TEST_CASE("measured degrees agree with the declared ones") {
    const Algebra alg(testsupport::family_params());
    const auto h = space(alg, SpaceKind::H_even);
    std::vector<FamilyTag> tags{{FamilyKind::GammaLambda, 0, 1, 1}, {FamilyKind::Phi, 0, 1},
                                {FamilyKind::Theta, 0, 1},        {FamilyKind::Psi, 0, 0},
                                {FamilyKind::Psi, 1, 0},          {FamilyKind::AdGammaPrime},
                                {FamilyKind::AdPartialPower, 0, 1}};
    for (const auto& tag : tags) {
        const auto d = build_family(alg, h, tag);
        const int expected = declared_zdeg(alg.params(), tag);
        std::size_t nonzero = 0;
        for (std::size_t j = 0; j < h->dim(); ++j) {
            if (d.images[j].is_zero()) continue;
            ++nonzero;
            CHECK(field_zdeg(alg, d.images[j]) == std::optional<int>(h->zdeg(j) + expected));
        }
        CHECK(nonzero > 0);
    }
}

TEST_CASE("Theta does not extend to W as a derivation") {
    const Algebra alg(testsupport::family_params());
    const auto w = find_theta_witness(alg, 0, 1);
    REQUIRE(w.has_value());
    VectorField defect = theta_on_witt(alg, bracket(alg, w->x, w->y), 0, 1);
    defect = sub(alg, defect, bracket(alg, theta_on_witt(alg, w->x, 0, 1), w->y));
    defect = sub(alg, defect, bracket(alg, w->x, theta_on_witt(alg, w->y, 0, 1)));
    CHECK_FALSE(defect.is_zero());
    CHECK(defect == w->defect);
    // on Hamiltonian fields the extension agrees with Theta
    const auto h = space(alg, SpaceKind::H_even);
    const auto th = theta(alg, h, 0, 1);
    for (std::size_t j = 0; j < h->dim(); j += 37) CHECK(theta_on_witt(alg, h->field(j), 0, 1) == th.images[j]);
}

TEST_CASE("family names") {
    for (const auto k : {FamilyKind::GammaLambda, FamilyKind::Phi, FamilyKind::Theta, FamilyKind::Psi,
                         FamilyKind::AdGammaPrime, FamilyKind::AdPartialPower}) {
        CHECK(parse_family(family_name(k)) == k);
    }
    CHECK(family_label({FamilyKind::Phi, 0, 1}) == "Phi_1^(1)");
}
