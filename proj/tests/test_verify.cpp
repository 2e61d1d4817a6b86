#include <doctest.h>

#include "hamder/expr.hpp"
#include "hamder/verify.hpp"
#include "support.hpp"

using namespace hamder;

namespace {

BasisPtr space(const Algebra& alg, SpaceKind kind) { return std::make_shared<SubspaceBasis>(build_space(alg, kind)); }

CheckPolicy light() {
    CheckPolicy p;
    p.samples = 2000;
    p.cap = 3;
    return p;
}

}  // namespace

TEST_CASE("family matching round trips") {
    const Algebra alg(testsupport::family_params());
    const auto n = space(alg, SpaceKind::N);

    const auto three_phi = scale_map(alg, 3, phi(alg, n, 0, 1));
    REQUIRE(three_phi.zdeg == std::optional<int>(-1));
    const auto m = match_family_coefficients(alg, three_phi);
    CHECK(m.coeffs.phi.at({0, 1}) == 3);
    CHECK(m.coeffs.theta.empty());
    CHECK(m.coeffs.lambda_prime == 0);
    CHECK(is_zero_map(m.residual));

    const auto gp = match_family_coefficients(alg, ad_gamma_prime(alg, n));
    CHECK(gp.coeffs.lambda_prime == 1);
    CHECK(gp.coeffs.phi.empty());
    CHECK(is_zero_map(gp.residual));

    auto zero = zero_map(n);
    zero.zdeg = 2;
    const auto z = match_family_coefficients(alg, zero);
    CHECK(z.coeffs.families_zero());
    CHECK(z.coeffs.inner.is_zero());

    auto eta = scale_map(alg, 2, ad_partial_power(alg, n, 0, 1));
    const auto e = match_family_coefficients(alg, eta);
    CHECK(e.coeffs.ad_partial.at({0, 1}) == 2);
    CHECK(is_zero_map(e.residual));

    auto not_vanishing = ad(alg, partial_field(alg, 0), n);
    not_vanishing.zdeg = -1;
    CHECK_THROWS_AS(match_family_coefficients(alg, not_vanishing), std::invalid_argument);
}

TEST_CASE("probe images of the wrong form are rejected") {
    const Algebra alg(testsupport::family_params());
    const auto n = space(alg, SpaceKind::N);
    // D_H(x_1^(5)) -> x^omega d1 is not a multiple of D_H(x^omega).
    LinearMapOnBasis bad = zero_map(n, "bad");
    Monomial m;
    m.alpha = {5, 0, 0, 0};
    const auto j = n->index_of_source(alg.id_of(m));
    REQUIRE(j);
    bad.images[*j] = module_scale(alg, alg.mono(alg.omega()), partial_field(alg, 0));
    bad.zdeg = -1;
    CHECK_THROWS_AS(match_family_coefficients(alg, bad), MatchError);
}

TEST_CASE("classification of simple derivations") {
    const Algebra alg(testsupport::family_params());
    const auto n = space(alg, SpaceKind::N);

    auto d1 = ad(alg, partial_field(alg, 0), n);
    d1.zdeg = -1;
    const auto c = classify_derivation(alg, d1);
    CHECK(c.residual_zero);
    CHECK(c.coeffs.families_zero());
    CHECK(c.coeffs.inner == partial_field(alg, 0));

    // ad of the exterior Euler field is normalised into lambda'.
    const auto g = classify_derivation(alg, ad(alg, gamma_prime(alg), n));
    CHECK(g.degree == 0);
    CHECK(g.coeffs.lambda_prime == 1);
    CHECK(g.coeffs.inner.is_zero());
    CHECK(g.residual_zero);

    // Degree -1: ad E plus families is recovered exactly.
    const auto slice = graded_slice(build_space(alg, SpaceKind::W_even), -1);
    std::mt19937_64 rng(5);
    FamilyCoefficients want;
    want.inner = random_combination(alg, slice, rng, 4);
    want.phi[{0, 1}] = 2;
    want.theta[{0, 1}] = 4;
    const auto assembled = assemble(alg, n, want);
    REQUIRE(assembled.zdeg == std::optional<int>(-1));
    const auto got = classify_derivation(alg, assembled);
    CHECK(got.residual_zero);
    CHECK(got.coeffs.phi.at({0, 1}) == 2);
    CHECK(got.coeffs.theta.at({0, 1}) == 4);

    // Odd positive degree: inner only.
    FamilyCoefficients odd;
    odd.inner = random_combination(alg, graded_slice(build_space(alg, SpaceKind::W_even), 3), rng, 4);
    const auto oc = classify_derivation(alg, assemble(alg, n, odd));
    CHECK(oc.residual_zero);
    CHECK(oc.coeffs.families_zero());
    CHECK(maps_equal(ad(alg, oc.coeffs.inner, n), ad(alg, odd.inner, n)));
    CHECK(maps_equal(ad(alg, got.coeffs.inner, n), ad(alg, want.inner, n)));
}

TEST_CASE("map descriptions") {
    const Algebra alg(testsupport::family_params());
    const auto spec = nlohmann::json::parse(R"j({"domain": "N",
        "combination": {"inner": "x^(1,0,0,0) d3", "families": [{"kind": "theta", "index": 1, "q": 1, "coeff": -1}]}})j");
    // inner part has degree 0 while Theta_1^(1) has degree -1: inhomogeneous.
    const auto d = map_from_json(alg, spec);
    CHECK_FALSE(d.zdeg.has_value());

    const auto one = nlohmann::json::parse(R"j({"domain": "N", "degree": -1,
        "images": [{"x": "DH(x^(2,0,0,0))", "image": "x^(1,0,0,0) d3"}]})j");
    const auto e = map_from_json(alg, one);
    CHECK(e.zdeg == std::optional<int>(-1));
    std::size_t nonzero = 0;
    for (const auto& img : e.images) nonzero += img.is_zero() ? 0 : 1;
    CHECK(nonzero == 1);

    const auto wrong_domain = nlohmann::json::parse(R"j({"domain": "W", "images": []})j");
    const auto no_body = nlohmann::json::parse(R"j({"domain": "N"})j");
    CHECK_THROWS(map_from_json(alg, wrong_domain));
    CHECK_THROWS(map_from_json(alg, no_body));
}

TEST_CASE("check catalog") {
    CHECK(all_check_ids().size() == 18);
    for (const auto id : all_check_ids()) {
        CHECK(parse_check_id(to_string(id)) == id);
        CHECK_FALSE(check_statement(id).empty());
    }
    CHECK_FALSE(parse_check_id("p9_9").has_value());
    CHECK(is_oracle_check(CheckId::t3_8_oracle));
    CHECK_FALSE(is_oracle_check(CheckId::le1));
    const auto main = testsupport::main_params();
    CHECK(applicability(CheckId::p1_3, main) == "requires n odd");
    CHECK(applicability(CheckId::p2_1, main) == "requires some t_i >= 2");
    CHECK(applicability(CheckId::t3_8_oracle, main) == "oracle checks run only in relaxed mode");
    CHECK_THROWS_AS(run_check(CheckId::p1_3, main, light()), NotApplicable);
}

TEST_CASE("reports") {
    const auto main = testsupport::main_params();
    const Report a = run_check(CheckId::l3_3, main, light());
    CHECK(a.status == Status::pass);
    CHECK(a.values.at("identities") == 24);
    CHECK_FALSE(a.extrapolated);
    CHECK(a.elapsed_ms == 0);
    const auto j = to_json(a);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"check", "statement", "params", "status", "dims", "values", "counterexamples",
                                           "seed", "elapsed_ms", "extrapolated", "budget_exhausted"});
    CHECK(j.dump() == to_json(run_check(CheckId::l3_3, main, light())).dump());
    CHECK(to_text(a).find("l3_3: pass") == 0);

    const Report psi = run_check(CheckId::p2_4, main, light());
    CHECK(psi.status == Status::fail);
    CHECK_FALSE(psi.counterexamples.empty());

    CheckPolicy tight = light();
    tight.budget = 10;
    const Report b = run_check(CheckId::t1_7, main, tight);
    CHECK(b.status == Status::fail);
    CHECK(b.budget_exhausted);
    CHECK_FALSE(b.counterexamples.empty());

    CheckPolicy timed = light();
    timed.timing = true;
    CHECK(run_check(CheckId::l3_3, main, timed).elapsed_ms > 0);
}

TEST_CASE("relaxed oracle is report-only") {
    const auto tiny = testsupport::tiny_params();
    const Report r = run_check(CheckId::t3_8_oracle, tiny, light());
    CHECK(r.status == Status::report_only);
    CHECK(r.extrapolated);
    REQUIRE(r.values.at("degrees").size() == 7);
    for (const auto& e : r.values.at("degrees")) {
        CHECK(e.at("predicted_in_der") == true);
        CHECK(e.at("der_dim").get<int>() >= e.at("predicted_dim").get<int>());
    }
    CHECK(r.values.at("degrees")[4].at("der_in_predicted") == true);
}
