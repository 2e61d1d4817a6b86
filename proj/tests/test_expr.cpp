#include <doctest.h>

#include <random>

#include "hamder/expr.hpp"
#include "support.hpp"

using namespace hamder;
using testsupport::mono;

TEST_CASE("parse examples") {
    const Algebra alg(testsupport::main_params());
    const auto a = parse_element(alg, "DH(x^(3,0,0,0))");
    CHECK(a.is_field);
    CHECK(a.field == d_h(alg, alg.divided_power(0, 3)));

    const auto b = parse_element(alg, "2*x{5,6} d1");
    CHECK(b.is_field);
    CHECK(b.field == field_term(alg, alg.id_of(mono({0, 0, 0, 0}, {0, 1})), 0, 2));

    const auto c = parse_element(alg, "[DH(x^(3,0,0,0)), DH(x{7,8})]");
    CHECK(c.field == bracket(alg, a.field, d_h(alg, alg.mono(mono({0, 0, 0, 0}, {2, 3})))));

    CHECK(parse_element(alg, "1").poly == alg.mono(alg.one()));
    CHECK(parse_element(alg, "x^(1,0,0,0)x{5} - x^(1,0,0,0)x{5}").poly.is_zero());
    CHECK(parse_element(alg, "-x{5}").poly == alg.mono(mono({0, 0, 0, 0}, {0}), 4));
    CHECK(parse_element(alg, "1 d3").field == partial_field(alg, 2));
}

TEST_CASE("parse errors carry offsets") {
    const Algebra alg(testsupport::main_params());
    const std::string src = "[DH(x^(3,0,0,0)), DH(x{6}x{8})]";
    try {
        parse_element(alg, src);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("exterior list syntax is x{6,8}") != std::string::npos);
        CHECK(e.offset() == src.find("x{8}"));
    }
    const std::vector<std::string> bad{"x^(1,0,0)",    "x^(5,0,0,0)", "x{4}",         "x{6,5}",
                                       "DH(x{5} d1)",  "[x{5}, 1 d1]", "x{5} + 1 d1", "x{5} d9",
                                       "DH(x{5}",      "3 +",          "x^(1,0,0,0",  "y"};
    for (const auto& s : bad) {
        INFO(s);
        CHECK_THROWS_AS(parse_element(alg, s), ParseError);
    }
}

TEST_CASE("print then parse is the identity") {
    const Algebra alg(testsupport::family_params());
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Entry> poly, field;
        const int terms = static_cast<int>(rng() % 5);
        for (int k = 0; k < terms; ++k) {
            poly.push_back({static_cast<std::uint32_t>(rng() % alg.dim()), static_cast<Scalar>(rng() % 5)});
            field.push_back({static_cast<std::uint32_t>(rng() % witt_dim(alg)), static_cast<Scalar>(rng() % 5)});
        }
        const SuperPoly f{SparseVec::from_unsorted(poly, alg.field())};
        const VectorField v{SparseVec::from_unsorted(field, alg.field())};
        const std::string fs = print_poly(alg, f);
        const std::string vs = print_field(alg, v);
        if (!f.is_zero()) {
            const auto back = parse_element(alg, fs);
            CHECK_FALSE(back.is_field);
            CHECK(back.poly == f);
        }
        if (!v.is_zero()) {
            const auto back = parse_element(alg, vs);
            CHECK(back.is_field);
            CHECK(back.field == v);
            CHECK(print_field(alg, back.field) == vs);
        }
    }
    CHECK(print_poly(alg, SuperPoly{}) == "0");
    CHECK(print_field(alg, partial_field(alg, 0)) == "1 d1");
    CHECK(print_field(alg, d_h(alg, mul(alg, alg.variable(4), alg.variable(5)))) == "x{6} d5 + 4*x{5} d6");
}
