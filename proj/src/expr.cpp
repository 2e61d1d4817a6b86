#include "hamder/expr.hpp"

#include <cctype>
#include <limits>

namespace hamder {

namespace {

class Parser {
public:
    Parser(const std::string& src, const Params& params) : src_(src), params_(params) {}

    ExprAst parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool peek_digit() {
        skip_ws();
        return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
    }
    std::uint64_t integer() {
        if (!peek_digit()) fail("expected an integer");
        std::uint64_t v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(src_[pos_] - '0');
            if (v > std::numeric_limits<std::uint32_t>::max()) fail("integer too large");
            ++pos_;
        }
        return v;
    }

    static ExprAst node(ExprNode::Kind kind, std::size_t offset) {
        auto n = std::make_shared<ExprNode>();
        n->kind = kind;
        n->offset = offset;
        return n;
    }

    ExprAst expr() {
        skip_ws();
        auto sum = node(ExprNode::Kind::Sum, pos_);
        sum->children.push_back(term(false));
        while (true) {
            if (accept('+')) {
                sum->children.push_back(term(false));
            } else if (accept('-')) {
                sum->children.push_back(term(true));
            } else {
                break;
            }
        }
        return sum->children.size() == 1 ? sum->children.front() : sum;
    }

    ExprAst term(bool negate) {
        skip_ws();
        const std::size_t start = pos_;
        while (accept('-')) negate = !negate;
        const std::uint64_t p = params_.p;
        Scalar c = 1;
        ExprAst a;
        if (peek_digit()) {
            const std::size_t num_at = pos_;
            const std::uint64_t k = integer();
            if (accept('*')) {
                c = static_cast<Scalar>(k % p);
                a = atom();
            } else {
                // bare integer: k times the monomial 1
                a = node(ExprNode::Kind::Poly, num_at);
                a->mono.alpha.assign(static_cast<std::size_t>(params_.even_count()), 0);
                c = static_cast<Scalar>(k % p);
                a = maybe_field(a);
            }
        } else {
            a = atom();
        }
        if (negate) c = c == 0 ? 0 : static_cast<Scalar>(p - c);
        if (c == 1) return a;
        auto s = node(ExprNode::Kind::Scale, start);
        s->coeff = c;
        s->children.push_back(a);
        return s;
    }

    ExprAst maybe_field(ExprAst poly) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == 'd') {
            const std::size_t at = pos_;
            ++pos_;
            if (!peek_digit()) fail("expected a variable index after 'd'");
            const std::uint64_t i = integer();
            if (i < 1 || i > static_cast<std::uint64_t>(params_.var_count())) {
                fail_at("direction d" + std::to_string(i) + " out of range 1.." + std::to_string(params_.var_count()), at);
            }
            poly->kind = ExprNode::Kind::FieldTerm;
            poly->direction = static_cast<int>(i) - 1;
        }
        return poly;
    }

    ExprAst atom() {
        skip_ws();
        const std::size_t at = pos_;
        if (src_.compare(pos_, 3, "DH(") == 0) {
            pos_ += 3;
            auto n = node(ExprNode::Kind::DH, at);
            n->children.push_back(expr());
            expect(')');
            return n;
        }
        if (accept('[')) {
            auto n = node(ExprNode::Kind::Bracket, at);
            n->children.push_back(expr());
            expect(',');
            n->children.push_back(expr());
            expect(']');
            return n;
        }
        if (accept('(')) {
            auto e = expr();
            expect(')');
            return e;
        }
        if (pos_ < src_.size() && src_[pos_] == 'x') return maybe_field(monomial());
        if (pos_ >= src_.size()) fail("unexpected end of input");
        fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    }

    std::vector<std::uint64_t> int_list(char close) {
        std::vector<std::uint64_t> out;
        out.push_back(integer());
        while (accept(',')) out.push_back(integer());
        expect(close);
        return out;
    }

    std::string list_text(const std::vector<std::uint64_t>& v) const {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
        return s;
    }

    ExprAst monomial() {
        const std::size_t at = pos_;
        auto n = node(ExprNode::Kind::Poly, at);
        n->mono.alpha.assign(static_cast<std::size_t>(params_.even_count()), 0);
        bool have_alpha = false;
        std::vector<std::uint64_t> ext;
        while (pos_ < src_.size() && src_[pos_] == 'x') {
            const std::size_t part = pos_;
            ++pos_;
            if (pos_ + 1 < src_.size() && src_[pos_] == '^' && src_[pos_ + 1] == '(') {
                if (have_alpha || !ext.empty()) fail_at("divided-power part must come first and only once", part);
                pos_ += 2;
                const auto a = int_list(')');
                if (a.size() != static_cast<std::size_t>(params_.even_count())) {
                    fail_at("x^(...) needs " + std::to_string(params_.even_count()) + " exponents, got " +
                                std::to_string(a.size()),
                            part);
                }
                for (int i = 0; i < params_.even_count(); ++i) {
                    if (a[static_cast<std::size_t>(i)] > params_.pi(i)) {
                        fail_at("exponent " + std::to_string(a[static_cast<std::size_t>(i)]) + " of x" +
                                    std::to_string(i + 1) + " exceeds " + std::to_string(params_.pi(i)),
                                part);
                    }
                    n->mono.alpha[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(a[static_cast<std::size_t>(i)]);
                }
                have_alpha = true;
            } else if (pos_ < src_.size() && src_[pos_] == '{') {
                ++pos_;
                const auto list = int_list('}');
                if (!ext.empty()) {
                    auto merged = ext;
                    merged.insert(merged.end(), list.begin(), list.end());
                    fail_at("exterior list syntax is x{" + list_text(merged) + "}", part);
                }
                ext = list;
                for (std::size_t k = 0; k < ext.size(); ++k) {
                    const auto i = ext[k];
                    if (i <= static_cast<std::uint64_t>(params_.even_count()) ||
                        i > static_cast<std::uint64_t>(params_.var_count())) {
                        fail_at("exterior index " + std::to_string(i) + " out of range " +
                                    std::to_string(params_.even_count() + 1) + ".." + std::to_string(params_.var_count()),
                                part);
                    }
                    if (k > 0 && ext[k - 1] >= i) fail_at("exterior indices must be strictly increasing", part);
                    n->mono.mask |= 1U << (i - 1 - static_cast<std::uint64_t>(params_.even_count()));
                }
            } else {
                fail("expected '^(' or '{' after 'x'");
            }
        }
        return n;
    }

    const std::string& src_;
    const Params& params_;
    std::size_t pos_ = 0;
};

}  // namespace

ExprAst parse_expr(const std::string& src, const Params& params) { return Parser(src, params).parse(); }

Element evaluate_expr(const Algebra& alg, const ExprAst& ast) {
    Element out;
    switch (ast->kind) {
        case ExprNode::Kind::Poly:
            out.poly = alg.mono(ast->mono);
            return out;
        case ExprNode::Kind::FieldTerm:
            out.is_field = true;
            out.field = field_term(alg, alg.id_of(ast->mono), ast->direction);
            return out;
        case ExprNode::Kind::Scale: {
            out = evaluate_expr(alg, ast->children.front());
            out.poly = scale(alg, ast->coeff, out.poly);
            out.field = scale(alg, ast->coeff, out.field);
            return out;
        }
        case ExprNode::Kind::Sum: {
            out = evaluate_expr(alg, ast->children.front());
            for (std::size_t k = 1; k < ast->children.size(); ++k) {
                const Element e = evaluate_expr(alg, ast->children[k]);
                if (e.is_field != out.is_field) {
                    throw ParseError("cannot add a polynomial and a vector field", ast->children[k]->offset);
                }
                out.poly = add(alg, out.poly, e.poly);
                out.field = add(alg, out.field, e.field);
            }
            return out;
        }
        case ExprNode::Kind::DH: {
            const Element e = evaluate_expr(alg, ast->children.front());
            if (e.is_field) throw ParseError("DH takes a polynomial", ast->offset);
            out.is_field = true;
            out.field = d_h(alg, e.poly);
            return out;
        }
        case ExprNode::Kind::Bracket: {
            const Element a = evaluate_expr(alg, ast->children[0]);
            const Element b = evaluate_expr(alg, ast->children[1]);
            if (!a.is_field || !b.is_field) throw ParseError("brackets take vector fields", ast->offset);
            out.is_field = true;
            out.field = bracket(alg, a.field, b.field);
            return out;
        }
    }
    return out;
}

Element parse_element(const Algebra& alg, const std::string& src) { return evaluate_expr(alg, parse_expr(src, alg.params())); }

std::string print_monomial(const Algebra& alg, MonoId mono) {
    const auto alpha = alg.alpha(mono);
    const std::uint32_t mask = alg.mask(mono);
    bool any = false;
    for (const auto a : alpha) any = any || a != 0;
    std::string s;
    if (any) {
        s += "x^(";
        for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
        s += ")";
    }
    if (mask != 0) {
        s += "x{";
        bool first = true;
        for (int k = 0; k < alg.params().n; ++k) {
            if (!(mask & (1U << k))) continue;
            s += (first ? "" : ",") + std::to_string(alg.params().even_count() + k + 1);
            first = false;
        }
        s += "}";
    }
    return s.empty() ? "1" : s;
}

namespace {

std::string with_coeff(Scalar c, const std::string& body) { return c == 1 ? body : std::to_string(c) + "*" + body; }

}  // namespace

std::string print_poly(const Algebra& alg, const SuperPoly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (const auto& e : f.terms) {
        if (!s.empty()) s += " + ";
        s += with_coeff(e.value, print_monomial(alg, e.index));
    }
    return s;
}

std::string print_field(const Algebra& alg, const VectorField& v) {
    if (v.is_zero()) return "0";
    std::string s;
    for (const auto& e : v.terms) {
        if (!s.empty()) s += " + ";
        s += with_coeff(e.value, print_monomial(alg, key_mono(alg, e.index)) + " d" +
                                     std::to_string(key_direction(alg, e.index) + 1));
    }
    return s;
}

std::string print_element(const Algebra& alg, const Element& e) {
    return e.is_field ? print_field(alg, e.field) : print_poly(alg, e.poly);
}

}  // namespace hamder
