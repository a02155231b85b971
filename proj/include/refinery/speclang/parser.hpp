#pragma once

#include "ast.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace refinery::speclang {

inline const std::set<std::string>& keywords()
{
    static const std::set<std::string> words = {
        "machine", "const", "var", "init", "event", "internal", "new", "when", "then",
        "any", "where", "becomes", "skip", "int", "seq", "bag", "bool", "nat", "max",
        "true", "false", "if", "else", "in", "and", "or", "not",
    };
    return words;
}

inline const std::set<std::string>& builtin_functions()
{
    static const std::set<std::string> names = {"sorted", "min", "items", "head", "tail", "size"};
    return names;
}

class parser {
public:
    explicit parser(std::string_view text) : _tokens(tokenize(text)) {}

    machine_ast parse_machine()
    {
        machine_ast m;
        expect_keyword("machine");
        m.name = expect_name("machine name");
        while (at_keyword("const")) {
            constant_decl c;
            c.pos = peek().pos;
            advance();
            c.name = expect_name("constant name");
            expect(tok::eq);
            c.value = expect(tok::integer).number;
            m.constants.push_back(std::move(c));
        }
        if (!at_keyword("var"))
            fail({"'var'", "'const'"});
        while (at_keyword("var")) {
            variable_decl v;
            v.pos = peek().pos;
            advance();
            v.name = expect_name("variable name");
            expect(tok::colon);
            v.dom = parse_domain();
            m.variables.push_back(std::move(v));
        }
        expect_keyword("init");
        m.init = parse_expr();
        while (at_keyword("event"))
            m.events.push_back(parse_event());
        if (peek().kind != tok::end)
            fail({"'event'", describe(tok::end)});
        return m;
    }

    // A standalone expression (retrieve predicates, variants).
    expr parse_standalone_expr()
    {
        auto e = parse_expr();
        if (peek().kind != tok::end)
            fail({"operator", describe(tok::end)});
        return e;
    }

private:
    const token& peek(std::size_t ahead = 0) const
    {
        return _tokens[std::min(_index + ahead, _tokens.size() - 1)];
    }
    const token& advance() { return _tokens[_index < _tokens.size() - 1 ? _index++ : _index]; }

    bool at(tok kind) const { return peek().kind == kind; }
    bool at_keyword(std::string_view word) const { return peek().kind == tok::ident && peek().text == word; }

    [[noreturn]] void fail(const std::vector<std::string>& expected) const
    {
        const auto& t = peek();
        std::string msg = "expected ";
        if (expected.size() > 1)
            msg += "one of ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i)
                msg += ", ";
            msg += expected[i];
        }
        msg += "; found " + (t.kind == tok::end ? describe(tok::end) : "'" + t.text + "'");
        throw parse_error(t.pos, msg);
    }

    const token& expect(tok kind)
    {
        if (!at(kind))
            fail({describe(kind)});
        return advance();
    }

    void expect_keyword(std::string_view word)
    {
        if (!at_keyword(word))
            fail({"'" + std::string(word) + "'"});
        advance();
    }

    std::string expect_name(const std::string& what)
    {
        if (!at(tok::ident) || keywords().count(peek().text))
            fail({what});
        return advance().text;
    }

    bound parse_bound()
    {
        if (at(tok::integer))
            return advance().number;
        if (at(tok::ident) && !keywords().count(peek().text))
            return advance().text;
        fail({"integer", "constant name"});
    }

    domain_decl parse_domain()
    {
        domain_decl d;
        d.pos = peek().pos;
        if (at_keyword("bool")) {
            advance();
            d.kind = domain_decl::kind_t::boolean;
        } else if (at_keyword("nat")) {
            advance();
            d.kind = domain_decl::kind_t::unbounded;
        } else if (at_keyword("int")) {
            advance();
            d.kind = domain_decl::kind_t::integer;
            d.lo = parse_bound();
            expect(tok::dotdot);
            d.hi = parse_bound();
        } else if (at_keyword("seq") || at_keyword("bag")) {
            d.kind = peek().text == "seq" ? domain_decl::kind_t::sequence : domain_decl::kind_t::bag;
            advance();
            d.element = std::make_shared<const domain_decl>(parse_domain());
            expect_keyword("max");
            d.max = parse_bound();
        } else {
            fail({"'bool'", "'int'", "'seq'", "'bag'"});
        }
        return d;
    }

    event_decl parse_event()
    {
        event_decl e;
        e.pos = peek().pos;
        expect_keyword("event");
        // Event names live in their own namespace, so keywords such as `in`
        // are allowed; only `skip` is reserved.
        if (!at(tok::ident))
            fail({"event name"});
        if (at_keyword("skip"))
            throw parse_error(e.pos, "'skip' is reserved and cannot name an event");
        e.name = advance().text;
        if (at_keyword("internal")) {
            advance();
            e.classification = event_class::internal;
        } else if (at_keyword("new")) {
            advance();
            e.classification = event_class::perspicuous;
        }
        expect(tok::lparen);
        if (!at(tok::rparen)) {
            for (;;) {
                param_decl p;
                p.pos = peek().pos;
                p.name = expect_name("parameter name");
                if (at(tok::question)) {
                    advance();
                } else if (at(tok::bang)) {
                    advance();
                    p.is_output = true;
                } else {
                    fail({"'?'", "'!'"});
                }
                expect(tok::colon);
                p.dom = parse_domain();
                e.params.push_back(std::move(p));
                if (!at(tok::comma))
                    break;
                advance();
            }
        }
        expect(tok::rparen);
        expect_keyword("when");
        e.guard = parse_expr();
        expect_keyword("then");
        e.body = parse_update();
        return e;
    }

    update parse_update()
    {
        update u;
        if (at_keyword("skip")) {
            advance();
            return u;
        }
        if (at_keyword("becomes")) {
            advance();
            u.kind = update::kind_t::becomes;
            u.where = parse_expr();
            return u;
        }
        if (at_keyword("any")) {
            advance();
            u.kind = update::kind_t::any;
            for (;;) {
                variable_decl b;
                b.pos = peek().pos;
                b.name = expect_name("binder name");
                expect(tok::colon);
                b.dom = parse_domain();
                u.binders.push_back(std::move(b));
                if (!at(tok::comma))
                    break;
                advance();
            }
            expect_keyword("where");
            u.where = parse_expr();
            expect_keyword("then");
            if (at_keyword("skip")) {
                advance();
                return u;
            }
        }
        if (!(at(tok::ident) && peek(1).kind == tok::assign))
            fail({"assignment", "'any'", "'becomes'", "'skip'"});
        while (at(tok::ident) && peek(1).kind == tok::assign) {
            assignment a;
            a.pos = peek().pos;
            a.target = advance().text;
            advance();
            a.rhs = parse_expr();
            u.assignments.push_back(std::move(a));
            if (at(tok::semicolon))
                advance();
        }
        return u;
    }

    static expr node(op kind, source_position pos, std::vector<expr> args = {})
    {
        expr e;
        e.kind = kind;
        e.pos = pos;
        e.args = std::move(args);
        return e;
    }

    expr parse_expr() { return parse_iff(); }

    expr parse_iff()
    {
        auto lhs = parse_implies();
        while (at(tok::iff)) {
            auto pos = advance().pos;
            lhs = node(op::iff, pos, {std::move(lhs), parse_implies()});
        }
        return lhs;
    }

    expr parse_implies()
    {
        auto lhs = parse_or();
        if (at(tok::implies)) {
            auto pos = advance().pos;
            return node(op::implies, pos, {std::move(lhs), parse_implies()});
        }
        return lhs;
    }

    expr parse_or()
    {
        auto lhs = parse_and();
        while (at_keyword("or")) {
            auto pos = advance().pos;
            lhs = node(op::or_, pos, {std::move(lhs), parse_and()});
        }
        return lhs;
    }

    expr parse_and()
    {
        auto lhs = parse_not();
        while (at(tok::amp) || at_keyword("and")) {
            auto pos = advance().pos;
            lhs = node(op::and_, pos, {std::move(lhs), parse_not()});
        }
        return lhs;
    }

    expr parse_not()
    {
        if (at_keyword("not")) {
            auto pos = advance().pos;
            return node(op::not_, pos, {parse_not()});
        }
        return parse_comparison();
    }

    expr parse_comparison()
    {
        auto lhs = parse_additive();
        op kind;
        switch (peek().kind) {
        case tok::eq: kind = op::eq; break;
        case tok::ne: kind = op::ne; break;
        case tok::lt: kind = op::lt; break;
        case tok::le: kind = op::le; break;
        case tok::gt: kind = op::gt; break;
        case tok::ge: kind = op::ge; break;
        default:
            if (!at_keyword("in"))
                return lhs;
            kind = op::in;
        }
        auto pos = advance().pos;
        return node(kind, pos, {std::move(lhs), parse_additive()});
    }

    expr parse_additive()
    {
        auto lhs = parse_unary();
        for (;;) {
            op kind;
            switch (peek().kind) {
            case tok::plus: kind = op::add; break;
            case tok::minus: kind = op::sub; break;
            case tok::concat: kind = op::concat; break;
            case tok::bag_union: kind = op::bag_union; break;
            case tok::bag_diff: kind = op::bag_diff; break;
            default: return lhs;
            }
            auto pos = advance().pos;
            lhs = node(kind, pos, {std::move(lhs), parse_unary()});
        }
    }

    expr parse_unary()
    {
        if (at(tok::minus)) {
            auto pos = advance().pos;
            return node(op::neg, pos, {parse_unary()});
        }
        if (at(tok::hash)) {
            auto pos = advance().pos;
            return node(op::size, pos, {parse_unary()});
        }
        return parse_primary();
    }

    std::vector<expr> parse_list(tok close)
    {
        std::vector<expr> items;
        if (at(close)) {
            advance();
            return items;
        }
        for (;;) {
            items.push_back(parse_expr());
            if (at(tok::comma)) {
                advance();
                continue;
            }
            if (!at(close))
                fail({"','", describe(close)});
            advance();
            return items;
        }
    }

    expr parse_primary()
    {
        const auto& t = peek();
        auto pos = t.pos;
        switch (t.kind) {
        case tok::integer: {
            auto e = node(op::int_lit, pos);
            e.number = advance().number;
            return e;
        }
        case tok::lparen: {
            advance();
            auto e = parse_expr();
            expect(tok::rparen);
            return e;
        }
        case tok::lbrack:
            advance();
            return node(op::seq_lit, pos, parse_list(tok::rbrack));
        case tok::lbag:
            advance();
            return node(op::bag_lit, pos, parse_list(tok::rbag));
        case tok::ident:
            break;
        default:
            fail({"expression"});
        }

        if (t.text == "true" || t.text == "false") {
            auto e = node(op::bool_lit, pos);
            e.number = advance().text == "true" ? 1 : 0;
            return e;
        }
        if (t.text == "if") {
            advance();
            auto c = parse_expr();
            expect_keyword("then");
            auto a = parse_expr();
            expect_keyword("else");
            auto b = parse_expr();
            return node(op::if_then_else, pos, {std::move(c), std::move(a), std::move(b)});
        }
        if (builtin_functions().count(t.text) && peek(1).kind == tok::lparen) {
            auto name = advance().text;
            advance();
            auto args = parse_list(tok::rparen);
            static const std::pair<const char*, op> table[] = {
                {"sorted", op::sorted}, {"min", op::min}, {"items", op::items},
                {"head", op::head}, {"tail", op::tail}, {"size", op::size},
            };
            for (const auto& [n, k] : table)
                if (name == n) {
                    if (args.size() != 1)
                        throw parse_error(pos, name + "() takes exactly one argument");
                    return node(k, pos, std::move(args));
                }
        }
        if (keywords().count(t.text))
            fail({"expression"});
        auto e = node(op::var, pos);
        e.name = advance().text;
        if (at(tok::lparen))
            throw parse_error(pos, "unknown function '" + e.name + "'");
        if (at(tok::prime)) {
            advance();
            e.kind = op::primed;
        }
        return e;
    }

    std::vector<token> _tokens;
    std::size_t _index = 0;
};

inline machine_ast parse(std::string_view text) { return parser(text).parse_machine(); }

inline expr parse_expression(std::string_view text) { return parser(text).parse_standalone_expr(); }

} // namespace refinery::speclang
