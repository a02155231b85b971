#pragma once

#include "ast.hpp"

#include <string>

namespace refinery::speclang {

// Fully parenthesised rendering; parse(print(m)) is structurally m.

inline std::string print(const expr& e);

namespace detail {

inline std::string print_list(const std::vector<expr>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += print(items[i]);
    }
    return out;
}

inline std::string binary(const expr& e, const char* symbol)
{
    return "(" + print(e.args[0]) + " " + symbol + " " + print(e.args[1]) + ")";
}

inline std::string print_bound(const bound& b)
{
    if (const auto* n = std::get_if<std::int64_t>(&b))
        return std::to_string(*n);
    return std::get<std::string>(b);
}

} // namespace detail

inline std::string print(const expr& e)
{
    using detail::binary;
    switch (e.kind) {
    case op::int_lit:
        return e.number < 0 ? "(-" + std::to_string(-e.number) + ")" : std::to_string(e.number);
    case op::bool_lit: return e.number ? "true" : "false";
    case op::var: return e.name;
    case op::primed: return e.name + "'";
    case op::seq_lit: return "[" + detail::print_list(e.args) + "]";
    case op::bag_lit: return "{|" + detail::print_list(e.args) + "|}";
    case op::not_: return "(not " + print(e.args[0]) + ")";
    case op::neg: return "(-" + print(e.args[0]) + ")";
    case op::and_: return binary(e, "&");
    case op::or_: return binary(e, "or");
    case op::implies: return binary(e, "=>");
    case op::iff: return binary(e, "<=>");
    case op::eq: return binary(e, "=");
    case op::ne: return binary(e, "/=");
    case op::lt: return binary(e, "<");
    case op::le: return binary(e, "<=");
    case op::gt: return binary(e, ">");
    case op::ge: return binary(e, ">=");
    case op::in: return binary(e, "in");
    case op::add: return binary(e, "+");
    case op::sub: return binary(e, "-");
    case op::concat: return binary(e, "++");
    case op::bag_union: return binary(e, "\\/");
    case op::bag_diff: return binary(e, "\\\\");
    case op::size: return "#(" + print(e.args[0]) + ")";
    case op::sorted: return "sorted(" + print(e.args[0]) + ")";
    case op::min: return "min(" + print(e.args[0]) + ")";
    case op::items: return "items(" + print(e.args[0]) + ")";
    case op::head: return "head(" + print(e.args[0]) + ")";
    case op::tail: return "tail(" + print(e.args[0]) + ")";
    case op::if_then_else:
        return "(if " + print(e.args[0]) + " then " + print(e.args[1]) + " else " + print(e.args[2]) + ")";
    }
    return "?";
}

inline std::string print(const domain_decl& d)
{
    using detail::print_bound;
    switch (d.kind) {
    case domain_decl::kind_t::boolean: return "bool";
    case domain_decl::kind_t::unbounded: return "nat";
    case domain_decl::kind_t::integer: return "int " + print_bound(d.lo) + ".." + print_bound(d.hi);
    case domain_decl::kind_t::sequence: return "seq " + print(*d.element) + " max " + print_bound(d.max);
    case domain_decl::kind_t::bag: return "bag " + print(*d.element) + " max " + print_bound(d.max);
    }
    return "?";
}

inline std::string print(const machine_ast& m)
{
    std::string out = "machine " + m.name + "\n";
    for (const auto& c : m.constants)
        out += "const " + c.name + " = " + std::to_string(c.value) + "\n";
    for (const auto& v : m.variables)
        out += "var " + v.name + " : " + print(v.dom) + "\n";
    out += "init " + print(m.init) + "\n";
    for (const auto& e : m.events) {
        out += "\nevent " + e.name;
        if (e.classification == event_class::internal)
            out += " internal";
        else if (e.classification == event_class::perspicuous)
            out += " new";
        out += " (";
        for (std::size_t i = 0; i < e.params.size(); ++i) {
            if (i)
                out += ", ";
            out += e.params[i].name + (e.params[i].is_output ? "!" : "?") + " : " + print(e.params[i].dom);
        }
        out += ")\n  when " + print(e.guard) + "\n  then ";
        const auto& u = e.body;
        if (u.kind == update::kind_t::becomes) {
            out += "becomes " + print(u.where) + "\n";
            continue;
        }
        if (u.kind == update::kind_t::any) {
            out += "any ";
            for (std::size_t i = 0; i < u.binders.size(); ++i) {
                if (i)
                    out += ", ";
                out += u.binders[i].name + " : " + print(u.binders[i].dom);
            }
            out += " where " + print(u.where) + " then ";
        }
        if (u.assignments.empty())
            out += "skip";
        for (std::size_t i = 0; i < u.assignments.size(); ++i) {
            if (i)
                out += "; ";
            out += u.assignments[i].target + " := " + print(u.assignments[i].rhs);
        }
        out += "\n";
    }
    return out;
}

} // namespace refinery::speclang
