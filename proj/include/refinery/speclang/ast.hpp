#pragma once

#include "../errors.hpp"
#include "../kernel.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace refinery::speclang {

enum class op : std::uint8_t {
    int_lit, bool_lit, var, primed, seq_lit, bag_lit,
    not_, neg, and_, or_, implies, iff,
    eq, ne, lt, le, gt, ge, in,
    add, sub, concat, bag_union, bag_diff,
    size, sorted, min, items, head, tail,
    if_then_else,
};

// Static types. `any` stands for the unknown element type of an empty literal.
struct type {
    enum class kind_t : std::uint8_t { any, boolean, integer, sequence, bag };
    kind_t kind = kind_t::any;
    std::shared_ptr<const type> element;

    static type any() { return {}; }
    static type boolean() { return {kind_t::boolean, nullptr}; }
    static type integer() { return {kind_t::integer, nullptr}; }
    static type sequence(type e) { return {kind_t::sequence, std::make_shared<const type>(std::move(e))}; }
    static type bag(type e) { return {kind_t::bag, std::make_shared<const type>(std::move(e))}; }

    std::string to_string() const
    {
        switch (kind) {
        case kind_t::any:
            return "?";
        case kind_t::boolean:
            return "bool";
        case kind_t::integer:
            return "int";
        case kind_t::sequence:
            return "seq " + element->to_string();
        case kind_t::bag:
            return "bag " + element->to_string();
        }
        return "?";
    }

    static type of(const domain& d)
    {
        switch (d.kind) {
        case domain::kind_t::boolean:
            return boolean();
        case domain::kind_t::integer:
            return integer();
        case domain::kind_t::sequence:
            return sequence(of(*d.element));
        case domain::kind_t::bag:
            return bag(of(*d.element));
        }
        return any();
    }
};

// Most general common type, or nullopt if the two cannot be the same.
inline std::optional<type> unify(const type& a, const type& b)
{
    if (a.kind == type::kind_t::any)
        return b;
    if (b.kind == type::kind_t::any)
        return a;
    if (a.kind != b.kind)
        return std::nullopt;
    if (!a.element)
        return a;
    auto e = unify(*a.element, *b.element);
    if (!e)
        return std::nullopt;
    return type{a.kind, std::make_shared<const type>(*e)};
}

struct expr {
    op kind = op::bool_lit;
    std::int64_t number = 0;
    std::string name;
    std::vector<expr> args;
    source_position pos;

    // Filled in by the type checker.
    type ty;
    int slot = -1;
};

// Integer literal or the name of a declared constant.
using bound = std::variant<std::int64_t, std::string>;

struct domain_decl {
    enum class kind_t : std::uint8_t { boolean, integer, sequence, bag, unbounded };
    kind_t kind = kind_t::boolean;
    bound lo = std::int64_t{0};
    bound hi = std::int64_t{0};
    bound max = std::int64_t{0};
    std::shared_ptr<const domain_decl> element;
    source_position pos;
};

struct constant_decl {
    std::string name;
    std::int64_t value = 0;
    source_position pos;
};

struct variable_decl {
    std::string name;
    domain_decl dom;
    source_position pos;
};

struct param_decl {
    std::string name;
    bool is_output = false;
    domain_decl dom;
    source_position pos;
};

struct assignment {
    std::string target;
    expr rhs;
    source_position pos;
    int slot = -1;
};

struct update {
    enum class kind_t : std::uint8_t { assign, any, becomes };
    kind_t kind = kind_t::assign;
    std::vector<variable_decl> binders;
    expr where; // binder predicate for `any`, after-state predicate for `becomes`
    std::vector<assignment> assignments;
};

struct event_decl {
    std::string name;
    event_class classification = event_class::external;
    std::vector<param_decl> params;
    expr guard;
    update body;
    source_position pos;
};

struct machine_ast {
    std::string name;
    std::vector<constant_decl> constants;
    std::vector<variable_decl> variables;
    expr init;
    std::vector<event_decl> events;
};

// Structural equality ignoring positions and type annotations.
inline bool same_structure(const expr& a, const expr& b)
{
    if (a.kind != b.kind || a.number != b.number || a.name != b.name || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_structure(a.args[i], b.args[i]))
            return false;
    return true;
}

inline bool same_structure(const domain_decl& a, const domain_decl& b)
{
    if (a.kind != b.kind || a.lo != b.lo || a.hi != b.hi || a.max != b.max)
        return false;
    if (a.element && b.element)
        return same_structure(*a.element, *b.element);
    return !a.element && !b.element;
}

inline bool same_structure(const machine_ast& a, const machine_ast& b)
{
    if (a.name != b.name || a.constants.size() != b.constants.size() ||
        a.variables.size() != b.variables.size() || a.events.size() != b.events.size())
        return false;
    for (std::size_t i = 0; i < a.constants.size(); ++i)
        if (a.constants[i].name != b.constants[i].name || a.constants[i].value != b.constants[i].value)
            return false;
    for (std::size_t i = 0; i < a.variables.size(); ++i)
        if (a.variables[i].name != b.variables[i].name || !same_structure(a.variables[i].dom, b.variables[i].dom))
            return false;
    if (!same_structure(a.init, b.init))
        return false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        const auto& x = a.events[i];
        const auto& y = b.events[i];
        if (x.name != y.name || x.classification != y.classification || x.params.size() != y.params.size())
            return false;
        for (std::size_t j = 0; j < x.params.size(); ++j)
            if (x.params[j].name != y.params[j].name || x.params[j].is_output != y.params[j].is_output ||
                !same_structure(x.params[j].dom, y.params[j].dom))
                return false;
        if (!same_structure(x.guard, y.guard) || x.body.kind != y.body.kind ||
            x.body.binders.size() != y.body.binders.size() ||
            x.body.assignments.size() != y.body.assignments.size())
            return false;
        for (std::size_t j = 0; j < x.body.binders.size(); ++j)
            if (x.body.binders[j].name != y.body.binders[j].name ||
                !same_structure(x.body.binders[j].dom, y.body.binders[j].dom))
                return false;
        if (x.body.kind != update::kind_t::assign && !same_structure(x.body.where, y.body.where))
            return false;
        for (std::size_t j = 0; j < x.body.assignments.size(); ++j)
            if (x.body.assignments[j].target != y.body.assignments[j].target ||
                !same_structure(x.body.assignments[j].rhs, y.body.assignments[j].rhs))
                return false;
    }
    return true;
}

} // namespace refinery::speclang
