#pragma once

#include "ast.hpp"

#include <algorithm>
#include <span>

namespace refinery::speclang {

// Evaluates a type-checked expression. Variables are read from `env` by the
// slot the type checker assigned. Conjunction, disjunction, implication and
// conditionals are lazy, so guards can protect partial builtins.
inline value eval(const expr& e, std::span<const value> env)
{
    auto arg = [&](std::size_t i) { return eval(e.args[i], env); };
    auto where = [&] { return " at " + std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column); };

    switch (e.kind) {
    case op::int_lit:
        return value::integer(e.number);
    case op::bool_lit:
        return value::boolean(e.number != 0);
    case op::var:
    case op::primed:
        if (e.slot < 0 || static_cast<std::size_t>(e.slot) >= env.size())
            throw eval_error("unbound name '" + e.name + "'" + where());
        return env[static_cast<std::size_t>(e.slot)];
    case op::seq_lit:
    case op::bag_lit: {
        std::vector<value> items;
        for (std::size_t i = 0; i < e.args.size(); ++i)
            items.push_back(arg(i));
        return e.kind == op::seq_lit ? value::sequence(std::move(items)) : value::bag(std::move(items));
    }
    case op::not_:
        return value::boolean(!arg(0).as_bool());
    case op::neg:
        return value::integer(-arg(0).as_int());
    case op::and_:
        return value::boolean(arg(0).as_bool() && arg(1).as_bool());
    case op::or_:
        return value::boolean(arg(0).as_bool() || arg(1).as_bool());
    case op::implies:
        return value::boolean(!arg(0).as_bool() || arg(1).as_bool());
    case op::iff:
        return value::boolean(arg(0).as_bool() == arg(1).as_bool());
    case op::eq:
        return value::boolean(arg(0) == arg(1));
    case op::ne:
        return value::boolean(arg(0) != arg(1));
    case op::lt:
        return value::boolean(arg(0).as_int() < arg(1).as_int());
    case op::le:
        return value::boolean(arg(0).as_int() <= arg(1).as_int());
    case op::gt:
        return value::boolean(arg(0).as_int() > arg(1).as_int());
    case op::ge:
        return value::boolean(arg(0).as_int() >= arg(1).as_int());
    case op::in: {
        auto x = arg(0);
        auto c = arg(1);
        return value::boolean(std::find(c.items().begin(), c.items().end(), x) != c.items().end());
    }
    case op::add:
        return value::integer(arg(0).as_int() + arg(1).as_int());
    case op::sub:
        return value::integer(arg(0).as_int() - arg(1).as_int());
    case op::concat: {
        auto items = arg(0).items();
        const auto rhs = arg(1);
        items.insert(items.end(), rhs.items().begin(), rhs.items().end());
        return value::sequence(std::move(items));
    }
    case op::bag_union: {
        auto items = arg(0).items();
        const auto rhs = arg(1);
        items.insert(items.end(), rhs.items().begin(), rhs.items().end());
        return value::bag(std::move(items));
    }
    case op::bag_diff: {
        // One occurrence removed per occurrence on the right.
        auto items = arg(0).items();
        const auto rhs = arg(1);
        for (const auto& x : rhs.items()) {
            auto it = std::find(items.begin(), items.end(), x);
            if (it != items.end())
                items.erase(it);
        }
        return value::bag(std::move(items));
    }
    case op::size:
        return value::integer(static_cast<std::int64_t>(arg(0).size()));
    case op::sorted: {
        const auto s = arg(0);
        return value::boolean(std::is_sorted(s.items().begin(), s.items().end()));
    }
    case op::min: {
        const auto b = arg(0);
        if (b.items().empty())
            throw eval_error("min of an empty bag" + where());
        return *std::min_element(b.items().begin(), b.items().end());
    }
    case op::items:
        return value::bag(arg(0).items());
    case op::head: {
        const auto s = arg(0);
        if (s.items().empty())
            throw eval_error("head of an empty sequence" + where());
        return s.items().front();
    }
    case op::tail: {
        const auto s = arg(0);
        if (s.items().empty())
            throw eval_error("tail of an empty sequence" + where());
        return value::sequence({s.items().begin() + 1, s.items().end()});
    }
    case op::if_then_else:
        return arg(0).as_bool() ? arg(1) : arg(2);
    }
    throw eval_error("unknown expression node" + where());
}

inline bool holds(const expr& e, std::span<const value> env) { return eval(e, env).as_bool(); }

} // namespace refinery::speclang
