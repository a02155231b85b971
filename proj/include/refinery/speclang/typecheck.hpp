#pragma once

#include "ast.hpp"
#include "parser.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace refinery::speclang {

// Constant overrides, e.g. {"V": 2, "N": 3}. Names the machine does not
// declare are ignored.
using bounds = std::map<std::string, std::int64_t>;

// Name resolution context for one expression.
class scope {
public:
    struct entry {
        std::string name;
        type ty;
        int slot = -1;
        int primed_slot = -1;
    };

    void add(std::string name, type ty, int slot, int primed_slot = -1)
    {
        _entries.push_back({std::move(name), std::move(ty), slot, primed_slot});
    }
    void add_constant(const std::string& name, std::int64_t v) { _constants[name] = v; }
    void allow_primed(bool allow) { _allow_primed = allow; }

    const entry* find(const std::string& name) const
    {
        // Later entries shadow earlier ones.
        for (auto it = _entries.rbegin(); it != _entries.rend(); ++it)
            if (it->name == name)
                return &*it;
        return nullptr;
    }
    std::optional<std::int64_t> constant(const std::string& name) const
    {
        auto it = _constants.find(name);
        if (it == _constants.end())
            return std::nullopt;
        return it->second;
    }
    bool primed_allowed() const { return _allow_primed; }

private:
    std::vector<entry> _entries;
    std::map<std::string, std::int64_t> _constants;
    bool _allow_primed = false;
};

namespace detail {

[[noreturn]] inline void mismatch(const expr& e, const std::string& what, const type& got)
{
    throw type_error(e.pos, "type mismatch: " + what + ", got " + got.to_string());
}

inline bool is(const type& t, type::kind_t k) { return t.kind == k || t.kind == type::kind_t::any; }

} // namespace detail

// Annotates `e` (types and slots) in place and folds constant references.
inline void check_expr(expr& e, const scope& sc)
{
    using detail::is;
    using detail::mismatch;
    using K = type::kind_t;

    for (auto& a : e.args)
        check_expr(a, sc);
    auto arg_ty = [&](std::size_t i) -> const type& { return e.args[i].ty; };
    auto require = [&](std::size_t i, K k, const char* what) {
        if (!is(arg_ty(i), k))
            mismatch(e.args[i], what, arg_ty(i));
    };

    switch (e.kind) {
    case op::int_lit:
        e.ty = type::integer();
        return;
    case op::bool_lit:
        e.ty = type::boolean();
        return;
    case op::var: {
        if (const auto* entry = sc.find(e.name)) {
            e.ty = entry->ty;
            e.slot = entry->slot;
            return;
        }
        if (auto c = sc.constant(e.name)) {
            e.kind = op::int_lit;
            e.number = *c;
            e.ty = type::integer();
            return;
        }
        throw type_error(e.pos, "undeclared name '" + e.name + "'");
    }
    case op::primed: {
        const auto* entry = sc.find(e.name);
        if (!entry || entry->primed_slot < 0) {
            if (!entry && !sc.constant(e.name))
                throw type_error(e.pos, "undeclared name '" + e.name + "'");
            throw type_error(e.pos, "'" + e.name + "'' is not a state variable");
        }
        if (!sc.primed_allowed())
            throw type_error(e.pos, "primed variable '" + e.name + "'' used outside an update context");
        e.ty = entry->ty;
        e.slot = entry->primed_slot;
        return;
    }
    case op::seq_lit:
    case op::bag_lit: {
        type elem = type::any();
        for (const auto& a : e.args) {
            auto u = unify(elem, a.ty);
            if (!u)
                mismatch(a, "literal elements must share one type (" + elem.to_string() + ")", a.ty);
            elem = *u;
        }
        e.ty = e.kind == op::seq_lit ? type::sequence(elem) : type::bag(elem);
        return;
    }
    case op::not_:
        require(0, K::boolean, "operand of 'not' must be bool");
        e.ty = type::boolean();
        return;
    case op::neg:
        require(0, K::integer, "operand of '-' must be int");
        e.ty = type::integer();
        return;
    case op::and_:
    case op::or_:
    case op::implies:
    case op::iff:
        require(0, K::boolean, "connective operands must be bool");
        require(1, K::boolean, "connective operands must be bool");
        e.ty = type::boolean();
        return;
    case op::eq:
    case op::ne:
        if (!unify(arg_ty(0), arg_ty(1)))
            mismatch(e.args[1], "cannot compare with " + arg_ty(0).to_string(), arg_ty(1));
        e.ty = type::boolean();
        return;
    case op::lt:
    case op::le:
    case op::gt:
    case op::ge:
        require(0, K::integer, "ordering comparisons take int");
        require(1, K::integer, "ordering comparisons take int");
        e.ty = type::boolean();
        return;
    case op::in: {
        const auto& c = arg_ty(1);
        if (c.kind != K::sequence && c.kind != K::bag)
            mismatch(e.args[1], "right of 'in' must be a seq or bag", c);
        if (!unify(arg_ty(0), *c.element))
            mismatch(e.args[0], "element type " + c.element->to_string() + " expected", arg_ty(0));
        e.ty = type::boolean();
        return;
    }
    case op::add:
    case op::sub:
        require(0, K::integer, "arithmetic takes int");
        require(1, K::integer, "arithmetic takes int");
        e.ty = type::integer();
        return;
    case op::concat:
    case op::bag_union:
    case op::bag_diff: {
        auto k = e.kind == op::concat ? K::sequence : K::bag;
        const char* what = e.kind == op::concat ? "'++' takes sequences" : "bag union/difference take bags";
        require(0, k, what);
        require(1, k, what);
        auto u = unify(arg_ty(0), arg_ty(1));
        if (!u)
            mismatch(e.args[1], std::string(what) + " of one element type", arg_ty(1));
        e.ty = u->kind == K::any ? (k == K::sequence ? type::sequence(type::any()) : type::bag(type::any())) : *u;
        return;
    }
    case op::size:
        if (arg_ty(0).kind != K::sequence && arg_ty(0).kind != K::bag)
            mismatch(e.args[0], "size takes a seq or bag", arg_ty(0));
        e.ty = type::integer();
        return;
    case op::sorted:
        if (arg_ty(0).kind != K::sequence)
            mismatch(e.args[0], "sorted takes a sequence", arg_ty(0));
        e.ty = type::boolean();
        return;
    case op::min:
        if (arg_ty(0).kind != K::bag)
            mismatch(e.args[0], "min takes a bag", arg_ty(0));
        e.ty = *arg_ty(0).element;
        return;
    case op::items:
        if (arg_ty(0).kind != K::sequence)
            mismatch(e.args[0], "items takes a sequence", arg_ty(0));
        e.ty = type::bag(*arg_ty(0).element);
        return;
    case op::head:
        if (arg_ty(0).kind != K::sequence)
            mismatch(e.args[0], "head takes a sequence", arg_ty(0));
        e.ty = *arg_ty(0).element;
        return;
    case op::tail:
        if (arg_ty(0).kind != K::sequence)
            mismatch(e.args[0], "tail takes a sequence", arg_ty(0));
        e.ty = arg_ty(0);
        return;
    case op::if_then_else: {
        require(0, K::boolean, "condition must be bool");
        auto u = unify(arg_ty(1), arg_ty(2));
        if (!u)
            mismatch(e.args[2], "branches must share one type (" + arg_ty(1).to_string() + ")", arg_ty(2));
        e.ty = *u;
        return;
    }
    }
}

inline void check_predicate(expr& e, const scope& sc)
{
    check_expr(e, sc);
    if (!detail::is(e.ty, type::kind_t::boolean))
        detail::mismatch(e, "predicate must be bool", e.ty);
}

// Environment layout of one event: [vars | primed vars | inputs | outputs | binders].
struct event_frame {
    std::size_t variable_count = 0;
    std::vector<domain> inputs;
    std::vector<domain> outputs;
    std::vector<domain> binders;
    // State variables the update constrains; the rest keep their value.
    std::vector<bool> assigned;

    std::size_t primed_offset() const { return variable_count; }
    std::size_t input_offset() const { return 2 * variable_count; }
    std::size_t output_offset() const { return input_offset() + inputs.size(); }
    std::size_t binder_offset() const { return output_offset() + outputs.size(); }
    std::size_t size() const { return binder_offset() + binders.size(); }
};

struct typed_machine {
    machine_ast ast;    // annotated, constants folded
    machine_ast source; // as parsed, for re-elaboration under other bounds
    std::map<std::string, std::int64_t> constants;
    std::vector<domain> variable_domains;
    std::vector<event_frame> frames;

    std::size_t variable_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < ast.variables.size(); ++i)
            if (ast.variables[i].name == name)
                return i;
        throw usage_error("machine '" + ast.name + "' has no variable '" + name + "'");
    }

    // Scope binding this machine's state variables starting at `offset`,
    // plus its constants. Used for retrieve predicates and variants.
    void bind_state(scope& sc, int offset) const
    {
        for (std::size_t i = 0; i < ast.variables.size(); ++i)
            sc.add(ast.variables[i].name, type::of(variable_domains[i]), offset + static_cast<int>(i));
        for (const auto& [name, v] : constants)
            if (!sc.constant(name))
                sc.add_constant(name, v);
    }
};

inline domain resolve_domain(const domain_decl& d, const std::map<std::string, std::int64_t>& constants)
{
    auto value_of = [&](const bound& b) -> std::int64_t {
        if (const auto* n = std::get_if<std::int64_t>(&b))
            return *n;
        const auto& name = std::get<std::string>(b);
        auto it = constants.find(name);
        if (it == constants.end())
            throw type_error(d.pos, "undeclared constant '" + name + "' in domain");
        return it->second;
    };
    switch (d.kind) {
    case domain_decl::kind_t::boolean:
        return domain::booleans();
    case domain_decl::kind_t::unbounded:
        throw type_error(d.pos, "unbounded domain: declare an explicit range such as 'int 0..V'");
    case domain_decl::kind_t::integer: {
        auto lo = value_of(d.lo);
        auto hi = value_of(d.hi);
        if (hi < lo)
            throw type_error(d.pos, "empty integer range " + std::to_string(lo) + ".." + std::to_string(hi));
        return domain::range(lo, hi);
    }
    case domain_decl::kind_t::sequence:
    case domain_decl::kind_t::bag: {
        auto elem = resolve_domain(*d.element, constants);
        auto max = value_of(d.max);
        if (max < 0)
            throw type_error(d.pos, "negative maximum size");
        return d.kind == domain_decl::kind_t::sequence ? domain::sequences(elem, static_cast<std::size_t>(max))
                                                       : domain::bags(elem, static_cast<std::size_t>(max));
    }
    }
    throw type_error(d.pos, "unknown domain");
}

inline typed_machine typecheck(const machine_ast& source, const bounds& overrides = {})
{
    typed_machine tm;
    tm.source = source;
    tm.ast = source;
    auto& m = tm.ast;

    std::set<std::string> taken;
    auto claim = [&](const std::string& name, source_position pos, const char* what) {
        if (builtin_functions().count(name))
            throw type_error(pos, std::string(what) + " '" + name + "' shadows a builtin");
        if (!taken.insert(name).second)
            throw type_error(pos, "duplicate name '" + name + "'");
    };

    for (const auto& c : m.constants) {
        claim(c.name, c.pos, "constant");
        auto it = overrides.find(c.name);
        tm.constants[c.name] = it != overrides.end() ? it->second : c.value;
    }
    for (const auto& v : m.variables) {
        claim(v.name, v.pos, "variable");
        tm.variable_domains.push_back(resolve_domain(v.dom, tm.constants));
    }

    const int nvars = static_cast<int>(m.variables.size());
    scope state_scope;
    for (const auto& [name, v] : tm.constants)
        state_scope.add_constant(name, v);
    for (int i = 0; i < nvars; ++i)
        state_scope.add(m.variables[i].name, type::of(tm.variable_domains[i]), i, nvars + i);

    check_predicate(m.init, state_scope);

    std::set<std::string> event_names;
    for (auto& ev : m.events) {
        if (!event_names.insert(ev.name).second)
            throw type_error(ev.pos, "duplicate event '" + ev.name + "'");

        event_frame frame;
        frame.variable_count = m.variables.size();
        frame.assigned.assign(m.variables.size(), false);
        scope sc = state_scope;
        std::set<std::string> local;
        auto claim_local = [&](const std::string& name, source_position pos) {
            if (taken.count(name) || builtin_functions().count(name) || !local.insert(name).second)
                throw type_error(pos, "duplicate name '" + name + "'");
        };

        std::vector<const param_decl*> ins, outs;
        for (const auto& p : ev.params) {
            claim_local(p.name, p.pos);
            (p.is_output ? outs : ins).push_back(&p);
        }
        for (const auto* p : ins)
            frame.inputs.push_back(resolve_domain(p->dom, tm.constants));
        for (const auto* p : outs)
            frame.outputs.push_back(resolve_domain(p->dom, tm.constants));
        for (std::size_t i = 0; i < ins.size(); ++i)
            sc.add(ins[i]->name, type::of(frame.inputs[i]), static_cast<int>(frame.input_offset() + i));
        for (std::size_t i = 0; i < outs.size(); ++i)
            sc.add(outs[i]->name, type::of(frame.outputs[i]), static_cast<int>(frame.output_offset() + i));
        // Inputs then outputs in declaration order of each kind.
        std::stable_partition(ev.params.begin(), ev.params.end(), [](const param_decl& p) { return !p.is_output; });

        check_predicate(ev.guard, sc);

        auto& body = ev.body;
        if (body.kind == update::kind_t::any) {
            for (const auto& b : body.binders) {
                claim_local(b.name, b.pos);
                frame.binders.push_back(resolve_domain(b.dom, tm.constants));
            }
            for (std::size_t i = 0; i < body.binders.size(); ++i)
                sc.add(body.binders[i].name, type::of(frame.binders[i]),
                       static_cast<int>(frame.binder_offset() + i));
            check_predicate(body.where, sc);
        } else if (body.kind == update::kind_t::becomes) {
            scope primed = sc;
            primed.allow_primed(true);
            check_predicate(body.where, primed);
            // Collect which variables the after-state predicate mentions.
            std::vector<const expr*> stack{&body.where};
            while (!stack.empty()) {
                const auto* x = stack.back();
                stack.pop_back();
                if (x->kind == op::primed)
                    frame.assigned[static_cast<std::size_t>(x->slot - nvars)] = true;
                for (const auto& a : x->args)
                    stack.push_back(&a);
            }
        }

        for (auto& a : body.assignments) {
            const auto* entry = state_scope.find(a.target);
            if (!entry)
                throw type_error(a.pos, "assignment to '" + a.target + "', which is not a state variable");
            auto index = static_cast<std::size_t>(entry->slot);
            if (frame.assigned[index])
                throw type_error(a.pos, "variable '" + a.target + "' assigned more than once");
            frame.assigned[index] = true;
            a.slot = entry->slot;
            check_expr(a.rhs, sc);
            if (!unify(a.rhs.ty, entry->ty))
                detail::mismatch(a.rhs, "assignment to '" + a.target + "' needs " + entry->ty.to_string(),
                                 a.rhs.ty);
        }
        tm.frames.push_back(std::move(frame));
    }
    return tm;
}

// Parses and type-checks a standalone boolean expression.
inline expr compile_predicate(std::string_view text, const scope& sc)
{
    auto e = parse_expression(text);
    check_predicate(e, sc);
    return e;
}

inline expr compile_integer(std::string_view text, const scope& sc)
{
    auto e = parse_expression(text);
    check_expr(e, sc);
    if (!detail::is(e.ty, type::kind_t::integer))
        detail::mismatch(e, "expected an integer-valued expression", e.ty);
    return e;
}

} // namespace refinery::speclang
