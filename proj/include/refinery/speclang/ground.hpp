#pragma once

#include "eval.hpp"
#include "parser.hpp"
#include "typecheck.hpp"

#include <map>
#include <string>
#include <vector>

namespace refinery::speclang {

struct ground_options {
    bounds overrides;
    // Out-of-bounds after-states raise instead of being pruned.
    bool strict = false;
};

struct ground_report {
    // Transitions dropped because the after-state left the declared bounds.
    std::map<std::string, std::size_t> pruned;

    std::size_t total_pruned() const
    {
        std::size_t n = 0;
        for (const auto& [event, count] : pruned)
            n += count;
        return n;
    }
};

struct grounded_machine {
    typed_machine machine;
    lts system;
    ground_report report;
};

namespace detail {

// Cartesian product of domains, in lexicographic order.
inline std::vector<std::vector<value>> product(const std::vector<domain>& domains)
{
    std::vector<std::vector<value>> out{{}};
    for (const auto& d : domains) {
        auto members = d.enumerate();
        std::vector<std::vector<value>> next;
        next.reserve(out.size() * members.size());
        for (const auto& prefix : out)
            for (const auto& v : members) {
                auto row = prefix;
                row.push_back(v);
                next.push_back(std::move(row));
            }
        out = std::move(next);
    }
    return out;
}

} // namespace detail

inline std::vector<event_signature> list_event_signatures(const typed_machine& tm)
{
    std::vector<event_signature> out;
    for (std::size_t i = 0; i < tm.ast.events.size(); ++i) {
        const auto& ev = tm.ast.events[i];
        const auto& frame = tm.frames[i];
        event_signature sig;
        sig.name = ev.name;
        sig.classification = ev.classification;
        std::size_t in = 0, out_index = 0;
        for (const auto& p : ev.params) {
            if (p.is_output)
                sig.outputs.push_back({p.name, frame.outputs[out_index++]});
            else
                sig.inputs.push_back({p.name, frame.inputs[in++]});
        }
        out.push_back(std::move(sig));
    }
    return out;
}

// Enumerates every valuation within bounds and every transition allowed by
// guard and update.
inline grounded_machine ground(const typed_machine& typed, const ground_options& options = {})
{
    grounded_machine g{options.overrides.empty() ? typed : typecheck(typed.source, options.overrides), {}, {}};
    const auto& tm = g.machine;
    const auto& m = tm.ast;
    const auto nvars = m.variables.size();

    auto states = detail::product(tm.variable_domains);
    std::map<valuation, state_id> index;
    for (std::uint32_t i = 0; i < states.size(); ++i)
        index.emplace(states[i], state_id{i});

    auto wrap = [&](const std::string& where, auto&& body) {
        try {
            return body();
        } catch (const eval_error& e) {
            throw ground_error(where + ": " + e.what());
        }
    };

    std::vector<state_id> inits;
    for (std::uint32_t i = 0; i < states.size(); ++i)
        if (wrap("init", [&] { return holds(m.init, states[i]); }))
            inits.push_back({i});
    if (inits.empty())
        throw ground_error("machine '" + m.name + "': empty init set");

    std::vector<labelled_edge> edges;
    for (std::size_t e = 0; e < m.events.size(); ++e) {
        const auto& ev = m.events[e];
        const auto& frame = tm.frames[e];
        const auto input_rows = detail::product(frame.inputs);
        const auto output_rows = detail::product(frame.outputs);
        const auto binder_rows = detail::product(frame.binders);
        const std::string where = "event " + ev.name;

        auto emit = [&](state_id from, const std::vector<value>& env, valuation after) {
            bool in_bounds = true;
            for (std::size_t v = 0; v < nvars; ++v)
                if (!tm.variable_domains[v].contains(after[v]))
                    in_bounds = false;
            label l{ev.name,
                    {env.begin() + static_cast<std::ptrdiff_t>(frame.input_offset()),
                     env.begin() + static_cast<std::ptrdiff_t>(frame.output_offset())},
                    {env.begin() + static_cast<std::ptrdiff_t>(frame.output_offset()),
                     env.begin() + static_cast<std::ptrdiff_t>(frame.binder_offset())}};
            if (!in_bounds) {
                if (options.strict) {
                    std::string text;
                    for (std::size_t v = 0; v < nvars; ++v)
                        text += (v ? ", " : "") + m.variables[v].name + "=" + after[v].to_string();
                    throw ground_error(where + ": " + l.to_string() + " leaves the declared bounds (" + text + ")");
                }
                ++g.report.pruned[ev.name];
                return;
            }
            edges.push_back({from, std::move(l), index.at(after)});
        };

        std::vector<value> env(frame.size());
        for (std::uint32_t s = 0; s < states.size(); ++s) {
            std::copy(states[s].begin(), states[s].end(), env.begin());
            for (const auto& ins : input_rows) {
                std::copy(ins.begin(), ins.end(), env.begin() + static_cast<std::ptrdiff_t>(frame.input_offset()));
                for (const auto& outs : output_rows) {
                    std::copy(outs.begin(), outs.end(),
                              env.begin() + static_cast<std::ptrdiff_t>(frame.output_offset()));
                    if (!wrap(where + " guard", [&] { return holds(ev.guard, env); }))
                        continue;

                    auto assign = [&]() {
                        valuation after = states[s];
                        for (const auto& a : ev.body.assignments)
                            after[static_cast<std::size_t>(a.slot)] =
                                wrap(where + " update", [&] { return eval(a.rhs, env); });
                        return after;
                    };

                    switch (ev.body.kind) {
                    case update::kind_t::assign:
                        emit({s}, env, assign());
                        break;
                    case update::kind_t::any:
                        for (const auto& row : binder_rows) {
                            std::copy(row.begin(), row.end(),
                                      env.begin() + static_cast<std::ptrdiff_t>(frame.binder_offset()));
                            if (wrap(where + " where", [&] { return holds(ev.body.where, env); }))
                                emit({s}, env, assign());
                        }
                        break;
                    case update::kind_t::becomes:
                        // Candidate after-states agree with s on unconstrained variables.
                        for (std::uint32_t t = 0; t < states.size(); ++t) {
                            bool frame_ok = true;
                            for (std::size_t v = 0; v < nvars && frame_ok; ++v)
                                if (!frame.assigned[v] && states[t][v] != states[s][v])
                                    frame_ok = false;
                            if (!frame_ok)
                                continue;
                            std::copy(states[t].begin(), states[t].end(),
                                      env.begin() + static_cast<std::ptrdiff_t>(frame.primed_offset()));
                            if (wrap(where + " becomes", [&] { return holds(ev.body.where, env); }))
                                emit({s}, env, states[t]);
                        }
                        break;
                    }
                }
            }
        }
    }

    std::vector<std::string> names;
    for (const auto& v : m.variables)
        names.push_back(v.name);
    g.system = lts(m.name, std::move(names), std::move(states), std::move(inits), list_event_signatures(tm),
                   std::move(edges));
    return g;
}

// parse + typecheck + ground in one go.
inline grounded_machine load_machine(std::string_view text, const ground_options& options = {})
{
    return ground(typecheck(parse(text), options.overrides), {{}, options.strict});
}

} // namespace refinery::speclang
