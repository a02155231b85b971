#pragma once

#include "mapping.hpp"
#include "verdict.hpp"

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace refinery::refine {

namespace detail {

using state_set = std::vector<std::uint32_t>;

inline state_set epsilon_close(const lts& m, const std::set<std::string>& silent, state_set seed)
{
    std::vector<bool> in(m.state_count(), false);
    for (auto s : seed)
        in[s] = true;
    for (std::size_t i = 0; i < seed.size(); ++i)
        for (const auto& t : m.outgoing({seed[i]}))
            if (silent.count(m.label_at(t.label_index).event) && !in[t.to.index]) {
                in[t.to.index] = true;
                seed.push_back(t.to.index);
            }
    std::sort(seed.begin(), seed.end());
    return seed;
}

} // namespace detail

// Inclusion of the concrete observable traces, renamed through the mapping,
// in the abstract ones. Concrete events refining skip and internal events
// on either side are unobservable. Abstract state sets are determinised on
// the fly; a breadth-first search over (concrete state, abstract set) pairs
// gives a shortest failing concrete run.
inline verdict check_trace_refinement(const lts& abstract, const lts& concrete, const alphabet_mapping& m,
                                      extension_policy policy = extension_policy::reject)
{
    auto resolved = resolve_mapping(abstract, concrete, m, policy);
    const auto& abstract_silent = resolved.abstract_internal;

    using node = std::pair<std::uint32_t, detail::state_set>;
    std::map<node, std::size_t> seen;
    std::vector<node> nodes;
    // parent index and the concrete step that led here
    std::vector<std::optional<std::pair<std::size_t, trace_step>>> parent;
    std::deque<std::size_t> queue;

    auto visit = [&](node n, std::optional<std::pair<std::size_t, trace_step>> from) {
        if (seen.count(n))
            return;
        seen.emplace(n, nodes.size());
        nodes.push_back(std::move(n));
        parent.push_back(std::move(from));
        queue.push_back(nodes.size() - 1);
    };

    detail::state_set init;
    for (auto a : abstract.inits())
        init.push_back(a.index);
    auto abstract_init = detail::epsilon_close(abstract, abstract_silent, init);
    for (auto c : concrete.inits())
        visit({c.index, abstract_init}, std::nullopt);

    std::map<detail::state_set, std::map<label, detail::state_set>> successor_cache;
    auto abstract_after = [&](const detail::state_set& from, const label& l) -> const detail::state_set& {
        auto& row = successor_cache[from];
        if (auto it = row.find(l); it != row.end())
            return it->second;
        detail::state_set next;
        for (auto a : from)
            for (const auto& t : abstract.outgoing({a}))
                if (abstract.label_at(t.label_index) == l)
                    next.push_back(t.to.index);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        return row[l] = detail::epsilon_close(abstract, abstract_silent, std::move(next));
    };

    auto path_of = [&](std::size_t i) {
        std::vector<trace_step> out;
        while (parent[i]) {
            out.push_back(parent[i]->second);
            i = parent[i]->first;
        }
        std::reverse(out.begin(), out.end());
        return std::make_pair(state_id{nodes[i].first}, out);
    };

    verdict v;
    auto finish = [&] {
        v.diagnostics["abstract_states"] = static_cast<std::int64_t>(abstract.state_count());
        v.diagnostics["concrete_states"] = static_cast<std::int64_t>(concrete.state_count());
        v.diagnostics["product_nodes"] = static_cast<std::int64_t>(nodes.size());
        v.diagnostics["extension_events"] = static_cast<std::int64_t>(resolved.extensions.size());
    };

    while (!queue.empty()) {
        auto i = queue.front();
        queue.pop_front();
        auto c = nodes[i].first;
        auto set = nodes[i].second;
        for (const auto& t : concrete.outgoing({c})) {
            const auto& raw = concrete.label_at(t.label_index);
            auto target = resolved.target.find(raw.event);
            bool silent = target == resolved.target.end() || target->second == skip_event;
            if (silent) {
                visit({t.to.index, set}, std::make_pair(i, trace_step{raw, t.to}));
                continue;
            }
            label projected{target->second, raw.inputs, raw.outputs};
            const auto& next = abstract_after(set, projected);
            if (!next.empty()) {
                visit({t.to.index, next}, std::make_pair(i, trace_step{raw, t.to}));
                continue;
            }
            auto [start, path] = path_of(i);
            witness w;
            w.condition = "trace-inclusion";
            w.operation = projected.event;
            w.concrete_state = {c};
            w.offending = projected;
            w.concrete_observation = {raw};
            w.target = t.to;
            w.start = start;
            w.trace = std::move(path);
            w.message = "abstract machine cannot follow " + projected.to_string() + " after this trace";
            v = verdict::fail(std::move(w));
            finish();
            return v;
        }
    }
    finish();
    return v;
}

// Observable abstract-level labels along a concrete run, as the trace
// checker sees them.
inline std::vector<label> observable_trace(const std::vector<trace_step>& run, const resolved_mapping& m)
{
    std::vector<label> out;
    for (const auto& s : run) {
        auto it = m.target.find(s.lbl.event);
        if (it == m.target.end() || it->second == skip_event)
            continue;
        out.push_back({it->second, s.lbl.inputs, s.lbl.outputs});
    }
    return out;
}

} // namespace refinery::refine
