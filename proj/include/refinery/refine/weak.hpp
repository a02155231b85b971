#pragma once

#include "divergence.hpp"
#include "simulation.hpp"

#include <set>
#include <string>
#include <vector>

namespace refinery::refine {

struct weak_options {
    extension_policy policy = extension_policy::reject;
    bool preserve_divergence = false;
    std::set<std::string> only;
};

// Closure-padded operation pairs: abstract IntA;AOp;IntA (enabled via
// IntA;AOp) against concrete IntC;COp;IntC (enabled via IntC;COp). Concrete
// events refining skip are compared with IntA, their observation erased.
inline std::vector<operation_pair> weak_pairs(const lts& abstract, const lts& concrete, const resolved_mapping& m,
                                              const std::set<std::string>& only = {})
{
    auto int_a = internal_closure(abstract, m.abstract_internal);
    auto int_c = internal_closure(concrete, m.concrete_internal);
    auto wanted = [&](const std::vector<std::string>& events) {
        if (only.empty())
            return true;
        for (const auto& e : events)
            if (only.count(e))
                return true;
        return false;
    };

    std::vector<operation_pair> pairs;
    for (const auto& a : observable_events(abstract)) {
        auto mapped = m.mapped_to(a);
        if (!wanted(mapped))
            continue;
        operation_pair p;
        p.name = a;
        auto op = step_relation::of_event(abstract, a);
        p.abstract_enabling = compose(int_a, op);
        p.abstract_steps = compose(p.abstract_enabling, int_a);
        for (const auto& c : mapped) {
            auto enabling = compose(int_c, step_relation::of_event(concrete, c));
            auto steps = compose(enabling, int_c);
            p.routes.push_back({{c}, std::move(steps), std::move(enabling), rename_to(a)});
        }
        pairs.push_back(std::move(p));
    }
    for (const auto& c : m.skip_events()) {
        if (!wanted({c}))
            continue;
        operation_pair p;
        p.name = skip_event;
        p.abstract_steps = int_a;
        p.abstract_enabling = int_a;
        auto enabling = compose(int_c, step_relation::of_event(concrete, c)).erased();
        auto steps = compose(enabling, int_c);
        p.routes.push_back({{c}, std::move(steps), std::move(enabling), rename_to(skip_event)});
        pairs.push_back(std::move(p));
    }
    return pairs;
}

// Linked pairs where the concrete side can diverge internally but the
// abstract side cannot. First such pair in breadth-first order.
inline std::optional<witness> divergence_not_preserved(const lts& abstract, const lts& concrete, const resolved_mapping& m,
                                                       const retrieve_relation& r)
{
    auto dc = divergent_states(concrete, m.concrete_internal);
    std::set<state_id> concrete_div(dc.begin(), dc.end());
    // Abstract divergence is judged over all states: a linked abstract state
    // need not be reachable on its own.
    auto abstract_div = diverges(abstract, m.abstract_internal);

    exploration reach(concrete);
    for (auto c : reach.order()) {
        if (!concrete_div.count(c))
            continue;
        for (auto a : r.abstract_for(c)) {
            if (abstract_div[a.index])
                continue;
            // The trace runs on through the lasso stem; the reported
            // concrete state is where the internal cycle starts.
            std::vector<bool> is_div(concrete.state_count(), false);
            for (auto s : dc)
                is_div[s.index] = true;
            auto [stem, cycle] = detail::lasso(concrete, m.concrete_internal, is_div, c);
            witness w;
            w.condition = "divergence-preservation";
            w.abstract_state = a;
            w.start = reach.origin(c);
            w.trace = reach.path_to(c);
            w.trace.insert(w.trace.end(), stem.begin(), stem.end());
            w.concrete_state = w.trace.empty() ? w.start : w.trace.back().to;
            w.cycle = std::move(cycle);
            w.operation = w.cycle.front().lbl.event;
            w.message = "concrete " + concrete.describe(c) + " can diverge internally, linked abstract " +
                        abstract.describe(a) + " cannot";
            return w;
        }
    }
    return std::nullopt;
}

inline verdict check_weak_refinement(const lts& abstract, const lts& concrete, const retrieve_relation& r,
                                     const alphabet_mapping& m, condition_set conds, const weak_options& options = {})
{
    auto resolved = resolve_mapping(abstract, concrete, m, options.policy);
    simulation_problem problem(abstract, concrete, weak_pairs(abstract, concrete, resolved, options.only), conds);
    auto v = problem.run(r);
    v.diagnostics["abstract_internal_events"] = static_cast<std::int64_t>(resolved.abstract_internal.size());
    v.diagnostics["concrete_internal_events"] = static_cast<std::int64_t>(resolved.concrete_internal.size());
    if (!v.passed || !options.preserve_divergence)
        return v;
    if (auto w = divergence_not_preserved(abstract, concrete, resolved, r)) {
        auto out = verdict::fail(std::move(*w));
        out.diagnostics = v.diagnostics;
        out.warnings = v.warnings;
        return out;
    }
    return v;
}

} // namespace refinery::refine
