#pragma once

#include "divergence.hpp"
#include "simulation.hpp"

#include <optional>
#include <set>
#include <string>

namespace refinery::refine {

struct eventb_options {
    bool relative_deadlock = false;
    std::optional<variant_spec> variant;
    extension_policy policy = extension_policy::reject;
    // Events the variant must decrease; the new events when empty.
    std::set<std::string> variant_events;
};

inline simulation_problem eventb_problem(const lts& abstract, const lts& concrete, const alphabet_mapping& m,
                                         const std::set<std::string>& new_events, extension_policy policy)
{
    check_events(concrete, new_events);
    auto resolved = resolve_mapping(abstract, concrete, m, policy, new_events);
    condition_set conds;
    conds.consistency = true;
    return {abstract, concrete, single_step_pairs(abstract, concrete, resolved), conds};
}

// Old events: consistency through R. New events (and concrete internal ones)
// refine skip, so they must keep R. Optionally the concrete machine may
// deadlock only where every linked abstract state does, and a variant over
// the new events rules out divergence.
inline verdict check_eventb(const lts& abstract, const lts& concrete, const retrieve_relation& r, const alphabet_mapping& m,
                            const std::set<std::string>& new_events, const eventb_options& options = {})
{
    auto problem = eventb_problem(abstract, concrete, m, new_events, options.policy);
    auto v = problem.run(r);
    v.diagnostics["new_events"] = static_cast<std::int64_t>(new_events.size());
    auto fail = [&](witness w) {
        auto out = verdict::fail(std::move(w));
        out.diagnostics = v.diagnostics;
        out.warnings = v.warnings;
        return out;
    };
    if (!v.passed)
        return v;

    if (options.relative_deadlock) {
        exploration reach(concrete);
        std::int64_t deadlocks = 0;
        for (auto c : reach.order()) {
            if (!is_deadlocked(concrete, c))
                continue;
            ++deadlocks;
            for (auto a : r.abstract_for(c)) {
                if (is_deadlocked(abstract, a))
                    continue;
                witness w;
                w.condition = "relative-deadlock";
                w.abstract_state = a;
                w.concrete_state = c;
                w.start = reach.origin(c);
                w.trace = reach.path_to(c);
                w.message = "concrete " + concrete.describe(c) + " is deadlocked but linked abstract " +
                            abstract.describe(a) + " is not";
                return fail(std::move(w));
            }
        }
        v.diagnostics["concrete_deadlocks"] = deadlocks;
    }

    if (options.variant) {
        auto d = check_divergence(concrete, options.variant_events.empty() ? new_events : options.variant_events,
                                  options.variant);
        if (!d.passed)
            return fail(std::move(*d.counterexample));
        v.diagnostics["variant_checked"] = 1;
    }
    return v;
}

} // namespace refinery::refine
