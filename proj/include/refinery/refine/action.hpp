#pragma once

#include "simulation.hpp"

#include <set>
#include <string>
#include <vector>

namespace refinery::refine {

namespace detail {

// Position (0-based) of the concrete step supplying abstract inputs or
// outputs; nullopt when the abstract event has none.
inline std::optional<std::size_t> observation_source(const std::string& abstract_event, const event_signature& abstract,
                                                     const std::vector<const event_signature*>& chain,
                                                     std::optional<std::size_t> explicit_position, bool inputs)
{
    const char* what = inputs ? "inputs" : "outputs";
    auto params = [&](const event_signature& e) -> const std::vector<parameter>& { return inputs ? e.inputs : e.outputs; };
    std::optional<std::size_t> pos;
    if (explicit_position) {
        if (*explicit_position < 1 || *explicit_position > chain.size())
            throw usage_error("action mapping for '" + abstract_event + "': " + what + " position " +
                              std::to_string(*explicit_position) + " outside 1.." + std::to_string(chain.size()));
        pos = *explicit_position - 1;
    } else if (!params(abstract).empty()) {
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (params(*chain[i]).empty())
                continue;
            pos = i;
            if (inputs)
                break;
        }
    }
    if (!pos) {
        if (!params(abstract).empty())
            throw usage_error("action mapping for '" + abstract_event + "': no concrete step supplies its " + what);
        return std::nullopt;
    }
    const auto& want = params(abstract);
    const auto& have = params(*chain[*pos]);
    bool ok = want.size() == have.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i)
        ok = want[i].dom.same_shape(have[i].dom);
    if (!ok)
        throw usage_error("action mapping for '" + abstract_event + "': " + what + " of '" + chain[*pos]->name +
                          "' do not match the abstract signature");
    return pos;
}

} // namespace detail

// Pairs for 1-to-n matching: each mapped abstract event against the composed
// concrete chain, observed at the assigned positions. Intermediate states
// carry no linking obligation. Events outside any chain go through the
// single-step defaults.
inline std::vector<operation_pair> action_pairs(const lts& abstract, const lts& concrete, const action_mapping& am,
                                                extension_policy policy)
{
    std::set<std::string> consumed;
    for (const auto& [a, seq] : am.sequences) {
        const auto* ae = abstract.event(a);
        if (!ae)
            throw usage_error("action mapping names unknown abstract event '" + a + "'");
        if (ae->classification == event_class::internal)
            throw usage_error("action mapping names internal abstract event '" + a + "'");
        for (const auto& c : seq) {
            const auto* ce = concrete.event(c);
            if (!ce)
                throw usage_error("action mapping names unknown concrete event '" + c + "'");
            if (ce->classification == event_class::internal)
                throw usage_error("internal event '" + c + "' must not appear in an action mapping");
            consumed.insert(c);
        }
    }
    for (const auto& [c, a] : am.singles.entries)
        if (consumed.count(c))
            throw usage_error("concrete event '" + c + "' is both in a sequence and mapped on its own");
    auto resolved = resolve_mapping(abstract, concrete, am.singles, policy, {}, consumed);

    std::vector<operation_pair> pairs;
    for (const auto& a : observable_events(abstract)) {
        operation_pair p;
        p.name = a;
        p.abstract_steps = step_relation::of_event(abstract, a);
        p.abstract_enabling = p.abstract_steps;
        if (auto it = am.sequences.find(a); it != am.sequences.end()) {
            const auto& seq = it->second;
            std::vector<const event_signature*> chain;
            for (const auto& c : seq)
                chain.push_back(concrete.event(c));
            observation_assignment assign;
            if (auto at = am.assignments.find(a); at != am.assignments.end())
                assign = at->second;
            auto in_pos = detail::observation_source(a, *abstract.event(a), chain, assign.inputs_from, true);
            auto out_pos = detail::observation_source(a, *abstract.event(a), chain, assign.outputs_from, false);

            auto steps = step_relation::of_event(concrete, seq.front());
            for (std::size_t i = 1; i < seq.size(); ++i)
                steps = compose(steps, step_relation::of_event(concrete, seq[i]));
            projection project = [a, in_pos, out_pos](const std::vector<label>& obs) {
                label l{a, {}, {}};
                if (in_pos)
                    l.inputs = obs.at(*in_pos).inputs;
                if (out_pos)
                    l.outputs = obs.at(*out_pos).outputs;
                return l;
            };
            p.routes.push_back({seq, steps, steps, std::move(project)});
        }
        for (const auto& c : resolved.mapped_to(a)) {
            auto steps = step_relation::of_event(concrete, c);
            p.routes.push_back({{c}, steps, steps, rename_to(a)});
        }
        pairs.push_back(std::move(p));
    }
    std::vector<std::string> skips = resolved.skip_events();
    skips.insert(skips.end(), resolved.concrete_internal.begin(), resolved.concrete_internal.end());
    std::sort(skips.begin(), skips.end());
    for (const auto& c : skips) {
        operation_pair p;
        p.name = skip_event;
        p.abstract_steps = skip_relation(abstract);
        p.abstract_enabling = p.abstract_steps;
        auto steps = step_relation::of_event(concrete, c);
        p.routes.push_back({{c}, steps, steps, rename_to(skip_event)});
        pairs.push_back(std::move(p));
    }
    return pairs;
}

inline verdict check_action_refinement(const lts& abstract, const lts& concrete, const retrieve_relation& r,
                                       const action_mapping& am, condition_set conds,
                                       extension_policy policy = extension_policy::reject)
{
    simulation_problem problem(abstract, concrete, action_pairs(abstract, concrete, am, policy), conds);
    auto v = problem.run(r);
    std::int64_t longest = 0;
    for (const auto& [a, seq] : am.sequences)
        longest = std::max<std::int64_t>(longest, static_cast<std::int64_t>(seq.size()));
    v.diagnostics["longest_sequence"] = longest;
    return v;
}

} // namespace refinery::refine
