#pragma once

#include "mapping.hpp"
#include "parallel.hpp"
#include "retrieve.hpp"
#include "verdict.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace refinery::refine {

// Turns the raw observation of a concrete step into the label it is
// compared with at the abstract level.
using projection = std::function<label(const std::vector<label>&)>;

// One way the concrete side realises an abstract operation: a single event,
// a closure-padded event, or a sequence of events.
struct concrete_route {
    std::vector<std::string> events;
    step_relation steps;
    // Steps whose existence makes the route "enabled" (may be a prefix form).
    step_relation enabling;
    projection project;
};

// An abstract operation (or skip) together with every concrete route that
// has to simulate it.
struct operation_pair {
    std::string name;
    step_relation abstract_steps;
    step_relation abstract_enabling;
    std::vector<concrete_route> routes;
};

inline label observed_label(const std::string& operation, const std::vector<label>& observation)
{
    if (observation.empty())
        return {skip_event, {}, {}};
    if (observation.size() != 1)
        throw usage_error("operation '" + operation + "' produced a multi-step abstract observation");
    return observation.front();
}

inline projection rename_to(std::string abstract)
{
    return [abstract = std::move(abstract)](const std::vector<label>& obs) {
        if (abstract == skip_event)
            return label{skip_event, {}, {}};
        if (obs.size() != 1)
            throw usage_error("expected a single concrete label to project onto '" + abstract + "'");
        return label{abstract, obs.front().inputs, obs.front().outputs};
    };
}

struct violation {
    std::string condition;
    std::string operation;
    std::optional<label> offending;
    std::vector<label> raw;
    std::optional<state_id> target;
    std::string message;
};

// Per-pair downward-simulation conditions, evaluated against any retrieve
// relation. Shared by the plain, weak, action-refinement and Event-B
// checkers and by greatest-simulation synthesis.
class simulation_problem {
public:
    simulation_problem(const lts& abstract, const lts& concrete, std::vector<operation_pair> pairs, condition_set conds)
        : _abstract(abstract), _concrete(concrete), _pairs(std::move(pairs)), _conds(conds)
    {
        if (conds.empty())
            throw usage_error("condition set must not be empty");
        for (const auto& p : _pairs)
            index(p);
    }

    const lts& abstract() const { return _abstract; }
    const lts& concrete() const { return _concrete; }
    const condition_set& conditions() const { return _conds; }
    const std::vector<operation_pair>& pairs() const { return _pairs; }

    // First violated condition at the linked pair (a, c), in pair order;
    // enabledness before consistency within a pair.
    std::optional<violation> check_pair(state_id a, state_id c, const retrieve_relation& r) const
    {
        for (std::size_t p = 0; p < _pairs.size(); ++p) {
            const auto& info = _info[p];
            const auto& abstract_inputs = info.abstract_inputs[a.index];

            if (_conds.enabledness) {
                const auto& concrete_inputs = info.concrete_inputs[c.index];
                for (const auto& [inputs, lbl] : abstract_inputs)
                    if (!concrete_inputs.count(inputs))
                        return violation{"enabledness", _pairs[p].name, lbl, {}, std::nullopt,
                                         "abstract " + lbl.to_string() + " is enabled but no concrete counterpart is"};
            }

            if (!_conds.consistency && !_conds.restricted_consistency)
                continue;
            for (const auto& cand : info.candidates[c.index]) {
                if (!_conds.consistency && !abstract_inputs.count(cand.projected.inputs))
                    continue;
                bool matched = false;
                for (const auto& s : _pairs[p].abstract_steps.from(a)) {
                    if (observed_label(_pairs[p].name, s.observation) == cand.projected && r.contains(s.to, cand.target)) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    auto cond = _conds.consistency ? "consistency" : "restricted-consistency";
                    return violation{cond, _pairs[p].name, cand.projected, cand.raw, cand.target,
                                     "concrete " + refinery::to_string(cand.raw) +
                                         " has no abstract match ending in a linked state"};
                }
            }
        }
        return std::nullopt;
    }

    // Every concrete initial state linked to some abstract initial state.
    std::optional<state_id> unlinked_init(const retrieve_relation& r) const
    {
        for (auto c : _concrete.inits()) {
            bool linked = false;
            for (auto a : _abstract.inits())
                if (r.contains(a, c))
                    linked = true;
            if (!linked)
                return c;
        }
        return std::nullopt;
    }

    // Runs every pair check over R restricted to reachable concrete states.
    // The reported witness is the first violation in breadth-first order.
    verdict run(const retrieve_relation& r) const
    {
        r.check_against(_abstract, _concrete);
        exploration reach(_concrete);
        verdict v;
        v.diagnostics["abstract_states"] = static_cast<std::int64_t>(_abstract.state_count());
        v.diagnostics["concrete_states"] = static_cast<std::int64_t>(_concrete.state_count());
        v.diagnostics["concrete_reachable"] = static_cast<std::int64_t>(reach.order().size());
        v.diagnostics["retrieve_pairs"] = static_cast<std::int64_t>(r.size());
        v.diagnostics["operation_pairs"] = static_cast<std::int64_t>(_pairs.size());
        if (_conds.only_restricted())
            v.warnings.push_back(non_transitive_warning);

        if (auto c = unlinked_init(r)) {
            witness w;
            w.condition = "initialisation";
            w.concrete_state = *c;
            w.start = *c;
            w.message = "concrete initial state " + _concrete.describe(*c) + " is not linked to any abstract initial state";
            auto out = verdict::fail(std::move(w));
            out.diagnostics = v.diagnostics;
            out.warnings = v.warnings;
            return out;
        }

        const auto& order = reach.order();
        std::function<std::optional<std::pair<state_id, violation>>(std::size_t)> probe =
            [&](std::size_t i) -> std::optional<std::pair<state_id, violation>> {
            auto c = order[i];
            for (auto a : r.abstract_for(c))
                if (auto bad = check_pair(a, c, r))
                    return std::make_pair(a, std::move(*bad));
            return std::nullopt;
        };
        auto hit = first_hit(order.size(), probe);

        std::int64_t linked = 0;
        for (auto c : order)
            linked += static_cast<std::int64_t>(r.abstract_for(c).size());
        v.diagnostics["linked_pairs_checked"] = linked;
        if (!hit)
            return v;

        auto c = order[hit->first];
        auto& [a, bad] = hit->second;
        witness w;
        w.condition = bad.condition;
        w.operation = bad.operation;
        w.abstract_state = a;
        w.concrete_state = c;
        w.offending = bad.offending;
        w.concrete_observation = bad.raw;
        w.target = bad.target;
        w.start = reach.origin(c);
        w.trace = reach.path_to(c);
        w.message = bad.message;
        auto out = verdict::fail(std::move(w));
        out.diagnostics = v.diagnostics;
        out.warnings = v.warnings;
        return out;
    }

private:
    struct candidate {
        label projected;
        state_id target;
        std::vector<label> raw;
    };

    struct pair_info {
        // Per abstract state: enabled input tuples, with a representative label.
        std::vector<std::map<std::vector<value>, label>> abstract_inputs;
        std::vector<std::set<std::vector<value>>> concrete_inputs;
        // Per concrete state: steps to simulate, sorted by (label, target, raw).
        std::vector<std::vector<candidate>> candidates;
    };

    void index(const operation_pair& p)
    {
        if (p.abstract_steps.table() != _abstract.token() || p.abstract_enabling.table() != _abstract.token())
            throw usage_error("abstract relations of '" + p.name + "' are over a different state table");
        pair_info info;
        info.abstract_inputs.resize(_abstract.state_count());
        for (const auto& s : p.abstract_enabling.entries()) {
            auto l = observed_label(p.name, s.observation);
            info.abstract_inputs[s.from.index].emplace(l.inputs, l);
        }
        info.concrete_inputs.resize(_concrete.state_count());
        info.candidates.resize(_concrete.state_count());
        for (const auto& route : p.routes) {
            if (route.steps.table() != _concrete.token() || route.enabling.table() != _concrete.token())
                throw usage_error("concrete relations of '" + p.name + "' are over a different state table");
            for (const auto& s : route.enabling.entries())
                info.concrete_inputs[s.from.index].insert(route.project(s.observation).inputs);
            for (const auto& s : route.steps.entries())
                info.candidates[s.from.index].push_back({route.project(s.observation), s.to, s.observation});
        }
        for (auto& list : info.candidates) {
            std::sort(list.begin(), list.end(), [](const candidate& x, const candidate& y) {
                if (auto c = x.projected <=> y.projected; c != 0)
                    return c < 0;
                if (x.target != y.target)
                    return x.target < y.target;
                return std::lexicographical_compare(x.raw.begin(), x.raw.end(), y.raw.begin(), y.raw.end());
            });
            list.erase(std::unique(list.begin(), list.end(),
                                   [](const candidate& x, const candidate& y) {
                                       return x.projected == y.projected && x.target == y.target && x.raw == y.raw;
                                   }),
                       list.end());
        }
        _info.push_back(std::move(info));
    }

    const lts& _abstract;
    const lts& _concrete;
    std::vector<operation_pair> _pairs;
    condition_set _conds;
    std::vector<pair_info> _info;
};

// Operation pairs for single-step comparison under a resolved mapping:
// one pair per observable abstract event (all concrete events mapped to it),
// then one skip pair per concrete event refining skip. Concrete internal
// events are compared against skip as well.
inline std::vector<operation_pair> single_step_pairs(const lts& abstract, const lts& concrete, const resolved_mapping& m,
                                                     const std::set<std::string>& only = {})
{
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
        p.abstract_steps = step_relation::of_event(abstract, a);
        p.abstract_enabling = p.abstract_steps;
        for (const auto& c : mapped) {
            auto steps = step_relation::of_event(concrete, c);
            p.routes.push_back({{c}, steps, steps, rename_to(a)});
        }
        pairs.push_back(std::move(p));
    }
    std::vector<std::string> skips = m.skip_events();
    skips.insert(skips.end(), m.concrete_internal.begin(), m.concrete_internal.end());
    std::sort(skips.begin(), skips.end());
    for (const auto& c : skips) {
        if (!wanted({c}))
            continue;
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

struct simulation_options {
    extension_policy policy = extension_policy::reject;
    // Restrict the check to operation pairs involving these concrete events.
    std::set<std::string> only;
};

inline verdict check_downward_simulation(const lts& abstract, const lts& concrete, const retrieve_relation& r,
                                         condition_set conds, const alphabet_mapping& m,
                                         const simulation_options& options = {})
{
    auto resolved = resolve_mapping(abstract, concrete, m, options.policy);
    simulation_problem problem(abstract, concrete, single_step_pairs(abstract, concrete, resolved, options.only), conds);
    auto v = problem.run(r);
    v.diagnostics["extension_events"] = static_cast<std::int64_t>(resolved.extensions.size());
    return v;
}

// Largest relation satisfying the per-pair conditions of `problem`, found by
// deleting violating pairs until nothing changes. Covers all state pairs,
// reachable or not. The result may fail initialisation.
inline retrieve_relation synthesize_retrieve(const simulation_problem& problem)
{
    if (problem.conditions().only_restricted())
        throw usage_error("cannot synthesise a retrieve relation for {3} alone: supply one explicitly");
    auto r = retrieve_relation::full(problem.abstract(), problem.concrete());
    for (bool changed = true; changed;) {
        changed = false;
        for (auto [a, c] : r.pairs())
            if (problem.check_pair(a, c, r)) {
                r.erase(a, c);
                changed = true;
            }
    }
    return r;
}

// Returns nullopt when a concrete initial state loses every link to an
// abstract initial state.
inline std::optional<retrieve_relation> greatest_simulation(const lts& abstract, const lts& concrete, const alphabet_mapping& m,
                                                            condition_set conds,
                                                            const simulation_options& options = {})
{
    if (conds.only_restricted())
        throw usage_error("cannot synthesise a retrieve relation for {3} alone: supply one explicitly");
    auto resolved = resolve_mapping(abstract, concrete, m, options.policy);
    simulation_problem problem(abstract, concrete, single_step_pairs(abstract, concrete, resolved, options.only), conds);
    auto r = synthesize_retrieve(problem);
    if (problem.unlinked_init(r))
        return std::nullopt;
    return r;
}

} // namespace refinery::refine
