#pragma once

#include "../speclang/eval.hpp"
#include "../speclang/typecheck.hpp"
#include "verdict.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace refinery::refine {

// Integer expression over the concrete state that the covered events must
// strictly decrease.
struct variant_spec {
    std::string text;
    speclang::expr compiled;

    static variant_spec compile(const speclang::typed_machine& machine, const std::string& text)
    {
        speclang::scope sc;
        machine.bind_state(sc, 0);
        return {text, speclang::compile_integer(text, sc)};
    }

    std::int64_t at(const lts& m, state_id s) const
    {
        const auto& v = m.state(s);
        return speclang::eval(compiled, std::span<const value>(v.data(), v.size())).as_int();
    }
};

namespace detail {

// Deterministic lasso from a divergent state: follow the first restricted
// edge into another divergent state until a state repeats.
inline std::pair<std::vector<trace_step>, std::vector<trace_step>> lasso(const lts& m, const std::set<std::string>& events,
                                                                         const std::vector<bool>& divergent, state_id from)
{
    std::vector<trace_step> walk;
    std::vector<state_id> visited{from};
    auto s = from;
    for (;;) {
        const transition* next = nullptr;
        for (const auto& t : m.outgoing(s))
            if (events.count(m.label_at(t.label_index).event) && divergent[t.to.index]) {
                next = &t;
                break;
            }
        if (!next)
            throw std::logic_error("divergent state without a divergent successor");
        walk.push_back({m.label_at(next->label_index), next->to});
        s = next->to;
        auto seen = std::find(visited.begin(), visited.end(), s);
        if (seen != visited.end()) {
            auto split = walk.begin() + (seen - visited.begin());
            return {{walk.begin(), split}, {split, walk.end()}};
        }
        visited.push_back(s);
    }
}

} // namespace detail

// Fails when the named events can run forever from a reachable state. With a
// variant, the variant must be non-negative on reachable states and strictly
// decreased by every reachable covered transition.
inline verdict check_divergence(const lts& m, const std::set<std::string>& events,
                                const std::optional<variant_spec>& variant = std::nullopt)
{
    check_events(m, events);
    exploration reach(m);
    auto divergent = divergent_states(m, events);

    verdict v;
    v.diagnostics["states"] = static_cast<std::int64_t>(m.state_count());
    v.diagnostics["reachable"] = static_cast<std::int64_t>(reach.order().size());
    v.diagnostics["divergent_states"] = static_cast<std::int64_t>(divergent.size());

    auto fail = [&](witness w) {
        auto out = verdict::fail(std::move(w));
        out.diagnostics = v.diagnostics;
        return out;
    };

    if (variant) {
        for (auto s : reach.order()) {
            auto n = variant->at(m, s);
            if (n < 0) {
                witness w;
                w.condition = "variant-bound";
                w.concrete_state = s;
                w.start = reach.origin(s);
                w.trace = reach.path_to(s);
                w.message = "variant " + variant->text + " = " + std::to_string(n) + " is negative at " + m.describe(s);
                return fail(std::move(w));
            }
        }
        for (auto s : reach.order()) {
            auto before = variant->at(m, s);
            for (const auto& t : m.outgoing(s)) {
                const auto& l = m.label_at(t.label_index);
                if (!events.count(l.event))
                    continue;
                auto after = variant->at(m, t.to);
                if (after < before)
                    continue;
                witness w;
                w.condition = "variant-decrease";
                w.operation = l.event;
                w.concrete_state = s;
                w.offending = l;
                w.concrete_observation = {l};
                w.target = t.to;
                w.start = reach.origin(s);
                w.trace = reach.path_to(s);
                w.message = "variant " + variant->text + " goes from " + std::to_string(before) + " to " +
                            std::to_string(after) + " on " + l.to_string();
                return fail(std::move(w));
            }
        }
        // A well-founded decreasing measure rules out infinite runs.
        if (!divergent.empty())
            throw std::logic_error("variant accepted but divergent states exist");
        v.diagnostics["variant_checked"] = 1;
        return v;
    }

    if (divergent.empty())
        return v;

    std::vector<bool> is_divergent(m.state_count(), false);
    for (auto s : divergent)
        is_divergent[s.index] = true;
    state_id first = divergent.front();
    for (auto s : reach.order())
        if (is_divergent[s.index]) {
            first = s;
            break;
        }
    auto [stem, cycle] = detail::lasso(m, events, is_divergent, first);

    witness w;
    w.condition = "divergence";
    w.start = reach.origin(first);
    w.trace = reach.path_to(first);
    w.trace.insert(w.trace.end(), stem.begin(), stem.end());
    w.concrete_state = w.trace.empty() ? w.start : w.trace.back().to;
    w.cycle = std::move(cycle);
    w.operation = w.cycle.front().lbl.event;
    w.message = "covered events can repeat forever from " + m.describe(w.concrete_state);
    return fail(std::move(w));
}

} // namespace refinery::refine
