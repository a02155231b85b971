#pragma once

#include "mapping.hpp"

#include <map>
#include <string>
#include <vector>

namespace refinery::refine {

// Renames transition labels through the mapping. Events that refine skip
// (mapped to skip, internal, new, or tolerated extensions) become
// unobservable `skip` steps that carry no parameters.
inline lts relabel(const lts& concrete, const alphabet_mapping& m, extension_policy policy = extension_policy::reject)
{
    std::map<std::string, std::string> target;
    for (const auto& e : concrete.alphabet()) {
        if (auto t = m.target(e.name))
            target[e.name] = *t;
        else if (e.classification != event_class::external || policy == extension_policy::tolerate)
            target[e.name] = skip_event;
        else
            throw usage_error("concrete event '" + e.name + "' is not mapped and extensions are rejected");
    }
    for (const auto& [c, a] : m.entries)
        if (!concrete.event(c))
            throw usage_error("mapping names unknown concrete event '" + c + "'");

    std::vector<event_signature> alphabet;
    auto declare = [&](event_signature sig) {
        for (const auto& have : alphabet)
            if (have.name == sig.name) {
                check_signature_compatibility(sig, have);
                return;
            }
        alphabet.push_back(std::move(sig));
    };
    for (const auto& e : concrete.alphabet()) {
        const auto& t = target[e.name];
        if (t == skip_event) {
            declare({skip_event, {}, {}, event_class::internal});
        } else {
            auto sig = e;
            sig.name = t;
            declare(std::move(sig));
        }
    }

    std::vector<labelled_edge> edges;
    for (const auto& t : concrete.transitions()) {
        auto l = concrete.label_at(t.label_index);
        const auto& name = target[l.event];
        if (name == skip_event)
            l = {skip_event, {}, {}};
        else
            l.event = name;
        edges.push_back({t.from, std::move(l), t.to});
    }
    return {concrete.name(), concrete.variables(), concrete.states(), concrete.inits(), std::move(alphabet),
            std::move(edges)};
}

} // namespace refinery::refine
