#pragma once

#include "../kernel.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace refinery::refine {

// Which of the per-operation refinement properties are imposed:
//   1 consistency             every concrete effect is allowed abstractly
//   2 enabledness             abstractly enabled => concretely enabled
//   3 restricted consistency  consistency where the abstract op is enabled
struct condition_set {
    bool consistency = false;
    bool enabledness = false;
    bool restricted_consistency = false;

    static condition_set parse(const std::string& text)
    {
        condition_set cs;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item == "1" || item == "consistency")
                cs.consistency = true;
            else if (item == "2" || item == "enabledness")
                cs.enabledness = true;
            else if (item == "3" || item == "restricted-consistency")
                cs.restricted_consistency = true;
            else if (!item.empty())
                throw usage_error("unknown refinement condition '" + item + "' (use 1, 2, 3)");
        }
        if (cs.empty())
            throw usage_error("condition set must not be empty");
        return cs;
    }

    bool empty() const { return !consistency && !enabledness && !restricted_consistency; }

    // Restricted consistency without enabledness: a non-transitive relation.
    bool only_restricted() const { return restricted_consistency && !consistency && !enabledness; }

    std::string to_string() const
    {
        std::string out;
        auto add = [&](bool on, const char* n) {
            if (on)
                out += (out.empty() ? "" : ",") + std::string(n);
        };
        add(consistency, "1");
        add(enabledness, "2");
        add(restricted_consistency, "3");
        return out;
    }

    friend bool operator==(const condition_set&, const condition_set&) = default;
};

inline const char* non_transitive_warning =
    "condition set {3} on its own does not compose: guards may be strengthened in one step and "
    "weakened in the next, so a chain of passing steps need not pass as a whole";

// Counterexample to a refinement check, replayable against the inputs.
struct witness {
    // initialisation | consistency | enabledness | restricted-consistency |
    // trace-inclusion | relative-deadlock | divergence | variant-bound |
    // variant-decrease | divergence-preservation
    std::string condition;
    // Abstract operation being compared ("skip" for refinements of skip).
    std::string operation;
    std::optional<state_id> abstract_state;
    state_id concrete_state;
    // Abstract-level label of the offending step (projected for concrete steps).
    std::optional<label> offending;
    // Raw concrete observation of the offending step, when there is one.
    std::vector<label> concrete_observation;
    std::optional<state_id> target;
    // Shortest concrete path from an initial state to concrete_state.
    state_id start;
    std::vector<trace_step> trace;
    // For divergence: a cycle of restricted steps back to its first state.
    std::vector<trace_step> cycle;
    std::string message;

    friend bool operator==(const witness&, const witness&) = default;
};

struct verdict {
    bool passed = true;
    std::optional<witness> counterexample;
    std::map<std::string, std::int64_t> diagnostics;
    std::vector<std::string> warnings;

    static verdict pass() { return {}; }

    static verdict fail(witness w)
    {
        verdict v;
        v.passed = false;
        v.counterexample = std::move(w);
        return v;
    }

    // Status and witness agree; diagnostics may differ.
    bool same_outcome(const verdict& other) const
    {
        return passed == other.passed && counterexample == other.counterexample;
    }
};

} // namespace refinery::refine
