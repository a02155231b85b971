#pragma once

#include "simulation.hpp"

namespace refinery::refine {

struct nontransitivity_report {
    condition_set conditions;
    verdict first;    // M1 refined by M2 under R12
    verdict second;   // M2 refined by M3 under R23
    verdict composed; // M1 refined by M3 under R13
    bool transitivity_violated = false;
};

// Runs the two single steps and the composed step of a chain M1, M2, M3 with
// identity alphabets. Transitivity is violated when both steps pass and the
// composition fails.
inline nontransitivity_report check_nontransitivity_witness(const lts& m1, const lts& m2, const lts& m3,
                                                            const retrieve_relation& r12, const retrieve_relation& r23,
                                                            const retrieve_relation& r13, condition_set conds)
{
    nontransitivity_report out;
    out.conditions = conds;
    out.first = check_downward_simulation(m1, m2, r12, conds, alphabet_mapping::identity(m2));
    out.second = check_downward_simulation(m2, m3, r23, conds, alphabet_mapping::identity(m3));
    out.composed = check_downward_simulation(m1, m3, r13, conds, alphabet_mapping::identity(m3));
    out.transitivity_violated = out.first.passed && out.second.passed && !out.composed.passed;
    return out;
}

} // namespace refinery::refine
