#pragma once

#include "refinery/refinery.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace test {

using namespace refinery;

inline std::string corpus_path(const std::string& file) { return std::string(REFINERY_CORPUS_DIR) + "/" + file; }

inline speclang::grounded_machine load(const std::string& file, speclang::bounds overrides = {})
{
    return speclang::load_machine(read_file(corpus_path(file)), {std::move(overrides), false});
}

inline speclang::grounded_machine load_text(const std::string& text, speclang::bounds overrides = {})
{
    return speclang::load_machine(text, {std::move(overrides), false});
}

// Reader that serves in-memory sources by name and falls back to the corpus.
struct memory_reader {
    std::map<std::string, std::string> files;

    std::string operator()(const std::string& path) const
    {
        if (auto it = files.find(path); it != files.end())
            return it->second;
        return read_file(corpus_path(path));
    }
};

inline check_outcome run(check_request req, const memory_reader& reader = {})
{
    return run_check(req, std::ref(reader));
}

inline check_request request(const std::string& abstract, const std::string& concrete, const std::string& relation)
{
    check_request r;
    r.abstract_path = abstract;
    r.concrete_path = concrete;
    r.relation = relation;
    return r;
}

// Machines of the queue family shipped in the corpus.
inline std::vector<std::string> queue_machines()
{
    return {"aqueue.mch",          "aqueue_bounded.mch",      "sortout.mch",
            "cqueue_plain.mch",    "cqueue_plain_bounded.mch", "cqueue_guarded.mch",
            "cqueue_sortonce.mch", "cqueue_cyclecounter.mch", "cqueue_unsorted_out.mch",
            "cqueue_dropcycle.mch", "cqueue_nosort_bounded.mch"};
}

// Every ordered pair of queue machines plus every ordered pair of chain
// machines.
inline std::vector<std::pair<std::string, std::string>> corpus_pairs()
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& a : queue_machines())
        for (const auto& c : queue_machines())
            out.push_back({a, c});
    for (const auto& a : {"chain_m1.mch", "chain_m2.mch", "chain_m3.mch"})
        for (const auto& c : {"chain_m1.mch", "chain_m2.mch", "chain_m3.mch"})
            out.push_back({a, c});
    return out;
}

inline std::vector<refine::condition_set> all_condition_sets()
{
    std::vector<refine::condition_set> out;
    for (int mask = 1; mask < 8; ++mask)
        out.push_back({(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0});
    return out;
}

// Test-side view of a state's single variable as a plain vector of ints.
inline std::vector<std::int64_t> ints(const value& v)
{
    std::vector<std::int64_t> out;
    for (const auto& x : v.items())
        out.push_back(x.as_int());
    return out;
}

inline state_id find_state(const lts& m, const std::string& description)
{
    for (std::uint32_t i = 0; i < m.state_count(); ++i)
        if (m.describe({i}) == description)
            return {i};
    throw std::runtime_error("no state " + description);
}

} // namespace test
