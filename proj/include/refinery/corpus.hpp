#pragma once

#include "kernel.hpp"
#include "refine/mapping.hpp"
#include "refine/trace.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace refinery::corpus {

enum class queue_variant {
    plain,          // sort and cycle unguarded
    guarded_sort,   // sort only where s is unsorted
    sort_once_flag, // flag set by in/cycle, required and cleared by sort
    cycle_counter,  // counter reset by in/out, decremented by cycle
    unsorted_out,   // mutant: out emits head without requiring sortedness
    drop_cycle,     // mutant: cycle loses the head element
    no_sort,        // mutant: neither sort nor cycle
};

struct queue_models {
    std::string abstract_source;
    std::string concrete_source;
};

namespace detail {

inline std::string header(const std::string& name, std::int64_t v, std::int64_t n)
{
    return "machine " + name + "\nconst V = " + std::to_string(v) + "\nconst N = " + std::to_string(n) + "\n";
}

} // namespace detail

inline std::string abstract_queue(std::int64_t v, std::int64_t n, bool guard_in = false)
{
    std::string in_guard = guard_in ? "#b < N" : "true";
    return detail::header(guard_in ? "AQueueBounded" : "AQueue", v, n) +
           "var b : bag int 0..V max N\n"
           "init b = {||}\n"
           "event in (x? : int 0..V) when " + in_guard + " then b := b \\/ {|x|}\n"
           "event out (x! : int 0..V) when b /= {||} & x = min(b) then b := b \\\\ {|x|}\n";
}

// Concrete queue in one of its variants. `counter` is the cycle budget k of
// the counter variant; `guard_in` adds `#s < N` so a full queue refuses
// input instead of having the transition pruned.
inline std::string concrete_queue(std::int64_t v, std::int64_t n, queue_variant variant, std::int64_t counter = 2,
                                  bool guard_in = false)
{
    static const std::map<queue_variant, std::string> names = {
        {queue_variant::plain, "CQueue"},
        {queue_variant::guarded_sort, "CQueueGuarded"},
        {queue_variant::sort_once_flag, "CQueueSortOnce"},
        {queue_variant::cycle_counter, "CQueueCycleCounter"},
        {queue_variant::unsorted_out, "CQueueUnsortedOut"},
        {queue_variant::drop_cycle, "CQueueDropCycle"},
        {queue_variant::no_sort, "CQueueNoSort"},
    };
    std::string name = names.at(variant) + (guard_in ? "Bounded" : "");
    std::string out = detail::header(name, v, n);
    if (variant == queue_variant::cycle_counter)
        out += "const K = " + std::to_string(counter) + "\n";
    out += "var s : seq int 0..V max N\n";

    std::string init = "s = []";
    std::string in_extra, out_extra, cycle_extra;
    std::string sort_guard = "true", cycle_guard = "true", sort_extra;
    switch (variant) {
    case queue_variant::sort_once_flag:
        out += "var f : bool\n";
        init += " & f = false";
        in_extra = "; f := true";
        cycle_extra = "; f := true";
        sort_guard = "f";
        sort_extra = "; f := false";
        break;
    case queue_variant::cycle_counter:
        out += "var c : int 0..K\n";
        init += " & c = K";
        in_extra = "; c := K";
        out_extra = "; c := K";
        cycle_guard = "c > 0";
        cycle_extra = "; c := c - 1";
        break;
    case queue_variant::guarded_sort:
        sort_guard = "not sorted(s)";
        break;
    default:
        break;
    }

    out += "init " + init + "\n";
    out += "event in (x? : int 0..V) when " + std::string(guard_in ? "#s < N" : "true") + " then s := s ++ [x]" +
           in_extra + "\n";
    std::string out_guard = variant == queue_variant::unsorted_out ? "s /= [] & x = head(s)"
                                                                   : "s /= [] & sorted(s) & x = head(s)";
    out += "event out (x! : int 0..V) when " + out_guard + " then s := tail(s)" + out_extra + "\n";
    if (variant == queue_variant::no_sort)
        return out;
    out += "event sort new () when " + sort_guard +
           " then any t : seq int 0..V max N where items(t) = items(s) & sorted(t) then s := t" + sort_extra + "\n";
    std::string rotate = variant == queue_variant::drop_cycle ? "tail(s)" : "tail(s) ++ [head(s)]";
    out += "event cycle new () when " + cycle_guard + " then s := if s = [] then [] else " + rotate + cycle_extra +
           "\n";
    return out;
}

inline queue_models build_queue_models(std::int64_t v, std::int64_t n, queue_variant variant, std::int64_t counter = 2,
                                       bool guard_in = false)
{
    return {abstract_queue(v, n, guard_in), concrete_queue(v, n, variant, counter, guard_in)};
}

// Concrete queue whose output step sorts and removes the head in one go.
inline std::string sortout_queue(std::int64_t v, std::int64_t n)
{
    return detail::header("SortOut", v, n) +
           "var s : seq int 0..V max N\n"
           "init s = []\n"
           "event in (x? : int 0..V) when true then s := s ++ [x]\n"
           "event out (x! : int 0..V) when s /= [] then\n"
           "  any t : seq int 0..V max N where items(t) = items(s) & sorted(t) & head(t) = x then s := tail(t)\n";
}

struct chain_models {
    std::string m1, m2, m3;
    // Identity retrieve predicates between neighbours.
    std::string r12 = "u = v";
    std::string r23 = "v = w";
};

// Three one-state machines: e always enabled emitting 0, e never enabled,
// e always enabled emitting 1.
inline chain_models nontransitivity_chain()
{
    auto machine = [](const std::string& name, const std::string& var, const std::string& guard) {
        return "machine " + name + "\nvar " + var + " : int 0..0\ninit " + var + " = 0\nevent e (x! : int 0..1) when " +
               guard + " then skip\n";
    };
    return {machine("ChainM1", "u", "x = 0"), machine("ChainM2", "v", "false"), machine("ChainM3", "w", "x = 1")};
}

// Every file shipped under corpus/, as produced by the generators at the
// desk bounds V=2, N=3.
inline std::map<std::string, std::string> shipped_sources()
{
    auto chain = nontransitivity_chain();
    return {
        {"aqueue.mch", abstract_queue(2, 3)},
        {"aqueue_bounded.mch", abstract_queue(2, 3, true)},
        {"cqueue_plain.mch", concrete_queue(2, 3, queue_variant::plain)},
        {"cqueue_plain_bounded.mch", concrete_queue(2, 3, queue_variant::plain, 2, true)},
        {"cqueue_guarded.mch", concrete_queue(2, 3, queue_variant::guarded_sort)},
        {"cqueue_sortonce.mch", concrete_queue(2, 3, queue_variant::sort_once_flag)},
        {"cqueue_cyclecounter.mch", concrete_queue(2, 3, queue_variant::cycle_counter, 2)},
        {"cqueue_unsorted_out.mch", concrete_queue(2, 3, queue_variant::unsorted_out)},
        {"cqueue_dropcycle.mch", concrete_queue(2, 3, queue_variant::drop_cycle)},
        {"cqueue_nosort_bounded.mch", concrete_queue(2, 3, queue_variant::no_sort, 2, true)},
        {"sortout.mch", sortout_queue(2, 3)},
        {"chain_m1.mch", chain.m1},
        {"chain_m2.mch", chain.m2},
        {"chain_m3.mch", chain.m3},
    };
}

// ---------------------------------------------------------------------------
// Brute-force trace oracle. Deliberately naive: no determinisation, just
// enumeration of every bounded run.

using trace = std::vector<std::string>;

// Event renaming used by the oracle: explicit entries first (skip erases),
// then internal and new events are erased, everything else keeps its name.
inline std::function<std::optional<std::string>(const event_signature&)> oracle_renaming(const refine::alphabet_mapping& m)
{
    return [m](const event_signature& e) -> std::optional<std::string> {
        if (auto t = m.target(e.name))
            return *t == refine::skip_event ? std::nullopt : std::optional<std::string>(*t);
        if (e.classification != event_class::external)
            return std::nullopt;
        return e.name;
    };
}

// Depth-first over (state, trace so far). Erased steps keep the trace; the
// visited set stops erased cycles from looping.
inline std::set<trace> trace_oracle(const lts& m, const refine::alphabet_mapping& mapping, std::size_t depth)
{
    auto rename = oracle_renaming(mapping);
    std::map<std::string, std::optional<std::string>> names;
    for (const auto& e : m.alphabet())
        names[e.name] = rename(e);

    auto show = [](const std::string& event, const label& l) {
        std::ostringstream out;
        out << event;
        for (const auto& v : l.inputs)
            out << "?" << v.to_string();
        for (const auto& v : l.outputs)
            out << "!" << v.to_string();
        return out.str();
    };

    std::set<trace> found;
    std::set<std::pair<std::uint32_t, trace>> visited;
    std::vector<std::pair<std::uint32_t, trace>> stack;
    for (auto s : m.inits())
        stack.push_back({s.index, {}});
    while (!stack.empty()) {
        auto item = std::move(stack.back());
        stack.pop_back();
        if (!visited.insert(item).second)
            continue;
        const auto& [s, so_far] = item;
        found.insert(so_far);
        for (const auto& t : m.outgoing({s})) {
            const auto& l = m.label_at(t.label_index);
            const auto& name = names[l.event];
            if (!name) {
                stack.push_back({t.to.index, so_far});
            } else if (so_far.size() < depth) {
                auto next = so_far;
                next.push_back(show(*name, l));
                stack.push_back({t.to.index, std::move(next)});
            }
        }
    }
    return found;
}

// Bounded inclusion according to the oracle: the shortest concrete trace
// the abstract machine lacks, if any. Abstract events keep their names
// unless internal.
inline std::optional<trace> oracle_counterexample(const lts& abstract, const lts& concrete,
                                                  const refine::alphabet_mapping& m, std::size_t depth)
{
    refine::alphabet_mapping abstract_names;
    for (const auto& e : abstract.alphabet())
        abstract_names.entries[e.name] =
            e.classification == event_class::internal ? refine::skip_event : e.name;
    // Unmapped concrete events that share a name with a visible abstract
    // event keep it, even when perspicuous.
    auto concrete_names = m;
    for (const auto& e : concrete.alphabet()) {
        const auto* a = abstract.event(e.name);
        if (!m.target(e.name) && e.classification != event_class::internal && a &&
            a->classification != event_class::internal)
            concrete_names.entries[e.name] = e.name;
    }
    auto a = trace_oracle(abstract, abstract_names, depth);
    auto c = trace_oracle(concrete, concrete_names, depth);
    std::optional<trace> shortest;
    for (const auto& t : c)
        if (!a.count(t) && (!shortest || t.size() < shortest->size()))
            shortest = t;
    return shortest;
}

struct oracle_comparison {
    bool checker_passed = false;
    std::optional<trace> oracle_missing;
    // Observable length of the checker's failing trace, offending step included.
    std::size_t witness_length = 0;
    bool agree = false;
};

// The oracle sees traces up to `depth` only, so a checker failure whose
// shortest witness is longer cannot be confirmed and is not counted against
// it.
inline oracle_comparison compare_with_oracle(const lts& abstract, const lts& concrete, const refine::alphabet_mapping& m,
                                             std::size_t depth,
                                             refine::extension_policy policy = refine::extension_policy::reject)
{
    oracle_comparison out;
    auto v = refine::check_trace_refinement(abstract, concrete, m, policy);
    out.checker_passed = v.passed;
    out.oracle_missing = oracle_counterexample(abstract, concrete, m, depth);
    if (v.passed) {
        out.agree = !out.oracle_missing;
        return out;
    }
    auto resolved = refine::resolve_mapping(abstract, concrete, m, policy);
    out.witness_length = refine::observable_trace(v.counterexample->trace, resolved).size() + 1;
    out.agree = out.witness_length > depth || (out.oracle_missing && out.oracle_missing->size() == out.witness_length);
    return out;
}

// ---------------------------------------------------------------------------
// Manifest of expected verdicts, one check per line:
//   abstract concrete relation key=value ... -> pass|fail
// Values containing spaces are written in double quotes. `-` stands for "no
// abstract machine" (divergence checks).

struct manifest_entry {
    std::size_t line = 0;
    std::string abstract;
    std::string concrete;
    std::string relation;
    std::map<std::string, std::string> options;
    bool expect_pass = true;
};

inline std::vector<manifest_entry> parse_manifest(std::string_view text)
{
    std::vector<manifest_entry> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto bad = [&](const std::string& msg) { return usage_error("manifest line " + std::to_string(line_no) + ": " + msg); };
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw = raw.substr(0, hash);
        auto arrow = raw.rfind("->");
        std::vector<std::string> words;
        std::string word;
        bool quoted = false, any = false;
        for (char ch : raw.substr(0, arrow == std::string::npos ? raw.size() : arrow)) {
            if (ch == '"') {
                quoted = !quoted;
                any = true;
            } else if (!quoted && std::isspace(static_cast<unsigned char>(ch))) {
                if (any)
                    words.push_back(word);
                word.clear();
                any = false;
            } else {
                word += ch;
                any = true;
            }
        }
        if (quoted)
            throw bad("unterminated quote");
        if (any)
            words.push_back(word);
        if (words.empty() && arrow == std::string::npos)
            continue;
        if (arrow == std::string::npos || words.size() < 3)
            throw bad("expected 'abstract concrete relation key=value... -> pass|fail'");
        manifest_entry e;
        e.line = line_no;
        e.abstract = words[0];
        e.concrete = words[1];
        e.relation = words[2];
        for (std::size_t i = 3; i < words.size(); ++i) {
            auto eq = words[i].find('=');
            if (eq == std::string::npos)
                throw bad("expected key=value, got '" + words[i] + "'");
            e.options[words[i].substr(0, eq)] = words[i].substr(eq + 1);
        }
        std::istringstream rest(raw.substr(arrow + 2));
        std::string expect;
        rest >> expect;
        if (expect != "pass" && expect != "fail")
            throw bad("expected verdict 'pass' or 'fail'");
        e.expect_pass = expect == "pass";
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace refinery::corpus
