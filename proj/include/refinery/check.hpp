#pragma once

#include "corpus.hpp"
#include "refine/action.hpp"
#include "refine/divergence.hpp"
#include "refine/eventb.hpp"
#include "refine/simulation.hpp"
#include "refine/trace.hpp"
#include "refine/weak.hpp"
#include "speclang/ground.hpp"

#include "json.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace refinery {

inline const char* version_string = "refinery 0.1.0";

using json = nlohmann::json;

// Everything a check depends on; also what a report records as its inputs.
struct check_request {
    std::string abstract_path; // empty for divergence checks
    std::string concrete_path;
    std::string relation = "sim"; // trace | sim | eventb | weak | action | divergence
    std::optional<std::string> conditions;
    std::string retrieve = "auto";
    std::optional<std::string> mapping_path;
    std::vector<std::string> internal;
    std::vector<std::string> new_events;
    std::optional<std::string> variant;
    std::optional<std::pair<std::int64_t, std::int64_t>> bounds; // V, N
    std::size_t depth = 6;
    bool strict = false;
    bool relative_deadlock = false;
    bool preserve_divergence = false;
    std::optional<std::string> policy;
    std::vector<std::string> only;
};

struct check_outcome {
    refine::verdict result;
    json report;
    std::optional<lts> abstract;
    lts concrete;
};

using source_reader = std::function<std::string(const std::string&)>;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw usage_error("cannot read '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::vector<std::string> split_names(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (auto name = refine::detail::trim(item); !name.empty())
            out.push_back(name);
    return out;
}

inline std::pair<std::int64_t, std::int64_t> parse_bounds(const std::string& text)
{
    auto parts = split_names(text);
    try {
        if (parts.size() == 2)
            return {std::stoll(parts[0]), std::stoll(parts[1])};
    } catch (const std::exception&) {
    }
    throw usage_error("--bounds expects V,N (two integers), got '" + text + "'");
}

namespace detail {

inline json state_json(const lts& m, state_id s) { return {{"id", s.index}, {"state", m.describe(s)}}; }

inline json steps_json(const lts& m, const std::vector<trace_step>& steps)
{
    json out = json::array();
    for (const auto& s : steps)
        out.push_back({{"label", s.lbl.to_string()}, {"to", state_json(m, s.to)}});
    return out;
}

inline json witness_json(const refine::witness& w, const lts* abstract, const lts& concrete)
{
    json out;
    out["condition"] = w.condition;
    out["operation"] = w.operation;
    out["pair"] = {{"abstract", w.abstract_state && abstract ? state_json(*abstract, *w.abstract_state) : json(nullptr)},
                   {"concrete", state_json(concrete, w.concrete_state)}};
    out["label"] = w.offending ? json(w.offending->to_string()) : json(nullptr);
    json obs = json::array();
    for (const auto& l : w.concrete_observation)
        obs.push_back(l.to_string());
    out["observation"] = obs;
    out["target"] = w.target ? state_json(concrete, *w.target) : json(nullptr);
    out["start"] = state_json(concrete, w.start);
    out["trace"] = steps_json(concrete, w.trace);
    out["cycle"] = steps_json(concrete, w.cycle);
    out["message"] = w.message;
    return out;
}

inline json inputs_json(const check_request& r)
{
    json out;
    out["abstract"] = r.abstract_path.empty() ? json(nullptr) : json(r.abstract_path);
    out["concrete"] = r.concrete_path;
    out["relation"] = r.relation;
    out["conditions"] = r.conditions ? json(*r.conditions) : json(nullptr);
    out["retrieve"] = r.retrieve;
    out["mapping"] = r.mapping_path ? json(*r.mapping_path) : json(nullptr);
    out["internal"] = r.internal;
    out["new"] = r.new_events;
    out["variant"] = r.variant ? json(*r.variant) : json(nullptr);
    out["bounds"] = r.bounds ? json{r.bounds->first, r.bounds->second} : json(nullptr);
    out["depth"] = r.depth;
    out["strict"] = r.strict;
    out["relative_deadlock"] = r.relative_deadlock;
    out["preserve_divergence"] = r.preserve_divergence;
    out["policy"] = r.policy ? json(*r.policy) : json(nullptr);
    out["only"] = r.only;
    return out;
}

inline check_request request_from_inputs(const json& in)
{
    check_request r;
    auto opt = [&](const char* key) -> std::optional<std::string> {
        if (!in.contains(key) || in[key].is_null())
            return std::nullopt;
        return in[key].get<std::string>();
    };
    r.abstract_path = opt("abstract").value_or("");
    r.concrete_path = in.at("concrete").get<std::string>();
    r.relation = in.at("relation").get<std::string>();
    r.conditions = opt("conditions");
    r.retrieve = in.at("retrieve").get<std::string>();
    r.mapping_path = opt("mapping");
    r.internal = in.at("internal").get<std::vector<std::string>>();
    r.new_events = in.at("new").get<std::vector<std::string>>();
    r.variant = opt("variant");
    if (!in.at("bounds").is_null())
        r.bounds = std::make_pair(in["bounds"][0].get<std::int64_t>(), in["bounds"][1].get<std::int64_t>());
    r.depth = in.at("depth").get<std::size_t>();
    r.strict = in.at("strict").get<bool>();
    r.relative_deadlock = in.at("relative_deadlock").get<bool>();
    r.preserve_divergence = in.at("preserve_divergence").get<bool>();
    r.policy = opt("policy");
    r.only = in.at("only").get<std::vector<std::string>>();
    return r;
}

inline speclang::ground_options ground_options_for(const check_request& r)
{
    speclang::ground_options g;
    if (r.bounds) {
        g.overrides["V"] = r.bounds->first;
        g.overrides["N"] = r.bounds->second;
    }
    g.strict = r.strict;
    return g;
}

} // namespace detail

// A manifest line as a check request. Flags take `true`; lists are
// comma-separated.
inline check_request request_from_manifest(const corpus::manifest_entry& e)
{
    check_request r;
    if (e.abstract != "-")
        r.abstract_path = e.abstract;
    r.concrete_path = e.concrete;
    r.relation = e.relation;
    for (const auto& [key, value] : e.options) {
        if (key == "conditions")
            r.conditions = value;
        else if (key == "retrieve")
            r.retrieve = value;
        else if (key == "mapping")
            r.mapping_path = value;
        else if (key == "internal")
            r.internal = split_names(value);
        else if (key == "new")
            r.new_events = split_names(value);
        else if (key == "variant")
            r.variant = value;
        else if (key == "bounds")
            r.bounds = parse_bounds(value);
        else if (key == "depth")
            r.depth = std::stoul(value);
        else if (key == "policy")
            r.policy = value;
        else if (key == "only")
            r.only = split_names(value);
        else if (key == "strict")
            r.strict = value == "true";
        else if (key == "relative-deadlock")
            r.relative_deadlock = value == "true";
        else if (key == "preserve-divergence")
            r.preserve_divergence = value == "true";
        else
            throw usage_error("manifest line " + std::to_string(e.line) + ": unknown option '" + key + "'");
    }
    return r;
}

// Parses, grounds and runs the requested check. Throws refinery::error for
// usage, parse, type and grounding problems.
inline check_outcome run_check(const check_request& req, const source_reader& read = read_file)
{
    static const std::set<std::string> relations = {"trace", "sim", "eventb", "weak", "action", "divergence"};
    if (!relations.count(req.relation))
        throw usage_error("unknown relation '" + req.relation + "'");
    if (req.variant && req.new_events.empty() && req.internal.empty())
        throw usage_error("--variant needs the covered events: give --new or --internal");
    if (req.relation != "divergence" && req.abstract_path.empty())
        throw usage_error("--abstract is required for relation '" + req.relation + "'");
    if (req.preserve_divergence && req.relation != "weak")
        throw usage_error("--preserve-divergence only applies to --relation weak");
    if (req.relative_deadlock && req.relation != "eventb")
        throw usage_error("--relative-deadlock only applies to --relation eventb");

    auto options = detail::ground_options_for(req);
    auto concrete_g = speclang::load_machine(read(req.concrete_path), options);
    std::optional<speclang::grounded_machine> abstract_g;
    if (!req.abstract_path.empty())
        abstract_g = speclang::load_machine(read(req.abstract_path), options);

    refine::mapping_file mapping;
    if (req.mapping_path)
        mapping = refine::parse_mapping_file(read(*req.mapping_path));

    // Classification overrides apply to the concrete machine.
    std::map<std::string, event_class> overrides;
    auto classify = [&](const std::vector<std::string>& events, event_class c) {
        for (const auto& e : events) {
            if (!concrete_g.system.event(e))
                throw usage_error("unknown concrete event '" + e + "'");
            overrides[e] = c;
        }
    };
    classify(mapping.perspicuous, event_class::perspicuous);
    classify(mapping.internal, event_class::internal);
    classify(req.new_events, event_class::perspicuous);
    classify(req.internal, event_class::internal);
    lts concrete = concrete_g.system.with_classification(overrides);

    auto policy = mapping.policy.value_or(refine::extension_policy::reject);
    if (req.policy) {
        if (*req.policy == "tolerate")
            policy = refine::extension_policy::tolerate;
        else if (*req.policy == "reject")
            policy = refine::extension_policy::reject;
        else
            throw usage_error("--policy must be 'tolerate' or 'reject'");
    }
    std::set<std::string> only(req.only.begin(), req.only.end());
    for (const auto& e : only)
        if (!concrete.event(e))
            throw usage_error("--only names unknown concrete event '" + e + "'");

    std::set<std::string> covered(req.new_events.begin(), req.new_events.end());
    covered.insert(req.internal.begin(), req.internal.end());
    std::optional<refine::variant_spec> variant;
    if (req.variant)
        variant = refine::variant_spec::compile(concrete_g.machine, *req.variant);

    auto conds = refine::condition_set::parse(req.conditions.value_or("1,2"));

    refine::verdict v;
    std::optional<refine::retrieve_relation> r;
    auto retrieve_for = [&](const refine::simulation_problem& problem) {
        if (req.retrieve == "auto")
            r = refine::synthesize_retrieve(problem);
        else
            r = refine::retrieve_relation::from_predicate(abstract_g->machine, abstract_g->system, concrete_g.machine,
                                                          concrete, req.retrieve);
        return *r;
    };

    if (req.relation == "divergence") {
        if (covered.empty())
            throw usage_error("divergence checks need the covered events: give --new or --internal");
        v = refine::check_divergence(concrete, covered, variant);
    } else {
        const auto& abstract = abstract_g->system;
        if (req.relation == "trace") {
            v = refine::check_trace_refinement(abstract, concrete, mapping.alphabet, policy);
            auto cmp = corpus::compare_with_oracle(abstract, concrete, mapping.alphabet, req.depth, policy);
            v.diagnostics["oracle_depth"] = static_cast<std::int64_t>(req.depth);
            v.diagnostics["oracle_agrees"] = cmp.agree ? 1 : 0;
        } else if (req.relation == "sim") {
            auto resolved = refine::resolve_mapping(abstract, concrete, mapping.alphabet, policy);
            refine::simulation_problem problem(abstract, concrete,
                                               refine::single_step_pairs(abstract, concrete, resolved, only), conds);
            v = refine::check_downward_simulation(abstract, concrete, retrieve_for(problem), conds, mapping.alphabet,
                                                  {policy, only});
        } else if (req.relation == "weak") {
            auto resolved = refine::resolve_mapping(abstract, concrete, mapping.alphabet, policy);
            refine::simulation_problem problem(abstract, concrete, refine::weak_pairs(abstract, concrete, resolved, only),
                                               conds);
            v = refine::check_weak_refinement(abstract, concrete, retrieve_for(problem), mapping.alphabet, conds,
                                              {policy, req.preserve_divergence, only});
        } else if (req.relation == "action") {
            if (!only.empty())
                throw usage_error("--only is not supported for action refinement");
            refine::simulation_problem problem(abstract, concrete,
                                               refine::action_pairs(abstract, concrete, mapping.actions, policy), conds);
            v = refine::check_action_refinement(abstract, concrete, retrieve_for(problem), mapping.actions, conds,
                                                policy);
        } else {
            std::set<std::string> fresh;
            for (const auto& e : concrete.alphabet())
                if (e.classification == event_class::perspicuous)
                    fresh.insert(e.name);
            if (!only.empty())
                throw usage_error("--only is not supported for Event-B checks");
            auto problem = refine::eventb_problem(abstract, concrete, mapping.alphabet, fresh, policy);
            refine::eventb_options eo{req.relative_deadlock, variant, policy, covered};
            v = refine::check_eventb(abstract, concrete, retrieve_for(problem), mapping.alphabet, fresh, eo);
        }
    }

    json report;
    report["version"] = version_string;
    report["inputs"] = detail::inputs_json(req);
    report["status"] = v.passed ? "pass" : "fail";
    report["witness"] = v.counterexample
                            ? detail::witness_json(*v.counterexample, abstract_g ? &abstract_g->system : nullptr, concrete)
                            : json(nullptr);
    json diagnostics(v.diagnostics);
    diagnostics["concrete_pruned"] = concrete_g.report.pruned;
    if (abstract_g)
        diagnostics["abstract_pruned"] = abstract_g->report.pruned;
    if (r)
        diagnostics["retrieve_pairs"] = r->size();
    report["diagnostics"] = diagnostics;
    report["warnings"] = v.warnings;

    return {std::move(v), std::move(report), abstract_g ? std::optional<lts>(abstract_g->system) : std::nullopt,
            std::move(concrete)};
}

// Independent replay of a witness against the concrete LTS: the trace must
// run from an initial state to the reported state, the offending concrete
// step (if single) and any divergence cycle must exist. Returns a
// description of the first problem found.
inline std::optional<std::string> replay_witness(const lts& concrete, const refine::witness& w,
                                                 const std::set<std::string>& cycle_events = {})
{
    auto has_edge = [&](state_id from, const label& l, state_id to) {
        for (const auto& t : concrete.outgoing(from))
            if (t.to == to && concrete.label_at(t.label_index) == l)
                return true;
        return false;
    };
    if (!concrete.is_init(w.start))
        return "trace does not start at an initial state";
    auto at = w.start;
    for (const auto& s : w.trace) {
        if (!has_edge(at, s.lbl, s.to))
            return "trace step " + s.lbl.to_string() + " is not a transition from " + concrete.describe(at);
        at = s.to;
    }
    if (at != w.concrete_state)
        return "trace ends at " + concrete.describe(at) + ", not at the reported state";
    if (w.concrete_observation.size() == 1 && w.target &&
        !has_edge(w.concrete_state, w.concrete_observation.front(), *w.target))
        return "offending step " + w.concrete_observation.front().to_string() + " is not a transition";
    if (!w.cycle.empty()) {
        for (const auto& s : w.cycle) {
            if (!cycle_events.empty() && !cycle_events.count(s.lbl.event))
                return "cycle uses uncovered event " + s.lbl.event;
            if (!has_edge(at, s.lbl, s.to))
                return "cycle step " + s.lbl.to_string() + " is not a transition";
            at = s.to;
        }
        if (at != w.concrete_state)
            return "cycle does not return to its first state";
    }
    return std::nullopt;
}

struct replay_result {
    bool confirmed = false;
    std::string detail;
};

// Re-runs the check recorded in a report and confirms the verdict, the
// witness, and that the witness replays on the concrete machine.
inline replay_result replay_report(const json& report, const source_reader& read = read_file)
{
    auto req = detail::request_from_inputs(report.at("inputs"));
    auto again = run_check(req, read);
    if (again.report["status"] != report.at("status"))
        return {false, "status differs on re-run"};
    if (again.report["witness"] != report.at("witness"))
        return {false, "witness differs on re-run"};
    if (again.result.counterexample) {
        std::set<std::string> covered(req.new_events.begin(), req.new_events.end());
        covered.insert(req.internal.begin(), req.internal.end());
        if (auto problem = replay_witness(again.concrete, *again.result.counterexample, covered))
            return {false, *problem};
        return {true, "witness replays (" + again.result.counterexample->condition + ")"};
    }
    return {true, "pass confirmed"};
}

} // namespace refinery
