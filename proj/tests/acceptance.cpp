// Acceptance run: one line per criterion, nonzero exit if any fails.
#include "support.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace test;
using namespace refinery::refine;

namespace {

struct outcome {
    bool ok = true;
    std::ostringstream notes;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            if (ok)
                notes << "failed: ";
            else
                notes << "; ";
            notes << what;
            ok = false;
        }
    }
};

condition_set conds(const std::string& text) { return condition_set::parse(text); }

check_request sim(const std::string& a, const std::string& c, const std::string& cs, const std::string& retrieve)
{
    auto r = request(a, c, "sim");
    r.conditions = cs;
    r.retrieve = retrieve;
    return r;
}

bool sorted_concrete(const check_outcome& out)
{
    auto s = ints(out.concrete.state(out.result.counterexample->concrete_state)[0]);
    return std::is_sorted(s.begin(), s.end());
}

bool replays(const check_outcome& out, const std::set<std::string>& cycle_events = {})
{
    return out.result.counterexample && !replay_witness(out.concrete, *out.result.counterexample, cycle_events);
}

const memory_reader corpus_reader;

// Every check the criteria below run through the request layer; criterion
// 10 re-runs them all.
std::vector<check_request> recorded;

check_outcome checked(const check_request& r, const memory_reader& reader = {})
{
    recorded.push_back(r);
    return run(r, reader);
}

memory_reader counter_sources()
{
    memory_reader reader;
    for (std::int64_t k = 0; k <= 3; ++k)
        reader.files["counter" + std::to_string(k) + ".mch"] =
            corpus::concrete_queue(2, 3, corpus::queue_variant::cycle_counter, k);
    return reader;
}

outcome sortout_equivalence()
{
    outcome o;
    auto fwd = checked(sim("aqueue.mch", "sortout.mch", "2,3", "b = items(s)"));
    auto back = checked(sim("sortout.mch", "aqueue.mch", "2,3", "b = items(s)"));
    o.require(fwd.result.passed, "AQueue -> SortOut");
    o.require(back.result.passed, "SortOut -> AQueue");
    o.notes << (o.ok ? "pass/pass" : "");
    return o;
}

outcome perspicuity()
{
    outcome o;
    for (auto event : {"sort", "cycle"})
        for (auto cs : {"1", "2,3"}) {
            auto r = sim("aqueue.mch", "cqueue_plain.mch", cs, "b = items(s)");
            r.only = {event};
            o.require(checked(r).result.passed, std::string("unguarded ") + event + " under {" + cs + "}");
        }
    for (auto cs : {"1", "3", "1,3"}) {
        auto r = sim("aqueue.mch", "cqueue_guarded.mch", cs, "b = items(s)");
        r.only = {"sort"};
        o.require(checked(r).result.passed, std::string("guarded sort under {") + cs + "}");
    }
    std::size_t witnesses = 0;
    for (auto cs : {"2", "1,2", "2,3", "1,2,3"}) {
        auto r = sim("aqueue.mch", "cqueue_guarded.mch", cs, "b = items(s)");
        r.only = {"sort"};
        auto out = checked(r);
        bool good = !out.result.passed && out.result.counterexample->condition == "enabledness" && sorted_concrete(out) &&
                    replays(out) && replay_report(out.report, std::ref(corpus_reader)).confirmed;
        o.require(good, std::string("guarded sort must fail {") + cs + "} at a sorted state");
        witnesses += good;
    }
    if (o.ok)
        o.notes << "8 passes, " << witnesses << " replayed witnesses at sorted states";
    return o;
}

outcome divergence()
{
    outcome o;
    auto reader = counter_sources();
    auto div = [&](const std::string& file, const std::string& events, std::optional<std::string> variant) {
        auto r = request("", file, "divergence");
        r.new_events = split_names(events);
        r.variant = variant;
        return checked(r, reader);
    };
    for (auto e : {"sort", "cycle"}) {
        auto out = div("cqueue_plain.mch", e, std::nullopt);
        o.require(!out.result.passed && replays(out, {e}), std::string("plain ") + e + " must diverge");
    }
    o.require(div("cqueue_guarded.mch", "sort", std::nullopt).result.passed, "guarded sort");
    o.require(div("cqueue_guarded.mch", "sort", "if sorted(s) then 0 else 1").result.passed, "guarded sort variant");
    o.require(div("cqueue_sortonce.mch", "sort", std::nullopt).result.passed, "sort-once");
    o.require(div("cqueue_sortonce.mch", "sort", "if f then 1 else 0").result.passed, "sort-once variant");
    for (std::int64_t k = 0; k <= 3; ++k) {
        auto file = "counter" + std::to_string(k) + ".mch";
        o.require(div(file, "cycle", std::nullopt).result.passed, "counter k=" + std::to_string(k));
        o.require(div(file, "cycle", "c").result.passed, "counter variant k=" + std::to_string(k));
        if (k > 0) {
            auto flat = div(file, "cycle", std::to_string(k));
            o.require(!flat.result.passed && flat.result.counterexample->condition == "variant-decrease",
                      "constant variant must be rejected k=" + std::to_string(k));
        }
    }
    if (o.ok)
        o.notes << "plain sort/cycle diverge; guarded, sort-once, counter k=0..3 pass with verified variants";
    return o;
}

outcome weak_refinement()
{
    outcome o;
    auto r = request("aqueue.mch", "cqueue_guarded.mch", "weak");
    r.conditions = "2,3";
    r.internal = {"sort"};
    r.retrieve = "b = items(s)";
    o.require(checked(r).result.passed, "guarded internal sort");
    r.concrete_path = "cqueue_plain.mch";
    r.preserve_divergence = true;
    auto out = checked(r);
    o.require(!out.result.passed && out.result.counterexample->condition == "divergence-preservation" &&
                  replays(out, {"sort"}),
              "unguarded internal sort must fail divergence preservation");
    if (o.ok)
        o.notes << "pass; preserve-divergence fails with a replayed lasso";
    return o;
}

outcome action_refinement()
{
    outcome o;
    auto r = request("aqueue.mch", "cqueue_plain.mch", "action");
    r.conditions = "2,3";
    r.mapping_path = "sort_out.map";
    r.retrieve = "b = items(s)";
    o.require(checked(r).result.passed, "unguarded sort;out under {2,3}");
    r.concrete_path = "cqueue_guarded.mch";
    r.conditions = "2";
    auto out = checked(r);
    o.require(!out.result.passed && sorted_concrete(out) && replays(out), "guarded sort;out must fail {2} at a sorted state");
    if (o.ok)
        o.notes << "pass; guarded fails at " << out.concrete.describe(out.result.counterexample->concrete_state);
    return o;
}

outcome nontransitivity()
{
    outcome o;
    auto chain = corpus::nontransitivity_chain();
    auto m1 = load_text(chain.m1), m2 = load_text(chain.m2), m3 = load_text(chain.m3);
    auto r12 = retrieve_relation::from_predicate(m1.machine, m1.system, m2.machine, m2.system, chain.r12);
    auto r23 = retrieve_relation::from_predicate(m2.machine, m2.system, m3.machine, m3.system, chain.r23);
    auto rep = check_nontransitivity_witness(m1.system, m2.system, m3.system, r12, r23, r12.then(r23), conds("3"));
    o.require(rep.first.passed, "M1 -> M2");
    o.require(rep.second.passed, "M2 -> M3");
    o.require(!rep.composed.passed, "M1 -> M3 must fail");
    o.require(rep.transitivity_violated, "transitivity violation reported");
    for (auto [a, c, pred] : {std::tuple{"chain_m1.mch", "chain_m2.mch", "u = v"}, {"chain_m2.mch", "chain_m3.mch", "v = w"}})
        checked(sim(a, c, "3", pred));
    if (o.ok)
        o.notes << "pass, pass, fail (" << rep.composed.counterexample->offending->to_string() << ")";
    return o;
}

struct corpus_machines {
    std::map<std::string, lts> m;

    corpus_machines()
    {
        for (const auto& [a, c] : corpus_pairs()) {
            if (!m.count(a))
                m.emplace(a, load(a).system);
            if (!m.count(c))
                m.emplace(c, load(c).system);
        }
    }
};

outcome oracle_equivalence(const corpus_machines& cm)
{
    outcome o;
    std::size_t comparisons = 0, pairs = 0, skipped = 0, disagreements = 0;
    for (const auto& [a, c] : corpus_pairs()) {
        const auto &ma = cm.m.at(a), &mc = cm.m.at(c);
        try {
            resolve_mapping(ma, mc, {}, extension_policy::reject);
        } catch (const usage_error&) {
            ++skipped;
            continue;
        }
        ++pairs;
        for (std::size_t depth = 0; depth <= 6; ++depth) {
            auto cmp = corpus::compare_with_oracle(ma, mc, {}, depth);
            ++comparisons;
            if (!cmp.agree) {
                ++disagreements;
                o.require(false, a + " vs " + c + " depth " + std::to_string(depth));
            }
        }
    }
    o.require(pairs > 100, "too few comparable pairs");
    o.notes << (o.ok ? "" : " | ") << pairs << " pairs x depths 0..6, " << comparisons << " comparisons, "
            << disagreements << " disagreements (" << skipped << " pairs with incompatible alphabets)";
    return o;
}

outcome soundness_chain(const corpus_machines& cm)
{
    outcome o;
    std::size_t passing = 0, violations = 0;
    for (const auto& [a, c] : corpus_pairs()) {
        const auto &ma = cm.m.at(a), &mc = cm.m.at(c);
        for (auto cs : all_condition_sets()) {
            if (!cs.consistency)
                continue;
            std::optional<retrieve_relation> r;
            try {
                r = greatest_simulation(ma, mc, {}, cs);
            } catch (const usage_error&) {
                break;
            }
            if (!r || !check_downward_simulation(ma, mc, *r, cs, {}).passed)
                continue;
            ++passing;
            if (!check_trace_refinement(ma, mc, {}).passed) {
                ++violations;
                o.require(false, a + " vs " + c + " {" + cs.to_string() + "}");
            }
        }
    }
    o.require(passing > 20, "too few passing simulations");
    o.notes << (o.ok ? "" : " | ") << passing << " passing simulations with consistency, " << violations
            << " trace violations";
    return o;
}

outcome degeneracy(const corpus_machines& cm)
{
    outcome o;
    std::size_t weak_checks = 0, action_checks = 0, mismatches = 0;
    auto same = [&](const std::function<verdict()>& x, const std::function<verdict()>& y, std::size_t& count,
                    const std::string& what) {
        std::optional<verdict> vx, vy;
        bool ex = false, ey = false;
        try {
            vx = x();
        } catch (const usage_error&) {
            ex = true;
        }
        try {
            vy = y();
        } catch (const usage_error&) {
            ey = true;
        }
        ++count;
        bool agree = ex == ey && (ex || vx->same_outcome(*vy));
        if (!agree) {
            ++mismatches;
            o.require(false, what);
        }
    };
    for (const auto& [a, c] : corpus_pairs()) {
        const auto &ma = cm.m.at(a), &mc = cm.m.at(c);
        action_mapping am;
        for (const auto& e : observable_events(ma))
            if (const auto* ce = mc.event(e); ce && ce->classification == event_class::external)
                am.sequences[e] = {e};
        for (auto cs : all_condition_sets()) {
            std::vector<retrieve_relation> links = {retrieve_relation::full(ma, mc)};
            try {
                if (auto g = greatest_simulation(ma, mc, {}, cs))
                    links.push_back(*g);
            } catch (const usage_error&) {
            }
            for (const auto& r : links) {
                auto what = a + " vs " + c + " {" + cs.to_string() + "}";
                same([&] { return check_weak_refinement(ma, mc, r, {}, cs); },
                     [&] { return check_downward_simulation(ma, mc, r, cs, {}); }, weak_checks, "weak " + what);
                same([&] { return check_action_refinement(ma, mc, r, am, cs); },
                     [&] { return check_downward_simulation(ma, mc, r, cs, am.induced()); }, action_checks,
                     "action " + what);
            }
        }
    }
    o.notes << (o.ok ? "" : " | ") << weak_checks << " weak and " << action_checks << " action comparisons, "
            << mismatches << " verdict mismatches";
    return o;
}

outcome determinism()
{
    outcome o;
    auto reader = counter_sources();
    auto entries = corpus::parse_manifest(read_file(corpus_path("manifest.txt")));
    auto all = recorded;
    for (const auto& e : entries)
        all.push_back(request_from_manifest(e));
    std::vector<std::string> reference;
    setenv("REFINERY_THREADS", "1", 1);
    for (const auto& r : all)
        reference.push_back(run(r, reader).report.dump(2));
    std::size_t differing = 0;
    for (auto threads : {"4", "4", "2"}) {
        setenv("REFINERY_THREADS", threads, 1);
        for (std::size_t i = 0; i < all.size(); ++i)
            if (run(all[i], reader).report.dump(2) != reference[i]) {
                ++differing;
                o.require(false, all[i].concrete_path + " " + all[i].relation + " with " + threads + " threads");
            }
    }
    unsetenv("REFINERY_THREADS");
    o.notes << (o.ok ? "" : " | ") << all.size() << " checks x 4 runs (1, 4, 4, 2 threads), " << differing
            << " differing reports";
    return o;
}

} // namespace

int main()
{
    std::vector<std::pair<std::string, std::function<outcome()>>> criteria;
    auto machines = std::make_shared<corpus_machines>();
    criteria.push_back({"SortOut equivalence", sortout_equivalence});
    criteria.push_back({"Perspicuity of sort and cycle", perspicuity});
    criteria.push_back({"Divergence of perspicuous events", divergence});
    criteria.push_back({"Weak refinement", weak_refinement});
    criteria.push_back({"Action refinement", action_refinement});
    criteria.push_back({"Non-transitivity of restricted consistency", nontransitivity});
    criteria.push_back({"Oracle equivalence", [&] { return oracle_equivalence(*machines); }});
    criteria.push_back({"Soundness chain", [&] { return soundness_chain(*machines); }});
    criteria.push_back({"Degeneracy equivalences", [&] { return degeneracy(*machines); }});
    criteria.push_back({"Determinism", determinism});

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.notes << "exception: " << e.what();
        }
        std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::cout << "criterion " << (i + 1) << " [" << (o.ok ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
                  << o.notes.str() << " (" << took.count() << "s)" << std::endl;
        failures += !o.ok;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
