#include "support.hpp"

#include <gtest/gtest.h>

using namespace test;
using namespace refinery::refine;

namespace {

struct models {
    speclang::grounded_machine a, c;
    lts concrete;

    retrieve_relation link(const std::string& predicate) const
    {
        return retrieve_relation::from_predicate(a.machine, a.system, c.machine, concrete, predicate);
    }
};

models pair_of(const std::string& abstract, const std::string& concrete,
               const std::map<std::string, event_class>& classes = {})
{
    models m{load(abstract), load(concrete), {}};
    m.concrete = m.c.system.with_classification(classes);
    return m;
}

condition_set conds(const std::string& text) { return condition_set::parse(text); }

bool sorted_state(const lts& m, state_id s)
{
    auto v = ints(m.state(s)[0]);
    return std::is_sorted(v.begin(), v.end());
}

// Two-dimensional walker: abstract `move` in either direction vs concrete
// moveNorth/moveEast, plus an unmapped `blink`.
const std::string walker_abstract = R"(machine Walk
var p : int 0..2
init p = 0
event move () when p < 2 then p := p + 1
)";

const std::string walker_concrete = R"(machine Walk2
var q : int 0..2
init q = 0
event moveNorth () when q < 2 then q := q + 1
event moveEast () when q = 0 then q := 2
event blink () when true then skip
)";

} // namespace

TEST(Conditions, ParseAndPrint)
{
    EXPECT_EQ(conds("1,2").to_string(), "1,2");
    EXPECT_EQ(conds("3,1").to_string(), "1,3");
    EXPECT_EQ(conds("enabledness").to_string(), "2");
    EXPECT_TRUE(conds("3").only_restricted());
    EXPECT_FALSE(conds("2,3").only_restricted());
    EXPECT_THROW(conds("4"), usage_error);
    EXPECT_THROW(conds(""), usage_error);
}

TEST(Retrieve, PredicateAndAlgebra)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto r = m.link("b = items(s)");
    // Every sequence is linked to exactly its bag of items.
    for (std::uint32_t c = 0; c < m.concrete.state_count(); ++c) {
        auto linked = r.abstract_for({c});
        ASSERT_EQ(linked.size(), 1u);
        auto s = ints(m.concrete.state({c})[0]);
        std::sort(s.begin(), s.end());
        EXPECT_EQ(ints(m.a.system.state(linked[0])[0]), s);
    }
    EXPECT_EQ(r.size(), 40u);
    EXPECT_EQ(r.inverse().inverse(), r);
    EXPECT_EQ(r.then(retrieve_relation::identity(m.concrete)), r);
    EXPECT_THROW(m.link("b = s"), type_error);
    EXPECT_THROW(m.link("b"), type_error);
}

TEST(Simulation, SortOutEquivalence)
{
    auto fwd = pair_of("aqueue.mch", "sortout.mch");
    EXPECT_TRUE(check_downward_simulation(fwd.a.system, fwd.concrete, fwd.link("b = items(s)"), conds("2,3"), {}).passed);
    auto back = pair_of("sortout.mch", "aqueue.mch");
    EXPECT_TRUE(check_downward_simulation(back.a.system, back.concrete, back.link("b = items(s)"), conds("2,3"), {}).passed);
}

TEST(Simulation, GuardedSortFailsEnablednessAtASortedState)
{
    auto m = pair_of("aqueue.mch", "cqueue_guarded.mch");
    auto r = m.link("b = items(s)");
    for (auto text : {"2", "1,2", "2,3", "1,2,3"}) {
        auto v = check_downward_simulation(m.a.system, m.concrete, r, conds(text), {}, {extension_policy::reject, {"sort"}});
        ASSERT_FALSE(v.passed) << text;
        const auto& w = *v.counterexample;
        EXPECT_EQ(w.condition, "enabledness");
        EXPECT_EQ(w.operation, "skip");
        EXPECT_TRUE(sorted_state(m.concrete, w.concrete_state));
        EXPECT_FALSE(replay_witness(m.concrete, w));
    }
    for (auto text : {"1", "3", "1,3"})
        EXPECT_TRUE(check_downward_simulation(m.a.system, m.concrete, r, conds(text), {}, {extension_policy::reject, {"sort"}})
                        .passed)
            << text;
}

TEST(Simulation, UnguardedPerspicuousEventsRefineSkip)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto r = m.link("b = items(s)");
    for (auto event : {"sort", "cycle"})
        for (auto text : {"1", "2,3", "1,2,3"})
            EXPECT_TRUE(check_downward_simulation(m.a.system, m.concrete, r, conds(text), {},
                                                  {extension_policy::reject, {event}})
                            .passed)
                << event << " " << text;
}

TEST(Simulation, OutNeedsASortedQueue)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto v = check_downward_simulation(m.a.system, m.concrete, m.link("b = items(s)"), conds("2,3"), {});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->condition, "enabledness");
    EXPECT_EQ(v.counterexample->operation, "out");
    EXPECT_FALSE(sorted_state(m.concrete, v.counterexample->concrete_state));
}

TEST(Simulation, InitialisationWitness)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto v = check_downward_simulation(m.a.system, m.concrete, m.link("#b = 1 & #s = 0 & false"), conds("1"), {});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->condition, "initialisation");
}

TEST(Simulation, OnlyRestrictedWarns)
{
    auto chain = corpus::nontransitivity_chain();
    auto m1 = load_text(chain.m1), m2 = load_text(chain.m2);
    auto r = retrieve_relation::from_predicate(m1.machine, m1.system, m2.machine, m2.system, chain.r12);
    auto v = check_downward_simulation(m1.system, m2.system, r, conds("3"), {});
    EXPECT_TRUE(v.passed);
    ASSERT_EQ(v.warnings.size(), 1u);
    EXPECT_TRUE(check_downward_simulation(m1.system, m2.system, r, conds("2,3"), {}).warnings.empty());
}

TEST(Synthesis, GreatestSimulationContainsTheNaturalLink)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto g = greatest_simulation(m.a.system, m.concrete, {}, conds("1"));
    ASSERT_TRUE(g);
    auto natural = m.link("b = items(s)");
    for (auto [a, c] : natural.pairs())
        EXPECT_TRUE(g->contains(a, c));
    EXPECT_TRUE(check_downward_simulation(m.a.system, m.concrete, *g, conds("1"), {}).passed);
}

TEST(Synthesis, UnsortedOutHasNoSimulation)
{
    auto m = pair_of("aqueue.mch", "cqueue_unsorted_out.mch");
    EXPECT_FALSE(greatest_simulation(m.a.system, m.concrete, {}, conds("1")));
    EXPECT_THROW(greatest_simulation(m.a.system, m.concrete, {}, conds("3")), usage_error);
}

TEST(Synthesis, ResultIsASimulationAndMaximal)
{
    auto m = pair_of("aqueue.mch", "sortout.mch");
    auto g = greatest_simulation(m.a.system, m.concrete, {}, conds("1,2"));
    ASSERT_TRUE(g);
    EXPECT_TRUE(check_downward_simulation(m.a.system, m.concrete, *g, conds("1,2"), {}).passed);
    // Adding any missing pair breaks some pair condition.
    auto resolved = resolve_mapping(m.a.system, m.concrete, {}, extension_policy::reject);
    simulation_problem problem(m.a.system, m.concrete, single_step_pairs(m.a.system, m.concrete, resolved), conds("1,2"));
    for (std::uint32_t a = 0; a < m.a.system.state_count(); ++a)
        for (std::uint32_t c = 0; c < m.concrete.state_count(); ++c) {
            if (g->contains({a}, {c}))
                continue;
            auto bigger = *g;
            bigger.insert({a}, {c});
            EXPECT_TRUE(problem.check_pair({a}, {c}, bigger)) << a << "," << c;
        }
}

TEST(Relabel, IdentityKeepsTransitions)
{
    auto c = load("cqueue_plain.mch").system;
    auto same = relabel(c, alphabet_mapping::identity(c));
    ASSERT_EQ(same.transitions().size(), c.transitions().size());
    for (std::size_t i = 0; i < c.transitions().size(); ++i) {
        const auto& x = c.transitions()[i];
        const auto& y = same.transitions()[i];
        EXPECT_EQ(x.from, y.from);
        EXPECT_EQ(x.to, y.to);
        EXPECT_EQ(c.label_at(x.label_index), same.label_at(y.label_index));
    }
}

TEST(Relabel, SplittingAndExtensions)
{
    auto a = load_text(walker_abstract).system;
    auto c = load_text(walker_concrete).system;
    alphabet_mapping m;
    m.entries = {{"moveNorth", "move"}, {"moveEast", "move"}};
    EXPECT_THROW(relabel(c, m), usage_error);
    auto r = relabel(c, m, extension_policy::tolerate);
    EXPECT_EQ(r.alphabet().size(), 2u);
    EXPECT_EQ(r.classification("skip"), event_class::internal);
    std::size_t moves = 0, skips = 0;
    for (const auto& t : r.transitions())
        (r.label_at(t.label_index).event == "move" ? moves : skips)++;
    EXPECT_EQ(moves, 3u);
    EXPECT_EQ(skips, 3u);

    // Splitting: both directions must be simulated by the one abstract move.
    auto id = retrieve_relation::from_predicate(load_text(walker_abstract).machine, a, load_text(walker_concrete).machine,
                                                c, "p = q");
    auto v = check_downward_simulation(a, c, id, conds("1"), m, {extension_policy::tolerate, {}});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->operation, "move");
    EXPECT_EQ(v.counterexample->concrete_observation.at(0).event, "moveEast");
    EXPECT_EQ(v.diagnostics.at("extension_events"), 1);
    EXPECT_THROW(check_downward_simulation(a, c, id, conds("1"), m), usage_error);
}

TEST(NonTransitivity, RestrictedConsistencyChain)
{
    auto chain = corpus::nontransitivity_chain();
    auto m1 = load_text(chain.m1), m2 = load_text(chain.m2), m3 = load_text(chain.m3);
    auto r12 = retrieve_relation::from_predicate(m1.machine, m1.system, m2.machine, m2.system, chain.r12);
    auto r23 = retrieve_relation::from_predicate(m2.machine, m2.system, m3.machine, m3.system, chain.r23);
    auto r13 = r12.then(r23);
    auto rep = check_nontransitivity_witness(m1.system, m2.system, m3.system, r12, r23, r13, conds("3"));
    EXPECT_TRUE(rep.first.passed);
    EXPECT_TRUE(rep.second.passed);
    ASSERT_FALSE(rep.composed.passed);
    EXPECT_TRUE(rep.transitivity_violated);
    EXPECT_EQ(rep.composed.counterexample->condition, "restricted-consistency");
    EXPECT_EQ(rep.composed.counterexample->offending->outputs.at(0), value::integer(1));

    auto full = check_nontransitivity_witness(m1.system, m2.system, m3.system, r12, r23, r13, conds("1"));
    EXPECT_TRUE(full.first.passed);
    EXPECT_FALSE(full.second.passed);
    EXPECT_FALSE(full.transitivity_violated);
    auto with_enabledness = check_nontransitivity_witness(m1.system, m2.system, m3.system, r12, r23, r13, conds("2,3"));
    EXPECT_FALSE(with_enabledness.first.passed);
    EXPECT_FALSE(with_enabledness.transitivity_violated);
}

// Chains A, B, C over the queue family; whenever both steps pass under a
// transitive condition set, the step from A to C must pass with the
// composed link.
TEST(Transitivity, HoldsForSampledQueueChains)
{
    const std::vector<std::string> tops = {"aqueue.mch", "sortout.mch"};
    const std::vector<std::string> rest = {"aqueue.mch", "sortout.mch", "cqueue_plain.mch", "cqueue_guarded.mch",
                                           "cqueue_sortonce.mch", "cqueue_unsorted_out.mch"};
    std::map<std::string, lts> machines;
    for (const auto& f : rest)
        machines.emplace(f, load(f).system);
    for (auto text : {"1", "1,2", "2,3", "1,2,3"}) {
        auto cs = conds(text);
        std::size_t chains = 0;
        for (const auto& a : tops)
            for (const auto& b : rest)
                for (const auto& c : rest) {
                    const auto &ma = machines.at(a), &mb = machines.at(b), &mc = machines.at(c);
                    auto r12 = greatest_simulation(ma, mb, {}, cs);
                    auto r23 = greatest_simulation(mb, mc, {}, cs);
                    if (!r12 || !r23)
                        continue;
                    ASSERT_TRUE(check_downward_simulation(ma, mb, *r12, cs, {}).passed);
                    ASSERT_TRUE(check_downward_simulation(mb, mc, *r23, cs, {}).passed);
                    ++chains;
                    EXPECT_TRUE(check_downward_simulation(ma, mc, r12->then(*r23), cs, {}).passed)
                        << text << ": " << a << " " << b << " " << c;
                }
        EXPECT_GT(chains, 0u) << text;
    }
}

TEST(Mapping, ParsesEveryLineKind)
{
    auto f = parse_mapping_file(R"(-- comment
moveNorth -> move   # trailing
blink -> skip
out => sort, out @ in:1 out:2
internal: tick, tock
new: sort
policy: tolerate
)");
    EXPECT_EQ(f.alphabet.entries.at("moveNorth"), "move");
    EXPECT_EQ(f.alphabet.entries.at("blink"), "skip");
    EXPECT_EQ(f.actions.sequences.at("out"), (std::vector<std::string>{"sort", "out"}));
    EXPECT_EQ(f.actions.assignments.at("out").inputs_from, 1u);
    EXPECT_EQ(f.actions.assignments.at("out").outputs_from, 2u);
    EXPECT_EQ(f.internal, (std::vector<std::string>{"tick", "tock"}));
    EXPECT_EQ(f.perspicuous, (std::vector<std::string>{"sort"}));
    EXPECT_EQ(f.policy, extension_policy::tolerate);
}

TEST(Mapping, RejectsMalformedLines)
{
    EXPECT_THROW(parse_mapping_file("a -> b\na -> c\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("a b c\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("colour: red\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("out => sort, out @ out:x\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("out => sort, out @ mid:1\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("out =>\n"), usage_error);
    EXPECT_THROW(parse_mapping_file("policy: maybe\n"), usage_error);
}

TEST(Mapping, ResolutionErrors)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    alphabet_mapping bad;
    bad.entries = {{"sort", "nope"}};
    EXPECT_THROW(resolve_mapping(m.a.system, m.concrete, bad, extension_policy::reject), usage_error);
    bad.entries = {{"sort", "in"}};
    EXPECT_THROW(resolve_mapping(m.a.system, m.concrete, bad, extension_policy::reject), usage_error);
    auto internal = m.c.system.with_classification({{"sort", event_class::internal}});
    bad.entries = {{"sort", "skip"}};
    EXPECT_THROW(resolve_mapping(m.a.system, internal, bad, extension_policy::reject), usage_error);
}

TEST(Action, SortThenOutMatchesAbstractOut)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto r = m.link("b = items(s)");
    for (auto file : {"sort_out.map", "sort_out_explicit.map"}) {
        auto am = parse_mapping_file(read_file(corpus_path(file))).actions;
        auto v = check_action_refinement(m.a.system, m.concrete, r, am, conds("2,3"));
        EXPECT_TRUE(v.passed) << file;
        EXPECT_EQ(v.diagnostics.at("longest_sequence"), 2);
    }
}

TEST(Action, GuardedSortFailsAtASortedState)
{
    auto m = pair_of("aqueue.mch", "cqueue_guarded.mch");
    auto am = parse_mapping_file(read_file(corpus_path("sort_out.map"))).actions;
    auto v = check_action_refinement(m.a.system, m.concrete, m.link("b = items(s)"), am, conds("2"));
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->condition, "enabledness");
    EXPECT_EQ(v.counterexample->operation, "out");
    EXPECT_TRUE(sorted_state(m.concrete, v.counterexample->concrete_state));
    EXPECT_FALSE(ints(m.concrete.state(v.counterexample->concrete_state)[0]).empty());
    EXPECT_FALSE(replay_witness(m.concrete, *v.counterexample));
}

TEST(Action, PositionErrors)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto r = m.link("b = items(s)");
    for (auto text : {"out => sort, out @ out:3\n", "out => sort, out @ out:0\n", "out => sort, out @ out:1\n",
                      "out => sort\n", "out => sort, nope\n", "in => in\nin -> in\n"}) {
        auto am = parse_mapping_file(text).actions;
        EXPECT_THROW(check_action_refinement(m.a.system, m.concrete, r, am, conds("2,3")), usage_error) << text;
    }
}

TEST(Action, SingleStepSequencesDegenerateToSimulation)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    auto r = m.link("b = items(s)");
    action_mapping am;
    am.sequences = {{"in", {"in"}}, {"out", {"out"}}};
    for (auto cs : all_condition_sets()) {
        auto x = check_action_refinement(m.a.system, m.concrete, r, am, cs);
        auto y = check_downward_simulation(m.a.system, m.concrete, r, cs, am.induced());
        EXPECT_TRUE(x.same_outcome(y)) << cs.to_string();
    }
}

TEST(Weak, SortInternalAndGuarded)
{
    auto m = pair_of("aqueue.mch", "cqueue_guarded.mch", {{"sort", event_class::internal}});
    auto r = m.link("b = items(s)");
    EXPECT_TRUE(check_weak_refinement(m.a.system, m.concrete, r, {}, conds("2,3")).passed);
    EXPECT_TRUE(check_weak_refinement(m.a.system, m.concrete, r, {}, conds("2,3"), {extension_policy::reject, true, {}}).passed);
}

TEST(Weak, UnguardedInternalSortDoesNotPreserveDivergence)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch", {{"sort", event_class::internal}});
    auto r = m.link("b = items(s)");
    EXPECT_TRUE(check_weak_refinement(m.a.system, m.concrete, r, {}, conds("2,3")).passed);
    auto v = check_weak_refinement(m.a.system, m.concrete, r, {}, conds("2,3"), {extension_policy::reject, true, {}});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->condition, "divergence-preservation");
    EXPECT_FALSE(v.counterexample->cycle.empty());
    EXPECT_FALSE(replay_witness(m.concrete, *v.counterexample, {"sort"}));
}

TEST(Weak, WithoutInternalsDegeneratesToSimulation)
{
    for (auto [a, c] : std::vector<std::pair<std::string, std::string>>{{"aqueue.mch", "cqueue_plain.mch"},
                                                                        {"aqueue.mch", "sortout.mch"},
                                                                        {"aqueue.mch", "cqueue_guarded.mch"}}) {
        auto m = pair_of(a, c);
        auto r = m.link("b = items(s)");
        for (auto cs : all_condition_sets()) {
            auto x = check_weak_refinement(m.a.system, m.concrete, r, {}, cs);
            auto y = check_downward_simulation(m.a.system, m.concrete, r, cs, {});
            EXPECT_TRUE(x.same_outcome(y)) << c << " " << cs.to_string();
        }
    }
}

TEST(Divergence, LassoWitnessReplays)
{
    auto c = load("cqueue_plain.mch").system;
    for (std::set<std::string> events : {std::set<std::string>{"sort"}, {"cycle"}}) {
        auto v = check_divergence(c, events);
        ASSERT_FALSE(v.passed);
        EXPECT_EQ(v.counterexample->condition, "divergence");
        EXPECT_FALSE(v.counterexample->cycle.empty());
        EXPECT_FALSE(replay_witness(c, *v.counterexample, events));
    }
    EXPECT_THROW(check_divergence(c, {"nope"}), usage_error);
}

TEST(Divergence, VariantsAreVerified)
{
    auto g = load("cqueue_cyclecounter.mch");
    EXPECT_TRUE(check_divergence(g.system, {"cycle"}, variant_spec::compile(g.machine, "c")).passed);
    auto flat = check_divergence(g.system, {"cycle"}, variant_spec::compile(g.machine, "2"));
    ASSERT_FALSE(flat.passed);
    EXPECT_EQ(flat.counterexample->condition, "variant-decrease");
    auto negative = check_divergence(g.system, {"cycle"}, variant_spec::compile(g.machine, "c - 1"));
    ASSERT_FALSE(negative.passed);
    EXPECT_EQ(negative.counterexample->condition, "variant-bound");
    EXPECT_THROW(variant_spec::compile(g.machine, "sorted(s)"), type_error);

    auto guarded = load("cqueue_guarded.mch");
    EXPECT_TRUE(check_divergence(guarded.system, {"sort"}, variant_spec::compile(guarded.machine, "if sorted(s) then 0 else 1"))
                    .passed);
    auto plain = load("cqueue_plain.mch");
    EXPECT_FALSE(
        check_divergence(plain.system, {"sort"}, variant_spec::compile(plain.machine, "if sorted(s) then 0 else 1")).passed);
}

TEST(Trace, UnsortedOutWitness)
{
    auto m = pair_of("aqueue.mch", "cqueue_unsorted_out.mch");
    auto v = check_trace_refinement(m.a.system, m.concrete, {});
    ASSERT_FALSE(v.passed);
    const auto& w = *v.counterexample;
    EXPECT_EQ(w.condition, "trace-inclusion");
    auto resolved = resolve_mapping(m.a.system, m.concrete, {}, extension_policy::reject);
    auto observed = observable_trace(w.trace, resolved);
    ASSERT_EQ(observed.size(), 2u);
    EXPECT_EQ(observed[0].to_string(), "in?1");
    EXPECT_EQ(observed[1].to_string(), "in?0");
    EXPECT_EQ(w.offending->to_string(), "out!1");
    EXPECT_FALSE(replay_witness(m.concrete, w));
}

TEST(Trace, PassesForSortingQueues)
{
    for (auto file : {"cqueue_plain.mch", "cqueue_guarded.mch", "sortout.mch", "cqueue_cyclecounter.mch"}) {
        auto m = pair_of("aqueue.mch", file);
        EXPECT_TRUE(check_trace_refinement(m.a.system, m.concrete, {}).passed) << file;
    }
}

TEST(EventB, DropCycleLosesTheLink)
{
    auto m = pair_of("aqueue.mch", "cqueue_dropcycle.mch");
    auto v = check_eventb(m.a.system, m.concrete, m.link("b = items(s)"), {}, {"sort", "cycle"});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->operation, "skip");
    EXPECT_EQ(v.counterexample->concrete_observation.at(0).event, "cycle");
}

TEST(EventB, RelativeDeadlockAndVariant)
{
    auto bounded = pair_of("aqueue_bounded.mch", "cqueue_nosort_bounded.mch");
    auto r = bounded.link("b = items(s)");
    EXPECT_TRUE(check_eventb(bounded.a.system, bounded.concrete, r, {}, {}).passed);
    auto v = check_eventb(bounded.a.system, bounded.concrete, r, {}, {}, {true, std::nullopt, extension_policy::reject, {}});
    ASSERT_FALSE(v.passed);
    EXPECT_EQ(v.counterexample->condition, "relative-deadlock");
    EXPECT_FALSE(replay_witness(bounded.concrete, *v.counterexample));

    auto counter = pair_of("aqueue.mch", "cqueue_cyclecounter.mch");
    eventb_options eo;
    eo.variant = variant_spec::compile(counter.c.machine, "c");
    eo.variant_events = {"cycle"};
    EXPECT_TRUE(check_eventb(counter.a.system, counter.concrete, counter.link("b = items(s)"), {}, {"sort", "cycle"}, eo).passed);
}

TEST(EventB, NewEventsMustNotBeMapped)
{
    auto m = pair_of("aqueue.mch", "cqueue_plain.mch");
    alphabet_mapping map;
    map.entries = {{"sort", "skip"}};
    EXPECT_THROW(check_eventb(m.a.system, m.concrete, m.link("b = items(s)"), map, {"sort"}), usage_error);
}
