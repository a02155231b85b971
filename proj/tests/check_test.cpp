#include "support.hpp"

#include <gtest/gtest.h>

using namespace test;

TEST(Request, ValidationErrors)
{
    auto r = request("aqueue.mch", "aqueue.mch", "bisim");
    EXPECT_THROW(run(r), usage_error);

    r = request("", "cqueue_plain.mch", "divergence");
    r.variant = "0";
    EXPECT_THROW(run(r), usage_error);
    r.variant.reset();
    EXPECT_THROW(run(r), usage_error);

    EXPECT_THROW(run(request("", "aqueue.mch", "sim")), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.preserve_divergence = true;
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.relative_deadlock = true;
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "action");
    r.only = {"sort"};
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.only = {"nope"};
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.internal = {"nope"};
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.policy = "sometimes";
    EXPECT_THROW(run(r), usage_error);

    r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.conditions = "3";
    EXPECT_THROW(run(r), usage_error); // cannot synthesise for {3}
}

TEST(Request, InputErrorsAreRefineryErrors)
{
    memory_reader reader;
    reader.files["broken.mch"] = "machine\n";
    reader.files["untyped.mch"] = "machine M\nvar n : int 0..1\ninit n = true\n";
    EXPECT_THROW(run(request("aqueue.mch", "broken.mch", "trace"), reader), parse_error);
    EXPECT_THROW(run(request("aqueue.mch", "untyped.mch", "trace"), reader), type_error);
    EXPECT_THROW(run(request("aqueue.mch", "missing.mch", "trace"), reader), error);
    auto strict = request("aqueue.mch", "aqueue.mch", "trace");
    strict.strict = true;
    EXPECT_THROW(run(strict, reader), ground_error);
}

TEST(Request, BoundsAndNames)
{
    EXPECT_EQ(parse_bounds("1,2"), std::make_pair(std::int64_t{1}, std::int64_t{2}));
    EXPECT_THROW(parse_bounds("2"), usage_error);
    EXPECT_THROW(parse_bounds("a,b"), usage_error);
    EXPECT_EQ(split_names(" sort , cycle"), (std::vector<std::string>{"sort", "cycle"}));
    EXPECT_TRUE(split_names("").empty());

    auto r = request("aqueue.mch", "cqueue_plain.mch", "trace");
    r.bounds = std::make_pair(1, 2);
    auto out = run(r);
    EXPECT_EQ(out.abstract->state_count(), 6u);
    EXPECT_EQ(out.concrete.state_count(), 7u);
}

TEST(Report, PassFields)
{
    auto r = request("aqueue.mch", "aqueue.mch", "sim");
    r.conditions = "2,3";
    auto out = run(r);
    const auto& j = out.report;
    EXPECT_EQ(j["version"], version_string);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_TRUE(j["witness"].is_null());
    EXPECT_EQ(j["inputs"]["relation"], "sim");
    EXPECT_EQ(j["inputs"]["conditions"], "2,3");
    EXPECT_EQ(j["inputs"]["retrieve"], "auto");
    EXPECT_EQ(j["diagnostics"]["abstract_states"], 20);
    EXPECT_EQ(j["diagnostics"]["concrete_states"], 20);
    EXPECT_EQ(j["diagnostics"]["retrieve_pairs"], 20);
    EXPECT_TRUE(j["diagnostics"].contains("concrete_pruned"));
    EXPECT_FALSE(j["diagnostics"].contains("wall_time"));
    EXPECT_TRUE(j["warnings"].empty());
}

TEST(Report, FailWitnessFields)
{
    auto r = request("aqueue.mch", "cqueue_guarded.mch", "sim");
    r.conditions = "2,3";
    r.mapping_path = "sort_skip.map";
    r.retrieve = "b = items(s)";
    auto out = run(r);
    const auto& w = out.report["witness"];
    EXPECT_EQ(out.report["status"], "fail");
    ASSERT_FALSE(w.is_null());
    EXPECT_EQ(w["condition"], "enabledness");
    EXPECT_EQ(w["operation"], "skip");
    EXPECT_EQ(w["pair"]["concrete"]["state"], "s=[]");
    EXPECT_EQ(w["pair"]["abstract"]["state"], "b={||}");
    EXPECT_TRUE(w["trace"].is_array());
    EXPECT_TRUE(w["trace"].empty());
    EXPECT_FALSE(w["message"].get<std::string>().empty());
    for (auto key : {"label", "observation", "target", "start", "cycle"})
        EXPECT_TRUE(w.contains(key)) << key;
}

TEST(Report, TraceWitnessSerialisesTheRun)
{
    auto out = run(request("aqueue.mch", "cqueue_unsorted_out.mch", "trace"));
    const auto& w = out.report["witness"];
    ASSERT_EQ(w["trace"].size(), 2u);
    EXPECT_EQ(w["trace"][0]["label"], "in?1");
    EXPECT_EQ(w["trace"][1]["label"], "in?0");
    EXPECT_EQ(w["label"], "out!1");
    EXPECT_EQ(out.report["diagnostics"]["oracle_agrees"], 1);
    EXPECT_EQ(out.report["diagnostics"]["oracle_depth"], 6);
}

TEST(Report, OnlyRestrictedCarriesAWarning)
{
    auto r = request("chain_m1.mch", "chain_m2.mch", "sim");
    r.conditions = "3";
    r.retrieve = "u = v";
    auto out = run(r);
    EXPECT_EQ(out.report["status"], "pass");
    EXPECT_EQ(out.report["warnings"].size(), 1u);
}

TEST(Report, ClassificationOverridesFromMappingFile)
{
    memory_reader reader;
    reader.files["internal.map"] = "internal: sort\n";
    auto r = request("aqueue.mch", "cqueue_guarded.mch", "weak");
    r.conditions = "2,3";
    r.mapping_path = "internal.map";
    r.retrieve = "b = items(s)";
    auto out = run(r, reader);
    EXPECT_EQ(out.concrete.classification("sort"), event_class::internal);
    EXPECT_EQ(out.report["status"], "pass");
}

TEST(Replay, ConfirmsPassAndFail)
{
    memory_reader reader;
    for (auto r : {request("aqueue.mch", "aqueue.mch", "sim"), request("aqueue.mch", "cqueue_unsorted_out.mch", "trace")}) {
        auto out = run(r);
        auto result = replay_report(out.report, std::ref(reader));
        EXPECT_TRUE(result.confirmed) << result.detail;
    }
    auto div = request("", "cqueue_plain.mch", "divergence");
    div.new_events = {"cycle"};
    auto out = run(div);
    EXPECT_EQ(out.report["status"], "fail");
    EXPECT_FALSE(out.report["witness"]["cycle"].empty());
    EXPECT_TRUE(replay_report(out.report, std::ref(reader)).confirmed);
}

TEST(Replay, RejectsTamperedReports)
{
    memory_reader reader;
    auto out = run(request("aqueue.mch", "cqueue_unsorted_out.mch", "trace"));
    auto tampered = out.report;
    tampered["status"] = "pass";
    EXPECT_FALSE(replay_report(tampered, std::ref(reader)).confirmed);
    tampered = out.report;
    tampered["witness"]["pair"]["concrete"]["id"] = 0;
    EXPECT_FALSE(replay_report(tampered, std::ref(reader)).confirmed);
}

TEST(Replay, WitnessReplayCatchesBrokenTraces)
{
    auto out = run(request("aqueue.mch", "cqueue_unsorted_out.mch", "trace"));
    auto w = *out.result.counterexample;
    EXPECT_FALSE(replay_witness(out.concrete, w));
    auto broken = w;
    broken.trace.pop_back();
    EXPECT_TRUE(replay_witness(out.concrete, broken));
    broken = w;
    broken.start = w.trace.front().to;
    EXPECT_TRUE(replay_witness(out.concrete, broken));
}

TEST(Determinism, ReportsAreByteIdentical)
{
    auto r = request("aqueue.mch", "cqueue_plain.mch", "sim");
    r.conditions = "2,3";
    r.retrieve = "b = items(s)";
    auto first = run(r).report.dump(2);
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(run(r).report.dump(2), first);
}
