#include "refinery/refinery.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>

using namespace refinery;

namespace {

void print_text(const json& report, double seconds)
{
    const auto& in = report["inputs"];
    std::cout << report["version"].get<std::string>() << "\n";
    std::cout << "relation:   " << in["relation"].get<std::string>();
    if (!in["conditions"].is_null())
        std::cout << "  conditions {" << in["conditions"].get<std::string>() << "}";
    std::cout << "\n";
    if (!in["abstract"].is_null())
        std::cout << "abstract:   " << in["abstract"].get<std::string>() << "\n";
    std::cout << "concrete:   " << in["concrete"].get<std::string>() << "\n";
    for (const auto& w : report["warnings"])
        std::cout << "warning:    " << w.get<std::string>() << "\n";
    std::cout << "status:     " << (report["status"] == "pass" ? "PASS" : "FAIL") << "\n";

    const auto& w = report["witness"];
    if (!w.is_null()) {
        std::cout << "witness:\n";
        std::cout << "  condition: " << w["condition"].get<std::string>();
        if (!w["operation"].get<std::string>().empty())
            std::cout << " (" << w["operation"].get<std::string>() << ")";
        std::cout << "\n";
        if (!w["pair"]["abstract"].is_null())
            std::cout << "  abstract:  #" << w["pair"]["abstract"]["id"] << " "
                      << w["pair"]["abstract"]["state"].get<std::string>() << "\n";
        std::cout << "  concrete:  #" << w["pair"]["concrete"]["id"] << " "
                  << w["pair"]["concrete"]["state"].get<std::string>() << "\n";
        if (!w["label"].is_null())
            std::cout << "  label:     " << w["label"].get<std::string>() << "\n";
        std::cout << "  trace:     " << w["start"]["state"].get<std::string>();
        for (const auto& s : w["trace"])
            std::cout << " --" << s["label"].get<std::string>() << "--> " << s["to"]["state"].get<std::string>();
        std::cout << "\n";
        if (!w["cycle"].empty()) {
            std::cout << "  cycle:    ";
            for (const auto& s : w["cycle"])
                std::cout << " --" << s["label"].get<std::string>() << "--> " << s["to"]["state"].get<std::string>();
            std::cout << "\n";
        }
        std::cout << "  " << w["message"].get<std::string>() << "\n";
    }
    std::cout << "diagnostics:\n";
    for (const auto& [key, value] : report["diagnostics"].items())
        std::cout << "  " << key << " = " << value.dump() << "\n";
    std::cout << "time:       " << seconds << "s\n";
}

json lts_json(const lts& m, const speclang::ground_report& report)
{
    json states = json::array();
    for (std::uint32_t i = 0; i < m.state_count(); ++i)
        states.push_back({{"id", i}, {"state", m.describe({i})}, {"init", m.is_init({i})}});
    json transitions = json::array();
    for (const auto& t : m.transitions())
        transitions.push_back({{"from", t.from.index}, {"label", m.label_at(t.label_index).to_string()}, {"to", t.to.index}});
    json events = json::array();
    for (const auto& e : m.alphabet())
        events.push_back({{"name", e.name}, {"class", to_string(e.classification)}});
    return {{"machine", m.name()},
            {"variables", m.variables()},
            {"events", events},
            {"states", states},
            {"transitions", transitions},
            {"pruned", report.pruned}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Explicit-state refinement checker for guarded-command machines"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    check_request req;
    std::string bounds, conditions, mapping, policy, variant, format = "text";
    std::string internal, fresh, only;

    auto* check = app.add_subcommand("check", "run a refinement check");
    check->add_option("--abstract", req.abstract_path, "abstract machine (.mch)");
    check->add_option("--concrete", req.concrete_path, "concrete machine (.mch)")->required();
    check->add_option("--relation", req.relation, "trace|sim|eventb|weak|action|divergence")
        ->check(CLI::IsMember({"trace", "sim", "eventb", "weak", "action", "divergence"}));
    check->add_option("--conditions", conditions, "subset of 1,2,3 (default 1,2)");
    check->add_option("--retrieve", req.retrieve, "retrieve predicate over both machines, or auto");
    check->add_option("--mapping", mapping, "mapping/classification file");
    check->add_option("--internal", internal, "comma-separated concrete events to treat as internal");
    check->add_option("--new", fresh, "comma-separated concrete events to treat as new");
    check->add_option("--variant", variant, "integer expression over the concrete state");
    check->add_option("--bounds", bounds, "V,N overriding the machines' constants");
    check->add_option("--depth", req.depth, "trace depth of the brute-force oracle cross-check (relation trace)");
    check->add_flag("--strict", req.strict, "bound overflow is an error instead of pruning");
    check->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    check->add_flag("--relative-deadlock", req.relative_deadlock, "eventb: concrete deadlocks only where abstract does");
    check->add_flag("--preserve-divergence", req.preserve_divergence, "weak: concrete divergence needs abstract divergence");
    check->add_option("--policy", policy, "extension policy: reject|tolerate");
    check->add_option("--only", only, "comma-separated concrete events whose operation pairs are checked");

    std::string machine;
    bool ground_strict = false;
    auto* ground = app.add_subcommand("ground", "enumerate a machine and dump its LTS");
    ground->add_option("--machine", machine, "machine (.mch)")->required();
    ground->add_option("--bounds", bounds, "V,N overriding the machine's constants");
    ground->add_flag("--strict", ground_strict, "bound overflow is an error instead of pruning");
    ground->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* oracle = app.add_subcommand("oracle-compare", "compare the trace checker with brute-force enumeration");
    oracle->add_option("--abstract", req.abstract_path)->required();
    oracle->add_option("--concrete", req.concrete_path)->required();
    oracle->add_option("--mapping", mapping);
    oracle->add_option("--internal", internal);
    oracle->add_option("--new", fresh);
    oracle->add_option("--bounds", bounds);
    oracle->add_option("--depth", req.depth);

    std::string report_path;
    auto* replay = app.add_subcommand("replay", "re-run the check in a json report and verify its witness");
    replay->add_option("report", report_path, "json report written by check --format json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!bounds.empty())
            req.bounds = parse_bounds(bounds);
        if (!conditions.empty())
            req.conditions = conditions;
        if (!mapping.empty())
            req.mapping_path = mapping;
        if (!policy.empty())
            req.policy = policy;
        if (!variant.empty())
            req.variant = variant;
        req.internal = split_names(internal);
        req.new_events = split_names(fresh);
        req.only = split_names(only);

        if (check->parsed()) {
            auto start = std::chrono::steady_clock::now();
            auto outcome = run_check(req);
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (format == "json")
                std::cout << outcome.report.dump(2) << "\n";
            else
                print_text(outcome.report, elapsed.count());
            return outcome.result.passed ? 0 : 1;
        }

        if (ground->parsed()) {
            speclang::ground_options options;
            if (req.bounds)
                options.overrides = {{"V", req.bounds->first}, {"N", req.bounds->second}};
            options.strict = ground_strict;
            auto g = speclang::load_machine(read_file(machine), options);
            auto dump = lts_json(g.system, g.report);
            if (format == "json") {
                std::cout << dump.dump(2) << "\n";
                return 0;
            }
            std::cout << "machine " << g.system.name() << ": " << g.system.state_count() << " states, "
                      << g.system.inits().size() << " initial, " << g.system.transitions().size() << " transitions, "
                      << g.report.total_pruned() << " pruned\n";
            for (const auto& s : dump["states"])
                std::cout << "  #" << s["id"] << (s["init"].get<bool>() ? " init " : "      ")
                          << s["state"].get<std::string>() << "\n";
            for (const auto& t : dump["transitions"])
                std::cout << "  " << t["from"] << " --" << t["label"].get<std::string>() << "--> " << t["to"] << "\n";
            for (const auto& [event, count] : g.report.pruned)
                std::cout << "  pruned " << event << ": " << count << "\n";
            return 0;
        }

        if (oracle->parsed()) {
            req.relation = "trace";
            auto outcome = run_check(req);
            refine::alphabet_mapping m;
            if (req.mapping_path)
                m = refine::parse_mapping_file(read_file(*req.mapping_path)).alphabet;
            auto cmp = corpus::compare_with_oracle(*outcome.abstract, outcome.concrete, m, req.depth);
            const auto& missing = cmp.oracle_missing;
            bool checker_pass = cmp.checker_passed;
            bool agree = cmp.agree;
            std::cout << "checker: " << (checker_pass ? "pass" : "fail") << "\n";
            std::cout << "oracle (depth " << req.depth << "): " << (missing ? "fail" : "pass");
            if (missing) {
                std::cout << " <";
                for (std::size_t i = 0; i < missing->size(); ++i)
                    std::cout << (i ? ", " : "") << (*missing)[i];
                std::cout << ">";
            }
            std::cout << "\n" << (agree ? "agree" : "DISAGREE") << "\n";
            return agree ? 0 : 1;
        }

        if (replay->parsed()) {
            auto report = json::parse(read_file(report_path));
            auto result = replay_report(report);
            std::cout << (result.confirmed ? "confirmed: " : "REJECTED: ") << result.detail << "\n";
            return result.confirmed ? 0 : 1;
        }
    } catch (const refinery::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed report: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
