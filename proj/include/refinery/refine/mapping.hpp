#pragma once

#include "../kernel.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace refinery::refine {

// Target name for concrete events that refine the abstract identity step.
inline const std::string skip_event = "skip";

// Concrete event name -> abstract event name (or skip). Many-to-one entries
// express splitting an abstract event.
struct alphabet_mapping {
    std::map<std::string, std::string> entries;

    std::optional<std::string> target(const std::string& concrete) const
    {
        auto it = entries.find(concrete);
        if (it == entries.end())
            return std::nullopt;
        return it->second;
    }

    static alphabet_mapping identity(const lts& m)
    {
        alphabet_mapping out;
        for (const auto& e : m.alphabet())
            out.entries[e.name] = e.name;
        return out;
    }
};

// What happens to concrete events the mapping does not mention and that have
// no same-named abstract event.
enum class extension_policy { reject, tolerate };

// Which concrete positions (1-based) of a sequence supply the abstract
// inputs and outputs. Unset means: inputs from the first position whose
// event declares inputs, outputs from the last position declaring outputs.
struct observation_assignment {
    std::optional<std::size_t> inputs_from;
    std::optional<std::size_t> outputs_from;

    friend bool operator==(const observation_assignment&, const observation_assignment&) = default;
};

struct action_mapping {
    // Abstract event -> concrete events executed in order.
    std::map<std::string, std::vector<std::string>> sequences;
    std::map<std::string, observation_assignment> assignments;
    // Single-step entries (concrete -> abstract or skip) for events that are
    // not part of a sequence.
    alphabet_mapping singles;

    // Every sequence of length one, turned into a plain alphabet mapping.
    alphabet_mapping induced() const
    {
        alphabet_mapping out = singles;
        for (const auto& [abstract, seq] : sequences) {
            if (seq.size() != 1)
                throw usage_error("action mapping for '" + abstract + "' is not a single step");
            out.entries[seq.front()] = abstract;
        }
        return out;
    }
};

// Contents of a mapping/classification file.
struct mapping_file {
    alphabet_mapping alphabet;
    action_mapping actions;
    std::vector<std::string> internal;
    std::vector<std::string> perspicuous;
    std::optional<extension_policy> policy;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::stringstream in{std::string(s)};
    std::string item;
    while (std::getline(in, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline bool is_name(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

} // namespace detail

// Line format:
//   concrete -> abstract        alphabet entry (abstract may be `skip`)
//   abstract => c1, c2, ..., cn  action refinement sequence
//       optionally followed by `@ in:K out:L` (1-based positions)
//   internal: e1, e2
//   new: e3
//   policy: tolerate | reject
// `--` and `#` start comments.
inline mapping_file parse_mapping_file(std::string_view text)
{
    using detail::is_name;
    using detail::split_list;
    using detail::trim;

    mapping_file out;
    std::stringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    auto bad = [&](const std::string& msg) -> usage_error {
        return usage_error("mapping line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        for (const char* marker : {"--", "#"})
            if (auto pos = line.find(marker); pos != std::string::npos)
                line = line.substr(0, pos);
        line = trim(line);
        if (line.empty())
            continue;

        if (auto pos = line.find("=>"); pos != std::string::npos) {
            auto abstract = trim(line.substr(0, pos));
            auto rest = line.substr(pos + 2);
            observation_assignment assignment;
            if (auto at = rest.find('@'); at != std::string::npos) {
                std::stringstream spec(rest.substr(at + 1));
                std::string item;
                while (spec >> item) {
                    auto colon = item.find(':');
                    if (colon == std::string::npos)
                        throw bad("expected in:K or out:K after '@', got '" + item + "'");
                    auto key = item.substr(0, colon);
                    std::size_t position = 0;
                    try {
                        position = std::stoul(item.substr(colon + 1));
                    } catch (const std::exception&) {
                        throw bad("bad position in '" + item + "'");
                    }
                    if (key == "in")
                        assignment.inputs_from = position;
                    else if (key == "out")
                        assignment.outputs_from = position;
                    else
                        throw bad("unknown assignment key '" + key + "'");
                }
                rest = rest.substr(0, at);
            }
            auto seq = split_list(rest);
            if (!is_name(abstract) || seq.empty())
                throw bad("expected 'abstract => c1, ..., cn'");
            for (const auto& c : seq)
                if (!is_name(c))
                    throw bad("bad event name '" + c + "'");
            if (out.actions.sequences.count(abstract))
                throw bad("duplicate action mapping for '" + abstract + "'");
            out.actions.sequences[abstract] = seq;
            out.actions.assignments[abstract] = assignment;
            continue;
        }
        if (auto pos = line.find("->"); pos != std::string::npos) {
            auto concrete = trim(line.substr(0, pos));
            auto abstract = trim(line.substr(pos + 2));
            if (!is_name(concrete) || !is_name(abstract))
                throw bad("expected 'concrete -> abstract'");
            if (out.alphabet.entries.count(concrete))
                throw bad("duplicate mapping for '" + concrete + "'");
            out.alphabet.entries[concrete] = abstract;
            out.actions.singles.entries[concrete] = abstract;
            continue;
        }
        if (auto pos = line.find(':'); pos != std::string::npos) {
            auto key = trim(line.substr(0, pos));
            auto rest = line.substr(pos + 1);
            if (key == "internal") {
                for (auto& e : split_list(rest))
                    out.internal.push_back(e);
            } else if (key == "new") {
                for (auto& e : split_list(rest))
                    out.perspicuous.push_back(e);
            } else if (key == "policy") {
                auto p = trim(rest);
                if (p == "tolerate")
                    out.policy = extension_policy::tolerate;
                else if (p == "reject")
                    out.policy = extension_policy::reject;
                else
                    throw bad("policy must be 'tolerate' or 'reject'");
            } else {
                throw bad("unknown key '" + key + "'");
            }
            continue;
        }
        throw bad("cannot parse '" + line + "'");
    }
    return out;
}

// Where each concrete event goes once defaults are applied.
struct resolved_mapping {
    // Observable concrete event -> abstract event or skip.
    std::map<std::string, std::string> target;
    std::set<std::string> concrete_internal;
    std::set<std::string> abstract_internal;
    // Concrete events accepted by the tolerate policy.
    std::set<std::string> extensions;

    std::vector<std::string> skip_events() const
    {
        std::vector<std::string> out;
        for (const auto& [c, a] : target)
            if (a == skip_event)
                out.push_back(c);
        return out;
    }

    std::vector<std::string> mapped_to(const std::string& abstract) const
    {
        std::vector<std::string> out;
        for (const auto& [c, a] : target)
            if (a == abstract)
                out.push_back(c);
        return out;
    }
};

inline void check_signature_compatibility(const event_signature& concrete, const event_signature& abstract)
{
    auto compatible = [](const std::vector<parameter>& x, const std::vector<parameter>& y) {
        if (x.size() != y.size())
            return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!x[i].dom.same_shape(y[i].dom))
                return false;
        return true;
    };
    if (!compatible(concrete.inputs, abstract.inputs) || !compatible(concrete.outputs, abstract.outputs))
        throw usage_error("signature mismatch: concrete '" + concrete.name + "' cannot implement abstract '" +
                          abstract.name + "'");
}

// Abstract events that take part in comparisons (everything not internal).
inline std::vector<std::string> observable_events(const lts& m)
{
    std::vector<std::string> out;
    for (const auto& e : m.alphabet())
        if (e.classification != event_class::internal)
            out.push_back(e.name);
    std::sort(out.begin(), out.end());
    return out;
}

// Applies, per concrete event: internal classification; explicit entry;
// same-named abstract event; `new` classification (refines skip); the
// extension policy. Events in `forced_skip` refine skip and must not be
// mapped explicitly. Events in `consumed` are handled elsewhere and skipped.
inline resolved_mapping resolve_mapping(const lts& abstract, const lts& concrete, const alphabet_mapping& explicit_map,
                                        extension_policy policy, const std::set<std::string>& forced_skip = {},
                                        const std::set<std::string>& consumed = {})
{
    resolved_mapping out;
    for (const auto& [c, a] : explicit_map.entries) {
        if (!concrete.event(c))
            throw usage_error("mapping names unknown concrete event '" + c + "'");
        if (a != skip_event && !abstract.event(a))
            throw usage_error("mapping names unknown abstract event '" + a + "'");
    }
    for (const auto& e : abstract.alphabet())
        if (e.classification == event_class::internal)
            out.abstract_internal.insert(e.name);

    for (const auto& e : concrete.alphabet()) {
        if (consumed.count(e.name))
            continue;
        auto explicit_target = explicit_map.target(e.name);
        if (e.classification == event_class::internal) {
            if (explicit_target)
                throw usage_error("internal event '" + e.name + "' must not appear in the mapping");
            out.concrete_internal.insert(e.name);
            continue;
        }
        if (forced_skip.count(e.name)) {
            if (explicit_target)
                throw usage_error("new event '" + e.name + "' must not appear in the mapping");
            out.target[e.name] = skip_event;
            continue;
        }
        std::string target;
        if (explicit_target) {
            target = *explicit_target;
        } else if (const auto* a = abstract.event(e.name); a && a->classification != event_class::internal) {
            target = e.name;
        } else if (e.classification == event_class::perspicuous) {
            target = skip_event;
        } else if (policy == extension_policy::tolerate) {
            target = skip_event;
            out.extensions.insert(e.name);
        } else {
            throw usage_error("concrete event '" + e.name +
                              "' has no abstract counterpart; map it, declare it new, or tolerate extensions");
        }
        if (target != skip_event) {
            const auto* a = abstract.event(target);
            if (a->classification == event_class::internal)
                throw usage_error("concrete event '" + e.name + "' is mapped to internal abstract event '" +
                                  target + "'");
            check_signature_compatibility(e, *a);
        }
        out.target[e.name] = target;
    }
    return out;
}

} // namespace refinery::refine
