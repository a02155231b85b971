#pragma once

#include "errors.hpp"
#include "value.hpp"

#include <algorithm>
#include <atomic>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace refinery {

struct state_id {
    std::uint32_t index = 0;

    friend auto operator<=>(const state_id&, const state_id&) = default;
};

// One observable step: event name plus its input (x?) and output (x!) values.
struct label {
    std::string event;
    std::vector<value> inputs;
    std::vector<value> outputs;

    friend bool operator==(const label&, const label&) = default;
    friend std::strong_ordering operator<=>(const label& lhs, const label& rhs)
    {
        if (auto c = lhs.event.compare(rhs.event); c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = std::lexicographical_compare_three_way(lhs.inputs.begin(), lhs.inputs.end(),
                                                            rhs.inputs.begin(), rhs.inputs.end());
            c != 0)
            return c;
        return std::lexicographical_compare_three_way(lhs.outputs.begin(), lhs.outputs.end(),
                                                      rhs.outputs.begin(), rhs.outputs.end());
    }

    std::string to_string() const
    {
        std::string out = event;
        for (const auto& v : inputs)
            out += "?" + v.to_string();
        for (const auto& v : outputs)
            out += "!" + v.to_string();
        return out;
    }
};

inline std::string to_string(const std::vector<label>& observation)
{
    std::string out = "<";
    for (std::size_t i = 0; i < observation.size(); ++i) {
        if (i)
            out += ", ";
        out += observation[i].to_string();
    }
    return out + ">";
}

enum class event_class : std::uint8_t { external, internal, perspicuous };

inline std::string to_string(event_class c)
{
    switch (c) {
    case event_class::external:
        return "external";
    case event_class::internal:
        return "internal";
    case event_class::perspicuous:
        return "new";
    }
    return "?";
}

struct parameter {
    std::string name;
    domain dom;
};

struct event_signature {
    std::string name;
    std::vector<parameter> inputs;
    std::vector<parameter> outputs;
    event_class classification = event_class::external;
};

using valuation = std::vector<value>;

struct transition {
    state_id from;
    std::uint32_t label_index = 0;
    state_id to;

    friend auto operator<=>(const transition&, const transition&) = default;
};

struct labelled_edge {
    state_id from;
    label lbl;
    state_id to;
};

// An enumerated labelled transition system. Immutable after construction;
// copies share the state-table token so relations stay compatible.
class lts {
public:
    lts() = default;

    lts(std::string name, std::vector<std::string> variables, std::vector<valuation> states,
        std::vector<state_id> inits, std::vector<event_signature> alphabet,
        std::vector<labelled_edge> edges)
        : _name(std::move(name)), _variables(std::move(variables)), _states(std::move(states)),
          _inits(std::move(inits)), _alphabet(std::move(alphabet)), _token(next_token())
    {
        std::sort(_inits.begin(), _inits.end());
        _inits.erase(std::unique(_inits.begin(), _inits.end()), _inits.end());
        if (_inits.empty())
            throw usage_error("lts '" + _name + "' has no initial state");
        for (auto s : _inits)
            check_state(s);

        for (const auto& e : edges) {
            check_state(e.from);
            check_state(e.to);
            if (!event(e.lbl.event))
                throw usage_error("transition label '" + e.lbl.to_string() +
                                  "' names an event outside the alphabet of '" + _name + "'");
            _labels.push_back(e.lbl);
        }
        std::sort(_labels.begin(), _labels.end());
        _labels.erase(std::unique(_labels.begin(), _labels.end()), _labels.end());

        _transitions.reserve(edges.size());
        for (const auto& e : edges) {
            auto it = std::lower_bound(_labels.begin(), _labels.end(), e.lbl);
            _transitions.push_back({e.from, static_cast<std::uint32_t>(it - _labels.begin()), e.to});
        }
        std::sort(_transitions.begin(), _transitions.end());
        _transitions.erase(std::unique(_transitions.begin(), _transitions.end()), _transitions.end());

        _offsets.assign(_states.size() + 1, 0);
        for (const auto& t : _transitions)
            ++_offsets[t.from.index + 1];
        for (std::size_t i = 1; i < _offsets.size(); ++i)
            _offsets[i] += _offsets[i - 1];
    }

    const std::string& name() const { return _name; }
    const std::vector<std::string>& variables() const { return _variables; }
    std::size_t state_count() const { return _states.size(); }
    const valuation& state(state_id s) const
    {
        check_state(s);
        return _states[s.index];
    }
    const std::vector<valuation>& states() const { return _states; }
    const std::vector<state_id>& inits() const { return _inits; }
    bool is_init(state_id s) const { return std::binary_search(_inits.begin(), _inits.end(), s); }

    const std::vector<event_signature>& alphabet() const { return _alphabet; }
    const event_signature* event(const std::string& name) const
    {
        for (const auto& e : _alphabet)
            if (e.name == name)
                return &e;
        return nullptr;
    }
    event_class classification(const std::string& name) const
    {
        const auto* e = event(name);
        if (!e)
            throw usage_error("unknown event '" + name + "' in '" + _name + "'");
        return e->classification;
    }
    std::vector<std::string> events_of_class(event_class c) const
    {
        std::vector<std::string> out;
        for (const auto& e : _alphabet)
            if (e.classification == c)
                out.push_back(e.name);
        return out;
    }

    const std::vector<label>& labels() const { return _labels; }
    const label& label_at(std::uint32_t index) const { return _labels.at(index); }
    const std::vector<transition>& transitions() const { return _transitions; }

    std::span<const transition> outgoing(state_id s) const
    {
        check_state(s);
        return {_transitions.data() + _offsets[s.index], _transitions.data() + _offsets[s.index + 1]};
    }

    // Identifies the state table; relations built over copies of the same
    // lts (or reclassified copies) share it.
    std::uint64_t token() const { return _token; }

    std::string describe(state_id s) const
    {
        const auto& v = state(s);
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out += ", ";
            out += _variables[i] + "=" + v[i].to_string();
        }
        return out;
    }

    // Same states and transitions with some events reclassified.
    lts with_classification(const std::map<std::string, event_class>& overrides) const
    {
        lts copy = *this;
        for (const auto& [name, cls] : overrides) {
            bool found = false;
            for (auto& e : copy._alphabet)
                if (e.name == name) {
                    e.classification = cls;
                    found = true;
                }
            if (!found)
                throw usage_error("cannot classify unknown event '" + name + "' in '" + _name + "'");
        }
        return copy;
    }

    void check_state(state_id s) const
    {
        if (s.index >= _states.size())
            throw usage_error("state id " + std::to_string(s.index) + " out of range for '" + _name + "'");
    }

private:
    static std::uint64_t next_token()
    {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1);
    }

    std::string _name;
    std::vector<std::string> _variables;
    std::vector<valuation> _states;
    std::vector<state_id> _inits;
    std::vector<event_signature> _alphabet;
    std::vector<label> _labels;
    std::vector<transition> _transitions;
    std::vector<std::size_t> _offsets{0};
    std::uint64_t _token = 0;
};

// Labels of the outgoing transitions of s, sorted and deduplicated.
inline std::vector<label> enabled_set(const lts& m, state_id s)
{
    std::vector<label> out;
    for (const auto& t : m.outgoing(s))
        out.push_back(m.label_at(t.label_index));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool is_deadlocked(const lts& m, state_id s) { return m.outgoing(s).empty(); }

// ---------------------------------------------------------------------------
// Breadth-first exploration from the initial states. Discovery order is
// deterministic, and the parent links give shortest paths.

struct trace_step {
    label lbl;
    state_id to;

    friend bool operator==(const trace_step&, const trace_step&) = default;
};

class exploration {
public:
    explicit exploration(const lts& m) : _parent(m.state_count()), _reached(m.state_count(), false)
    {
        std::deque<state_id> queue;
        for (auto s : m.inits()) {
            _reached[s.index] = true;
            _order.push_back(s);
            queue.push_back(s);
        }
        while (!queue.empty()) {
            auto s = queue.front();
            queue.pop_front();
            for (const auto& t : m.outgoing(s)) {
                if (_reached[t.to.index])
                    continue;
                _reached[t.to.index] = true;
                _parent[t.to.index] = std::make_pair(s, m.label_at(t.label_index));
                _order.push_back(t.to);
                queue.push_back(t.to);
            }
        }
    }

    const std::vector<state_id>& order() const { return _order; }
    bool reached(state_id s) const { return s.index < _reached.size() && _reached[s.index]; }

    // Initial state the shortest path to s starts from.
    state_id origin(state_id s) const
    {
        while (_parent[s.index])
            s = _parent[s.index]->first;
        return s;
    }

    std::vector<trace_step> path_to(state_id s) const
    {
        if (!reached(s))
            throw usage_error("state " + std::to_string(s.index) + " is not reachable");
        std::vector<trace_step> out;
        while (_parent[s.index]) {
            out.push_back({_parent[s.index]->second, s});
            s = _parent[s.index]->first;
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

private:
    std::vector<state_id> _order;
    std::vector<std::optional<std::pair<state_id, label>>> _parent;
    std::vector<bool> _reached;
};

// ---------------------------------------------------------------------------
// Step relations: state pairs carrying a (possibly empty) observation.

struct step {
    state_id from;
    std::vector<label> observation;
    state_id to;

    friend bool operator==(const step&, const step&) = default;
    friend std::strong_ordering operator<=>(const step& lhs, const step& rhs)
    {
        if (auto c = lhs.from <=> rhs.from; c != 0)
            return c;
        if (auto c = lhs.to <=> rhs.to; c != 0)
            return c;
        return std::lexicographical_compare_three_way(lhs.observation.begin(), lhs.observation.end(),
                                                      rhs.observation.begin(), rhs.observation.end());
    }
};

enum class step_kind : std::uint8_t { operation, skip, composite };

class step_relation {
public:
    step_relation() = default;

    step_relation(std::uint64_t table, std::size_t state_count, step_kind kind, std::vector<step> entries)
        : _table(table), _state_count(state_count), _kind(kind), _entries(std::move(entries))
    {
        for (const auto& e : _entries)
            if (e.from.index >= state_count || e.to.index >= state_count)
                throw usage_error("step relation entry outside its state table");
        std::sort(_entries.begin(), _entries.end());
        _entries.erase(std::unique(_entries.begin(), _entries.end()), _entries.end());
        _offsets.assign(state_count + 1, 0);
        for (const auto& e : _entries)
            ++_offsets[e.from.index + 1];
        for (std::size_t i = 1; i < _offsets.size(); ++i)
            _offsets[i] += _offsets[i - 1];
    }

    // Transitions of one event, each carrying its label as observation.
    static step_relation of_event(const lts& m, const std::string& event)
    {
        if (!m.event(event))
            throw usage_error("unknown event '" + event + "' in '" + m.name() + "'");
        std::vector<step> entries;
        for (const auto& t : m.transitions()) {
            const auto& l = m.label_at(t.label_index);
            if (l.event == event)
                entries.push_back({t.from, {l}, t.to});
        }
        return {m.token(), m.state_count(), step_kind::operation, std::move(entries)};
    }

    static step_relation empty(const lts& m) { return {m.token(), m.state_count(), step_kind::composite, {}}; }

    std::uint64_t table() const { return _table; }
    std::size_t state_count() const { return _state_count; }
    step_kind kind() const { return _kind; }
    const std::vector<step>& entries() const { return _entries; }
    std::size_t size() const { return _entries.size(); }
    bool empty() const { return _entries.empty(); }

    std::span<const step> from(state_id s) const
    {
        if (s.index >= _state_count)
            throw usage_error("state id outside the relation's table");
        return {_entries.data() + _offsets[s.index], _entries.data() + _offsets[s.index + 1]};
    }

    bool enabled_at(state_id s) const { return !from(s).empty(); }

    bool relates(state_id a, state_id b) const
    {
        for (const auto& e : from(a))
            if (e.to == b)
                return true;
        return false;
    }

    // Same relation with all observations dropped.
    step_relation erased() const
    {
        std::vector<step> out;
        out.reserve(_entries.size());
        for (const auto& e : _entries)
            out.push_back({e.from, {}, e.to});
        return {_table, _state_count, _kind, std::move(out)};
    }

    friend bool operator==(const step_relation& lhs, const step_relation& rhs)
    {
        return lhs._table == rhs._table && lhs._state_count == rhs._state_count && lhs._entries == rhs._entries;
    }

private:
    std::uint64_t _table = 0;
    std::size_t _state_count = 0;
    step_kind _kind = step_kind::composite;
    std::vector<step> _entries;
    std::vector<std::size_t> _offsets{0};
};

// Identity on every state, no observation.
inline step_relation skip_relation(const lts& m)
{
    std::vector<step> entries;
    entries.reserve(m.state_count());
    for (std::uint32_t i = 0; i < m.state_count(); ++i)
        entries.push_back({{i}, {}, {i}});
    return {m.token(), m.state_count(), step_kind::skip, std::move(entries)};
}

// Relational composition r1 ; r2. Observations concatenate.
inline step_relation compose(const step_relation& r1, const step_relation& r2)
{
    if (r1.table() != r2.table() || r1.state_count() != r2.state_count())
        throw usage_error("cannot compose step relations over different state tables");
    std::vector<step> out;
    for (const auto& first : r1.entries())
        for (const auto& second : r2.from(first.to)) {
            auto obs = first.observation;
            obs.insert(obs.end(), second.observation.begin(), second.observation.end());
            out.push_back({first.from, std::move(obs), second.to});
        }
    return {r1.table(), r1.state_count(), step_kind::composite, std::move(out)};
}

inline step_relation unite(const step_relation& r1, const step_relation& r2)
{
    if (r1.table() != r2.table() || r1.state_count() != r2.state_count())
        throw usage_error("cannot unite step relations over different state tables");
    auto entries = r1.entries();
    entries.insert(entries.end(), r2.entries().begin(), r2.entries().end());
    return {r1.table(), r1.state_count(), step_kind::composite, std::move(entries)};
}

inline void check_events(const lts& m, const std::set<std::string>& events)
{
    for (const auto& e : events)
        if (!m.event(e))
            throw usage_error("unknown event '" + e + "' in '" + m.name() + "'");
}

// Adjacency restricted to the named events.
inline std::vector<std::vector<std::uint32_t>> restricted_graph(const lts& m, const std::set<std::string>& events)
{
    std::vector<std::vector<std::uint32_t>> graph(m.state_count());
    for (const auto& t : m.transitions())
        if (events.count(m.label_at(t.label_index).event))
            graph[t.from.index].push_back(t.to.index);
    for (auto& succ : graph) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return graph;
}

// Reflexive-transitive closure of the union of the named events, with
// observations erased.
inline step_relation internal_closure(const lts& m, const std::set<std::string>& events)
{
    check_events(m, events);
    auto graph = restricted_graph(m, events);
    std::vector<step> entries;
    std::vector<std::uint32_t> stamp(m.state_count(), UINT32_MAX);
    for (std::uint32_t s = 0; s < m.state_count(); ++s) {
        std::vector<std::uint32_t> stack{s};
        stamp[s] = s;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            entries.push_back({{s}, {}, {u}});
            for (auto v : graph[u])
                if (stamp[v] != s) {
                    stamp[v] = s;
                    stack.push_back(v);
                }
        }
    }
    return {m.token(), m.state_count(), step_kind::composite, std::move(entries)};
}

// Tarjan's algorithm; components come out in reverse topological order.
inline std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& graph)
{
    const auto n = graph.size();
    std::vector<int> number(n, -1), low(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> components;
    int counter = 0;

    std::function<void(std::uint32_t)> visit = [&](std::uint32_t v) {
        number[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (auto w : graph[v]) {
            if (number[w] == -1) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], number[w]);
            }
        }
        if (low[v] == number[v]) {
            std::vector<std::uint32_t> component;
            std::uint32_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(w);
            } while (w != v);
            std::sort(component.begin(), component.end());
            components.push_back(std::move(component));
        }
    };
    for (std::uint32_t v = 0; v < n; ++v)
        if (number[v] == -1)
            visit(v);
    return components;
}

// Per state, over the whole table: can the named events run forever from
// here? True exactly for states reaching a cyclic component of the
// restricted graph.
inline std::vector<bool> diverges(const lts& m, const std::set<std::string>& events)
{
    check_events(m, events);
    auto graph = restricted_graph(m, events);
    std::vector<bool> divergent(m.state_count(), false);
    for (const auto& component : strongly_connected_components(graph)) {
        bool cyclic = component.size() > 1;
        if (!cyclic) {
            auto v = component.front();
            cyclic = std::binary_search(graph[v].begin(), graph[v].end(), v);
        }
        if (cyclic)
            for (auto v : component)
                divergent[v] = true;
    }
    // Backward propagation: anything that reaches a divergent state diverges.
    std::vector<std::vector<std::uint32_t>> reverse(m.state_count());
    for (std::uint32_t u = 0; u < m.state_count(); ++u)
        for (auto v : graph[u])
            reverse[v].push_back(u);
    std::vector<std::uint32_t> work;
    for (std::uint32_t v = 0; v < m.state_count(); ++v)
        if (divergent[v])
            work.push_back(v);
    while (!work.empty()) {
        auto v = work.back();
        work.pop_back();
        for (auto u : reverse[v])
            if (!divergent[u]) {
                divergent[u] = true;
                work.push_back(u);
            }
    }
    return divergent;
}

// Reachable states with an infinite path that uses only the named events.
inline std::vector<state_id> divergent_states(const lts& m, const std::set<std::string>& events)
{
    auto divergent = diverges(m, events);
    exploration reach(m);
    std::vector<state_id> out;
    for (std::uint32_t v = 0; v < m.state_count(); ++v)
        if (divergent[v] && reach.reached({v}))
            out.push_back({v});
    return out;
}

} // namespace refinery
