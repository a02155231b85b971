#pragma once

#include "../kernel.hpp"
#include "../speclang/eval.hpp"
#include "../speclang/typecheck.hpp"

#include <string>
#include <utility>
#include <vector>

namespace refinery::refine {

// Linking relation between abstract and concrete states.
class retrieve_relation {
public:
    retrieve_relation() = default;

    retrieve_relation(std::size_t abstract_count, std::size_t concrete_count, std::string origin)
        : _abstract_count(abstract_count), _concrete_count(concrete_count),
          _bits(abstract_count * concrete_count, false), _origin(std::move(origin))
    {}

    static retrieve_relation full(const lts& abstract, const lts& concrete)
    {
        retrieve_relation r(abstract.state_count(), concrete.state_count(), "synthesized");
        r._bits.assign(r._bits.size(), true);
        return r;
    }

    // Pairs (s, s) over one state table.
    static retrieve_relation identity(const lts& m)
    {
        retrieve_relation r(m.state_count(), m.state_count(), "identity");
        for (std::uint32_t i = 0; i < m.state_count(); ++i)
            r.insert({i}, {i});
        return r;
    }

    // Pairs whose joint valuation satisfies `predicate`, which may mention
    // the variables of both machines (names must not clash).
    static retrieve_relation from_predicate(const speclang::typed_machine& abstract_machine, const lts& abstract,
                                            const speclang::typed_machine& concrete_machine, const lts& concrete,
                                            const std::string& predicate)
    {
        for (const auto& v : abstract.variables())
            for (const auto& w : concrete.variables())
                if (v == w)
                    throw usage_error("variable '" + v +
                                      "' occurs in both machines; a retrieve predicate cannot tell them apart");
        speclang::scope sc;
        abstract_machine.bind_state(sc, 0);
        concrete_machine.bind_state(sc, static_cast<int>(abstract.variables().size()));
        auto expr = speclang::compile_predicate(predicate, sc);

        retrieve_relation r(abstract.state_count(), concrete.state_count(), predicate);
        std::vector<value> env(abstract.variables().size() + concrete.variables().size());
        for (std::uint32_t a = 0; a < abstract.state_count(); ++a) {
            std::copy(abstract.states()[a].begin(), abstract.states()[a].end(), env.begin());
            for (std::uint32_t c = 0; c < concrete.state_count(); ++c) {
                std::copy(concrete.states()[c].begin(), concrete.states()[c].end(),
                          env.begin() + static_cast<std::ptrdiff_t>(abstract.variables().size()));
                try {
                    if (speclang::holds(expr, env))
                        r.insert({a}, {c});
                } catch (const eval_error& e) {
                    throw eval_error("retrieve predicate at (" + abstract.describe({a}) + " | " +
                                     concrete.describe({c}) + "): " + e.what());
                }
            }
        }
        return r;
    }

    std::size_t abstract_count() const { return _abstract_count; }
    std::size_t concrete_count() const { return _concrete_count; }
    const std::string& origin() const { return _origin; }

    bool contains(state_id a, state_id c) const
    {
        check(a, c);
        return _bits[a.index * _concrete_count + c.index];
    }

    void insert(state_id a, state_id c)
    {
        check(a, c);
        _bits[a.index * _concrete_count + c.index] = true;
    }

    void erase(state_id a, state_id c)
    {
        check(a, c);
        _bits[a.index * _concrete_count + c.index] = false;
    }

    std::size_t size() const { return static_cast<std::size_t>(std::count(_bits.begin(), _bits.end(), true)); }

    std::vector<std::pair<state_id, state_id>> pairs() const
    {
        std::vector<std::pair<state_id, state_id>> out;
        for (std::uint32_t a = 0; a < _abstract_count; ++a)
            for (std::uint32_t c = 0; c < _concrete_count; ++c)
                if (_bits[a * _concrete_count + c])
                    out.push_back({{a}, {c}});
        return out;
    }

    // Abstract states linked to c, ascending.
    std::vector<state_id> abstract_for(state_id c) const
    {
        std::vector<state_id> out;
        for (std::uint32_t a = 0; a < _abstract_count; ++a)
            if (contains({a}, c))
                out.push_back({a});
        return out;
    }

    retrieve_relation inverse() const
    {
        retrieve_relation r(_concrete_count, _abstract_count, "inverse of " + _origin);
        for (auto [a, c] : pairs())
            r.insert(c, a);
        return r;
    }

    // Relational composition: (x, z) whenever (x, y) in this and (y, z) in next.
    retrieve_relation then(const retrieve_relation& next) const
    {
        if (_concrete_count != next._abstract_count)
            throw usage_error("cannot compose retrieve relations over different middle state tables");
        retrieve_relation r(_abstract_count, next._concrete_count, _origin + " ; " + next._origin);
        for (auto [x, y] : pairs())
            for (std::uint32_t z = 0; z < next._concrete_count; ++z)
                if (next.contains(y, {z}))
                    r.insert(x, {z});
        return r;
    }

    // Every pair valid for the given machines.
    void check_against(const lts& abstract, const lts& concrete) const
    {
        if (_abstract_count != abstract.state_count() || _concrete_count != concrete.state_count())
            throw usage_error("retrieve relation does not fit the state tables of '" + abstract.name() + "' and '" +
                              concrete.name() + "'");
    }

    friend bool operator==(const retrieve_relation& lhs, const retrieve_relation& rhs)
    {
        return lhs._abstract_count == rhs._abstract_count && lhs._concrete_count == rhs._concrete_count &&
               lhs._bits == rhs._bits;
    }

private:
    void check(state_id a, state_id c) const
    {
        if (a.index >= _abstract_count || c.index >= _concrete_count)
            throw usage_error("retrieve relation pair out of range");
    }

    std::size_t _abstract_count = 0;
    std::size_t _concrete_count = 0;
    std::vector<bool> _bits;
    std::string _origin;
};

} // namespace refinery::refine
