#pragma once

#include "errors.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace refinery {

enum class value_kind : std::uint8_t { boolean, integer, sequence, bag };

// A ground value of the specification language. Bags are kept as sorted
// element vectors so that structural equality is multiset equality.
class value {
public:
    value() = default;

    static value boolean(bool b)
    {
        value v;
        v._kind = value_kind::boolean;
        v._number = b ? 1 : 0;
        return v;
    }

    static value integer(std::int64_t n)
    {
        value v;
        v._kind = value_kind::integer;
        v._number = n;
        return v;
    }

    static value sequence(std::vector<value> items)
    {
        value v;
        v._kind = value_kind::sequence;
        v._items = std::move(items);
        return v;
    }

    static value bag(std::vector<value> items)
    {
        value v;
        v._kind = value_kind::bag;
        v._items = std::move(items);
        std::sort(v._items.begin(), v._items.end());
        return v;
    }

    value_kind kind() const { return _kind; }
    bool is_collection() const { return _kind == value_kind::sequence || _kind == value_kind::bag; }

    bool as_bool() const
    {
        if (_kind != value_kind::boolean)
            throw eval_error("expected a boolean value, got " + to_string());
        return _number != 0;
    }

    std::int64_t as_int() const
    {
        if (_kind != value_kind::integer)
            throw eval_error("expected an integer value, got " + to_string());
        return _number;
    }

    const std::vector<value>& items() const { return _items; }
    std::size_t size() const { return _items.size(); }

    friend bool operator==(const value& lhs, const value& rhs)
    {
        return lhs._kind == rhs._kind && lhs._number == rhs._number && lhs._items == rhs._items;
    }

    // Kind first, then scalar, then lexicographic on elements (a proper
    // prefix sorts first). Used for deterministic state numbering.
    friend std::strong_ordering operator<=>(const value& lhs, const value& rhs)
    {
        if (auto c = lhs._kind <=> rhs._kind; c != 0)
            return c;
        if (auto c = lhs._number <=> rhs._number; c != 0)
            return c;
        return std::lexicographical_compare_three_way(lhs._items.begin(), lhs._items.end(),
                                                      rhs._items.begin(), rhs._items.end());
    }

    std::string to_string() const
    {
        switch (_kind) {
        case value_kind::boolean:
            return _number ? "true" : "false";
        case value_kind::integer:
            return std::to_string(_number);
        case value_kind::sequence:
            return "[" + join_items() + "]";
        case value_kind::bag:
            return "{|" + join_items() + "|}";
        }
        return "?";
    }

private:
    std::string join_items() const
    {
        std::string out;
        for (std::size_t i = 0; i < _items.size(); ++i) {
            if (i)
                out += ",";
            out += _items[i].to_string();
        }
        return out;
    }

    value_kind _kind = value_kind::boolean;
    std::int64_t _number = 0;
    std::vector<value> _items;
};

// A finite carrier set: booleans, an integer range, or bounded sequences/bags
// over an element domain.
struct domain {
    enum class kind_t : std::uint8_t { boolean, integer, sequence, bag };

    kind_t kind = kind_t::boolean;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::size_t max_size = 0;
    std::shared_ptr<const domain> element;

    static domain booleans() { return {}; }

    static domain range(std::int64_t lo, std::int64_t hi)
    {
        domain d;
        d.kind = kind_t::integer;
        d.lo = lo;
        d.hi = hi;
        return d;
    }

    static domain sequences(domain element, std::size_t max_size)
    {
        domain d;
        d.kind = kind_t::sequence;
        d.max_size = max_size;
        d.element = std::make_shared<const domain>(std::move(element));
        return d;
    }

    static domain bags(domain element, std::size_t max_size)
    {
        domain d;
        d.kind = kind_t::bag;
        d.max_size = max_size;
        d.element = std::make_shared<const domain>(std::move(element));
        return d;
    }

    bool contains(const value& v) const
    {
        switch (kind) {
        case kind_t::boolean:
            return v.kind() == value_kind::boolean;
        case kind_t::integer:
            return v.kind() == value_kind::integer && v.as_int() >= lo && v.as_int() <= hi;
        case kind_t::sequence:
        case kind_t::bag: {
            auto expected = kind == kind_t::sequence ? value_kind::sequence : value_kind::bag;
            if (v.kind() != expected || v.size() > max_size)
                return false;
            return std::all_of(v.items().begin(), v.items().end(),
                               [&](const value& x) { return element->contains(x); });
        }
        }
        return false;
    }

    // All members in ascending value order.
    std::vector<value> enumerate() const
    {
        std::vector<value> out;
        switch (kind) {
        case kind_t::boolean:
            out = {value::boolean(false), value::boolean(true)};
            break;
        case kind_t::integer:
            for (auto i = lo; i <= hi; ++i)
                out.push_back(value::integer(i));
            break;
        case kind_t::sequence: {
            auto elems = element->enumerate();
            std::vector<std::vector<value>> layer{{}};
            out.push_back(value::sequence({}));
            for (std::size_t len = 1; len <= max_size; ++len) {
                std::vector<std::vector<value>> next;
                for (const auto& prefix : layer)
                    for (const auto& e : elems) {
                        auto seq = prefix;
                        seq.push_back(e);
                        out.push_back(value::sequence(seq));
                        next.push_back(std::move(seq));
                    }
                layer = std::move(next);
            }
            break;
        }
        case kind_t::bag: {
            // Non-decreasing index tuples enumerate each multiset once.
            auto elems = element->enumerate();
            std::vector<std::vector<std::size_t>> layer{{}};
            out.push_back(value::bag({}));
            for (std::size_t len = 1; len <= max_size; ++len) {
                std::vector<std::vector<std::size_t>> next;
                for (const auto& prefix : layer) {
                    std::size_t start = prefix.empty() ? 0 : prefix.back();
                    for (std::size_t i = start; i < elems.size(); ++i) {
                        auto idx = prefix;
                        idx.push_back(i);
                        std::vector<value> members;
                        for (auto j : idx)
                            members.push_back(elems[j]);
                        out.push_back(value::bag(std::move(members)));
                        next.push_back(std::move(idx));
                    }
                }
                layer = std::move(next);
            }
            break;
        }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string to_string() const
    {
        switch (kind) {
        case kind_t::boolean:
            return "bool";
        case kind_t::integer:
            return "int " + std::to_string(lo) + ".." + std::to_string(hi);
        case kind_t::sequence:
            return "seq " + element->to_string() + " max " + std::to_string(max_size);
        case kind_t::bag:
            return "bag " + element->to_string() + " max " + std::to_string(max_size);
        }
        return "?";
    }

    // Same shape ignoring bounds; what mapping signature checks compare.
    bool same_shape(const domain& other) const
    {
        if (kind != other.kind)
            return false;
        if (element && other.element)
            return element->same_shape(*other.element);
        return !element && !other.element;
    }
};

} // namespace refinery
