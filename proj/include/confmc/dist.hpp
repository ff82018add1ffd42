#pragma once

#include <map>
#include <utility>
#include <vector>

#include "confmc/error.hpp"
#include "confmc/rational.hpp"

namespace confmc {

/// Finitely supported probability distribution with exact weights.
///
/// The support is kept in an ordered map so that equal distributions compare
/// equal and nested distributions (Dist<Dist<T>>) are usable as keys.
/// Zero-probability entries are never stored.
template <typename T>
class Dist {
   public:
    using Map = std::map<T, Rat>;

    Dist() = default;

    /// Merges duplicate keys, drops zeros, and requires an exact total of 1.
    static Dist from_pairs(std::vector<std::pair<T, Rat>> const& pairs) {
        Map merged;
        for (auto const& [value, weight] : pairs) {
            if (weight < 0) {
                fail(ErrorKind::NegativeWeight, "distribution weight " + to_string(weight) + " is negative");
            }
            merged[value] += weight;
        }
        return from_map(std::move(merged));
    }

    static Dist from_map(Map weights) {
        Rat total = 0;
        for (auto it = weights.begin(); it != weights.end();) {
            if (it->second < 0) {
                fail(ErrorKind::NegativeWeight, "distribution weight " + to_string(it->second) + " is negative");
            }
            total += it->second;
            if (it->second == 0) {
                it = weights.erase(it);
            } else {
                ++it;
            }
        }
        if (total != 1) {
            fail(ErrorKind::NotNormalized, "distribution sums to " + to_string(total));
        }
        Dist d;
        d.support_ = std::move(weights);
        return d;
    }

    static Dist dirac(T value) {
        Dist d;
        d.support_.emplace(std::move(value), Rat(1));
        return d;
    }

    Map const& support() const { return support_; }
    std::size_t size() const { return support_.size(); }
    bool is_dirac() const { return support_.size() == 1; }

    Rat prob(T const& value) const {
        auto it = support_.find(value);
        return it == support_.end() ? Rat(0) : it->second;
    }

    auto begin() const { return support_.begin(); }
    auto end() const { return support_.end(); }

    friend bool operator==(Dist const& a, Dist const& b) { return a.support_ == b.support_; }
    friend bool operator!=(Dist const& a, Dist const& b) { return !(a == b); }
    friend bool operator<(Dist const& a, Dist const& b) { return a.support_ < b.support_; }

   private:
    Map support_;
};

/// An indexed convex combination: components are kept apart even when their
/// values coincide. The MC2CM swap enumerates maps out of the index set, so it
/// has to see the indices (two states with identical rows toss independently).
template <typename T>
struct Mixture {
    struct Component {
        Rat weight;
        T value;
    };
    std::vector<Component> components;

    /// Drops zero weights; requires positive weights summing to exactly 1.
    static Mixture make(std::vector<Component> parts) {
        Mixture m;
        Rat total = 0;
        for (auto& c : parts) {
            if (c.weight < 0) {
                fail(ErrorKind::NegativeWeight, "mixture weight " + to_string(c.weight) + " is negative");
            }
            total += c.weight;
            if (c.weight != 0) {
                m.components.push_back(std::move(c));
            }
        }
        if (total != 1) {
            fail(ErrorKind::NotNormalized, "mixture sums to " + to_string(total));
        }
        return m;
    }

    static Mixture of(Dist<T> const& d) {
        Mixture m;
        for (auto const& [value, weight] : d) {
            m.components.push_back({weight, value});
        }
        return m;
    }

    /// Forgets the indices.
    Dist<T> merged() const {
        typename Dist<T>::Map acc;
        for (auto const& c : components) {
            acc[c.value] += c.weight;
        }
        return Dist<T>::from_map(std::move(acc));
    }

    std::size_t size() const { return components.size(); }
};

/// (D f)(d)(u) = sum of d(t) over t with f(t) = u.
template <typename T, typename F>
auto pushforward(F&& f, Dist<T> const& d) {
    using U = std::decay_t<decltype(f(std::declval<T const&>()))>;
    typename Dist<U>::Map acc;
    for (auto const& [value, weight] : d) {
        acc[f(value)] += weight;
    }
    return Dist<U>::from_map(std::move(acc));
}

template <typename T, typename F>
auto pushforward(F&& f, Mixture<T> const& m) {
    using U = std::decay_t<decltype(f(std::declval<T const&>()))>;
    Mixture<U> out;
    out.components.reserve(m.size());
    for (auto const& c : m.components) {
        out.components.push_back({c.weight, f(c.value)});
    }
    return out;
}

}  // namespace confmc
