#pragma once

#include <span>
#include <variant>
#include <vector>

#include "confmc/dist.hpp"
#include "confmc/model.hpp"

namespace confmc {

/// Same action distribution regardless of history.
struct ConstantMixed {
    Dist<ActionId> weights;
};

/// Plays word[k] at step k (history length k+1), then `fallback` forever.
struct ActionWord {
    std::vector<ActionId> word;
    ActionId fallback = 0;
};

/// sigma(d)(a) = (theta[a][0] + sum_q theta[a][q+1] d(q)) / (s[0] + sum_q s[q+1] d(q)).
/// Index 0 of every coefficient vector is the constant term.
struct LinearFractional {
    std::vector<std::vector<Rat>> theta;  // [action][1 + |Q|]
    std::vector<Rat> s;                   // [1 + |Q|]

    Rat numerator(ActionId a, std::span<Rat const> d) const;
    Rat denominator(std::span<Rat const> d) const;
};

/// Longest matching configuration-history prefix wins; `fallback` otherwise.
struct HistoryTable {
    struct Entry {
        std::vector<Configuration> prefix;
        Dist<ActionId> weights;
    };
    std::vector<Entry> entries;
    Dist<ActionId> fallback;
};

class Scheduler {
   public:
    using Variant = std::variant<ConstantMixed, ActionWord, LinearFractional, HistoryTable>;

    Scheduler(Variant v) : v_(std::move(v)) {}

    static Scheduler constant(Dist<ActionId> weights) { return Scheduler(ConstantMixed{std::move(weights)}); }
    static Scheduler pure(ActionId a) { return constant(Dist<ActionId>::dirac(a)); }
    static Scheduler word(std::vector<ActionId> w, ActionId fallback) {
        return Scheduler(ActionWord{std::move(w), fallback});
    }

    Variant const& variant() const { return v_; }

    /// True when the result only depends on the last configuration.
    bool memoryless() const;

    /// Throws InvalidScheduler when the parameterization does not yield a distribution.
    Dist<ActionId> eval(std::span<Configuration const> history) const;
    Dist<ActionId> eval(Configuration const& d) const { return eval(std::span<Configuration const>(&d, 1)); }

    /// Vertex check for LinearFractional (numerators >= 0, denominator >= 1,
    /// numerators summing to the denominator); a no-op for the other variants.
    void validate(std::size_t num_states, std::size_t num_actions) const;

   private:
    Variant v_;
};

}  // namespace confmc
