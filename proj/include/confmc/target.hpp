#pragma once

#include <set>
#include <variant>
#include <vector>

#include "confmc/model.hpp"

namespace confmc {

/// Up-closure of finitely many generators; stored as its minimal elements.
struct UpwardGenerators {
    std::vector<Vec01> generators;
};

/// Down-closure of finitely many generators; stored as its maximal elements.
struct DownwardGenerators {
    std::vector<Vec01> generators;
};

struct ExplicitConfigs {
    std::set<Configuration> configs;
};

/// { d : alpha . d > bound } (strict) or >= bound.
struct LinearThreshold {
    std::vector<Rat> alpha;
    Rat bound;
    bool strict = true;
};

class TargetSet {
   public:
    using Variant = std::variant<UpwardGenerators, DownwardGenerators, ExplicitConfigs, LinearThreshold>;

    static TargetSet upward(std::vector<Vec01> generators);
    static TargetSet downward(std::vector<Vec01> generators);
    static TargetSet explicit_configs(std::vector<Configuration> configs);
    static TargetSet linear(std::vector<Rat> alpha, Rat bound, bool strict);

    Variant const& variant() const { return v_; }
    bool is_upward() const { return std::holds_alternative<UpwardGenerators>(v_); }
    bool is_downward() const { return std::holds_alternative<DownwardGenerators>(v_); }
    bool is_monotone() const { return is_upward() || is_downward(); }

    /// Generators of a monotone target (empty for the other kinds).
    std::vector<Vec01> const& generators() const;

    /// Throws DimensionMismatch when d has the wrong length.
    bool contains(Configuration const& d) const;
    bool contains(std::span<Rat const> d) const;

    /// Length of the target's vectors, or 0 when it carries none.
    std::size_t dimension() const;

   private:
    explicit TargetSet(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

inline bool target_contains(TargetSet const& h, Configuration const& d) { return h.contains(d); }

/// Minimal elements of `xs` (duplicates collapsed, order of first occurrence kept).
std::vector<Vec01> minimal_elements(std::vector<Vec01> const& xs);
/// Maximal elements of `xs`.
std::vector<Vec01> maximal_elements(std::vector<Vec01> const& xs);

}  // namespace confmc
