#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "confmc/lp.hpp"
#include "confmc/model.hpp"
#include "confmc/target.hpp"

namespace confmc {

/// Pairwise incomparable vectors. A Floor keeps minimal elements (the bottom
/// of an upward-closed set), a Top keeps maximal ones.
class Antichain {
   public:
    enum class Kind { Floor, Top };
    static constexpr std::size_t kNoTag = std::numeric_limits<std::size_t>::max();

    explicit Antichain(Kind kind = Kind::Floor) : kind_(kind) {}

    Kind kind() const { return kind_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    std::vector<Vec01> const& elements() const { return elements_; }
    /// Caller-chosen id carried alongside each element (provenance lookups).
    std::vector<std::size_t> const& tags() const { return tags_; }

    /// True when x lies in the closure already represented.
    bool covers(Vec01 const& x) const;
    /// Adds x unless covered, evicting elements x now covers. Returns whether x was added.
    bool insert(Vec01 x, std::size_t tag = kNoTag);

    bool is_antichain() const;
    /// Same elements irrespective of order and tags.
    bool same_elements(Antichain const& other) const;

   private:
    bool below(Vec01 const& a, Vec01 const& b) const;  // a is covered by b's closure
    Kind kind_;
    std::vector<Vec01> elements_;
    std::vector<std::size_t> tags_;
};

Antichain antichain_floor_insert(Antichain a, Vec01 x);
Antichain antichain_top_insert(Antichain a, Vec01 x);

struct PullbackOptions {
    std::size_t K = 3;
    std::size_t L = 1;
    std::uint64_t seed = 0;
    /// Margin that realizes the strict sampled constraints.
    Rat epsilon = Rat(1, 1000000);
};

/// Minimal-ish points of { y : M^T y >= x, 1.y <= 1, y >= 0 }: the first LP
/// minimizes 1.y, each later one adds y[q_j] <= y*_j[q_j] - epsilon for a
/// uniformly sampled coordinate q_j of every earlier solution. Every vector
/// returned satisfies M^T y >= x exactly; the list is reduced to an antichain.
std::vector<Vec01> pullback_minimals(Matrix const& m, Vec01 const& x, PullbackOptions const& opt,
                                     lp::Backend& backend);

/// Order dual: maximizes 1.y over { y in [0,1]^n : M^T y <= x } with the
/// sampled constraints y[q_j] >= y*_j[q_j] + epsilon.
std::vector<Vec01> pullback_maximals(Matrix const& m, Vec01 const& x, PullbackOptions const& opt,
                                     lp::Backend& backend);

struct BackwardOptions {
    std::size_t K = 3;
    std::size_t L = 1;
    std::size_t loop_limit = 100;
    std::uint64_t seed = 0;
    Rat epsilon = Rat(1, 1000000);
    /// Run the per-element pullbacks of an iteration concurrently. Results
    /// are identical to the serial run by construction.
    bool parallel = true;
};

struct ReachOutcome {
    enum class Tag { Reachable, Stabilized, LoopLimit };
    struct Element {
        Vec01 value;
        std::vector<ActionId> word;  // replaying it from any config covered by value lands in H
    };

    Tag tag = Tag::LoopLimit;
    std::vector<ActionId> witness;  // set when Reachable
    std::size_t iterations = 0;
    std::size_t lp_calls = 0;
    std::vector<Element> frontier;  // final antichain with provenance words
};

char const* to_string(ReachOutcome::Tag t);

/// Backward iteration S <- bottom(H u pullbacks of S) over all actions for an
/// upward-closed H (a downward H is forwarded to dual_backward_reach). A
/// Reachable verdict is replayed forward exactly before it is returned.
ReachOutcome backward_reach(MdpModel const& m, Configuration const& d0, TargetSet const& h,
                            BackwardOptions const& opt = {}, lp::Backend* backend = nullptr);

ReachOutcome dual_backward_reach(MdpModel const& m, Configuration const& d0, TargetSet const& h,
                                 BackwardOptions const& opt = {}, lp::Backend* backend = nullptr);

/// Applies the word to d0 step by step (d <- M_a^T d).
Configuration replay(MdpModel const& m, Configuration const& d0, std::vector<ActionId> const& word);

}  // namespace confmc
