#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confmc/model.hpp"
#include "confmc/scheduler.hpp"
#include "confmc/semantics.hpp"
#include "confmc/target.hpp"

namespace confmc {

struct ExploreLimits {
    std::size_t node_cap = 1'000'000;
    std::size_t branch_cap = kDefaultBranchCap;
};

/// Node of a forward unfolding. Under memoryless schedulers a node stands for
/// a configuration (histories merged, so the graph may be cyclic); otherwise
/// it stands for the full configuration history.
struct GraphNode {
    std::vector<Configuration> history;
    std::size_t depth = 0;
    bool in_target = false;
    bool expanded = false;

    Configuration const& config() const { return history.back(); }
};

struct GraphEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    Rat prob;
};

struct ConfigGraph {
    std::vector<GraphNode> nodes;  // BFS order
    std::vector<GraphEdge> edges;
    std::vector<std::size_t> roots;

    std::vector<GraphEdge> out_edges(std::size_t node) const;
};

/// Breadth-first unfolding up to `depth` steps. Nodes inside `target` (when
/// given) are flagged and not expanded.
ConfigGraph explore(MdpModel const& m, Scheduler const& sigma, SemanticsId s, Configuration const& d0,
                    std::size_t depth, TargetSet const* target = nullptr, ExploreLimits limits = {});

/// Standard DOT digraph; nodes n0, n1, ... in BFS order.
std::string to_dot(ConfigGraph const& g, MdpModel const& m);

struct BoundedReach {
    Rat lower;             // exact probability of hitting the target within the bound
    bool settled = false;  // every surviving frontier node is absorbing
};

BoundedReach reach_prob_bounded(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                                Configuration const& d0, TargetSet const& target, std::size_t depth,
                                ExploreLimits limits = {});

/// A configuration is absorbing when every action maps it to itself with probability 1.
bool is_absorbing(MdpModel const& m, SemanticsId s, Configuration const& d, std::size_t branch_cap = kDefaultBranchCap);

/// One sampled configuration path of length steps+1; deterministic given the seed.
/// Samples the chance events directly instead of enumerating successors.
std::vector<Configuration> simulate(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                                    Configuration const& d0, std::size_t steps, std::uint64_t seed);

struct ReachEstimate {
    std::size_t runs = 0;
    std::size_t hits = 0;
    std::size_t capped = 0;  // runs that reached the step cap without hitting
    double frequency() const { return runs ? static_cast<double>(hits) / static_cast<double>(runs) : 0.0; }
    double stderr_() const;
};

/// Monte-Carlo hitting frequency; run i uses a seed derived from (seed, i).
ReachEstimate estimate_reach(MdpModel const& m, Scheduler const& sigma, SemanticsId s, Configuration const& d0,
                             TargetSet const& target, std::size_t runs, std::size_t step_cap, std::uint64_t seed);

struct SubsetSumInstance {
    MdpModel model;
    Configuration initial;
    TargetSet target;
    Rat threshold;
};

/// Counting subset-sum as an MSCT reachability instance: states 1..n plus
/// top/bot, one action, every i moves to top or bot with probability 1/2.
/// The one-step MSCT probability of the target is #{A : sum A = T} / 2^n.
SubsetSumInstance gen_subsetsum(std::vector<std::uint64_t> const& values, std::uint64_t target_sum);

}  // namespace confmc
