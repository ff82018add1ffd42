#include "confmc/explorer.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <sstream>

#include "confmc/error.hpp"

namespace confmc {

namespace {

using History = std::vector<Configuration>;

History child_history(Scheduler const& sigma, History const& h, Configuration const& next) {
    if (sigma.memoryless()) {
        return {next};
    }
    History out = h;
    out.push_back(next);
    return out;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
T sample(Dist<T> const& d, std::mt19937_64& rng) {
    double u = unit_draw(rng);
    double acc = 0.0;
    for (auto const& [x, p] : d) {
        acc += to_double(p);
        if (u < acc) {
            return x;
        }
    }
    return d.support().rbegin()->first;
}

StateId sample_row(std::span<Rat const> row, std::mt19937_64& rng) {
    double u = unit_draw(rng);
    double acc = 0.0;
    StateId last = 0;
    for (StateId j = 0; j < row.size(); ++j) {
        if (row[j] == 0) {
            continue;
        }
        last = j;
        acc += to_double(row[j]);
        if (u < acc) {
            return j;
        }
    }
    return last;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Configuration sample_step(MdpModel const& m, Scheduler const& sigma, SemanticsId s, History const& h,
                          std::mt19937_64& rng) {
    auto weights = sigma.eval(h);
    auto const& d = h.back();
    std::size_t n = m.num_states();
    switch (s) {
        case SemanticsId::CSCT: {
            ActionId a = sample(weights, rng);
            std::vector<Rat> image(n, Rat(0));
            for (StateId q = 0; q < n; ++q) {
                if (d[q] != 0) {
                    image[sample_row(m.matrices[a].row(q), rng)] += d[q];
                }
            }
            return Configuration(std::move(image));
        }
        case SemanticsId::MSCT: {
            std::vector<Rat> image(n, Rat(0));
            for (StateId q = 0; q < n; ++q) {
                if (d[q] == 0) {
                    continue;
                }
                for (auto const& [a, p] : weights) {
                    image[sample_row(m.matrices[a].row(q), rng)] += d[q] * p;
                }
            }
            return Configuration(std::move(image));
        }
        case SemanticsId::CSMT: return m.step(d, sample(weights, rng));
        case SemanticsId::MSMT: return mean_successor(m, weights, d);
    }
    fail(ErrorKind::InvalidInput, "unknown semantics");
}

}  // namespace

std::vector<GraphEdge> ConfigGraph::out_edges(std::size_t node) const {
    std::vector<GraphEdge> out;
    for (auto const& e : edges) {
        if (e.from == node) {
            out.push_back(e);
        }
    }
    return out;
}

ConfigGraph explore(MdpModel const& m, Scheduler const& sigma, SemanticsId s, Configuration const& d0,
                    std::size_t depth, TargetSet const* target, ExploreLimits limits) {
    ConfigGraph g;
    std::map<History, std::size_t> index;
    auto add_node = [&](History h, std::size_t level) {
        auto [it, inserted] = index.emplace(h, g.nodes.size());
        if (inserted) {
            if (g.nodes.size() >= limits.node_cap) {
                fail(ErrorKind::BranchExplosion, "exploration exceeds " + std::to_string(limits.node_cap) + " nodes");
            }
            GraphNode node;
            node.history = std::move(h);
            node.depth = level;
            node.in_target = target && target->contains(node.config());
            g.nodes.push_back(std::move(node));
        }
        return std::pair{it->second, inserted};
    };

    std::deque<std::size_t> queue;
    auto [root, fresh] = add_node({d0}, 0);
    g.roots.push_back(root);
    queue.push_back(root);
    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        if (g.nodes[id].depth >= depth || g.nodes[id].in_target) {
            continue;
        }
        g.nodes[id].expanded = true;
        History h = g.nodes[id].history;
        std::size_t level = g.nodes[id].depth;
        auto succ = config_step(m, sigma, s, h, limits.branch_cap);
        for (auto const& [next, p] : succ) {
            auto [child, inserted] = add_node(child_history(sigma, h, next), level + 1);
            g.edges.push_back({id, child, p});
            if (inserted) {
                queue.push_back(child);
            }
        }
    }
    return g;
}

std::string to_dot(ConfigGraph const& g, MdpModel const& m) {
    std::ostringstream os;
    os << "digraph config_mc {\n";
    os << "  // states: ";
    for (std::size_t q = 0; q < m.num_states(); ++q) {
        os << (q ? ", " : "") << m.state_names[q];
    }
    os << "\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        auto const& node = g.nodes[i];
        os << "  n" << i << " [label=\"" << to_string(node.config()) << "\"";
        if (node.in_target) {
            os << ", peripheries=2";
        }
        os << "];\n";
    }
    for (auto const& e : g.edges) {
        os << "  n" << e.from << " -> n" << e.to << " [label=\"" << to_string(e.prob) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

bool is_absorbing(MdpModel const& m, SemanticsId s, Configuration const& d, std::size_t branch_cap) {
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        auto succ = config_step(m, Scheduler::pure(a), s, d, branch_cap);
        if (!succ.is_dirac() || succ.begin()->first != d) {
            return false;
        }
    }
    return true;
}

BoundedReach reach_prob_bounded(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                                Configuration const& d0, TargetSet const& target, std::size_t depth,
                                ExploreLimits limits) {
    BoundedReach out;
    out.lower = 0;
    std::map<History, Rat> layer{{History{d0}, Rat(1)}};
    for (std::size_t k = 0;; ++k) {
        for (auto it = layer.begin(); it != layer.end();) {
            if (target.contains(it->first.back())) {
                out.lower += it->second;
                it = layer.erase(it);
            } else {
                ++it;
            }
        }
        if (k == depth || layer.empty()) {
            break;
        }
        std::map<History, Rat> next;
        for (auto const& [h, w] : layer) {
            for (auto const& [d, p] : config_step(m, sigma, s, h, limits.branch_cap)) {
                next[child_history(sigma, h, d)] += w * p;
            }
            if (next.size() > limits.node_cap) {
                fail(ErrorKind::BranchExplosion, "bounded reachability exceeds " + std::to_string(limits.node_cap) +
                                                     " frontier nodes");
            }
        }
        layer = std::move(next);
    }
    out.settled = true;
    for (auto const& [h, w] : layer) {
        if (!is_absorbing(m, s, h.back(), limits.branch_cap)) {
            out.settled = false;
            break;
        }
    }
    return out;
}

std::vector<Configuration> simulate(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                                    Configuration const& d0, std::size_t steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    History path{d0};
    path.reserve(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) {
        path.push_back(sample_step(m, sigma, s, path, rng));
    }
    return path;
}

double ReachEstimate::stderr_() const {
    if (runs == 0) {
        return 0.0;
    }
    double p = frequency();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
}

ReachEstimate estimate_reach(MdpModel const& m, Scheduler const& sigma, SemanticsId s, Configuration const& d0,
                             TargetSet const& target, std::size_t runs, std::size_t step_cap, std::uint64_t seed) {
    ReachEstimate est;
    est.runs = runs;
    for (std::size_t r = 0; r < runs; ++r) {
        std::mt19937_64 rng(mix_seed(seed, r));
        History path{d0};
        bool hit = target.contains(d0);
        for (std::size_t k = 0; k < step_cap && !hit; ++k) {
            path.push_back(sample_step(m, sigma, s, path, rng));
            hit = target.contains(path.back());
            if (sigma.memoryless()) {
                path.erase(path.begin());
            }
        }
        if (hit) {
            ++est.hits;
        } else {
            ++est.capped;
        }
    }
    return est;
}

SubsetSumInstance gen_subsetsum(std::vector<std::uint64_t> const& values, std::uint64_t target_sum) {
    if (values.empty()) {
        fail(ErrorKind::InvalidInput, "subset-sum instance needs at least one value");
    }
    mpz_class total = 0;
    for (auto v : values) {
        if (v == 0) {
            fail(ErrorKind::InvalidInput, "subset-sum values must be positive");
        }
        total += static_cast<unsigned long>(v);
    }
    if (target_sum == 0 || mpz_class(static_cast<unsigned long>(target_sum)) > total) {
        fail(ErrorKind::InvalidInput, "subset-sum target must lie in [1, sum of values]");
    }
    std::size_t n = values.size();
    std::size_t top = n;
    std::size_t bot = n + 1;
    MdpModel m;
    for (std::size_t i = 0; i < n; ++i) {
        m.state_names.push_back("i" + std::to_string(i + 1));
    }
    m.state_names.push_back("top");
    m.state_names.push_back("bot");
    m.action_names.push_back("go");
    std::vector<Rat> e((n + 2) * (n + 2), Rat(0));
    Rat half(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        e[i * (n + 2) + top] = half;
        e[i * (n + 2) + bot] = half;
    }
    e[top * (n + 2) + top] = 1;
    e[bot * (n + 2) + bot] = 1;
    m.matrices.emplace_back(n + 2, std::move(e));

    std::vector<Rat> init(n + 2, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        init[i] = ratio(mpz_class(static_cast<unsigned long>(values[i])), total);
    }
    std::vector<Rat> goal(n + 2, Rat(0));
    goal[top] = ratio(mpz_class(static_cast<unsigned long>(target_sum)), total);
    goal[bot] = 1 - goal[top];
    mpz_class pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>(n);
    return SubsetSumInstance{std::move(m), Configuration(std::move(init)),
                             TargetSet::explicit_configs({Configuration(std::move(goal))}), ratio(mpz_class(1), pow2)};
}

}  // namespace confmc
