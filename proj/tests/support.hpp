#pragma once

// Random instances shared by the suites. Everything is seeded so failures reproduce.

#include <cstdint>
#include <random>
#include <vector>

#include "confmc/dist.hpp"
#include "confmc/model.hpp"
#include "confmc/scheduler.hpp"

namespace confmc::testing {

using Rng = std::mt19937_64;

inline Rat rand_weight(Rng& rng, int hi = 9) {
    return make_rat(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi + 1)));
}

/// Random point of the simplex with small denominators; `zeros` allows empty entries.
inline std::vector<Rat> rand_simplex(Rng& rng, std::size_t n, bool zeros = true) {
    std::vector<Rat> w(n);
    Rat total = 0;
    for (auto& x : w) {
        x = zeros ? rand_weight(rng) : rand_weight(rng) + 1;
        total += x;
    }
    if (total == 0) {
        w[rng() % n] = 1;
        total = 1;
    }
    for (auto& x : w) {
        x /= total;
    }
    return w;
}

inline Configuration rand_config(Rng& rng, std::size_t n) { return Configuration(rand_simplex(rng, n)); }

inline Matrix rand_stochastic(Rng& rng, std::size_t n) {
    std::vector<Rat> e;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = rand_simplex(rng, n);
        e.insert(e.end(), row.begin(), row.end());
    }
    return Matrix(n, std::move(e));
}

inline MdpModel rand_mdp(Rng& rng, std::size_t n, std::size_t k) {
    MdpModel m;
    for (std::size_t q = 0; q < n; ++q) {
        m.state_names.push_back("q" + std::to_string(q));
    }
    for (std::size_t a = 0; a < k; ++a) {
        m.action_names.push_back(std::string(1, static_cast<char>('a' + a)));
        m.matrices.push_back(rand_stochastic(rng, n));
    }
    return m;
}

inline Dist<ActionId> rand_action_dist(Rng& rng, std::size_t k) {
    auto w = rand_simplex(rng, k);
    Dist<ActionId>::Map map;
    for (ActionId a = 0; a < k; ++a) {
        map[a] = w[a];
    }
    return Dist<ActionId>::from_map(std::move(map));
}

/// Small Dist<int> over {0..span-1}.
inline Dist<int> rand_int_dist(Rng& rng, int span) {
    auto w = rand_simplex(rng, static_cast<std::size_t>(span));
    Dist<int>::Map map;
    for (int i = 0; i < span; ++i) {
        map[i] = w[static_cast<std::size_t>(i)];
    }
    return Dist<int>::from_map(std::move(map));
}

inline Mixture<Dist<int>> rand_nested(Rng& rng, std::size_t outer, int span) {
    auto w = rand_simplex(rng, outer, false);
    std::vector<Mixture<Dist<int>>::Component> parts;
    for (std::size_t i = 0; i < outer; ++i) {
        parts.push_back({w[i], rand_int_dist(rng, span)});
    }
    return Mixture<Dist<int>>::make(std::move(parts));
}

inline Vec01 rand_vec01(Rng& rng, std::size_t n, int den = 4) {
    std::vector<Rat> v(n);
    for (auto& x : v) {
        x = make_rat(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den + 1)), den);
    }
    return Vec01(std::move(v));
}

}  // namespace confmc::testing
