#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "confmc/dist.hpp"
#include "confmc/rational.hpp"

namespace confmc {

using StateId = std::size_t;
using ActionId = std::size_t;

/// Dense vector in [0,1]^n. Antichain elements and LP variables live here.
class Vec01 {
   public:
    Vec01() = default;
    explicit Vec01(std::vector<Rat> entries);

    static Vec01 zeros(std::size_t n) { return Vec01(std::vector<Rat>(n, Rat(0))); }

    std::size_t size() const { return entries_.size(); }
    Rat const& operator[](std::size_t i) const { return entries_[i]; }
    std::vector<Rat> const& entries() const { return entries_; }
    Rat sum() const;

    friend bool operator==(Vec01 const& a, Vec01 const& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(Vec01 const& a, Vec01 const& b) { return !(a == b); }
    friend bool operator<(Vec01 const& a, Vec01 const& b) { return a.entries_ < b.entries_; }

   private:
    std::vector<Rat> entries_;
};

/// A distribution over states, stored densely. Entries sum to exactly 1.
class Configuration {
   public:
    Configuration() = default;
    explicit Configuration(std::vector<Rat> weights);

    static Configuration dirac(std::size_t n, StateId q);
    static Configuration from_dist(std::size_t n, Dist<StateId> const& d);

    std::size_t size() const { return weights_.size(); }
    Rat const& operator[](StateId q) const { return weights_[q]; }
    std::vector<Rat> const& weights() const { return weights_; }

    Dist<StateId> to_dist() const;
    Vec01 as_vec01() const { return Vec01(weights_); }
    bool is_dirac() const;

    friend bool operator==(Configuration const& a, Configuration const& b) { return a.weights_ == b.weights_; }
    friend bool operator!=(Configuration const& a, Configuration const& b) { return !(a == b); }
    friend bool operator<(Configuration const& a, Configuration const& b) { return a.weights_ < b.weights_; }

   private:
    std::vector<Rat> weights_;
};

/// Row-major square matrix; row i is the successor distribution of state i.
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t n, std::vector<Rat> entries);

    static Matrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    Rat const& operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
    std::span<Rat const> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

    /// M^T x, i.e. (M^T x)_j = sum_i M(i,j) x_i.
    std::vector<Rat> transpose_apply(std::span<Rat const> x) const;

    friend bool operator==(Matrix const& a, Matrix const& b) { return a.n_ == b.n_ && a.entries_ == b.entries_; }

   private:
    std::size_t n_ = 0;
    std::vector<Rat> entries_;
};

struct MdpModel {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<Matrix> matrices;  // indexed by ActionId

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }

    Dist<StateId> successor(StateId q, ActionId a) const;
    Configuration step(Configuration const& d, ActionId a) const;

    std::optional<StateId> find_state(std::string const& name) const;
    std::optional<ActionId> find_action(std::string const& name) const;

    friend bool operator==(MdpModel const&, MdpModel const&) = default;
};

/// Throws NotStochastic naming the first offending (action, row).
void mdp_validate(MdpModel const& m);

/// Componentwise order; throws DimensionMismatch on unequal lengths.
bool leq(Vec01 const& x, Vec01 const& y);
bool leq(std::span<Rat const> x, std::span<Rat const> y);

/// The product coupling d (x) e.
Dist<std::pair<StateId, ActionId>> couple(Configuration const& d, Dist<ActionId> const& e);

std::string to_string(std::span<Rat const> v);
inline std::string to_string(Configuration const& d) { return to_string(d.weights()); }
inline std::string to_string(Vec01 const& v) { return to_string(v.entries()); }

}  // namespace confmc
