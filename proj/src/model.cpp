#include "confmc/model.hpp"

#include <sstream>

#include "confmc/error.hpp"

namespace confmc {

Vec01::Vec01(std::vector<Rat> entries) : entries_(std::move(entries)) {
    for (auto const& e : entries_) {
        if (!is_probability(e)) {
            fail(ErrorKind::InvalidInput, "vector entry " + to_string(e) + " is outside [0,1]");
        }
    }
}

Rat Vec01::sum() const {
    Rat s = 0;
    for (auto const& e : entries_) {
        s += e;
    }
    return s;
}

Configuration::Configuration(std::vector<Rat> weights) : weights_(std::move(weights)) {
    Rat total = 0;
    for (auto const& w : weights_) {
        if (w < 0) {
            fail(ErrorKind::NegativeWeight, "configuration weight " + to_string(w) + " is negative");
        }
        total += w;
    }
    if (total != 1) {
        fail(ErrorKind::NotNormalized, "configuration sums to " + to_string(total));
    }
}

Configuration Configuration::dirac(std::size_t n, StateId q) {
    std::vector<Rat> w(n, Rat(0));
    w.at(q) = 1;
    return Configuration(std::move(w));
}

Configuration Configuration::from_dist(std::size_t n, Dist<StateId> const& d) {
    std::vector<Rat> w(n, Rat(0));
    for (auto const& [q, p] : d) {
        w.at(q) = p;
    }
    return Configuration(std::move(w));
}

Dist<StateId> Configuration::to_dist() const {
    Dist<StateId>::Map m;
    for (StateId q = 0; q < weights_.size(); ++q) {
        if (weights_[q] != 0) {
            m.emplace(q, weights_[q]);
        }
    }
    return Dist<StateId>::from_map(std::move(m));
}

bool Configuration::is_dirac() const {
    for (auto const& w : weights_) {
        if (w == 1) {
            return true;
        }
    }
    return false;
}

Matrix::Matrix(std::size_t n, std::vector<Rat> entries) : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n * n) {
        fail(ErrorKind::DimensionMismatch, "matrix of dimension " + std::to_string(n) + " needs " +
                                               std::to_string(n * n) + " entries");
    }
}

Matrix Matrix::identity(std::size_t n) {
    std::vector<Rat> e(n * n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        e[i * n + i] = 1;
    }
    return Matrix(n, std::move(e));
}

std::vector<Rat> Matrix::transpose_apply(std::span<Rat const> x) const {
    if (x.size() != n_) {
        fail(ErrorKind::DimensionMismatch, "vector length does not match matrix dimension");
    }
    std::vector<Rat> out(n_, Rat(0));
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            out[j] += (*this)(i, j) * x[i];
        }
    }
    return out;
}

Dist<StateId> MdpModel::successor(StateId q, ActionId a) const {
    Dist<StateId>::Map m;
    auto row = matrices.at(a).row(q);
    for (StateId j = 0; j < row.size(); ++j) {
        if (row[j] != 0) {
            m.emplace(j, row[j]);
        }
    }
    return Dist<StateId>::from_map(std::move(m));
}

Configuration MdpModel::step(Configuration const& d, ActionId a) const {
    return Configuration(matrices.at(a).transpose_apply(d.weights()));
}

std::optional<StateId> MdpModel::find_state(std::string const& name) const {
    for (StateId i = 0; i < state_names.size(); ++i) {
        if (state_names[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<ActionId> MdpModel::find_action(std::string const& name) const {
    for (ActionId i = 0; i < action_names.size(); ++i) {
        if (action_names[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

void mdp_validate(MdpModel const& m) {
    std::size_t n = m.num_states();
    if (n == 0) {
        fail(ErrorKind::InvalidInput, "model has no states");
    }
    if (m.num_actions() == 0) {
        fail(ErrorKind::InvalidInput, "model has no actions");
    }
    if (m.matrices.size() != m.num_actions()) {
        fail(ErrorKind::InvalidInput, "one matrix per action is required");
    }
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        if (m.matrices[a].dim() != n) {
            fail(ErrorKind::DimensionMismatch, "matrix of action '" + m.action_names[a] + "' has wrong dimension");
        }
        for (StateId i = 0; i < n; ++i) {
            Rat sum = 0;
            bool in_range = true;
            for (auto const& p : m.matrices[a].row(i)) {
                in_range = in_range && is_probability(p);
                sum += p;
            }
            if (!in_range || sum != 1) {
                fail(ErrorKind::NotStochastic, "action '" + m.action_names[a] + "' row " + std::to_string(i) +
                                                   " (" + m.state_names[i] + ") sums to " + to_string(sum) +
                                                   (in_range ? "" : " with entries outside [0,1]"));
            }
        }
    }
}

bool leq(std::span<Rat const> x, std::span<Rat const> y) {
    if (x.size() != y.size()) {
        fail(ErrorKind::DimensionMismatch,
             "comparing vectors of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > y[i]) {
            return false;
        }
    }
    return true;
}

bool leq(Vec01 const& x, Vec01 const& y) { return leq(x.entries(), y.entries()); }

Dist<std::pair<StateId, ActionId>> couple(Configuration const& d, Dist<ActionId> const& e) {
    Dist<std::pair<StateId, ActionId>>::Map m;
    for (StateId q = 0; q < d.size(); ++q) {
        if (d[q] == 0) {
            continue;
        }
        for (auto const& [a, p] : e) {
            m.emplace(std::pair{q, a}, d[q] * p);
        }
    }
    return Dist<std::pair<StateId, ActionId>>::from_map(std::move(m));
}

std::string to_string(std::span<Rat const> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << to_string(v[i]);
    }
    os << ')';
    return os.str();
}

}  // namespace confmc
