#include "confmc/target.hpp"

#include "confmc/error.hpp"

namespace confmc {

namespace {

template <typename Below>
std::vector<Vec01> extremal(std::vector<Vec01> const& xs, Below below) {
    std::vector<Vec01> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < xs.size() && !dominated; ++j) {
            if (i == j) {
                continue;
            }
            // Strictly dominated, or an equal copy that appears earlier.
            if (below(xs[j], xs[i]) && (xs[j] != xs[i] || j < i)) {
                dominated = true;
            }
        }
        if (!dominated) {
            out.push_back(xs[i]);
        }
    }
    return out;
}

void check_dims(std::vector<Vec01> const& gs) {
    for (auto const& g : gs) {
        if (g.size() != gs.front().size()) {
            fail(ErrorKind::DimensionMismatch, "target generators have different lengths");
        }
    }
}

}  // namespace

std::vector<Vec01> minimal_elements(std::vector<Vec01> const& xs) {
    return extremal(xs, [](Vec01 const& a, Vec01 const& b) { return leq(a, b); });
}

std::vector<Vec01> maximal_elements(std::vector<Vec01> const& xs) {
    return extremal(xs, [](Vec01 const& a, Vec01 const& b) { return leq(b, a); });
}

TargetSet TargetSet::upward(std::vector<Vec01> generators) {
    if (generators.empty()) {
        fail(ErrorKind::InvalidInput, "upward target needs at least one generator");
    }
    check_dims(generators);
    return TargetSet(UpwardGenerators{minimal_elements(generators)});
}

TargetSet TargetSet::downward(std::vector<Vec01> generators) {
    if (generators.empty()) {
        fail(ErrorKind::InvalidInput, "downward target needs at least one generator");
    }
    check_dims(generators);
    return TargetSet(DownwardGenerators{maximal_elements(generators)});
}

TargetSet TargetSet::explicit_configs(std::vector<Configuration> configs) {
    if (configs.empty()) {
        fail(ErrorKind::InvalidInput, "explicit target needs at least one configuration");
    }
    for (auto const& c : configs) {
        if (c.size() != configs.front().size()) {
            fail(ErrorKind::DimensionMismatch, "target configurations have different lengths");
        }
    }
    return TargetSet(ExplicitConfigs{{configs.begin(), configs.end()}});
}

TargetSet TargetSet::linear(std::vector<Rat> alpha, Rat bound, bool strict) {
    return TargetSet(LinearThreshold{std::move(alpha), std::move(bound), strict});
}

std::vector<Vec01> const& TargetSet::generators() const {
    static std::vector<Vec01> const none;
    if (auto const* u = std::get_if<UpwardGenerators>(&v_)) {
        return u->generators;
    }
    if (auto const* d = std::get_if<DownwardGenerators>(&v_)) {
        return d->generators;
    }
    return none;
}

std::size_t TargetSet::dimension() const {
    if (is_monotone()) {
        return generators().front().size();
    }
    if (auto const* e = std::get_if<ExplicitConfigs>(&v_)) {
        return e->configs.begin()->size();
    }
    return std::get<LinearThreshold>(v_).alpha.size();
}

bool TargetSet::contains(std::span<Rat const> d) const {
    if (d.size() != dimension()) {
        fail(ErrorKind::DimensionMismatch, "configuration has length " + std::to_string(d.size()) +
                                               ", target expects " + std::to_string(dimension()));
    }
    if (auto const* u = std::get_if<UpwardGenerators>(&v_)) {
        for (auto const& g : u->generators) {
            if (leq(g.entries(), d)) {
                return true;
            }
        }
        return false;
    }
    if (auto const* dn = std::get_if<DownwardGenerators>(&v_)) {
        for (auto const& g : dn->generators) {
            if (leq(d, g.entries())) {
                return true;
            }
        }
        return false;
    }
    if (auto const* e = std::get_if<ExplicitConfigs>(&v_)) {
        return e->configs.count(Configuration(std::vector<Rat>(d.begin(), d.end()))) != 0;
    }
    auto const& lt = std::get<LinearThreshold>(v_);
    Rat dot = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        dot += lt.alpha[i] * d[i];
    }
    return lt.strict ? dot > lt.bound : dot >= lt.bound;
}

bool TargetSet::contains(Configuration const& d) const { return contains(std::span<Rat const>(d.weights())); }

}  // namespace confmc
