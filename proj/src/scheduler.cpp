#include "confmc/scheduler.hpp"

#include "confmc/error.hpp"

namespace confmc {

namespace {

Rat affine(std::span<Rat const> coeffs, std::span<Rat const> d) {
    if (coeffs.size() != d.size() + 1) {
        fail(ErrorKind::DimensionMismatch, "scheduler coefficients do not match the number of states");
    }
    Rat v = coeffs[0];
    for (std::size_t q = 0; q < d.size(); ++q) {
        v += coeffs[q + 1] * d[q];
    }
    return v;
}

bool history_starts_with(std::span<Configuration const> history, std::vector<Configuration> const& prefix) {
    if (prefix.size() > history.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (history[i] != prefix[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

Rat LinearFractional::numerator(ActionId a, std::span<Rat const> d) const { return affine(theta.at(a), d); }

Rat LinearFractional::denominator(std::span<Rat const> d) const { return affine(s, d); }

bool Scheduler::memoryless() const {
    return std::holds_alternative<ConstantMixed>(v_) || std::holds_alternative<LinearFractional>(v_);
}

Dist<ActionId> Scheduler::eval(std::span<Configuration const> history) const {
    if (history.empty()) {
        fail(ErrorKind::InvalidInput, "scheduler evaluated on an empty history");
    }
    struct Visitor {
        std::span<Configuration const> history;

        Dist<ActionId> operator()(ConstantMixed const& c) const { return c.weights; }

        Dist<ActionId> operator()(ActionWord const& w) const {
            std::size_t k = history.size() - 1;
            return Dist<ActionId>::dirac(k < w.word.size() ? w.word[k] : w.fallback);
        }

        Dist<ActionId> operator()(LinearFractional const& lf) const {
            auto const& d = history.back().weights();
            Rat den = lf.denominator(d);
            if (den < 1) {
                fail(ErrorKind::InvalidScheduler, "linear-fractional denominator " + to_string(den) + " < 1 at " +
                                                      to_string(history.back()));
            }
            Dist<ActionId>::Map m;
            for (ActionId a = 0; a < lf.theta.size(); ++a) {
                Rat num = lf.numerator(a, d);
                if (num < 0) {
                    fail(ErrorKind::InvalidScheduler, "linear-fractional numerator of action " + std::to_string(a) +
                                                          " is negative at " + to_string(history.back()));
                }
                m.emplace(a, num / den);
            }
            try {
                return Dist<ActionId>::from_map(std::move(m));
            } catch (Error const& e) {
                fail(ErrorKind::InvalidScheduler, std::string("linear-fractional scheduler: ") + e.what());
            }
        }

        Dist<ActionId> operator()(HistoryTable const& t) const {
            HistoryTable::Entry const* best = nullptr;
            for (auto const& e : t.entries) {
                if (history_starts_with(history, e.prefix) && (!best || e.prefix.size() > best->prefix.size())) {
                    best = &e;
                }
            }
            return best ? best->weights : t.fallback;
        }
    };
    return std::visit(Visitor{history}, v_);
}

void Scheduler::validate(std::size_t num_states, std::size_t num_actions) const {
    if (auto const* w = std::get_if<ActionWord>(&v_)) {
        for (auto a : w->word) {
            if (a >= num_actions) {
                fail(ErrorKind::InvalidScheduler, "action word refers to an unknown action");
            }
        }
        if (w->fallback >= num_actions) {
            fail(ErrorKind::InvalidScheduler, "action word fallback refers to an unknown action");
        }
        return;
    }
    auto check_dist = [&](Dist<ActionId> const& d) {
        for (auto const& [a, p] : d) {
            if (a >= num_actions) {
                fail(ErrorKind::InvalidScheduler, "scheduler refers to an unknown action");
            }
        }
    };
    if (auto const* c = std::get_if<ConstantMixed>(&v_)) {
        check_dist(c->weights);
        return;
    }
    if (auto const* t = std::get_if<HistoryTable>(&v_)) {
        for (auto const& e : t->entries) {
            check_dist(e.weights);
        }
        check_dist(t->fallback);
        return;
    }
    auto const& lf = std::get<LinearFractional>(v_);
    if (lf.theta.size() != num_actions || lf.s.size() != num_states + 1) {
        fail(ErrorKind::InvalidScheduler, "linear-fractional scheduler has the wrong shape");
    }
    // Affine functions on the simplex attain their extrema at the vertices.
    for (StateId q = 0; q < num_states; ++q) {
        auto vertex = Configuration::dirac(num_states, q);
        Rat den = lf.denominator(vertex.weights());
        if (den < 1) {
            fail(ErrorKind::InvalidScheduler, "denominator below 1 at vertex " + std::to_string(q));
        }
        Rat sum = 0;
        for (ActionId a = 0; a < num_actions; ++a) {
            Rat num = lf.numerator(a, vertex.weights());
            if (num < 0) {
                fail(ErrorKind::InvalidScheduler, "negative numerator at vertex " + std::to_string(q));
            }
            sum += num;
        }
        if (sum != den) {
            fail(ErrorKind::InvalidScheduler, "numerators do not sum to the denominator at vertex " +
                                                  std::to_string(q));
        }
    }
}

}  // namespace confmc
