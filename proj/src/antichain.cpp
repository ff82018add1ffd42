#include "confmc/antichain.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>

#include "confmc/error.hpp"

namespace confmc {

bool Antichain::below(Vec01 const& a, Vec01 const& b) const {
    return kind_ == Kind::Floor ? leq(b, a) : leq(a, b);
}

bool Antichain::covers(Vec01 const& x) const {
    return std::any_of(elements_.begin(), elements_.end(), [&](Vec01 const& e) { return below(x, e); });
}

bool Antichain::insert(Vec01 x, std::size_t tag) {
    if (covers(x)) {
        return false;
    }
    std::size_t keep = 0;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (below(elements_[i], x)) {
            continue;
        }
        if (keep != i) {
            elements_[keep] = std::move(elements_[i]);
            tags_[keep] = tags_[i];
        }
        ++keep;
    }
    elements_.resize(keep);
    tags_.resize(keep);
    elements_.push_back(std::move(x));
    tags_.push_back(tag);
    return true;
}

bool Antichain::is_antichain() const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (std::size_t j = 0; j < elements_.size(); ++j) {
            if (i != j && leq(elements_[i], elements_[j])) {
                return false;
            }
        }
    }
    return true;
}

bool Antichain::same_elements(Antichain const& other) const {
    auto a = elements_;
    auto b = other.elements_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Antichain antichain_floor_insert(Antichain a, Vec01 x) {
    if (a.kind() != Antichain::Kind::Floor) {
        fail(ErrorKind::InvalidInput, "floor insert on a top antichain");
    }
    a.insert(std::move(x));
    return a;
}

Antichain antichain_top_insert(Antichain a, Vec01 x) {
    if (a.kind() != Antichain::Kind::Top) {
        fail(ErrorKind::InvalidInput, "top insert on a floor antichain");
    }
    a.insert(std::move(x));
    return a;
}

char const* to_string(ReachOutcome::Tag t) {
    switch (t) {
        case ReachOutcome::Tag::Reachable: return "reachable";
        case ReachOutcome::Tag::Stabilized: return "stabilized";
        case ReachOutcome::Tag::LoopLimit: return "loop-limit";
    }
    return "?";
}

Configuration replay(MdpModel const& m, Configuration const& d0, std::vector<ActionId> const& word) {
    Configuration d = d0;
    for (ActionId a : word) {
        d = m.step(d, a);
    }
    return d;
}

namespace {

struct PullbackRun {
    std::vector<Vec01> ys;
    std::size_t lp_calls = 0;
};

PullbackRun pullback(Matrix const& m, Vec01 const& x, PullbackOptions const& opt, lp::Backend& backend,
                     bool upward) {
    std::size_t n = m.dim();
    if (x.size() != n) {
        fail(ErrorKind::DimensionMismatch, "pullback target has length " + std::to_string(x.size()) +
                                               ", matrix has dimension " + std::to_string(n));
    }
    if (opt.K == 0 || opt.L == 0) {
        fail(ErrorKind::InvalidInput, "pullback needs K >= 1 and L >= 1");
    }

    lp::Problem base(n);
    base.maximize = !upward;
    std::fill(base.objective.begin(), base.objective.end(), Rat(1));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rat> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = m(i, j);
        }
        base.add_row(std::move(col), upward ? lp::Sense::GreaterEq : lp::Sense::LessEq, x[j]);
    }
    if (upward) {
        base.add_row(std::vector<Rat>(n, Rat(1)), lp::Sense::LessEq, Rat(1));
    } else {
        base.upper.assign(n, Rat(1));
    }

    auto accept = [&](std::vector<Rat> const& y) {
        for (auto const& v : y) {
            if (v < 0 || v > 1) {
                return false;
            }
        }
        auto img = m.transpose_apply(y);
        return upward ? leq(x.entries(), img) : leq(img, x.entries());
    };

    std::mt19937_64 rng(opt.seed);
    PullbackRun run;
    std::vector<std::vector<Rat>> found;
    for (std::size_t k = 0; k < opt.K && found.size() == k; ++k) {
        for (std::size_t attempt = 0; attempt < opt.L; ++attempt) {
            // Stage one pushes the guessed coordinates of the earlier
            // solutions as far as they go (at least epsilon past them); stage
            // two optimizes 1.y with that level held. Any y' strictly below
            // the stage-two optimum would beat it in stage two, so the result
            // stays a minimal element, and on a continuum floor it lands on
            // the far vertex instead of an epsilon-neighbour.
            lp::Problem p = base;
            std::vector<Rat> guessed(n, Rat(0));
            for (auto const& prior : found) {
                // Only coordinates that can still move strictly are sampled;
                // the others would make the LP infeasible outright.
                std::vector<std::size_t> movable;
                for (std::size_t i = 0; i < n; ++i) {
                    if (upward ? prior[i] > 0 : prior[i] < 1) {
                        movable.push_back(i);
                    }
                }
                if (movable.empty()) {
                    movable.resize(n);
                    std::iota(movable.begin(), movable.end(), std::size_t{0});
                }
                std::size_t q = movable[static_cast<std::size_t>(rng() % movable.size())];
                std::vector<Rat> e(n, Rat(0));
                e[q] = 1;
                guessed[q] += 1;
                if (upward) {
                    p.add_row(std::move(e), lp::Sense::LessEq, prior[q] - opt.epsilon);
                } else {
                    p.add_row(std::move(e), lp::Sense::GreaterEq, prior[q] + opt.epsilon);
                }
            }
            lp::Result r;
            if (!found.empty()) {
                lp::Problem push = p;
                push.objective = guessed;
                ++run.lp_calls;
                r = backend.solve(push);
                if (r.status == lp::Status::Optimal) {
                    p.add_row(guessed, upward ? lp::Sense::LessEq : lp::Sense::GreaterEq, r.objective);
                }
            }
            if (found.empty() || r.status == lp::Status::Optimal) {
                ++run.lp_calls;
                r = backend.solve(p);
            }
            if (r.status == lp::Status::Unbounded || r.status == lp::Status::NumericalFailure) {
                fail(ErrorKind::BackendFailure,
                     "LP backend " + backend.name() + " returned " + lp::to_string(r.status));
            }
            if (r.status == lp::Status::Infeasible) {
                if (found.empty()) {
                    return run;  // the pullback misses the feasible region entirely
                }
                continue;
            }
            if (!accept(r.x)) {
                continue;
            }
            found.push_back(std::move(r.x));
            break;
        }
    }
    Antichain ac(upward ? Antichain::Kind::Floor : Antichain::Kind::Top);
    for (auto& y : found) {
        ac.insert(Vec01(std::move(y)));
    }
    run.ys = ac.elements();
    return run;
}

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t action, std::uint64_t node) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (action + 1)) ^ (0xc2b2ae3d27d4eb4fULL * (node + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Node {
    Vec01 value;
    std::optional<ActionId> action;  // empty for generators of H
    std::size_t parent = 0;
};

std::vector<ActionId> word_of(std::vector<Node> const& nodes, std::size_t id) {
    std::vector<ActionId> w;
    while (nodes[id].action) {
        w.push_back(*nodes[id].action);
        id = nodes[id].parent;
    }
    return w;
}

ReachOutcome run_backward(MdpModel const& m, Configuration const& d0, TargetSet const& h,
                          BackwardOptions const& opt, lp::Backend* backend, bool upward) {
    std::size_t n = m.num_states();
    if (d0.size() != n) {
        fail(ErrorKind::DimensionMismatch, "initial configuration has length " + std::to_string(d0.size()) +
                                               ", model has " + std::to_string(n) + " states");
    }
    for (auto const& g : h.generators()) {
        if (g.size() != n) {
            fail(ErrorKind::DimensionMismatch, "target generator length differs from the state count");
        }
    }
    std::unique_ptr<lp::Backend> owned;
    if (!backend) {
        owned = lp::make_default_backend();
        backend = owned.get();
    }
    auto kind = upward ? Antichain::Kind::Floor : Antichain::Kind::Top;

    std::vector<Node> nodes;
    std::map<Vec01, std::size_t> node_of;
    auto node_for = [&](Vec01 const& v, std::optional<ActionId> a, std::size_t parent) {
        auto [it, inserted] = node_of.emplace(v, nodes.size());
        if (inserted) {
            nodes.push_back({v, a, parent});
        }
        return it->second;
    };

    Antichain target_floor(kind);
    for (auto const& g : h.generators()) {
        target_floor.insert(g, node_for(g, std::nullopt, 0));
    }

    ReachOutcome out;
    Vec01 start = d0.as_vec01();
    auto finish = [&](Antichain const& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            out.frontier.push_back({s.elements()[i], word_of(nodes, s.tags()[i])});
        }
        return out;
    };
    auto try_reach = [&](Antichain const& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            Vec01 const& e = s.elements()[i];
            if (upward ? leq(e, start) : leq(start, e)) {
                out.tag = ReachOutcome::Tag::Reachable;
                out.witness = word_of(nodes, s.tags()[i]);
                if (!h.contains(replay(m, d0, out.witness))) {
                    fail(ErrorKind::WitnessReplayFailed, "witness of length " + std::to_string(out.witness.size()) +
                                                             " does not replay into the target");
                }
                return true;
            }
        }
        return false;
    };

    Antichain s = target_floor;
    if (try_reach(s)) {
        return finish(s);
    }

    std::map<std::pair<ActionId, Vec01>, std::vector<Vec01>> memo;
    bool parallel = opt.parallel && backend->reentrant();
    PullbackOptions popt{opt.K, opt.L, 0, opt.epsilon};

    for (std::size_t iter = 1; iter <= opt.loop_limit; ++iter) {
        out.iterations = iter;
        struct Task {
            ActionId action;
            std::size_t node;
            std::vector<Vec01> result;
            std::size_t calls = 0;
        };
        std::vector<Task> tasks;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                if (!memo.count({a, s.elements()[i]})) {
                    tasks.push_back({a, s.tags()[i], {}, 0});
                }
            }
        }
        std::vector<std::exception_ptr> errors(tasks.size());
        auto run_task = [&](std::size_t t) {
            try {
                PullbackOptions local = popt;
                local.seed = task_seed(opt.seed, tasks[t].action, tasks[t].node);
                auto r = pullback(m.matrices[tasks[t].action], nodes[tasks[t].node].value, local, *backend, upward);
                tasks[t].result = std::move(r.ys);
                tasks[t].calls = r.lp_calls;
            } catch (...) {
                errors[t] = std::current_exception();
            }
        };
        if (parallel && tasks.size() > 1) {
            long count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
            for (long t = 0; t < count; ++t) {
                run_task(static_cast<std::size_t>(t));
            }
        } else {
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                run_task(t);
            }
        }
        for (auto const& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
        for (auto& t : tasks) {
            out.lp_calls += t.calls;
            memo.emplace(std::pair{t.action, nodes[t.node].value}, std::move(t.result));
        }

        Antichain next = target_floor;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                for (auto const& y : memo.at({a, s.elements()[i]})) {
                    if (!next.covers(y)) {
                        next.insert(y, node_for(y, a, s.tags()[i]));
                    }
                }
            }
        }
        if (try_reach(next)) {
            return finish(next);
        }
        if (next.same_elements(s)) {
            out.tag = ReachOutcome::Tag::Stabilized;
            return finish(next);
        }
        s = std::move(next);
    }
    out.tag = ReachOutcome::Tag::LoopLimit;
    return finish(s);
}

}  // namespace

std::vector<Vec01> pullback_minimals(Matrix const& m, Vec01 const& x, PullbackOptions const& opt,
                                     lp::Backend& backend) {
    return pullback(m, x, opt, backend, true).ys;
}

std::vector<Vec01> pullback_maximals(Matrix const& m, Vec01 const& x, PullbackOptions const& opt,
                                     lp::Backend& backend) {
    return pullback(m, x, opt, backend, false).ys;
}

ReachOutcome backward_reach(MdpModel const& m, Configuration const& d0, TargetSet const& h,
                            BackwardOptions const& opt, lp::Backend* backend) {
    if (h.is_downward()) {
        return dual_backward_reach(m, d0, h, opt, backend);
    }
    if (!h.is_upward()) {
        fail(ErrorKind::InvalidInput, "backward reachability needs an upward- or downward-closed target");
    }
    return run_backward(m, d0, h, opt, backend, true);
}

ReachOutcome dual_backward_reach(MdpModel const& m, Configuration const& d0, TargetSet const& h,
                                 BackwardOptions const& opt, lp::Backend* backend) {
    if (!h.is_downward()) {
        fail(ErrorKind::InvalidInput, "dual backward reachability needs a downward-closed target");
    }
    return run_backward(m, d0, h, opt, backend, false);
}

}  // namespace confmc
