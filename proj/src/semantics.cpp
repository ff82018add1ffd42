#include "confmc/semantics.hpp"

#include "confmc/error.hpp"

namespace confmc {

std::string_view to_string(SemanticsId s) {
    switch (s) {
        case SemanticsId::CSCT: return "csct";
        case SemanticsId::CSMT: return "csmt";
        case SemanticsId::MSCT: return "msct";
        case SemanticsId::MSMT: return "msmt";
    }
    return "?";
}

std::optional<SemanticsId> parse_semantics(std::string_view text) {
    for (auto s : kAllSemantics) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

PreConfiguration delta_sigma(MdpModel const& m, Scheduler const& sigma, std::span<Configuration const> history) {
    auto weights = sigma.eval(history);
    auto const& d = history.back();
    if (d.size() != m.num_states()) {
        fail(ErrorKind::DimensionMismatch, "configuration length does not match the model");
    }
    PreConfiguration t;
    for (auto const& [a, p] : weights) {
        if (a >= m.num_actions()) {
            fail(ErrorKind::InvalidScheduler, "scheduler chose unknown action " + std::to_string(a));
        }
        Mixture<Dist<StateId>> mid;
        for (StateId q = 0; q < d.size(); ++q) {
            if (d[q] != 0) {
                mid.components.push_back({d[q], m.successor(q, a)});
            }
        }
        t.components.push_back({p, std::move(mid)});
    }
    return t;
}

namespace {

ConfigStepResult to_configurations(Dist<Dist<StateId>> const& dd, std::size_t n) {
    return pushforward([n](Dist<StateId> const& d) { return Configuration::from_dist(n, d); }, dd);
}

}  // namespace

ConfigStepResult classify(SemanticsId s, PreConfiguration const& t, std::size_t n, std::size_t cap) {
    switch (s) {
        case SemanticsId::CSCT: {
            // mu . D(lambda)
            Mixture<Dist<Dist<StateId>>> swapped;
            for (auto const& c : t.components) {
                swapped.components.push_back({c.weight, lambda_op(c.value, cap)});
            }
            return to_configurations(mu(swapped), n);
        }
        case SemanticsId::MSCT: {
            // D(mu) . lambda . D(lambda)
            Mixture<Dist<Dist<StateId>>> swapped;
            for (auto const& c : t.components) {
                swapped.components.push_back({c.weight, lambda_op(c.value, cap)});
            }
            auto outer = lambda_op(swapped, cap);
            auto flat = pushforward([](Dist<Dist<StateId>> const& x) { return mu(x); }, outer);
            return to_configurations(flat, n);
        }
        case SemanticsId::CSMT: {
            // D(mu)
            auto flat = pushforward([](Mixture<Dist<StateId>> const& x) { return mu(x); }, t);
            return to_configurations(flat.merged(), n);
        }
        case SemanticsId::MSMT: {
            // eta . mu . mu
            Mixture<Dist<StateId>> once;
            for (auto const& c : t.components) {
                for (auto const& inner : c.value.components) {
                    once.components.push_back({c.weight * inner.weight, inner.value});
                }
            }
            return eta(Configuration::from_dist(n, mu(once)));
        }
    }
    fail(ErrorKind::InvalidInput, "unknown semantics");
}

ConfigStepResult config_step(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                             std::span<Configuration const> history, std::size_t cap) {
    return classify(s, delta_sigma(m, sigma, history), m.num_states(), cap);
}

Configuration mean_successor(MdpModel const& m, Dist<ActionId> const& action_weights, Configuration const& d) {
    std::vector<Rat> out(m.num_states(), Rat(0));
    for (auto const& [a, p] : action_weights) {
        auto image = m.matrices.at(a).transpose_apply(d.weights());
        for (StateId q = 0; q < out.size(); ++q) {
            out[q] += p * image[q];
        }
    }
    return Configuration(std::move(out));
}

namespace {

/// One independent chance event per "particle": particle k carries `mass[k]`
/// and lands in state j with probability row[k](j). Enumerates every joint
/// outcome f and adds prefactor * prod_k row[k](f(k)) to acc[sum_k mass[k] |f(k)>].
void enumerate_joint_outcomes(std::vector<Rat> const& mass, std::vector<std::span<Rat const>> const& rows,
                              Rat const& prefactor, std::size_t n, std::size_t cap,
                              std::map<Configuration, Rat>& acc) {
    std::vector<std::vector<StateId>> targets(rows.size());
    std::size_t branches = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (StateId j = 0; j < n; ++j) {
            if (rows[k][j] != 0) {
                targets[k].push_back(j);
            }
        }
        if (branches > cap / targets[k].size()) {
            fail(ErrorKind::BranchExplosion, "closed-form enumeration exceeds " + std::to_string(cap) + " branches");
        }
        branches *= targets[k].size();
    }
    std::vector<std::size_t> pick(rows.size(), 0);
    for (std::size_t b = 0; b < branches; ++b) {
        Rat weight = prefactor;
        std::vector<Rat> image(n, Rat(0));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            StateId j = targets[k][pick[k]];
            weight *= rows[k][j];
            image[j] += mass[k];
        }
        acc[Configuration(std::move(image))] += weight;
        for (std::size_t k = rows.size(); k-- > 0;) {
            if (++pick[k] < targets[k].size()) {
                break;
            }
            pick[k] = 0;
        }
    }
}

}  // namespace

ConfigStepResult config_step_closed_form(MdpModel const& m, Dist<ActionId> const& sigma_d, Configuration const& d,
                                         SemanticsId s, std::size_t cap) {
    std::size_t n = m.num_states();
    std::map<Configuration, Rat> acc;
    switch (s) {
        case SemanticsId::CSCT:
            // sum_a sigma(d)(a) sum_{f in Q^Q} prod_q delta(q,a)(f(q)) |Df(d)>
            for (auto const& [a, p] : sigma_d) {
                std::vector<Rat> mass;
                std::vector<std::span<Rat const>> rows;
                for (StateId q = 0; q < n; ++q) {
                    if (d[q] != 0) {
                        mass.push_back(d[q]);
                        rows.push_back(m.matrices.at(a).row(q));
                    }
                }
                enumerate_joint_outcomes(mass, rows, p, n, cap, acc);
            }
            break;
        case SemanticsId::MSCT: {
            // sum_{f in Q^{Q x Act}} prod_{(q,a)} delta(q,a)(f(q,a)) |Df(d (x) sigma(d))>
            std::vector<Rat> mass;
            std::vector<std::span<Rat const>> rows;
            for (StateId q = 0; q < n; ++q) {
                for (auto const& [a, p] : sigma_d) {
                    if (d[q] != 0) {
                        mass.push_back(d[q] * p);
                        rows.push_back(m.matrices.at(a).row(q));
                    }
                }
            }
            enumerate_joint_outcomes(mass, rows, Rat(1), n, cap, acc);
            break;
        }
        case SemanticsId::CSMT:
            for (auto const& [a, p] : sigma_d) {
                acc[m.step(d, a)] += p;
            }
            break;
        case SemanticsId::MSMT:
            acc[mean_successor(m, sigma_d, d)] += 1;
            break;
    }
    return ConfigStepResult::from_map(std::move(acc));
}

}  // namespace confmc
