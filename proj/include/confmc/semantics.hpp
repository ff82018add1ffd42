#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "confmc/dist.hpp"
#include "confmc/model.hpp"
#include "confmc/operators.hpp"
#include "confmc/scheduler.hpp"

namespace confmc {

/// Which probability sources are chance-interpreted (C) or mass-interpreted (M):
/// scheduler (S) and transitions (T).
enum class SemanticsId { CSCT, CSMT, MSCT, MSMT };

std::string_view to_string(SemanticsId s);
std::optional<SemanticsId> parse_semantics(std::string_view text);
inline constexpr SemanticsId kAllSemantics[] = {SemanticsId::CSCT, SemanticsId::CSMT, SemanticsId::MSCT,
                                                SemanticsId::MSMT};

/// Scheduler branch -> configuration mass -> transition target.
/// The two outer layers are indexed (by action and by state respectively).
using PreConfiguration = Mixture<Mixture<Dist<StateId>>>;

/// Distribution over successor configurations.
using ConfigStepResult = Dist<Configuration>;

/// sum_a sigma(h)(a) | sum_q d_k(q) |delta(q,a)> >, d_k the last configuration.
PreConfiguration delta_sigma(MdpModel const& m, Scheduler const& sigma, std::span<Configuration const> history);

/// Apply the chance/mass classifier built from eta/mu/lambda.
ConfigStepResult classify(SemanticsId s, PreConfiguration const& t, std::size_t num_states,
                          std::size_t cap = kDefaultBranchCap);

/// classify(s, delta_sigma(m, sigma, history)).
ConfigStepResult config_step(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                             std::span<Configuration const> history, std::size_t cap = kDefaultBranchCap);

inline ConfigStepResult config_step(MdpModel const& m, Scheduler const& sigma, SemanticsId s,
                                    Configuration const& d, std::size_t cap = kDefaultBranchCap) {
    return config_step(m, sigma, s, std::span<Configuration const>(&d, 1), cap);
}

/// Independent second route: the explicit per-semantics transition formulas
/// written directly against d, sigma(d), and the matrices.
ConfigStepResult config_step_closed_form(MdpModel const& m, Dist<ActionId> const& action_weights,
                                         Configuration const& d, SemanticsId s,
                                         std::size_t cap = kDefaultBranchCap);

/// sum_a sigma(d)(a) M_a^T d, the one-step mass-transformer image.
Configuration mean_successor(MdpModel const& m, Dist<ActionId> const& action_weights, Configuration const& d);

}  // namespace confmc
