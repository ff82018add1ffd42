#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "confmc/error.hpp"
#include "confmc/model.hpp"
#include "confmc/scheduler.hpp"
#include "confmc/semantics.hpp"
#include "confmc/target.hpp"

namespace confmc {

using Json = nlohmann::ordered_json;

/// Algorithm knobs a query may carry. Unset fields fall back to the command defaults.
struct QueryOptions {
    std::optional<std::size_t> K;
    std::optional<std::size_t> L;
    std::optional<std::size_t> loop_limit;
    std::optional<Rat> gamma;
    std::optional<std::size_t> degree;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> depth;
};

struct Query {
    Configuration initial;
    SemanticsId semantics = SemanticsId::MSCT;
    TargetSet target = TargetSet::linear({}, Rat(0), true);  // placeholder until parsed
    Rat threshold = 0;
    std::optional<Scheduler> scheduler;
    QueryOptions options;
};

/// Verdict plus everything needed to rerun it. `details` holds the
/// command-specific payload (witness, certificate, probabilities) with every
/// rational written as a "p/q" string.
struct ResultRecord {
    std::string command;
    std::string verdict;
    Json details = Json::object();
    Json options = Json::object();
    std::uint64_t seed = 0;
    double seconds = 0.0;
    std::string version = CONFMC_VERSION;
};

/// JSON with states, actions and one matrix of number-strings per action.
/// Numbers are "p/q" or exact decimals; integer JSON literals are accepted,
/// floating JSON literals are not. Errors name the JSON path or line.
MdpModel parse_model(std::string_view text);
std::string serialize_model(MdpModel const& m);

Query parse_query(std::string_view text, MdpModel const& m);
std::string serialize_query(Query const& q, MdpModel const& m);

/// Throws DimensionMismatch or InvalidInput when q does not fit m.
void validate_query(Query const& q, MdpModel const& m);

Json scheduler_to_json(Scheduler const& s, MdpModel const& m);
Scheduler scheduler_from_json(Json const& j, MdpModel const& m);
Json target_to_json(TargetSet const& h);
TargetSet target_from_json(Json const& j, std::size_t num_states);

Json rats_to_json(std::span<Rat const> v);
Json to_json(ResultRecord const& r);
ResultRecord result_from_json(Json const& j);

/// Process exit code for a failure of this kind: 2 for bad input, 3 for
/// backend or solver trouble.
int exit_code_for(ErrorKind kind);

}  // namespace confmc
