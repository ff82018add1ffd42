#include "confmc/io.hpp"

#include <algorithm>

namespace confmc {

namespace {

[[noreturn]] void bad(std::string const& path, std::string const& what) {
    fail(ErrorKind::Parse, (path.empty() ? std::string("document") : path) + ": " + what);
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (Json::parse_error const& e) {
        // the library reports byte offsets; a line number is friendlier
        std::size_t line = 1 + static_cast<std::size_t>(
                                   std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n'));
        fail(ErrorKind::Parse, "invalid JSON near line " + std::to_string(line) + ": " + e.what());
    }
}

Json const& field(Json const& j, char const* key, std::string const& path) {
    if (!j.is_object()) {
        bad(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        bad(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

Rat number(Json const& j, std::string const& path) {
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (Error const& e) {
            bad(path, e.what());
        }
    }
    if (j.is_number_integer()) {
        return Rat(mpz_class(j.dump(), 10));
    }
    if (j.is_number_float()) {
        bad(path, "floating JSON literal " + j.dump() + " is not exact; quote it as a string");
    }
    bad(path, "expected a number-string");
}

std::vector<Rat> numbers(Json const& j, std::string const& path) {
    if (!j.is_array()) {
        bad(path, "expected an array of number-strings");
    }
    std::vector<Rat> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string text(Json const& j, std::string const& path) {
    if (!j.is_string()) {
        bad(path, "expected a string");
    }
    return j.get<std::string>();
}

std::size_t count(Json const& j, std::string const& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        bad(path, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

std::uint64_t seed_value(Json const& j, std::string const& path) {
    if (j.is_string()) {
        try {
            return std::stoull(j.get<std::string>());
        } catch (std::exception const&) {
            bad(path, "expected an unsigned seed");
        }
    }
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        bad(path, "expected an unsigned seed");
    }
    return j.get<std::uint64_t>();
}

Json str(Rat const& v) { return to_string(v); }

ActionId action_named(MdpModel const& m, std::string const& name, std::string const& path) {
    auto a = m.find_action(name);
    if (!a) {
        bad(path, "unknown action '" + name + "'");
    }
    return *a;
}

Json weights_to_json(Dist<ActionId> const& d, MdpModel const& m) {
    Json j = Json::object();
    for (auto const& [a, w] : d) {
        j[m.action_names.at(a)] = str(w);
    }
    return j;
}

Dist<ActionId> weights_from_json(Json const& j, MdpModel const& m, std::string const& path) {
    if (!j.is_object()) {
        bad(path, "expected an object mapping action names to weights");
    }
    Dist<ActionId>::Map w;
    for (auto const& [name, value] : j.items()) {
        w[action_named(m, name, path)] += number(value, path + "." + name);
    }
    try {
        return Dist<ActionId>::from_map(std::move(w));
    } catch (Error const& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

Json vecs_to_json(std::vector<Vec01> const& vs) {
    Json j = Json::array();
    for (auto const& v : vs) {
        j.push_back(rats_to_json(v.entries()));
    }
    return j;
}

std::vector<std::vector<Rat>> vec_list(Json const& j, std::string const& path) {
    if (!j.is_array()) {
        bad(path, "expected an array of vectors");
    }
    std::vector<std::vector<Rat>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(numbers(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void check_len(std::vector<Rat> const& v, std::size_t n, std::string const& path) {
    if (v.size() != n) {
        fail(ErrorKind::DimensionMismatch,
             path + ": expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    }
}

}  // namespace

Json rats_to_json(std::span<Rat const> v) {
    Json j = Json::array();
    for (auto const& x : v) {
        j.push_back(str(x));
    }
    return j;
}

MdpModel parse_model(std::string_view body) {
    Json j = parse_json(body);
    MdpModel m;
    Json const& states = field(j, "states", "");
    Json const& actions = field(j, "actions", "");
    if (!states.is_array() || states.empty()) {
        bad("states", "expected a nonempty array of names");
    }
    if (!actions.is_array() || actions.empty()) {
        bad("actions", "expected a nonempty array of names");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        m.state_names.push_back(text(states[i], "states[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
        m.action_names.push_back(text(actions[i], "actions[" + std::to_string(i) + "]"));
    }
    auto unique = [](std::vector<std::string> names) {
        std::sort(names.begin(), names.end());
        return std::adjacent_find(names.begin(), names.end()) == names.end();
    };
    if (!unique(m.state_names) || !unique(m.action_names)) {
        bad("", "state and action names must be unique");
    }
    Json const& tr = field(j, "transitions", "");
    if (!tr.is_object()) {
        bad("transitions", "expected an object keyed by action");
    }
    std::size_t n = m.num_states();
    for (auto const& a : m.action_names) {
        std::string path = "transitions." + a;
        auto it = tr.find(a);
        if (it == tr.end()) {
            bad("transitions", "no matrix for action '" + a + "'");
        }
        auto rows = vec_list(*it, path);
        if (rows.size() != n) {
            fail(ErrorKind::DimensionMismatch, path + ": expected " + std::to_string(n) + " rows");
        }
        std::vector<Rat> flat;
        for (std::size_t i = 0; i < n; ++i) {
            check_len(rows[i], n, path + "[" + std::to_string(i) + "]");
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        m.matrices.emplace_back(n, std::move(flat));
    }
    for (auto const& [key, value] : tr.items()) {
        if (!m.find_action(key)) {
            bad("transitions." + key, "matrix for an undeclared action");
        }
    }
    mdp_validate(m);
    return m;
}

std::string serialize_model(MdpModel const& m) {
    Json j;
    j["states"] = m.state_names;
    j["actions"] = m.action_names;
    Json tr = Json::object();
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        Json rows = Json::array();
        for (StateId q = 0; q < m.num_states(); ++q) {
            rows.push_back(rats_to_json(m.matrices[a].row(q)));
        }
        tr[m.action_names[a]] = std::move(rows);
    }
    j["transitions"] = std::move(tr);
    return j.dump(2) + "\n";
}

Json scheduler_to_json(Scheduler const& s, MdpModel const& m) {
    return std::visit(
        [&](auto const& v) -> Json {
            using V = std::decay_t<decltype(v)>;
            Json j;
            if constexpr (std::is_same_v<V, ConstantMixed>) {
                j["kind"] = "constant";
                j["weights"] = weights_to_json(v.weights, m);
            } else if constexpr (std::is_same_v<V, ActionWord>) {
                j["kind"] = "word";
                Json w = Json::array();
                for (ActionId a : v.word) {
                    w.push_back(m.action_names.at(a));
                }
                j["word"] = std::move(w);
                j["fallback"] = m.action_names.at(v.fallback);
            } else if constexpr (std::is_same_v<V, LinearFractional>) {
                j["kind"] = "linear_fractional";
                Json theta = Json::object();
                for (ActionId a = 0; a < v.theta.size(); ++a) {
                    theta[m.action_names.at(a)] = rats_to_json(v.theta[a]);
                }
                j["theta"] = std::move(theta);
                j["s"] = rats_to_json(v.s);
            } else {
                j["kind"] = "history";
                Json entries = Json::array();
                for (auto const& e : v.entries) {
                    Json prefix = Json::array();
                    for (auto const& d : e.prefix) {
                        prefix.push_back(rats_to_json(d.weights()));
                    }
                    entries.push_back({{"prefix", std::move(prefix)}, {"weights", weights_to_json(e.weights, m)}});
                }
                j["entries"] = std::move(entries);
                j["fallback"] = weights_to_json(v.fallback, m);
            }
            return j;
        },
        s.variant());
}

Scheduler scheduler_from_json(Json const& j, MdpModel const& m) {
    std::string const path = "scheduler";
    std::string kind = text(field(j, "kind", path), path + ".kind");
    std::size_t n = m.num_states();
    auto make = [&]() -> Scheduler {
        if (kind == "constant") {
            return Scheduler::constant(weights_from_json(field(j, "weights", path), m, path + ".weights"));
        }
        if (kind == "word") {
            Json const& w = field(j, "word", path);
            if (!w.is_array()) {
                bad(path + ".word", "expected an array of action names");
            }
            std::vector<ActionId> word;
            for (std::size_t i = 0; i < w.size(); ++i) {
                std::string p = path + ".word[" + std::to_string(i) + "]";
                word.push_back(action_named(m, text(w[i], p), p));
            }
            ActionId fallback = action_named(m, text(field(j, "fallback", path), path + ".fallback"), path);
            return Scheduler::word(std::move(word), fallback);
        }
        if (kind == "linear_fractional") {
            LinearFractional lf;
            Json const& theta = field(j, "theta", path);
            for (auto const& a : m.action_names) {
                std::string p = path + ".theta." + a;
                lf.theta.push_back(numbers(field(theta, a.c_str(), path + ".theta"), p));
                check_len(lf.theta.back(), n + 1, p);
            }
            lf.s = numbers(field(j, "s", path), path + ".s");
            check_len(lf.s, n + 1, path + ".s");
            return Scheduler(std::move(lf));
        }
        if (kind == "history") {
            HistoryTable ht;
            Json const& entries = field(j, "entries", path);
            if (!entries.is_array()) {
                bad(path + ".entries", "expected an array");
            }
            for (std::size_t i = 0; i < entries.size(); ++i) {
                std::string p = path + ".entries[" + std::to_string(i) + "]";
                HistoryTable::Entry e;
                for (auto& w : vec_list(field(entries[i], "prefix", p), p + ".prefix")) {
                    check_len(w, n, p + ".prefix");
                    e.prefix.emplace_back(std::move(w));
                }
                e.weights = weights_from_json(field(entries[i], "weights", p), m, p + ".weights");
                ht.entries.push_back(std::move(e));
            }
            ht.fallback = weights_from_json(field(j, "fallback", path), m, path + ".fallback");
            return Scheduler(std::move(ht));
        }
        bad(path + ".kind", "unknown scheduler kind '" + kind + "'");
    };
    Scheduler s = make();
    s.validate(n, m.num_actions());
    return s;
}

Json target_to_json(TargetSet const& h) {
    return std::visit(
        [](auto const& v) -> Json {
            using V = std::decay_t<decltype(v)>;
            Json j;
            if constexpr (std::is_same_v<V, UpwardGenerators>) {
                j["kind"] = "upward";
                j["generators"] = vecs_to_json(v.generators);
            } else if constexpr (std::is_same_v<V, DownwardGenerators>) {
                j["kind"] = "downward";
                j["generators"] = vecs_to_json(v.generators);
            } else if constexpr (std::is_same_v<V, ExplicitConfigs>) {
                j["kind"] = "configs";
                Json cs = Json::array();
                for (auto const& d : v.configs) {
                    cs.push_back(rats_to_json(d.weights()));
                }
                j["configs"] = std::move(cs);
            } else {
                j["kind"] = "linear";
                j["alpha"] = rats_to_json(v.alpha);
                j["bound"] = str(v.bound);
                j["strict"] = v.strict;
            }
            return j;
        },
        h.variant());
}

TargetSet target_from_json(Json const& j, std::size_t n) {
    std::string const path = "target";
    std::string kind = text(field(j, "kind", path), path + ".kind");
    auto gens = [&](char const* key) {
        std::vector<Vec01> out;
        for (auto& v : vec_list(field(j, key, path), path + "." + key)) {
            check_len(v, n, path + "." + key);
            for (auto const& x : v) {
                if (!is_probability(x)) {
                    fail(ErrorKind::InvalidInput, path + ": generator entry " + to_string(x) + " outside [0,1]");
                }
            }
            out.emplace_back(std::move(v));
        }
        return out;
    };
    if (kind == "upward") {
        return TargetSet::upward(gens("generators"));
    }
    if (kind == "downward") {
        return TargetSet::downward(gens("generators"));
    }
    if (kind == "configs") {
        std::vector<Configuration> cs;
        for (auto& v : vec_list(field(j, "configs", path), path + ".configs")) {
            check_len(v, n, path + ".configs");
            cs.emplace_back(std::move(v));
        }
        return TargetSet::explicit_configs(std::move(cs));
    }
    if (kind == "linear") {
        auto alpha = numbers(field(j, "alpha", path), path + ".alpha");
        check_len(alpha, n, path + ".alpha");
        Rat bound = number(field(j, "bound", path), path + ".bound");
        bool strict = true;
        if (auto it = j.find("strict"); it != j.end()) {
            if (!it->is_boolean()) {
                bad(path + ".strict", "expected true or false");
            }
            strict = it->get<bool>();
        }
        return TargetSet::linear(std::move(alpha), bound, strict);
    }
    bad(path + ".kind", "unknown target kind '" + kind + "'");
}

void validate_query(Query const& q, MdpModel const& m) {
    std::size_t n = m.num_states();
    if (q.initial.size() != n) {
        fail(ErrorKind::DimensionMismatch, "initial configuration has " + std::to_string(q.initial.size()) +
                                               " entries for " + std::to_string(n) + " states");
    }
    if (std::size_t dim = q.target.dimension(); dim != 0 && dim != n) {
        fail(ErrorKind::DimensionMismatch, "target has dimension " + std::to_string(dim));
    }
    if (!is_probability(q.threshold)) {
        fail(ErrorKind::InvalidInput, "threshold " + to_string(q.threshold) + " outside [0,1]");
    }
    if (q.scheduler) {
        q.scheduler->validate(n, m.num_actions());
    }
    if (q.options.gamma && (*q.options.gamma <= 0 || *q.options.gamma >= 1)) {
        fail(ErrorKind::InvalidInput, "gamma must lie strictly between 0 and 1");
    }
}

Query parse_query(std::string_view body, MdpModel const& m) {
    Json j = parse_json(body);
    Query q;
    auto init = numbers(field(j, "initial", ""), "initial");
    check_len(init, m.num_states(), "initial");
    try {
        q.initial = Configuration(std::move(init));
    } catch (Error const& e) {
        fail(e.kind(), std::string("initial: ") + e.what());
    }
    if (auto it = j.find("semantics"); it != j.end()) {
        auto s = parse_semantics(text(*it, "semantics"));
        if (!s) {
            bad("semantics", "expected one of csct, csmt, msct, msmt");
        }
        q.semantics = *s;
    }
    q.target = target_from_json(field(j, "target", ""), m.num_states());
    q.threshold = number(field(j, "threshold", ""), "threshold");
    if (auto it = j.find("scheduler"); it != j.end() && !it->is_null()) {
        q.scheduler = scheduler_from_json(*it, m);
    }
    if (auto it = j.find("options"); it != j.end()) {
        Json const& o = *it;
        if (!o.is_object()) {
            bad("options", "expected an object");
        }
        for (auto const& [key, value] : o.items()) {
            std::string p = "options." + key;
            if (key == "K") {
                q.options.K = count(value, p);
            } else if (key == "L") {
                q.options.L = count(value, p);
            } else if (key == "loop_limit") {
                q.options.loop_limit = count(value, p);
            } else if (key == "gamma") {
                q.options.gamma = number(value, p);
            } else if (key == "degree") {
                q.options.degree = count(value, p);
            } else if (key == "seed") {
                q.options.seed = seed_value(value, p);
            } else if (key == "depth") {
                q.options.depth = count(value, p);
            } else {
                bad(p, "unknown option");
            }
        }
    }
    validate_query(q, m);
    return q;
}

std::string serialize_query(Query const& q, MdpModel const& m) {
    Json j;
    j["initial"] = rats_to_json(q.initial.weights());
    j["semantics"] = std::string(to_string(q.semantics));
    j["target"] = target_to_json(q.target);
    j["threshold"] = str(q.threshold);
    if (q.scheduler) {
        j["scheduler"] = scheduler_to_json(*q.scheduler, m);
    }
    Json o = Json::object();
    auto const& opt = q.options;
    if (opt.K) o["K"] = *opt.K;
    if (opt.L) o["L"] = *opt.L;
    if (opt.loop_limit) o["loop_limit"] = *opt.loop_limit;
    if (opt.gamma) o["gamma"] = str(*opt.gamma);
    if (opt.degree) o["degree"] = *opt.degree;
    if (opt.seed) o["seed"] = *opt.seed;
    if (opt.depth) o["depth"] = *opt.depth;
    if (!o.empty()) {
        j["options"] = std::move(o);
    }
    return j.dump(2) + "\n";
}

Json to_json(ResultRecord const& r) {
    Json j;
    j["command"] = r.command;
    j["verdict"] = r.verdict;
    j["details"] = r.details;
    j["options"] = r.options;
    j["seed"] = r.seed;
    j["seconds"] = r.seconds;
    j["version"] = r.version;
    return j;
}

ResultRecord result_from_json(Json const& j) {
    ResultRecord r;
    r.command = text(field(j, "command", ""), "command");
    r.verdict = text(field(j, "verdict", ""), "verdict");
    r.details = field(j, "details", "");
    r.options = field(j, "options", "");
    r.seed = seed_value(field(j, "seed", ""), "seed");
    Json const& secs = field(j, "seconds", "");
    if (!secs.is_number()) {
        bad("seconds", "expected a number");
    }
    r.seconds = secs.get<double>();
    r.version = text(field(j, "version", ""), "version");
    return r;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::BranchExplosion:
        case ErrorKind::ConjunctExplosion:
        case ErrorKind::NotAffine:
        case ErrorKind::DegreeTooHigh:
        case ErrorKind::BackendFailure:
        case ErrorKind::WitnessReplayFailed:
        case ErrorKind::SolverSpawnFailure:
        case ErrorKind::ModelParseError:
            return 3;
        default:
            return 2;
    }
}

}  // namespace confmc
