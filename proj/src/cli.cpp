#include "confmc/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "confmc/antichain.hpp"
#include "confmc/certificate.hpp"
#include "confmc/explorer.hpp"
#include "confmc/generators.hpp"
#include "confmc/io.hpp"
#include "confmc/solver.hpp"

namespace confmc {

namespace {

std::string slurp(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::InvalidInput, "cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(std::string const& path, std::string const& body, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << body)) {
        fail(ErrorKind::InvalidInput, "cannot write '" + path + "'");
    }
}

struct Common {
    std::string model_path;
    std::string query_path;
    std::string semantics;
    std::string format = "text";
};

struct Loaded {
    MdpModel model;
    Query query;
};

Loaded load(Common const& c) {
    Loaded l;
    l.model = parse_model(slurp(c.model_path));
    l.query = parse_query(slurp(c.query_path), l.model);
    if (!c.semantics.empty()) {
        auto s = parse_semantics(c.semantics);
        if (!s) {
            fail(ErrorKind::InvalidInput, "unknown semantics '" + c.semantics + "'");
        }
        l.query.semantics = *s;
    }
    return l;
}

Scheduler const& need_scheduler(Query const& q) {
    if (!q.scheduler) {
        fail(ErrorKind::InvalidInput, "this command needs a scheduler in the query");
    }
    return *q.scheduler;
}

std::vector<std::string> word_names(MdpModel const& m, std::vector<ActionId> const& w) {
    std::vector<std::string> out;
    for (ActionId a : w) {
        out.push_back(m.action_names.at(a));
    }
    return out;
}

std::string join(std::vector<std::string> const& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? " " : "") + xs[i];
    }
    return s;
}

class Timer {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(ResultRecord const& r, std::string const& text, Common const& c, std::ostream& out) {
    if (c.format == "json") {
        out << to_json(r).dump(2) << "\n";
    } else {
        out << text;
    }
}

int cmd_step(Common const& c, std::ostream& out) {
    Timer t;
    auto [m, q] = load(c);
    auto succ = config_step(m, need_scheduler(q), q.semantics, q.initial);
    ResultRecord r;
    r.command = "step";
    r.verdict = "computed";
    r.options = {{"semantics", std::string(to_string(q.semantics))}};
    Json list = Json::array();
    std::ostringstream text;
    for (auto const& [d, p] : succ) {
        bool hit = q.target.contains(d);
        list.push_back({{"config", rats_to_json(d.weights())}, {"prob", to_string(p)}, {"in_target", hit}});
        text << to_string(p) << "\t" << to_string(d) << (hit ? "\t[target]" : "") << "\n";
    }
    r.details["successors"] = std::move(list);
    r.seconds = t.seconds();
    emit(r, text.str(), c, out);
    return 0;
}

int cmd_explore(Common const& c, std::size_t depth_flag, std::string const& dot_path, std::ostream& out) {
    Timer t;
    auto [m, q] = load(c);
    std::size_t depth = depth_flag ? depth_flag : q.options.depth.value_or(1);
    auto const& sigma = need_scheduler(q);
    auto g = explore(m, sigma, q.semantics, q.initial, depth, &q.target);
    auto reach = reach_prob_bounded(m, sigma, q.semantics, q.initial, q.target, depth);
    if (!dot_path.empty()) {
        spill(dot_path, to_dot(g, m), out);
    }
    ResultRecord r;
    r.command = "explore";
    if (reach.lower >= q.threshold) {
        r.verdict = "threshold-met";
    } else {
        r.verdict = reach.settled ? "below-threshold" : "inconclusive";
    }
    r.options = {{"semantics", std::string(to_string(q.semantics))}, {"depth", depth}};
    r.details = {{"nodes", g.nodes.size()},
                 {"edges", g.edges.size()},
                 {"reach_probability", to_string(reach.lower)},
                 {"settled", reach.settled},
                 {"threshold", to_string(q.threshold)}};
    r.seconds = t.seconds();
    std::ostringstream text;
    text << "nodes " << g.nodes.size() << ", edges " << g.edges.size() << "\n"
         << "reach probability within " << depth << " steps: " << to_string(reach.lower)
         << (reach.settled ? " (settled)" : "") << "\n"
         << "verdict: " << r.verdict << "\n";
    emit(r, text.str(), c, out);
    return 0;
}

int cmd_simulate(Common const& c, std::size_t runs, std::size_t depth_flag, std::optional<std::uint64_t> seed_flag,
                 std::ostream& out) {
    Timer t;
    auto [m, q] = load(c);
    std::size_t cap = depth_flag ? depth_flag : q.options.depth.value_or(50);
    std::uint64_t seed = seed_flag.value_or(q.options.seed.value_or(0));
    auto est = estimate_reach(m, need_scheduler(q), q.semantics, q.initial, q.target, runs, cap, seed);
    ResultRecord r;
    r.command = "simulate";
    r.verdict = "estimated";
    r.seed = seed;
    r.options = {{"semantics", std::string(to_string(q.semantics))}, {"runs", runs}, {"step_cap", cap}};
    r.details = {{"hits", est.hits},
                 {"capped", est.capped},
                 {"frequency", est.frequency()},
                 {"stderr", est.stderr_()}};
    r.seconds = t.seconds();
    std::ostringstream text;
    text << "hits " << est.hits << " / " << est.runs << " (capped " << est.capped << ")\n"
         << "frequency " << est.frequency() << " +- " << est.stderr_() << "\n";
    emit(r, text.str(), c, out);
    return 0;
}

struct CsmtFlags {
    std::optional<std::size_t> K;
    std::optional<std::size_t> L;
    std::optional<std::size_t> loop_limit;
    std::optional<std::uint64_t> seed;
};

int cmd_check_csmt(Common const& c, CsmtFlags const& f, std::ostream& out) {
    Timer t;
    auto [m, q] = load(c);
    if (!q.target.is_monotone()) {
        fail(ErrorKind::InvalidInput, "check-csmt needs an upward or downward closed target");
    }
    BackwardOptions o;
    o.K = f.K.value_or(q.options.K.value_or(3));
    o.L = f.L.value_or(q.options.L.value_or(1));
    o.loop_limit = f.loop_limit.value_or(q.options.loop_limit.value_or(100));
    o.seed = f.seed.value_or(q.options.seed.value_or(0));
    auto res = backward_reach(m, q.initial, q.target, o);
    ResultRecord r;
    r.command = "check-csmt";
    r.verdict = to_string(res.tag);
    r.seed = o.seed;
    r.options = {{"K", o.K}, {"L", o.L}, {"loop_limit", o.loop_limit}};
    r.details = {{"iterations", res.iterations}, {"lp_calls", res.lp_calls}, {"frontier", res.frontier.size()}};
    std::ostringstream text;
    text << "verdict: " << r.verdict << "\n";
    if (res.tag == ReachOutcome::Tag::Reachable) {
        auto names = word_names(m, res.witness);
        Configuration end = replay(m, q.initial, res.witness);
        r.details["witness"] = names;
        r.details["witness_end"] = rats_to_json(end.weights());
        text << "witness: " << join(names) << "\n"
             << "lands on " << to_string(end) << "\n";
    }
    text << "iterations " << res.iterations << ", LP calls " << res.lp_calls << ", frontier "
         << res.frontier.size() << "\n";
    r.seconds = t.seconds();
    emit(r, text.str(), c, out);
    return 0;
}

struct MsctFlags {
    std::optional<std::string> gamma;
    std::optional<std::size_t> degree;
    std::string solver_cmd;
    double timeout = 120.0;
    std::size_t samples = 10'000;
    std::optional<std::uint64_t> seed;
};

int cmd_check_msct(Common const& c, MsctFlags const& f, std::ostream& out) {
    Timer t;
    auto [m, q] = load(c);
    MsctOptions o;
    if (f.gamma) {
        o.gamma = parse_rat(*f.gamma);
    } else if (q.options.gamma) {
        o.gamma = *q.options.gamma;
    }
    if (o.gamma <= 0 || o.gamma >= 1) {
        fail(ErrorKind::InvalidInput, "gamma must lie strictly between 0 and 1");
    }
    o.degree = f.degree.value_or(q.options.degree.value_or(4));
    o.solver_cmd = f.solver_cmd;
    o.timeout_s = f.timeout;
    o.verify_samples = f.samples;
    o.seed = f.seed.value_or(q.options.seed.value_or(0));
    auto res = check_msct(m, q.initial, q.target, q.threshold, o);
    ResultRecord r;
    r.command = "check-msct";
    r.verdict = to_string(res.tag);
    r.seed = o.seed;
    r.options = {{"gamma", to_string(o.gamma)},
                 {"degree", o.degree},
                 {"timeout", o.timeout_s},
                 {"solver_cmd", o.solver_cmd.empty() ? default_solver_command() : o.solver_cmd},
                 {"verify_samples", o.verify_samples}};
    r.details = {{"threshold", to_string(q.threshold)},
                 {"symbols", res.num_symbols},
                 {"constraints", res.num_constraints},
                 {"payload_bytes", res.payload_bytes},
                 {"solver_seconds", res.solver_seconds}};
    std::ostringstream text;
    text << "verdict: " << r.verdict << "\n";
    if (!res.reason.empty()) {
        r.details["reason"] = res.reason;
        text << "reason: " << res.reason << "\n";
    }
    if (res.certificate) {
        auto const& cert = *res.certificate;
        Json theta = Json::object();
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            theta[m.action_names[a]] = rats_to_json(cert.theta[a]);
        }
        r.details["certificate"] = {{"theta", std::move(theta)},
                                    {"s", rats_to_json(cert.s)},
                                    {"r", rats_to_json(cert.r)},
                                    {"gamma", to_string(cert.gamma)},
                                    {"xi", to_string(cert.xi)},
                                    {"R(d0)", to_string(cert.value(q.initial.weights()))}};
        r.details["handelman_degree"] = res.degree_used;
        r.details["vertices_checked"] = res.report.vertices_checked;
        r.details["samples_checked"] = res.report.samples_checked;
        text << "R(d) coefficients (constant first): " << to_string(cert.r) << "\n"
             << "R(d0) = " << to_string(cert.value(q.initial.weights())) << "\n"
             << "checked " << res.report.vertices_checked << " vertices and " << res.report.samples_checked
             << " samples\n";
    }
    text << "solver " << res.solver_seconds << " s, " << res.num_symbols << " symbols, " << res.num_constraints
         << " constraints\n";
    r.seconds = t.seconds();
    emit(r, text.str(), c, out);
    return 0;
}

struct GenFlags {
    std::string out_path;
    std::string query_out;
    std::vector<std::uint64_t> set;
    std::uint64_t target = 0;
    std::size_t games = 5;
    std::size_t rewards = 2;
    bool absorbing = false;
    std::size_t sets = 5;
    std::size_t grades = 2;
    std::string decay = "1/2";
    std::optional<std::uint64_t> seed;
};

Dist<ActionId> uniform_over(std::size_t first, std::size_t last) {
    Dist<ActionId>::Map w;
    for (ActionId a = first; a < last; ++a) {
        w[a] = make_rat(1, static_cast<std::int64_t>(last - first));
    }
    return Dist<ActionId>::from_map(std::move(w));
}

int cmd_gen(std::string const& which, GenFlags const& f, std::ostream& out) {
    MdpModel m;
    Query q;
    if (which == "table1") {
        m = gen_table1();
        q.initial = Configuration::dirac(3, 0);
        q.target = TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(7, 10)})});
        q.threshold = Rat(9, 10);
        q.scheduler = Scheduler::constant(Dist<ActionId>::from_map({{0, Rat(2, 5)}, {1, Rat(3, 5)}}));
    } else if (which == "subsetsum") {
        auto inst = gen_subsetsum(f.set, f.target);
        m = inst.model;
        q.initial = inst.initial;
        q.target = inst.target;
        q.threshold = inst.threshold;
        q.scheduler = Scheduler::pure(0);
        q.options.depth = 1;
    } else if (which == "casino") {
        if (f.games < 1 || f.rewards < 1) {
            fail(ErrorKind::InvalidInput, "casino needs at least one game and one reward state");
        }
        m = gen_casino({f.games, f.rewards, !f.absorbing, f.seed.value_or(7)});
        q.initial = Configuration::dirac(m.num_states(), 0);
        q.target = casino_reward_target(m, Rat(1, 10));
        q.threshold = Rat(9, 10);
        q.scheduler = Scheduler::constant(uniform_over(1, m.num_actions()));
        q.options.depth = 3;
    } else if (which == "exam") {
        Rat decay = parse_rat(f.decay);
        if (decay <= 0 || decay >= 1 || f.sets < 1 || f.grades < 1) {
            fail(ErrorKind::InvalidInput, "exam needs 0 < decay < 1 and at least one set and grade");
        }
        m = gen_exam({f.sets, f.grades, decay, f.seed.value_or(42)});
        q.initial = Configuration::dirac(m.num_states(), 0);
        q.semantics = SemanticsId::CSMT;
        q.target = exam_grade_target(m, Rat(7, 10));
        q.threshold = Rat(1, 2);
        q.scheduler = Scheduler::constant(uniform_over(0, m.num_actions()));
    } else {
        fail(ErrorKind::InvalidInput, "unknown generator '" + which + "'");
    }
    spill(f.out_path, serialize_model(m), out);
    if (!f.query_out.empty()) {
        spill(f.query_out, serialize_query(q, m), out);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Configuration-level reachability for MDPs under chance/mass semantics", "confmc"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", common.model_path, "model JSON file")->required();
        sub->add_option("--query", common.query_path, "query JSON file")->required();
        sub->add_option("--semantics", common.semantics, "override the query semantics (csct|csmt|msct|msmt)");
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"text", "json"}));
    };

    auto* step = app.add_subcommand("step", "one configuration step from the initial configuration");
    add_common(step);

    std::size_t depth = 0;
    std::string dot;
    auto* exp = app.add_subcommand("explore", "bounded unfolding and exact reach probability");
    add_common(exp);
    exp->add_option("--depth", depth, "number of steps (query depth, else 1)");
    exp->add_option("--dot", dot, "write the unfolding as a DOT graph");

    std::size_t runs = 10'000;
    std::optional<std::uint64_t> sim_seed;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo hitting frequency");
    add_common(sim);
    sim->add_option("--runs", runs, "number of runs");
    sim->add_option("--depth", depth, "step cap per run (query depth, else 50)");
    sim->add_option("--seed", sim_seed, "seed");

    CsmtFlags cf;
    auto* csmt = app.add_subcommand("check-csmt", "antichain backward reachability");
    add_common(csmt);
    csmt->add_option("--K", cf.K, "LP solutions per pullback (default 3)");
    csmt->add_option("--L", cf.L, "samples per solution (default 1)");
    csmt->add_option("--loop-limit", cf.loop_limit, "iteration cap (default 100)");
    csmt->add_option("--seed", cf.seed, "sampling seed");

    MsctFlags mf;
    auto* msct = app.add_subcommand("check-msct", "linear submartingale certificate synthesis");
    add_common(msct);
    msct->add_option("--gamma", mf.gamma, "scaling factor (default 99999/100000)");
    msct->add_option("--degree", mf.degree, "Handelman degree bound (default 4)");
    msct->add_option("--solver-cmd", mf.solver_cmd, "SMT solver command (default $CONFMC_SOLVER_CMD or z3)");
    msct->add_option("--timeout", mf.timeout, "solver timeout in seconds");
    msct->add_option("--samples", mf.samples, "random configurations checked exactly");
    msct->add_option("--seed", mf.seed, "verification seed");

    GenFlags gf;
    std::string which;
    auto* gen = app.add_subcommand("gen", "emit a benchmark model");
    gen->add_option("kind", which, "table1|subsetsum|casino|exam")
        ->required()
        ->check(CLI::IsMember({"table1", "subsetsum", "casino", "exam"}));
    gen->add_option("--out", gf.out_path, "model file (stdout when absent)");
    gen->add_option("--query-out", gf.query_out, "also write a matching query file");
    gen->add_option("--set", gf.set, "subset-sum values")->delimiter(',');
    gen->add_option("--target", gf.target, "subset-sum target");
    gen->add_option("--games", gf.games, "casino: number of b_i actions");
    gen->add_option("--rewards", gf.rewards, "casino: number of reward states");
    gen->add_flag("--absorbing", gf.absorbing, "casino: reward states never return to play");
    gen->add_option("--sets", gf.sets, "exam: number of problem sets");
    gen->add_option("--grades", gf.grades, "exam: number of grades");
    gen->add_option("--decay", gf.decay, "exam: mass kept on R per step");
    gen->add_option("--seed", gf.seed, "generator seed");

    auto* ver = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ver) {
            out << "confmc " << CONFMC_VERSION << "\n";
            return 0;
        }
        if (*step) return cmd_step(common, out);
        if (*exp) return cmd_explore(common, depth, dot, out);
        if (*sim) return cmd_simulate(common, runs, depth, sim_seed, out);
        if (*csmt) return cmd_check_csmt(common, cf, out);
        if (*msct) return cmd_check_msct(common, mf, out);
        if (*gen) return cmd_gen(which, gf, out);
    } catch (Error const& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (Json::exception const& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace confmc
