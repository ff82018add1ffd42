#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "confmc/cli.hpp"
#include "confmc/generators.hpp"
#include "confmc/io.hpp"
#include "confmc/semantics.hpp"
#include "support.hpp"

using namespace confmc;
using confmc::testing::Rng;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (Error const& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidInput;
}

std::string two_state(std::string row0) {
    return R"({"states": ["x", "y"], "actions": ["go"], "transitions": {"go": [)" + row0 + R"(, ["0", "1"]]}})";
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "confmc");
    std::vector<char const*> argv;
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("confmc_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(std::string const& name) const { return (path / name).string(); }
    std::string write(std::string const& name, std::string const& text) const {
        std::ofstream(path / name) << text;
        return file(name);
    }
};

std::string slurp(std::string const& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("model parsing examples") {
    auto m = parse_model(two_state(R"(["0.1", "0.9"])"));
    CHECK(m.matrices[0](0, 0) == Rat(1, 10));
    CHECK(m.matrices[0](0, 1) == Rat(9, 10));
    CHECK(m.state_names == std::vector<std::string>{"x", "y"});

    auto ints = parse_model(two_state(R"([1, 0])"));
    CHECK(ints.matrices[0](0, 0) == 1);

    CHECK(kind_of([] { parse_model(two_state(R"(["0.1", "0.89"])")); }) == ErrorKind::NotStochastic);
    CHECK(kind_of([] { parse_model(two_state(R"([0.5, 0.5])")); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_model(two_state(R"(["1/2"])")); }) != ErrorKind::NotStochastic);
    CHECK(kind_of([] { parse_model("{\"states\": [\"x\"],"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_model(R"({"states": ["x"], "actions": ["go"], "transitions": {}})"); }) ==
          ErrorKind::Parse);

    auto t1 = parse_model(serialize_model(gen_table1()));
    CHECK(t1.successor(0, 0) == Dist<StateId>::from_pairs({{1, Rat(1, 2)}, {2, Rat(1, 2)}}));
}

TEST_CASE("parse errors point at the offending place") {
    try {
        parse_model(two_state(R"(["1/2", "x"])"));
        FAIL("accepted a bad number");
    } catch (Error const& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("transitions") != std::string::npos);
    }
    try {
        parse_model("{\n\"states\": [\"x\"],\n oops}");
        FAIL("accepted bad JSON");
    } catch (Error const& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("generated models round-trip") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<MdpModel> models{gen_table1(), confmc::testing::rand_mdp(rng, 2 + rng() % 3, 1 + rng() % 3),
                                     gen_casino({1 + rng() % 4, 1 + rng() % 3, trial % 2 == 0, rng()}),
                                     gen_exam({1 + rng() % 4, 1 + rng() % 3, Rat(1, 2), rng()})};
        for (auto const& m : models) {
            auto text = serialize_model(m);
            CHECK(parse_model(text) == m);
            CHECK(serialize_model(parse_model(text)) == text);
        }
    }
}

TEST_CASE("queries, schedulers and targets round-trip") {
    auto m = gen_table1();
    Rng rng(72);
    std::vector<Scheduler> schedulers{
        Scheduler::constant(Dist<ActionId>::from_pairs({{0, Rat(2, 5)}, {1, Rat(3, 5)}})),
        Scheduler::word({1, 0, 1}, 0),
        Scheduler(LinearFractional{{{Rat(1), Rat(0), Rat(1), Rat(2)}, {Rat(1), Rat(3), Rat(0), Rat(0)}},
                                   {Rat(2), Rat(3), Rat(1), Rat(2)}}),
        Scheduler(HistoryTable{{{{Configuration::dirac(3, 0)}, Dist<ActionId>::dirac(1)}}, Dist<ActionId>::dirac(0)}),
    };
    std::vector<TargetSet> targets{
        TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(7, 10)})}),
        TargetSet::downward({Vec01({Rat(1), Rat(1, 3), Rat(1)}), Vec01({Rat(1, 2), Rat(1), Rat(1)})}),
        TargetSet::explicit_configs({Configuration::dirac(3, 1)}),
        TargetSet::linear({Rat(0), Rat(1), Rat(-1)}, Rat(1, 4), true),
    };
    for (auto const& s : schedulers) {
        auto j = scheduler_to_json(s, m);
        auto back = scheduler_from_json(j, m);
        CHECK(scheduler_to_json(back, m) == j);
        for (int i = 0; i < 10; ++i) {
            auto d = confmc::testing::rand_config(rng, 3);
            CHECK(back.eval(d) == s.eval(d));
        }
    }
    for (auto const& h : targets) {
        auto j = target_to_json(h);
        CHECK(target_to_json(target_from_json(j, 3)) == j);
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Query q;
        q.initial = confmc::testing::rand_config(rng, 3);
        q.semantics = kAllSemantics[i % 4];
        q.target = targets[i];
        q.threshold = Rat(1, 3);
        q.scheduler = schedulers[i];
        q.options.K = 4;
        q.options.gamma = Rat(1, 2);
        q.options.depth = 3;
        auto text = serialize_query(q, m);
        auto back = parse_query(text, m);
        CHECK(back.initial == q.initial);
        CHECK(back.semantics == q.semantics);
        CHECK(back.threshold == q.threshold);
        CHECK(back.options.K == q.options.K);
        CHECK(back.options.gamma == q.options.gamma);
        CHECK_FALSE(back.options.L.has_value());
        CHECK(serialize_query(back, m) == text);
    }
}

TEST_CASE("query validation") {
    auto m = gen_table1();
    auto bad_len = R"({"initial": ["1", "0"], "semantics": "msct",
        "target": {"kind": "upward", "generators": [["0", "0", "1"]]}, "threshold": "1/2"})";
    CHECK(kind_of([&] { parse_query(bad_len, m); }) == ErrorKind::DimensionMismatch);
    auto bad_sem = R"({"initial": ["1", "0", "0"], "semantics": "fast",
        "target": {"kind": "upward", "generators": [["0", "0", "1"]]}, "threshold": "1/2"})";
    CHECK(kind_of([&] { parse_query(bad_sem, m); }) == ErrorKind::Parse);
    auto bad_action = R"({"initial": ["1", "0", "0"], "semantics": "msct",
        "target": {"kind": "upward", "generators": [["0", "0", "1"]]}, "threshold": "1/2",
        "scheduler": {"kind": "constant", "weights": {"z": "1"}}})";
    CHECK(kind_of([&] { parse_query(bad_action, m); }) != ErrorKind::BackendFailure);
}

TEST_CASE("result records round-trip") {
    ResultRecord r;
    r.command = "check-csmt";
    r.verdict = "reachable";
    r.details = {{"witness", {"b"}}, {"witness_end", rats_to_json(std::vector<Rat>{Rat(0), Rat(1, 10), Rat(9, 10)})}};
    r.options = {{"K", 3}};
    r.seed = 9;
    r.seconds = 0.25;
    auto j = to_json(r);
    CHECK(j["version"] == CONFMC_VERSION);
    auto back = result_from_json(j);
    CHECK(back.command == r.command);
    CHECK(back.verdict == r.verdict);
    CHECK(back.details == r.details);
    CHECK(back.options == r.options);
    CHECK(back.seed == 9);
    CHECK(to_json(back) == j);
}

TEST_CASE("exit codes by error kind") {
    CHECK(exit_code_for(ErrorKind::Parse) == 2);
    CHECK(exit_code_for(ErrorKind::NotStochastic) == 2);
    CHECK(exit_code_for(ErrorKind::InvalidInput) == 2);
    CHECK(exit_code_for(ErrorKind::SolverSpawnFailure) == 3);
    CHECK(exit_code_for(ErrorKind::BranchExplosion) == 3);
    CHECK(exit_code_for(ErrorKind::ModelParseError) == 3);
}

TEST_CASE("casino generator examples") {
    auto one = gen_casino({1, 1, true, 3});
    REQUIRE(one.num_states() == 2);
    CHECK(one.action_names == std::vector<std::string>{"keep", "b_1"});
    CHECK(one.successor(0, 1) == Dist<StateId>::dirac(1));
    CHECK(one.successor(1, 1) == Dist<StateId>::dirac(0));
    CHECK(one.successor(1, 0) == Dist<StateId>::dirac(1));

    auto absorbing = gen_casino({1, 1, false, 3});
    CHECK(absorbing.successor(1, 1) == Dist<StateId>::dirac(1));

    CHECK(gen_casino({5, 2, true, 11}) == gen_casino({5, 2, true, 11}));
    CHECK_FALSE(gen_casino({5, 2, true, 11}) == gen_casino({5, 2, true, 12}));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK_NOTHROW(mdp_validate(gen_casino({4, 3, seed % 2 == 0, seed})));
    }

    auto h = casino_reward_target(one, Rat(1, 10));
    CHECK(h.contains(Configuration({Rat(9, 10), Rat(1, 10)})));
    CHECK_FALSE(h.contains(Configuration({Rat(19, 20), Rat(1, 20)})));
}

TEST_CASE("exam generator examples") {
    auto e = gen_exam({1, 1, Rat(1, 2), 5});
    REQUIRE(e.num_states() == 2);
    CHECK(e.successor(0, 0) == Dist<StateId>::from_pairs({{0, Rat(1, 2)}, {1, Rat(1, 2)}}));
    CHECK(e.successor(1, 0) == Dist<StateId>::dirac(1));
    CHECK(gen_exam({4, 2, Rat(1, 3), 42}) == gen_exam({4, 2, Rat(1, 3), 42}));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto m = gen_exam({3, 3, Rat(1, 4), seed});
        CHECK_NOTHROW(mdp_validate(m));
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            CHECK(m.matrices[a](0, 0) == Rat(1, 4));
        }
    }
    // one action, one grade: the best share is the whole non-R mass
    auto h = exam_grade_target(e, Rat(7, 10));
    CHECK(h.contains(Configuration({Rat(3, 10), Rat(7, 10)})));
    CHECK_FALSE(h.contains(Configuration({Rat(1, 2), Rat(1, 2)})));
}

TEST_CASE("command line on Table-1") {
    TempDir dir;
    auto model = dir.file("t1.json");
    auto query = dir.file("t1q.json");
    REQUIRE(cli({"gen", "table1", "--out", model, "--query-out", query}).code == 0);

    auto step = [&](std::string sem) { return cli({"step", "--model", model, "--query", query, "--semantics", sem}); };
    auto msmt = step("msmt");
    CHECK(msmt.code == 0);
    CHECK(msmt.out == "1\t(0, 13/50, 37/50)\t[target]\n");
    auto csmt = step("csmt");
    CHECK(csmt.out.find("3/5\t(0, 1/10, 9/10)\t[target]") != std::string::npos);
    CHECK(csmt.out.find("2/5\t(0, 1/2, 1/2)") != std::string::npos);
    auto csct = step("csct");
    CHECK(csct.out.find("37/50\t(0, 0, 1)\t[target]") != std::string::npos);
    CHECK(csct.out.find("13/50\t(0, 1, 0)") != std::string::npos);

    auto reach = cli({"check-csmt", "--model", model, "--query", query, "--format", "json"});
    REQUIRE(reach.code == 0);
    auto j = Json::parse(reach.out);
    CHECK(j["verdict"] == "reachable");
    CHECK(j["details"]["witness"] == Json::array({"b"}));
    auto rec = result_from_json(j);
    auto again = cli({"check-csmt", "--model", model, "--query", query, "--format", "json", "--seed",
                      std::to_string(rec.seed), "--K", std::to_string(rec.options["K"].get<std::size_t>())});
    CHECK(Json::parse(again.out)["details"] == j["details"]);

    auto dot = dir.file("g.dot");
    auto ex = cli({"explore", "--model", model, "--query", query, "--semantics", "csmt", "--depth", "1", "--dot", dot});
    CHECK(ex.code == 0);
    CHECK(ex.out.find("threshold-met") == std::string::npos);
    CHECK(slurp(dot).rfind("digraph", 0) == 0);

    auto sim = cli({"simulate", "--model", model, "--query", query, "--runs", "500", "--seed", "3", "--format", "json"});
    CHECK(sim.code == 0);
    CHECK(Json::parse(sim.out)["details"]["hits"].get<std::size_t>() <= 500);

    CHECK(cli({"version"}).out.find(CONFMC_VERSION) != std::string::npos);
}

TEST_CASE("command line exit codes") {
    TempDir dir;
    auto model = dir.file("m.json");
    auto query = dir.file("q.json");
    REQUIRE(cli({"gen", "subsetsum", "--set", "1,2,3", "--target", "3", "--out", model, "--query-out", query}).code ==
            0);
    auto ex = cli({"explore", "--model", model, "--query", query, "--format", "json"});
    CHECK(ex.code == 0);
    CHECK(Json::parse(ex.out)["details"]["reach_probability"] == "1/4");

    CHECK(cli({"explore", "--model", dir.file("missing.json"), "--query", query}).code == 2);
    CHECK(cli({"explore", "--model", model}).code == 2);
    CHECK(cli({"bogus"}).code == 2);
    CHECK(cli({"--help"}).code == 0);

    auto bad = dir.write("bad.json", two_state(R"(["1/2", "1/3"])"));
    auto r = cli({"step", "--model", bad, "--query", query});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());

    auto t1 = dir.file("t1.json");
    auto t1q = dir.file("t1q.json");
    REQUIRE(cli({"gen", "table1", "--out", t1, "--query-out", t1q}).code == 0);
    CHECK(cli({"check-msct", "--model", t1, "--query", t1q, "--solver-cmd", "/nonexistent/solver"}).code == 3);
}
