#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "confmc/antichain.hpp"
#include "confmc/explorer.hpp"
#include "confmc/generators.hpp"
#include "support.hpp"

using namespace confmc;
using confmc::testing::Rng;

namespace {

Vec01 vec(std::vector<Rat> w) { return Vec01(std::move(w)); }

std::vector<Rat> image(Matrix const& m, Vec01 const& y) { return m.transpose_apply(y.entries()); }

/// y pushed through the word as a vector, action by action.
std::vector<Rat> push(MdpModel const& m, std::vector<Rat> y, std::vector<ActionId> const& w) {
    for (ActionId a : w) {
        y = m.matrices[a].transpose_apply(y);
    }
    return y;
}

bool in_up(TargetSet const& h, std::vector<Rat> const& y) {
    for (auto const& g : h.generators()) {
        if (leq(g.entries(), y)) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("floor insertion examples") {
    Antichain a;
    a = antichain_floor_insert(a, vec({Rat(0), Rat(0), Rat(7, 10)}));
    auto same = antichain_floor_insert(a, vec({Rat(0), Rat(0), Rat(9, 10)}));
    CHECK(same.same_elements(a));
    CHECK(same.size() == 1);

    auto x = vec({Rat(1, 3), Rat(0), Rat(0)});
    auto one = antichain_floor_insert(Antichain{}, x);
    CHECK(one.elements() == std::vector<Vec01>{x});

    auto two = antichain_floor_insert(a, vec({Rat(1), Rat(0), Rat(0)}));
    auto shrunk = antichain_floor_insert(two, vec({Rat(0), Rat(0), Rat(1, 2)}));
    Antichain expected;
    expected.insert(vec({Rat(0), Rat(0), Rat(1, 2)}));
    expected.insert(vec({Rat(1), Rat(0), Rat(0)}));
    CHECK(shrunk.same_elements(expected));
}

TEST_CASE("top insertion keeps maximal elements") {
    Antichain t(Antichain::Kind::Top);
    t.insert(vec({Rat(1, 2), Rat(1, 2)}));
    CHECK_FALSE(t.insert(vec({Rat(1, 4), Rat(1, 2)})));
    CHECK(t.insert(vec({Rat(1), Rat(1)})));
    CHECK(t.size() == 1);
    CHECK(t.covers(vec({Rat(0), Rat(1)})));
}

TEST_CASE("random insertions keep an antichain that covers every input") {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        Antichain a;
        std::vector<Vec01> seen;
        for (int i = 0; i < 12; ++i) {
            auto x = confmc::testing::rand_vec01(rng, 3, 3);
            a.insert(x);
            seen.push_back(x);
            CHECK(a.is_antichain());
        }
        for (auto const& x : seen) {
            CHECK(a.covers(x));
        }
    }
}

TEST_CASE("pullback examples") {
    auto m = gen_table1();
    lp::ExactSimplex lp;
    PullbackOptions k1;
    k1.K = 1;

    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        // sub-probability vectors: a configuration can only cover those
        auto w = confmc::testing::rand_simplex(rng, 4);
        auto x = vec({w[0], w[1], w[2]});
        auto ys = pullback_minimals(Matrix::identity(3), x, k1, lp);
        REQUIRE(ys.size() == 1);
        CHECK(ys[0] == x);
        auto zs = pullback_maximals(Matrix::identity(3), x, k1, lp);
        REQUIRE(zs.size() == 1);
        CHECK(zs[0] == x);
    }

    auto b = pullback_minimals(m.matrices[1], vec({Rat(0), Rat(0), Rat(9, 10)}), k1, lp);
    CHECK(b == std::vector<Vec01>{vec({Rat(0), Rat(0), Rat(9, 10)})});
    auto a = pullback_minimals(m.matrices[0], vec({Rat(0), Rat(0), Rat(7, 10)}), k1, lp);
    CHECK(a == std::vector<Vec01>{vec({Rat(0), Rat(0), Rat(7, 10)})});
}

TEST_CASE("pullbacks are sound, antichains, and upward stable") {
    Rng rng(43);
    lp::ExactSimplex lp;
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n = 2 + rng() % 3;
        auto m = confmc::testing::rand_stochastic(rng, n);
        auto x = confmc::testing::rand_vec01(rng, n, 4);
        PullbackOptions opt;
        opt.seed = rng();
        auto ys = pullback_minimals(m, x, opt, lp);
        Antichain check;
        for (auto const& y : ys) {
            CHECK(leq(x.entries(), image(m, y)));
            CHECK(y.sum() <= 1);
            CHECK(check.insert(y));
            // anything above y (still in [0,1]) also lands above x
            std::vector<Rat> up = y.entries();
            for (auto& v : up) {
                v += (1 - v) * make_rat(static_cast<std::int64_t>(rng() % 3), 3);
            }
            CHECK(leq(x.entries(), m.transpose_apply(up)));
        }
        CHECK(check.is_antichain());

        auto zs = pullback_maximals(m, x, opt, lp);
        for (auto const& z : zs) {
            CHECK(leq(image(m, z), x.entries()));
        }
    }
}

TEST_CASE("backward_reach examples") {
    auto m = gen_table1();
    auto d0 = Configuration::dirac(3, 0);
    auto h = TargetSet::upward({vec({Rat(0), Rat(0), Rat(7, 10)})});
    auto r = backward_reach(m, d0, h);
    CHECK(r.tag == ReachOutcome::Tag::Reachable);
    CHECK(r.witness == std::vector<ActionId>{1});
    CHECK(r.iterations <= 1);
    CHECK(h.contains(replay(m, d0, r.witness)));

    auto inside = backward_reach(m, Configuration::dirac(3, 2), h);
    CHECK(inside.tag == ReachOutcome::Tag::Reachable);
    CHECK(inside.witness.empty());
    CHECK(inside.iterations == 0);

    auto far = backward_reach(m, d0, TargetSet::upward({vec({Rat(0), Rat(26, 100), Rat(74, 100)})}));
    CHECK(far.tag != ReachOutcome::Tag::Reachable);
}

TEST_CASE("dual backward_reach examples") {
    auto m = gen_table1();
    auto d0 = Configuration::dirac(3, 0);
    auto all = dual_backward_reach(m, d0, TargetSet::downward({vec({Rat(1), Rat(1), Rat(1)})}));
    CHECK(all.tag == ReachOutcome::Tag::Reachable);
    CHECK(all.witness.empty());

    auto h = TargetSet::downward({vec({Rat(0), Rat(1, 5), Rat(1)})});
    auto r = backward_reach(m, d0, h);  // forwarded to the dual
    CHECK(r.tag == ReachOutcome::Tag::Reachable);
    CHECK(r.witness == std::vector<ActionId>{1});
    CHECK(h.contains(replay(m, d0, r.witness)));
}

TEST_CASE("frontier elements carry words that lead into the target") {
    Rng rng(44);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 3;
        auto m = confmc::testing::rand_mdp(rng, n, 2);
        auto d0 = Configuration::dirac(n, 0);
        auto h = TargetSet::upward({confmc::testing::rand_vec01(rng, n, 3)});
        BackwardOptions opt;
        opt.loop_limit = 8;
        opt.seed = rng();
        auto r = backward_reach(m, d0, h, opt);
        if (r.tag == ReachOutcome::Tag::Reachable) {
            CHECK(h.contains(replay(m, d0, r.witness)));
        }
        Antichain check;
        for (auto const& e : r.frontier) {
            CHECK(in_up(h, push(m, e.value.entries(), e.word)));
            check.insert(e.value);
        }
        CHECK(check.size() == r.frontier.size());
    }
}

TEST_CASE("parallel backward iteration reproduces the serial run") {
#ifdef _OPENMP
    int before = omp_get_max_threads();
    omp_set_num_threads(4);
#endif
    Rng rng(45);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = gen_exam({2 + rng() % 3, 2, Rat(1, 2), rng()});
        auto h = exam_grade_target(m, Rat(7, 10));
        BackwardOptions serial;
        serial.parallel = false;
        serial.seed = trial;
        serial.loop_limit = 30;
        BackwardOptions par = serial;
        par.parallel = true;
        auto d0 = Configuration::dirac(m.num_states(), 0);
        auto a = backward_reach(m, d0, h, serial);
        auto b = backward_reach(m, d0, h, par);
        CHECK(a.tag == b.tag);
        CHECK(a.witness == b.witness);
        CHECK(a.iterations == b.iterations);
        CHECK(a.lp_calls == b.lp_calls);
        REQUIRE(a.frontier.size() == b.frontier.size());
        for (std::size_t i = 0; i < a.frontier.size(); ++i) {
            CHECK(a.frontier[i].value == b.frontier[i].value);
            CHECK(a.frontier[i].word == b.frontier[i].word);
        }
    }
#ifdef _OPENMP
    omp_set_num_threads(before);
#endif
}

TEST_CASE("small exam instances terminate and replay") {
    auto m = gen_exam({3, 2, Rat(1, 2), 42});
    auto d0 = Configuration::dirac(m.num_states(), 0);
    auto h = exam_grade_target(m, Rat(7, 10));
    auto r = backward_reach(m, d0, h);
    CHECK(r.iterations <= 100);
    if (r.tag == ReachOutcome::Tag::Reachable) {
        CHECK(h.contains(replay(m, d0, r.witness)));
    }
}

TEST_CASE("monotone targets only") {
    auto m = gen_table1();
    CHECK_THROWS_AS(backward_reach(m, Configuration::dirac(3, 0), TargetSet::explicit_configs({Configuration::dirac(3, 1)})),
                    Error);
}
