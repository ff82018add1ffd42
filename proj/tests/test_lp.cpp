#include <doctest.h>

#include "confmc/lp.hpp"
#include "support.hpp"

using namespace confmc;
using namespace confmc::lp;
using confmc::testing::Rng;

namespace {

bool satisfies(Problem const& p, std::vector<Rat> const& x) {
    for (std::size_t i = 0; i < p.num_vars; ++i) {
        Rat lo = p.lower.empty() ? Rat(0) : p.lower[i];
        if (x[i] < lo) {
            return false;
        }
        if (!p.upper.empty() && p.upper[i] && x[i] > *p.upper[i]) {
            return false;
        }
    }
    for (auto const& r : p.rows) {
        Rat v = 0;
        for (std::size_t i = 0; i < p.num_vars; ++i) {
            v += r.coeffs[i] * x[i];
        }
        if ((r.sense == Sense::LessEq && v > r.rhs) || (r.sense == Sense::GreaterEq && v < r.rhs) ||
            (r.sense == Sense::Equal && v != r.rhs)) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("textbook maximization") {
    Problem p(2);
    p.objective = {Rat(1), Rat(1)};
    p.maximize = true;
    p.add_row({Rat(1), Rat(2)}, Sense::LessEq, Rat(4));
    p.add_row({Rat(3), Rat(1)}, Sense::LessEq, Rat(6));
    ExactSimplex lp;
    auto r = lp.solve(p);
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.x == std::vector<Rat>{Rat(8, 5), Rat(6, 5)});
    CHECK(r.objective == Rat(14, 5));
}

TEST_CASE("minimization with >= rows, equalities and bounds") {
    Problem p(3);
    p.objective = {Rat(1), Rat(1), Rat(1)};
    p.add_row({Rat(1, 10), Rat(1), Rat(0)}, Sense::GreaterEq, Rat(0));
    p.add_row({Rat(9, 10), Rat(0), Rat(1)}, Sense::GreaterEq, Rat(9, 10));
    ExactSimplex lp;
    auto r = lp.solve(p);
    REQUIRE(r.status == Status::Optimal);
    CHECK(r.objective == Rat(9, 10));
    CHECK(satisfies(p, r.x));

    Problem q(2);
    q.objective = {Rat(1), Rat(0)};
    q.lower = {Rat(1, 2), Rat(-1)};
    q.upper = {std::nullopt, Rat(2)};
    q.add_row({Rat(1), Rat(1)}, Sense::Equal, Rat(1));
    auto s = lp.solve(q);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("infeasible and unbounded problems are classified") {
    ExactSimplex lp;
    Problem inf(1);
    inf.add_row({Rat(1)}, Sense::GreaterEq, Rat(2));
    inf.add_row({Rat(1)}, Sense::LessEq, Rat(1));
    CHECK(lp.solve(inf).status == Status::Infeasible);

    Problem unb(2);
    unb.objective = {Rat(1), Rat(0)};
    unb.maximize = true;
    unb.add_row({Rat(0), Rat(1)}, Sense::LessEq, Rat(1));
    CHECK(lp.solve(unb).status == Status::Unbounded);
}

TEST_CASE("random 2-variable LPs match vertex enumeration") {
    Rng rng(31);
    ExactSimplex lp;
    for (int trial = 0; trial < 300; ++trial) {
        Problem p(2);
        p.maximize = true;
        p.objective = {make_rat(static_cast<std::int64_t>(rng() % 7) - 2), make_rat(static_cast<std::int64_t>(rng() % 7) - 2)};
        std::size_t m = 1 + rng() % 4;
        for (std::size_t i = 0; i < m; ++i) {
            p.add_row({make_rat(static_cast<std::int64_t>(rng() % 5)), make_rat(static_cast<std::int64_t>(rng() % 5))},
                      Sense::LessEq, make_rat(static_cast<std::int64_t>(1 + rng() % 9)));
        }
        p.upper = {Rat(10), Rat(10)};
        auto r = lp.solve(p);
        REQUIRE(r.status == Status::Optimal);
        CHECK(satisfies(p, r.x));

        // every vertex is the intersection of two tight lines among rows, bounds and axes
        std::vector<std::pair<std::vector<Rat>, Rat>> lines;
        for (auto const& row : p.rows) {
            lines.push_back({row.coeffs, row.rhs});
        }
        lines.push_back({{Rat(1), Rat(0)}, Rat(0)});
        lines.push_back({{Rat(0), Rat(1)}, Rat(0)});
        lines.push_back({{Rat(1), Rat(0)}, Rat(10)});
        lines.push_back({{Rat(0), Rat(1)}, Rat(10)});
        Rat best = 0;  // the origin is always feasible
        for (std::size_t i = 0; i < lines.size(); ++i) {
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                auto const& [a, b] = lines[i];
                auto const& [c, e] = lines[j];
                Rat det = a[0] * c[1] - a[1] * c[0];
                if (det == 0) {
                    continue;
                }
                std::vector<Rat> x{(b * c[1] - a[1] * e) / det, (a[0] * e - b * c[0]) / det};
                if (satisfies(p, x)) {
                    best = std::max(best, Rat(p.objective[0] * x[0] + p.objective[1] * x[1]));
                }
            }
        }
        CHECK(r.objective == best);
    }
}

TEST_CASE("default backend is the exact simplex") {
    auto b = make_default_backend();
    CHECK(b->name() == "exact-simplex");
    CHECK(b->reentrant());
    CHECK(std::string(to_string(Status::Infeasible)).size() > 0);
}
