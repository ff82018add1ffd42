#include <doctest.h>

#include "confmc/certificate.hpp"
#include "confmc/error.hpp"
#include "confmc/generators.hpp"
#include "confmc/lp.hpp"
#include "confmc/solver.hpp"
#include "support.hpp"

using namespace confmc;
using confmc::testing::Rng;

namespace {

std::string const kSolver = default_solver_command();

std::string decl_r(std::string body) {
    return "(set-logic QF_NRA)\n(declare-fun r () Real)\n" + body + "(check-sat)\n(get-model)\n";
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (Error const& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidInput;
}

Certificate constant_certificate(std::size_t n, std::size_t k, Rat r0) {
    Certificate c;
    c.theta.assign(k, std::vector<Rat>(n + 1, Rat(0)));
    for (auto& t : c.theta) {
        t[0] = make_rat(1, static_cast<std::int64_t>(k));
    }
    c.s.assign(n + 1, Rat(0));
    c.s[0] = 1;
    c.r.assign(n + 1, Rat(0));
    c.r[0] = std::move(r0);
    c.gamma = Rat(99999, 100000);
    c.xi = Rat(9, 10);
    return c;
}

}  // namespace

TEST_CASE("run_solver verdicts") {
    auto unsat = run_solver("(assert (> 0.0 1.0))\n(check-sat)\n", kSolver, 30);
    CHECK(unsat.status == SolverResult::Status::Unsat);

    auto sat = run_solver(decl_r("(assert (>= r 0.0))\n(assert (<= r 0.0))\n"), kSolver, 30);
    REQUIRE(sat.status == SolverResult::Status::Sat);
    CHECK(sat.model.at("r") == 0);

    auto skipped = run_solver(decl_r(""), kSolver, 0);
    CHECK(skipped.status == SolverResult::Status::Unknown);
}

TEST_CASE("a staged payload stops at the first sat stage") {
    std::string payload = decl_r("(assert (> r 1.0))\n(assert (< r 0.0))\n") + "(reset)\n" +
                          decl_r("(assert (= (* 2.0 r) 1.0))\n") + "(reset)\n" + decl_r("(assert (> r 5.0))\n");
    auto res = run_solver(payload, kSolver, 30);
    REQUIRE(res.status == SolverResult::Status::Sat);
    CHECK(res.stage == 1);
    CHECK(res.model.at("r") == Rat(1, 2));

    auto all_unsat = run_solver(decl_r("(assert (> r r))\n") + "(reset)\n" + decl_r("(assert (< r r))\n"), kSolver, 30);
    CHECK(all_unsat.status == SolverResult::Status::Unsat);
    CHECK(all_unsat.stage == 2);
}

TEST_CASE("canned solver output") {
    auto res = run_solver("ignored", "cat >/dev/null; printf 'sat\\n(\\n  (define-fun r_0 () Real (/ 3.0 4.0))\\n)\\n'", 10);
    REQUIRE(res.status == SolverResult::Status::Sat);
    CHECK(res.model.at("r_0") == Rat(3, 4));

    auto unknown = run_solver("x", "cat >/dev/null; echo unknown", 10);
    CHECK(unknown.status == SolverResult::Status::Unknown);

    CHECK(kind_of([] { run_solver("x", "cat >/dev/null; echo sat", 10); }) == ErrorKind::ModelParseError);
    CHECK(kind_of([] { run_solver("x", "/nonexistent/solver-binary", 10); }) == ErrorKind::SolverSpawnFailure);
}

TEST_CASE("parse_smt_model value forms") {
    auto m = parse_smt_model(
        "(model\n (define-fun a () Real 2.0)\n (define-fun b () Real (- 1.5))\n (define-fun c () Real (/ 1.0 3.0))\n"
        " (define-fun e () Real (- (/ 2.0 7.0)))\n (define-fun f () Int 4))");
    CHECK(m.at("a") == 2);
    CHECK(m.at("b") == Rat(-3, 2));
    CHECK(m.at("c") == Rat(1, 3));
    CHECK(m.at("e") == Rat(-2, 7));
    CHECK(m.at("f") == 4);
    CHECK(kind_of([] { parse_smt_model("((define-fun x () Real (root-obj (+ (^ x 2) (- 2)) 1)))"); }) ==
          ErrorKind::ModelParseError);
    CHECK(kind_of([] { parse_smt_model("((define-fun x () Real (/ 1.0 3.0)"); }) == ErrorKind::ModelParseError);
}

TEST_CASE("verify_certificate examples") {
    auto m = gen_table1();
    auto d0 = Configuration::dirac(3, 0);
    auto everything = TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(0)})});
    auto one = constant_certificate(3, 2, Rat(1));
    auto ok = verify_certificate(one, m, d0, everything, 200, 1);
    CHECK(ok.ok());
    CHECK(ok.vertices_checked == 3);

    auto h = TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(7, 10)})});
    auto low = constant_certificate(3, 2, Rat(1, 2));
    auto bad = verify_certificate(low, m, d0, h, 200, 1);
    REQUIRE_FALSE(bad.ok());
    bool reach = false;
    for (auto const& v : bad.violations) {
        reach = reach || v.check == "reachable";
    }
    CHECK(reach);

    auto skew = one;
    skew.theta[0][0] = Rat(-1);
    CHECK_FALSE(verify_certificate(skew, m, d0, everything, 0, 1).ok());
}

TEST_CASE("check_msct on trivial instances") {
    auto m = gen_table1();
    MsctOptions opt;
    opt.timeout_s = 60;
    opt.verify_samples = 500;

    auto all = check_msct(m, Configuration::dirac(3, 0), TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(0)})}), Rat(1), opt);
    CHECK(all.tag == MsctOutcome::Tag::Certified);
    REQUIRE(all.certificate.has_value());
    CHECK(all.report.ok());
    CHECK(all.payload_bytes > 0);

    // q1 is absorbing, so no mass ever reaches q0 from it
    auto none = check_msct(m, Configuration::dirac(3, 1), TargetSet::upward({Vec01({Rat(1), Rat(0), Rat(0)})}), Rat(1), opt);
    CHECK(none.tag == MsctOutcome::Tag::Unknown);
    CHECK_FALSE(none.certificate.has_value());
    CHECK(!none.reason.empty());
}

TEST_CASE("no linear submartingale exists for the Table-1 target") {
    // For any fixed valid linear-fractional scheduler the template constraints
    // are linear in r. Points on the absorbing q1-q2 edge outside H force R to
    // vanish there, and then the inductive condition at q0 caps R(q0) at 0.
    auto m = gen_table1();
    Rat gamma = make_rat(99999, 100000);
    Rng rng(61);
    lp::ExactSimplex lp;
    std::vector<std::vector<Rat>> points{{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(1, 2), Rat(1, 2)}};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::vector<Rat>> theta(2, std::vector<Rat>(4));
        std::vector<Rat> s(4, Rat(0));
        for (auto& t : theta) {
            for (std::size_t i = 0; i < 4; ++i) {
                t[i] = confmc::testing::rand_weight(rng) + 1;
                s[i] += t[i];
            }
        }
        auto at = [](std::vector<Rat> const& c, std::vector<Rat> const& d) -> Rat {
            return c[0] + c[1] * d[0] + c[2] * d[1] + c[3] * d[2];
        };
        lp::Problem p(4);
        p.lower.assign(4, Rat(-100));
        auto r_row = [](std::vector<Rat> const& d, Rat scale) {
            return std::vector<Rat>{scale, scale * d[0], scale * d[1], scale * d[2]};
        };
        for (std::size_t q = 0; q < 3; ++q) {
            auto e = Configuration::dirac(3, q).weights();
            p.add_row(r_row(e, Rat(1)), lp::Sense::GreaterEq, Rat(0));
            p.add_row(r_row(e, Rat(1)), lp::Sense::LessEq, Rat(1));
        }
        p.add_row(r_row({Rat(1), Rat(0), Rat(0)}, Rat(1)), lp::Sense::GreaterEq, Rat(9, 10));
        for (auto const& d : points) {
            std::vector<Rat> row = r_row(d, -at(s, d));
            for (ActionId a = 0; a < 2; ++a) {
                auto img = m.matrices[a].transpose_apply(d);
                auto part = r_row(img, gamma * at(theta[a], d));
                for (std::size_t i = 0; i < 4; ++i) {
                    row[i] += part[i];
                }
            }
            p.add_row(row, lp::Sense::GreaterEq, Rat(0));
        }
        CHECK(lp.solve(p).status == lp::Status::Infeasible);
    }
}

TEST_CASE("check_msct reports Table-1 as uncertified") {
    auto m = gen_table1();
    MsctOptions opt;
    opt.timeout_s = 120;
    opt.ascend_degrees = false;
    opt.degree = 2;
    auto r = check_msct(m, Configuration::dirac(3, 0), TargetSet::upward({Vec01({Rat(0), Rat(0), Rat(7, 10)})}),
                        Rat(9, 10), opt);
    CHECK(r.tag == MsctOutcome::Tag::Unknown);
    CHECK(r.reason.find("unsatisfiable") != std::string::npos);
}
