#pragma once

#include <cstdint>

#include "confmc/model.hpp"
#include "confmc/target.hpp"

namespace confmc {

/// Three states q0,q1,q2 and actions a,b. From q0, a splits 1/2-1/2 onto
/// q1,q2 and b splits 1/10-9/10; q1 and q2 are absorbing under both.
MdpModel gen_table1();

struct CasinoParams {
    std::size_t n_games = 5;
    std::size_t m_rewards = 2;
    bool return_to_play = true;
    std::uint64_t seed = 7;
};

/// States P, R_1..R_m; actions keep, b_1..b_n. keep is the identity. b_i
/// sends P to the rewards along a seeded row. With return_to_play every b_i
/// sends each R_j back to P, otherwise rewards are absorbing.
MdpModel gen_casino(CasinoParams const& p);

struct ExamParams {
    std::size_t n_sets = 5;
    std::size_t n_grades = 2;
    Rat decay = Rat(1, 2);
    std::uint64_t seed = 42;
};

/// States R, grade_1..grade_g; actions P_1..P_n. Each P_i keeps `decay` of R
/// on R and spreads the rest over the grades with seeded weights. Grades are absorbing.
MdpModel gen_exam(ExamParams const& p);

/// Up-closure of "at least x of the mass sits on R_1" for a Casino model.
TargetSet casino_reward_target(MdpModel const& casino, Rat const& x);

/// Up-closure of "grade_1 holds at least `fraction` of the best grade_1 share
/// any single action reaches", i.e. fraction * max_i M_i(R, grade_1) / (1 - M_i(R, R)).
TargetSet exam_grade_target(MdpModel const& exam, Rat const& fraction);

}  // namespace confmc
