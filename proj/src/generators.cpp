#include "confmc/generators.hpp"

#include <algorithm>
#include <random>

#include "confmc/error.hpp"

namespace confmc {

namespace {

/// k positive rationals summing to exactly `mass`, from integer weights in 1..10.
std::vector<Rat> seeded_row(std::mt19937_64& rng, std::size_t k, Rat const& mass) {
    std::vector<std::uint64_t> w(k);
    std::uint64_t total = 0;
    for (auto& x : w) {
        x = rng() % 10 + 1;
        total += x;
    }
    std::vector<Rat> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j] = mass * make_rat(static_cast<std::int64_t>(w[j]), static_cast<std::int64_t>(total));
    }
    return out;
}

Matrix from_rows(std::vector<std::vector<Rat>> const& rows) {
    std::size_t n = rows.size();
    std::vector<Rat> e;
    e.reserve(n * n);
    for (auto const& r : rows) {
        e.insert(e.end(), r.begin(), r.end());
    }
    return Matrix(n, std::move(e));
}

}  // namespace

MdpModel gen_table1() {
    MdpModel m;
    m.state_names = {"q0", "q1", "q2"};
    m.action_names = {"a", "b"};
    Rat z(0), one(1);
    m.matrices.push_back(from_rows({{z, Rat(1, 2), Rat(1, 2)}, {z, one, z}, {z, z, one}}));
    m.matrices.push_back(from_rows({{z, Rat(1, 10), Rat(9, 10)}, {z, one, z}, {z, z, one}}));
    return m;
}

MdpModel gen_casino(CasinoParams const& p) {
    if (p.n_games == 0 || p.m_rewards == 0) {
        fail(ErrorKind::InvalidInput, "casino needs at least one game and one reward state");
    }
    std::size_t n = p.m_rewards + 1;
    MdpModel m;
    m.state_names.push_back("P");
    for (std::size_t j = 1; j <= p.m_rewards; ++j) {
        m.state_names.push_back("R_" + std::to_string(j));
    }
    m.action_names.push_back("keep");
    m.matrices.push_back(Matrix::identity(n));
    std::mt19937_64 rng(p.seed);
    for (std::size_t i = 1; i <= p.n_games; ++i) {
        m.action_names.push_back("b_" + std::to_string(i));
        std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n, Rat(0)));
        auto spread = seeded_row(rng, p.m_rewards, Rat(1));
        for (std::size_t j = 0; j < p.m_rewards; ++j) {
            rows[0][j + 1] = spread[j];
        }
        for (std::size_t j = 1; j < n; ++j) {
            rows[j][p.return_to_play ? 0 : j] = 1;
        }
        m.matrices.push_back(from_rows(rows));
    }
    return m;
}

MdpModel gen_exam(ExamParams const& p) {
    if (p.n_sets == 0 || p.n_grades == 0) {
        fail(ErrorKind::InvalidInput, "exam needs at least one problem set and one grade");
    }
    if (p.decay <= 0 || p.decay >= 1) {
        fail(ErrorKind::InvalidInput, "exam decay must lie strictly between 0 and 1");
    }
    std::size_t n = p.n_grades + 1;
    MdpModel m;
    m.state_names.push_back("R");
    for (std::size_t j = 1; j <= p.n_grades; ++j) {
        m.state_names.push_back("grade_" + std::to_string(j));
    }
    std::mt19937_64 rng(p.seed);
    for (std::size_t i = 1; i <= p.n_sets; ++i) {
        m.action_names.push_back("P_" + std::to_string(i));
        std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(n, Rat(0)));
        rows[0][0] = p.decay;
        auto spread = seeded_row(rng, p.n_grades, 1 - p.decay);
        for (std::size_t j = 0; j < p.n_grades; ++j) {
            rows[0][j + 1] = spread[j];
        }
        for (std::size_t j = 1; j < n; ++j) {
            rows[j][j] = 1;
        }
        m.matrices.push_back(from_rows(rows));
    }
    return m;
}

TargetSet casino_reward_target(MdpModel const& casino, Rat const& x) {
    std::vector<Rat> g(casino.num_states(), Rat(0));
    g.at(1) = x;
    return TargetSet::upward({Vec01(std::move(g))});
}

TargetSet exam_grade_target(MdpModel const& exam, Rat const& fraction) {
    Rat best = 0;
    for (auto const& mat : exam.matrices) {
        Rat leave = 1 - mat(0, 0);
        if (leave > 0) {
            best = std::max(best, Rat(mat(0, 1) / leave));
        }
    }
    std::vector<Rat> g(exam.num_states(), Rat(0));
    g.at(1) = fraction * best;
    return TargetSet::upward({Vec01(std::move(g))});
}

}  // namespace confmc
