#include "confmc/lp.hpp"

#include "confmc/error.hpp"

namespace confmc::lp {

char const* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

namespace {

/// max c.x  s.t.  A x <= b,  x >= 0.
/// Layout follows the classic dense tableau: rows 0..m-1 constraints, row m
/// the objective, row m+1 the phase-one objective; column n is the artificial
/// variable and column n+1 the right-hand side.
class Tableau {
   public:
    Tableau(std::vector<std::vector<Rat>> const& a, std::vector<Rat> const& b, std::vector<Rat> const& c)
        : m_(static_cast<int>(b.size())),
          n_(static_cast<int>(c.size())),
          nonbasic_(static_cast<std::size_t>(n_ + 1)),
          basic_(static_cast<std::size_t>(m_)),
          d_(static_cast<std::size_t>(m_ + 2), std::vector<Rat>(static_cast<std::size_t>(n_ + 2), Rat(0))) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) {
                at(i, j) = a[i][j];
            }
            basic_[i] = n_ + i;
            at(i, n_) = -1;
            at(i, n_ + 1) = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            at(m_, j) = -c[j];
        }
        nonbasic_[n_] = -1;
        at(m_ + 1, n_) = 1;
    }

    Result solve() {
        Result res;
        int r = 0;
        for (int i = 1; i < m_; ++i) {
            if (at(i, n_ + 1) < at(r, n_ + 1)) {
                r = i;
            }
        }
        if (m_ > 0 && at(r, n_ + 1) < 0) {
            pivot(r, n_);
            if (!simplex(2) || at(m_ + 1, n_ + 1) < 0) {
                res.status = Status::Infeasible;
                return res;
            }
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != -1) {
                    continue;
                }
                int s = -1;
                for (int j = 0; j < n_ + 1; ++j) {
                    if (at(i, j) != 0 && (s == -1 || nonbasic_[j] < nonbasic_[s])) {
                        s = j;
                    }
                }
                if (s != -1) {
                    pivot(i, s);
                }
            }
        }
        bool bounded = simplex(1);
        res.x.assign(static_cast<std::size_t>(n_), Rat(0));
        for (int i = 0; i < m_; ++i) {
            if (basic_[i] >= 0 && basic_[i] < n_) {
                res.x[basic_[i]] = at(i, n_ + 1);
            }
        }
        res.status = bounded ? Status::Optimal : Status::Unbounded;
        res.objective = at(m_, n_ + 1);
        return res;
    }

   private:
    Rat& at(int i, int j) { return d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    void pivot(int r, int s) {
        Rat inv = 1 / at(r, s);
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || at(i, s) == 0) {
                continue;
            }
            Rat factor = at(i, s) * inv;
            for (int j = 0; j < n_ + 2; ++j) {
                if (at(r, j) != 0) {
                    at(i, j) -= at(r, j) * factor;
                }
            }
            at(i, s) = at(r, s) * factor;
        }
        for (int j = 0; j < n_ + 2; ++j) {
            if (j != s) {
                at(r, j) *= inv;
            }
        }
        for (int i = 0; i < m_ + 2; ++i) {
            if (i != r) {
                at(i, s) *= -inv;
            }
        }
        at(r, s) = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    // Bland: entering = lowest-indexed improving column, leaving = minimum
    // ratio with ties broken by lowest basic index. Exact arithmetic plus this
    // rule rules out cycling.
    bool simplex(int phase) {
        int x = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j < n_ + 1; ++j) {
                if (nonbasic_[j] == -phase || at(x, j) >= 0) {
                    continue;
                }
                if (s == -1 || nonbasic_[j] < nonbasic_[s]) {
                    s = j;
                }
            }
            if (s == -1) {
                return true;
            }
            int r = -1;
            Rat best;
            for (int i = 0; i < m_; ++i) {
                if (at(i, s) <= 0) {
                    continue;
                }
                Rat ratio = at(i, n_ + 1) / at(i, s);
                if (r == -1 || ratio < best || (ratio == best && basic_[i] < basic_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) {
                return false;
            }
            pivot(r, s);
        }
    }

    int m_;
    int n_;
    std::vector<int> nonbasic_;
    std::vector<int> basic_;
    std::vector<std::vector<Rat>> d_;
};

}  // namespace

Result ExactSimplex::solve(Problem const& p) {
    std::size_t n = p.num_vars;
    if (p.objective.size() != n) {
        fail(ErrorKind::DimensionMismatch, "LP objective length differs from the variable count");
    }
    std::vector<Rat> lower = p.lower.empty() ? std::vector<Rat>(n, Rat(0)) : p.lower;
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    auto push_le = [&](std::vector<Rat> coeffs, Rat rhs) {
        // Shift x = lower + x'.
        for (std::size_t j = 0; j < n; ++j) {
            rhs -= coeffs[j] * lower[j];
        }
        a.push_back(std::move(coeffs));
        b.push_back(std::move(rhs));
    };
    for (auto const& row : p.rows) {
        if (row.coeffs.size() != n) {
            fail(ErrorKind::DimensionMismatch, "LP row length differs from the variable count");
        }
        std::vector<Rat> neg(n);
        for (std::size_t j = 0; j < n; ++j) {
            neg[j] = -row.coeffs[j];
        }
        switch (row.sense) {
            case Sense::LessEq: push_le(row.coeffs, row.rhs); break;
            case Sense::GreaterEq: push_le(std::move(neg), -row.rhs); break;
            case Sense::Equal:
                push_le(row.coeffs, row.rhs);
                push_le(std::move(neg), -row.rhs);
                break;
        }
    }
    for (std::size_t j = 0; j < p.upper.size() && j < n; ++j) {
        if (p.upper[j]) {
            std::vector<Rat> e(n, Rat(0));
            e[j] = 1;
            push_le(std::move(e), *p.upper[j]);
        }
    }
    std::vector<Rat> c(n);
    for (std::size_t j = 0; j < n; ++j) {
        c[j] = p.maximize ? p.objective[j] : Rat(-p.objective[j]);
    }
    Tableau t(a, b, c);
    Result res = t.solve();
    if (res.status != Status::Optimal) {
        return res;
    }
    Rat obj = 0;
    for (std::size_t j = 0; j < n; ++j) {
        res.x[j] += lower[j];
        obj += p.objective[j] * res.x[j];
    }
    res.objective = obj;
    return res;
}

std::unique_ptr<Backend> make_default_backend() { return std::make_unique<ExactSimplex>(); }

}  // namespace confmc::lp
