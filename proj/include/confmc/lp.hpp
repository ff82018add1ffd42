#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confmc/rational.hpp"

namespace confmc::lp {

enum class Sense { LessEq, GreaterEq, Equal };

/// coeffs . x  (sense)  rhs
struct Row {
    std::vector<Rat> coeffs;
    Sense sense = Sense::LessEq;
    Rat rhs;
};

/// Dense LP payload: optimize objective . x subject to rows and
/// lower[i] <= x[i] <= upper[i]. Every variable needs a finite lower bound.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Rat> objective;
    bool maximize = false;
    std::vector<Row> rows;
    std::vector<Rat> lower;                 // empty means all zero
    std::vector<std::optional<Rat>> upper;  // empty means unbounded above

    explicit Problem(std::size_t n = 0) : num_vars(n), objective(n, Rat(0)) {}
    void add_row(std::vector<Rat> coeffs, Sense sense, Rat rhs) {
        rows.push_back({std::move(coeffs), sense, std::move(rhs)});
    }
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

struct Result {
    Status status = Status::NumericalFailure;
    std::vector<Rat> x;
    Rat objective;
};

char const* to_string(Status s);

/// Solver seam. Implementations must return points that satisfy every row.
class Backend {
   public:
    virtual ~Backend() = default;
    virtual Result solve(Problem const& p) = 0;
    virtual std::string name() const = 0;
    /// Whether solve() may be called concurrently on one instance.
    virtual bool reentrant() const { return false; }
};

/// In-process two-phase tableau simplex over exact rationals with Bland's
/// pivoting rule; returned optima are exact vertices.
class ExactSimplex final : public Backend {
   public:
    Result solve(Problem const& p) override;
    std::string name() const override { return "exact-simplex"; }
    bool reentrant() const override { return true; }
};

std::unique_ptr<Backend> make_default_backend();

}  // namespace confmc::lp
