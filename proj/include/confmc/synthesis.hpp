#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confmc/lp.hpp"
#include "confmc/model.hpp"
#include "confmc/poly.hpp"
#include "confmc/target.hpp"

namespace confmc {

/// Symbols of the linear-fractional scheduler and linear submartingale
/// templates, plus one quantified symbol per state for the configuration.
/// Index 0 of theta[a], s and r is the constant term, index q+1 the
/// coefficient of d(q).
struct TemplateVars {
    std::vector<std::vector<SymbolId>> theta;
    std::vector<SymbolId> s;
    std::vector<SymbolId> r;
    std::vector<SymbolId> d;

    static TemplateVars make(SymbolTable& t, std::size_t num_states, std::size_t num_actions);

    std::size_t num_states() const { return d.size(); }
    std::size_t num_actions() const { return theta.size(); }
    bool is_config(SymbolId id) const;

    /// theta^a_0 + sum_q theta^a_q d(q)
    Poly numerator(ActionId a) const;
    /// s_0 + sum_q s_q d(q)
    Poly denominator() const;
    /// r_0 + sum_q r_q v(q) for a vector of polynomials v.
    Poly submartingale(std::vector<Poly> const& v) const;
    std::vector<Poly> config() const;
};

/// coeffs . d + constant >= 0, or > 0 when strict.
struct AffineRow {
    std::vector<Rat> coeffs;
    Rat constant;
    bool strict = false;

    Rat eval(std::span<Rat const> d) const;
};

enum class Relation { Ge, Eq, Gt };

/// forall d. (all lhs rows hold) => rhs(d) {>=, =} 0
struct QuantifiedConstraint {
    std::string family;
    std::vector<AffineRow> lhs;
    Poly rhs;
    Relation sense = Relation::Ge;
    /// Some strict row cannot hold on the simplex, so the implication is
    /// true as stated and elimination skips it.
    bool vacuous = false;
};

struct PolyConstraint {
    Poly p;
    Relation rel = Relation::Ge;  // p rel 0
};

struct ConstraintSystem {
    SymbolTable symbols;
    TemplateVars vars;
    std::vector<QuantifiedConstraint> quantified;
    std::vector<PolyConstraint> plain;
    std::size_t inductive_count = 0;
};

inline constexpr std::size_t kDefaultConjunctCap = 100'000;

/// The simplex {d : d >= 0, sum d = 1} as affine rows (the equality as two).
std::vector<AffineRow> simplex_rows(std::size_t n);

/// Scheduler validity, submartingale bounds, one inductive conjunct per
/// choice of a violated coordinate for every target generator, and the
/// reachability inequality R(d0) >= xi. The inductive right-hand side is the
/// denominator-cleared gamma * sum_a num_a(d) R(M_a^T d) - den(d) R(d).
/// Equalities are split into two >= families.
ConstraintSystem collect_constraints(MdpModel const& m, Configuration const& d0, TargetSet const& h, Rat const& xi,
                                     Rat const& gamma, std::size_t conjunct_cap = kDefaultConjunctCap);

/// Existentially quantified constraints over template symbols and fresh
/// nonnegative multipliers.
struct Block {
    std::string label;
    std::vector<SymbolId> multipliers;
    std::vector<PolyConstraint> constraints;
};

/// rhs = y_0 + sum_j y_j lhs_j with y >= 0, matched per monomial of d.
/// Strict lhs rows are used through their closures.
Block farkas_eliminate(QuantifiedConstraint const& c, TemplateVars const& v, SymbolTable& t,
                       std::string const& label);

/// rhs = sum_k y_k psi_k over products psi_k of at most `degree` lhs rows.
Block handelman_eliminate(QuantifiedConstraint const& c, TemplateVars const& v, SymbolTable& t, std::size_t degree,
                          std::string const& label, std::size_t product_cap = 100'000);

/// Number of products of at most `degree` rows taken from `rows` rows, the empty product included.
std::size_t handelman_product_count(std::size_t rows, std::size_t degree);

/// When a block mentions only its own multipliers (no template symbol) and
/// is linear, decides its feasibility exactly.
std::optional<bool> block_feasible_exact(Block const& b, lp::Backend& backend);

/// SMT-LIB 2 text, logic QF_NRA. Declares `declare` plus every symbol the
/// constraints use, in id order; multipliers are asserted nonnegative.
std::string emit_problem(SymbolTable const& t, std::vector<Block> const& blocks,
                         std::vector<PolyConstraint> const& plain = {}, std::vector<SymbolId> const& declare = {});

/// SMT-LIB literal of a rational: 3.0, (- 3.0), (/ 1.0 3.0), (- (/ 1.0 3.0)).
std::string smt_literal(Rat const& v);

}  // namespace confmc
