#include "confmc/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "confmc/error.hpp"

namespace confmc {

TemplateVars TemplateVars::make(SymbolTable& t, std::size_t num_states, std::size_t num_actions) {
    TemplateVars v;
    for (ActionId a = 0; a < num_actions; ++a) {
        v.theta.emplace_back();
        for (std::size_t i = 0; i <= num_states; ++i) {
            v.theta[a].push_back(t.intern("theta_" + std::to_string(a) + "_" + std::to_string(i)));
        }
    }
    for (std::size_t i = 0; i <= num_states; ++i) {
        v.s.push_back(t.intern("s_" + std::to_string(i)));
    }
    for (std::size_t i = 0; i <= num_states; ++i) {
        v.r.push_back(t.intern("r_" + std::to_string(i)));
    }
    for (StateId q = 0; q < num_states; ++q) {
        v.d.push_back(t.intern("d_" + std::to_string(q)));
    }
    return v;
}

bool TemplateVars::is_config(SymbolId id) const { return std::find(d.begin(), d.end(), id) != d.end(); }

namespace {

Poly affine(std::vector<SymbolId> const& coeffs, std::vector<Poly> const& v) {
    Poly p = Poly::var(coeffs[0]);
    for (std::size_t q = 0; q < v.size(); ++q) {
        p += Poly::var(coeffs[q + 1]) * v[q];
    }
    return p;
}

Poly row_poly(AffineRow const& row, TemplateVars const& v) {
    Poly p(row.constant);
    for (std::size_t q = 0; q < row.coeffs.size(); ++q) {
        p += Poly::var(v.d[q]) * row.coeffs[q];
    }
    return p;
}

/// Closures of the lhs rows, with exact duplicates dropped.
std::vector<AffineRow> closed_rows(QuantifiedConstraint const& c) {
    std::vector<AffineRow> rows;
    for (auto const& r : c.lhs) {
        AffineRow closed{r.coeffs, r.constant, false};
        bool dup = std::any_of(rows.begin(), rows.end(), [&](AffineRow const& o) {
            return o.coeffs == closed.coeffs && o.constant == closed.constant;
        });
        if (!dup) {
            rows.push_back(std::move(closed));
        }
    }
    return rows;
}

/// Equates each d-monomial coefficient of rhs with that of the certificate
/// combination sum_k y_k psi_k.
void match_coefficients(Block& b, Poly const& rhs, std::vector<Poly> const& psi, TemplateVars const& v) {
    auto is_d = [&](SymbolId s) { return v.is_config(s); };
    auto target = rhs.split(is_d);
    std::vector<std::map<Monomial, Poly>> parts;
    std::set<Monomial> monos;
    for (auto const& [m, c] : target) {
        monos.insert(m);
    }
    for (auto const& p : psi) {
        parts.push_back(p.split(is_d));
        for (auto const& [m, c] : parts.back()) {
            monos.insert(m);
        }
    }
    for (auto const& m : monos) {
        Poly eq;
        if (auto it = target.find(m); it != target.end()) {
            eq = it->second;
        }
        for (std::size_t k = 0; k < psi.size(); ++k) {
            if (auto it = parts[k].find(m); it != parts[k].end()) {
                eq -= it->second * Poly::var(b.multipliers[k]);
            }
        }
        if (!eq.is_zero()) {
            b.constraints.push_back({std::move(eq), Relation::Eq});
        }
    }
}

Block eliminate_with(QuantifiedConstraint const& c, TemplateVars const& v, SymbolTable& t, std::string const& label,
                     std::vector<Poly> const& psi) {
    Block b;
    b.label = label;
    // Equality right-hand sides need rhs >= 0 and -rhs >= 0 separately.
    std::vector<Poly> sides{c.rhs};
    if (c.sense == Relation::Eq) {
        sides.push_back(-c.rhs);
    }
    for (std::size_t side = 0; side < sides.size(); ++side) {
        std::size_t first = b.multipliers.size();
        for (std::size_t k = 0; k < psi.size(); ++k) {
            std::string name = label + "_y" + (side ? "n" : "") + std::to_string(k);
            b.multipliers.push_back(t.intern(name));
        }
        Block part;
        part.multipliers.assign(b.multipliers.begin() + static_cast<long>(first), b.multipliers.end());
        match_coefficients(part, sides[side], psi, v);
        for (auto& pc : part.constraints) {
            b.constraints.push_back(std::move(pc));
        }
    }
    return b;
}

}  // namespace

Poly TemplateVars::numerator(ActionId a) const { return affine(theta[a], config()); }

Poly TemplateVars::denominator() const { return affine(s, config()); }

Poly TemplateVars::submartingale(std::vector<Poly> const& v) const { return affine(r, v); }

std::vector<Poly> TemplateVars::config() const {
    std::vector<Poly> out;
    for (SymbolId id : d) {
        out.push_back(Poly::var(id));
    }
    return out;
}

Rat AffineRow::eval(std::span<Rat const> d) const {
    Rat acc = constant;
    for (std::size_t q = 0; q < coeffs.size(); ++q) {
        acc += coeffs[q] * d[q];
    }
    return acc;
}

std::vector<AffineRow> simplex_rows(std::size_t n) {
    std::vector<AffineRow> rows;
    for (std::size_t q = 0; q < n; ++q) {
        std::vector<Rat> e(n, Rat(0));
        e[q] = 1;
        rows.push_back({std::move(e), Rat(0), false});
    }
    rows.push_back({std::vector<Rat>(n, Rat(1)), Rat(-1), false});
    rows.push_back({std::vector<Rat>(n, Rat(-1)), Rat(1), false});
    return rows;
}

ConstraintSystem collect_constraints(MdpModel const& m, Configuration const& d0, TargetSet const& h, Rat const& xi,
                                     Rat const& gamma, std::size_t conjunct_cap) {
    std::size_t n = m.num_states();
    if (!h.is_monotone()) {
        fail(ErrorKind::InvalidInput, "submartingale synthesis needs an upward- or downward-closed target");
    }
    if (gamma <= 0 || gamma >= 1) {
        fail(ErrorKind::InvalidInput, "gamma must lie strictly between 0 and 1");
    }
    if (d0.size() != n) {
        fail(ErrorKind::DimensionMismatch, "initial configuration length differs from the state count");
    }
    auto const& gens = h.generators();
    for (auto const& g : gens) {
        if (g.size() != n) {
            fail(ErrorKind::DimensionMismatch, "target generator length differs from the state count");
        }
    }
    bool upward = h.is_upward();

    // |Q|^k conjuncts, guarded against overflow.
    std::size_t count = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (count > conjunct_cap / std::max<std::size_t>(n, 1)) {
            fail(ErrorKind::ConjunctExplosion, "inductive constraint needs |Q|^n = " + std::to_string(n) + "^" +
                                                   std::to_string(gens.size()) + " conjuncts, above the cap of " +
                                                   std::to_string(conjunct_cap));
        }
        count *= n;
    }

    ConstraintSystem sys;
    sys.vars = TemplateVars::make(sys.symbols, n, m.num_actions());
    auto const& v = sys.vars;
    auto simplex = simplex_rows(n);
    auto forall = [&](std::string family, Poly rhs) {
        sys.quantified.push_back({std::move(family), simplex, std::move(rhs), Relation::Ge, false});
    };

    Poly num_sum;
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        forall("schedule_nonneg_" + m.action_names[a], v.numerator(a));
        num_sum += v.numerator(a);
    }
    Poly den = v.denominator();
    forall("schedule_denominator", den - Poly(Rat(1)));
    forall("schedule_sum_ge", num_sum - den);
    forall("schedule_sum_le", den - num_sum);
    Poly r_of_d = v.submartingale(v.config());
    forall("bound_lower", r_of_d);
    forall("bound_upper", Poly(Rat(1)) - r_of_d);

    // gamma * sum_a num_a(d) R(M_a^T d) - den(d) R(d)
    Poly inductive;
    for (ActionId a = 0; a < m.num_actions(); ++a) {
        std::vector<Poly> image(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                image[j] += Poly::var(v.d[i]) * m.matrices[a](i, j);
            }
        }
        inductive += v.numerator(a) * v.submartingale(image);
    }
    inductive *= gamma;
    inductive -= den * r_of_d;

    std::vector<std::size_t> pick(gens.size(), 0);
    for (std::size_t c = 0; c < count; ++c) {
        QuantifiedConstraint qc{"inductive_" + std::to_string(c), simplex, inductive, Relation::Ge, false};
        for (std::size_t i = 0; i < gens.size(); ++i) {
            std::size_t q = pick[i];
            Rat const& bound = gens[i][q];
            std::vector<Rat> e(n, Rat(0));
            if (upward) {
                e[q] = -1;  // bound - d(q) > 0
                qc.lhs.push_back({std::move(e), bound, true});
                qc.vacuous = qc.vacuous || bound <= 0;
            } else {
                e[q] = 1;  // d(q) - bound > 0
                qc.lhs.push_back({std::move(e), -bound, true});
                qc.vacuous = qc.vacuous || bound >= 1;
            }
        }
        sys.quantified.push_back(std::move(qc));
        for (std::size_t i = 0; i < pick.size(); ++i) {
            if (++pick[i] < n) {
                break;
            }
            pick[i] = 0;
        }
    }
    sys.inductive_count = count;

    std::vector<Poly> at_d0;
    for (StateId q = 0; q < n; ++q) {
        at_d0.emplace_back(d0[q]);
    }
    sys.plain.push_back({v.submartingale(at_d0) - Poly(xi), Relation::Ge});
    return sys;
}

Block farkas_eliminate(QuantifiedConstraint const& c, TemplateVars const& v, SymbolTable& t,
                       std::string const& label) {
    if (c.rhs.degree_in([&](SymbolId s) { return v.is_config(s); }) > 1) {
        fail(ErrorKind::NotAffine, "constraint " + c.family + " is not affine in the configuration");
    }
    std::vector<Poly> psi{Poly(Rat(1))};
    for (auto const& row : closed_rows(c)) {
        psi.push_back(row_poly(row, v));
    }
    return eliminate_with(c, v, t, label, psi);
}

std::size_t handelman_product_count(std::size_t rows, std::size_t degree) {
    // C(rows + degree, degree)
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), rows + degree, degree);
    return c.fits_ulong_p() ? c.get_ui() : std::numeric_limits<std::size_t>::max();
}

Block handelman_eliminate(QuantifiedConstraint const& c, TemplateVars const& v, SymbolTable& t, std::size_t degree,
                          std::string const& label, std::size_t product_cap) {
    std::size_t rhs_degree = c.rhs.degree_in([&](SymbolId s) { return v.is_config(s); });
    if (rhs_degree > degree) {
        fail(ErrorKind::DegreeTooHigh, "constraint " + c.family + " has degree " + std::to_string(rhs_degree) +
                                           " in the configuration, above the bound " + std::to_string(degree));
    }
    auto rows = closed_rows(c);
    std::size_t count = handelman_product_count(rows.size(), degree);
    if (count > product_cap) {
        fail(ErrorKind::DegreeTooHigh, std::to_string(count) + " Handelman products for " + std::to_string(rows.size()) +
                                           " rows at degree " + std::to_string(degree) + " exceed the cap of " +
                                           std::to_string(product_cap));
    }
    std::vector<Poly> row_polys;
    for (auto const& r : rows) {
        row_polys.push_back(row_poly(r, v));
    }
    // Multisets in graded order: degree 0, then 1, ..., each lexicographic.
    std::vector<Poly> psi{Poly(Rat(1))};
    std::vector<std::pair<Poly, std::size_t>> layer{{Poly(Rat(1)), 0}};
    for (std::size_t k = 1; k <= degree; ++k) {
        std::vector<std::pair<Poly, std::size_t>> next;
        for (auto const& [p, from] : layer) {
            for (std::size_t j = from; j < row_polys.size(); ++j) {
                next.emplace_back(p * row_polys[j], j);
                psi.push_back(next.back().first);
            }
        }
        layer = std::move(next);
    }
    return eliminate_with(c, v, t, label, psi);
}

std::optional<bool> block_feasible_exact(Block const& b, lp::Backend& backend) {
    std::map<SymbolId, std::size_t> col;
    for (SymbolId y : b.multipliers) {
        col.emplace(y, col.size());
    }
    lp::Problem p(col.size());
    for (auto const& pc : b.constraints) {
        if (pc.p.degree() > 1 || pc.rel == Relation::Gt) {
            return std::nullopt;
        }
        std::vector<Rat> coeffs(col.size(), Rat(0));
        Rat constant = 0;
        for (auto const& [m, c] : pc.p.terms()) {
            if (m.empty()) {
                constant = c;
                continue;
            }
            auto it = col.find(m[0]);
            if (it == col.end()) {
                return std::nullopt;
            }
            coeffs[it->second] = c;
        }
        p.add_row(std::move(coeffs), pc.rel == Relation::Eq ? lp::Sense::Equal : lp::Sense::GreaterEq, -constant);
    }
    auto r = backend.solve(p);
    if (r.status == lp::Status::NumericalFailure) {
        fail(ErrorKind::BackendFailure, "LP backend failed on a multiplier block");
    }
    return r.status != lp::Status::Infeasible;
}

std::string smt_literal(Rat const& v) {
    auto integer = [](mpz_class const& z) { return z.get_str() + ".0"; };
    mpz_class num = abs(v.get_num());
    std::string body = v.get_den() == 1 ? integer(num) : "(/ " + integer(num) + " " + integer(v.get_den()) + ")";
    return v < 0 ? "(- " + body + ")" : body;
}

namespace {

std::string smt_poly(Poly const& p, SymbolTable const& t) {
    if (p.is_zero()) {
        return "0.0";
    }
    std::vector<std::string> terms;
    for (auto const& [m, c] : p.terms()) {
        if (m.empty()) {
            terms.push_back(smt_literal(c));
            continue;
        }
        std::string prod;
        std::vector<std::string> factors;
        if (c != 1) {
            factors.push_back(smt_literal(c));
        }
        for (SymbolId s : m) {
            factors.push_back(t.name(s));
        }
        if (factors.size() == 1) {
            prod = factors[0];
        } else {
            prod = "(*";
            for (auto const& f : factors) {
                prod += " " + f;
            }
            prod += ")";
        }
        terms.push_back(std::move(prod));
    }
    if (terms.size() == 1) {
        return terms[0];
    }
    std::string out = "(+";
    for (auto const& s : terms) {
        out += " " + s;
    }
    return out + ")";
}

char const* smt_rel(Relation r) {
    switch (r) {
        case Relation::Ge: return ">=";
        case Relation::Eq: return "=";
        case Relation::Gt: return ">";
    }
    return "=";
}

}  // namespace

std::string emit_problem(SymbolTable const& t, std::vector<Block> const& blocks,
                         std::vector<PolyConstraint> const& plain, std::vector<SymbolId> const& declare) {
    std::set<SymbolId> used(declare.begin(), declare.end());
    auto note = [&](Poly const& p) {
        for (auto const& [m, c] : p.terms()) {
            used.insert(m.begin(), m.end());
        }
    };
    for (auto const& b : blocks) {
        used.insert(b.multipliers.begin(), b.multipliers.end());
        for (auto const& pc : b.constraints) {
            note(pc.p);
        }
    }
    for (auto const& pc : plain) {
        note(pc.p);
    }

    std::ostringstream os;
    os << "(set-logic QF_NRA)\n";
    for (SymbolId s : used) {
        os << "(declare-fun " << t.name(s) << " () Real)\n";
    }
    for (auto const& b : blocks) {
        if (!b.label.empty()) {
            os << "; " << b.label << "\n";
        }
        for (SymbolId y : b.multipliers) {
            os << "(assert (>= " << t.name(y) << " 0.0))\n";
        }
        for (auto const& pc : b.constraints) {
            os << "(assert (" << smt_rel(pc.rel) << " " << smt_poly(pc.p, t) << " 0.0))\n";
        }
    }
    for (auto const& pc : plain) {
        os << "(assert (" << smt_rel(pc.rel) << " " << smt_poly(pc.p, t) << " 0.0))\n";
    }
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

}  // namespace confmc
