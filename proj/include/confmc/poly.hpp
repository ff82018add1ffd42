#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confmc/rational.hpp"

namespace confmc {

using SymbolId = std::uint32_t;

/// Interned symbol names; ids follow insertion order, which fixes the
/// declaration order of emitted problems.
class SymbolTable {
   public:
    SymbolId intern(std::string const& name);
    std::optional<SymbolId> find(std::string const& name) const;
    std::string const& name(SymbolId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

   private:
    std::vector<std::string> names_;
    std::map<std::string, SymbolId> ids_;
};

/// Sorted multiset of symbol ids; {} is the constant monomial.
using Monomial = std::vector<SymbolId>;

Monomial monomial_product(Monomial const& a, Monomial const& b);

/// Sparse multivariate polynomial with exact rational coefficients.
class Poly {
   public:
    Poly() = default;
    Poly(Rat c);  // NOLINT: constants convert implicitly
    static Poly var(SymbolId id);

    std::map<Monomial, Rat> const& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t degree() const;
    /// Largest total degree counting only symbols that satisfy `pick`.
    std::size_t degree_in(std::function<bool(SymbolId)> const& pick) const;
    Rat coeff(Monomial const& m) const;
    std::optional<Rat> as_constant() const;

    void add_term(Monomial m, Rat c);
    Poly& operator+=(Poly const& o);
    Poly& operator-=(Poly const& o);
    Poly& operator*=(Rat const& c);
    friend Poly operator+(Poly a, Poly const& b) { return a += b; }
    friend Poly operator-(Poly a, Poly const& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= Rat(-1); }
    friend Poly operator*(Poly a, Rat const& c) { return a *= c; }
    friend Poly operator*(Rat const& c, Poly a) { return a *= c; }
    friend Poly operator*(Poly const& a, Poly const& b);
    friend bool operator==(Poly const&, Poly const&) = default;

    /// Substitutes values for the symbols `value` knows; others stay symbolic.
    Poly substitute(std::function<std::optional<Rat>(SymbolId)> const& value) const;
    /// Groups terms by their `pick`-part: the result maps each monomial over
    /// picked symbols to its coefficient polynomial over the rest.
    std::map<Monomial, Poly> split(std::function<bool(SymbolId)> const& pick) const;

    std::string to_string(SymbolTable const& t) const;

   private:
    std::map<Monomial, Rat> terms_;
};

}  // namespace confmc
