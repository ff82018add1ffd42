#include "confmc/poly.hpp"

#include <algorithm>
#include <sstream>

namespace confmc {

SymbolId SymbolTable::intern(std::string const& name) {
    auto [it, inserted] = ids_.emplace(name, static_cast<SymbolId>(names_.size()));
    if (inserted) {
        names_.push_back(name);
    }
    return it->second;
}

std::optional<SymbolId> SymbolTable::find(std::string const& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Monomial monomial_product(Monomial const& a, Monomial const& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Poly::Poly(Rat c) {
    if (c != 0) {
        terms_.emplace(Monomial{}, std::move(c));
    }
}

Poly Poly::var(SymbolId id) {
    Poly p;
    p.terms_.emplace(Monomial{id}, Rat(1));
    return p;
}

std::size_t Poly::degree() const {
    std::size_t d = 0;
    for (auto const& [m, c] : terms_) {
        d = std::max(d, m.size());
    }
    return d;
}

std::size_t Poly::degree_in(std::function<bool(SymbolId)> const& pick) const {
    std::size_t d = 0;
    for (auto const& [m, c] : terms_) {
        d = std::max(d, static_cast<std::size_t>(std::count_if(m.begin(), m.end(), pick)));
    }
    return d;
}

Rat Poly::coeff(Monomial const& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

std::optional<Rat> Poly::as_constant() const {
    if (terms_.empty()) {
        return Rat(0);
    }
    if (terms_.size() == 1 && terms_.begin()->first.empty()) {
        return terms_.begin()->second;
    }
    return std::nullopt;
}

void Poly::add_term(Monomial m, Rat c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

Poly& Poly::operator+=(Poly const& o) {
    for (auto const& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

Poly& Poly::operator-=(Poly const& o) {
    for (auto const& [m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Poly& Poly::operator*=(Rat const& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) {
        v *= c;
    }
    return *this;
}

Poly operator*(Poly const& a, Poly const& b) {
    Poly out;
    for (auto const& [ma, ca] : a.terms_) {
        for (auto const& [mb, cb] : b.terms_) {
            out.add_term(monomial_product(ma, mb), ca * cb);
        }
    }
    return out;
}

Poly Poly::substitute(std::function<std::optional<Rat>(SymbolId)> const& value) const {
    Poly out;
    for (auto const& [m, c] : terms_) {
        Monomial rest;
        Rat k = c;
        for (SymbolId s : m) {
            if (auto v = value(s)) {
                k *= *v;
            } else {
                rest.push_back(s);
            }
        }
        out.add_term(std::move(rest), std::move(k));
    }
    return out;
}

std::map<Monomial, Poly> Poly::split(std::function<bool(SymbolId)> const& pick) const {
    std::map<Monomial, Poly> out;
    for (auto const& [m, c] : terms_) {
        Monomial picked;
        Monomial rest;
        for (SymbolId s : m) {
            (pick(s) ? picked : rest).push_back(s);
        }
        out[picked].add_term(std::move(rest), c);
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    }
    return out;
}

std::string Poly::to_string(SymbolTable const& t) const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (auto const& [m, c] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << confmc::to_string(c);
        for (SymbolId s : m) {
            os << "*" << t.name(s);
        }
    }
    return os.str();
}

}  // namespace confmc
