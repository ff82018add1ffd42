#include "confmc/rational.hpp"

#include <cctype>

#include "confmc/error.hpp"

namespace confmc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

[[noreturn]] void bad_number(std::string_view text) {
    fail(ErrorKind::Parse, "malformed number '" + std::string(text) + "'");
}

}  // namespace

Rat parse_rat(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rat value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            bad_number(text);
        }
        mpz_class n(std::string(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            fail(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
        }
        value = Rat(n, d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac))) {
            bad_number(text);
        }
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        mpz_class d = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            d *= 10;
        }
        value = Rat(n, d);
    } else {
        if (!all_digits(body)) {
            bad_number(text);
        }
        value = Rat(mpz_class(std::string(body), 10));
    }
    value.canonicalize();
    return negative ? Rat(-value) : value;
}

std::string to_string(Rat const& value) {
    if (value.get_den() == 1) {
        return value.get_num().get_str();
    }
    return value.get_str();
}

double to_double(Rat const& value) { return value.get_d(); }

}  // namespace confmc
