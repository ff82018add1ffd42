#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace confmc {

/// Arbitrary-precision rational; gmp keeps it canonical after every arithmetic op.
using Rat = mpq_class;

/// Parses "p/q", "-p/q", "3", "0.125" exactly. Scientific notation is rejected.
/// Throws Error(ErrorKind::Parse) on malformed input.
Rat parse_rat(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(Rat const& value);

/// Nearest double, for sampling and display only.
double to_double(Rat const& value);

/// num/den in lowest terms.
inline Rat ratio(mpz_class const& num, mpz_class const& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
    return ratio(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
}

inline bool is_probability(Rat const& value) { return value >= 0 && value <= 1; }

}  // namespace confmc
