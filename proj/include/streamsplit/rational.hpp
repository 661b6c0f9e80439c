#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace streamsplit {

/// Exact rational number. Every oracle value is carried in this type and
/// only converted to floating point at reporting boundaries.
using Rational = mpq_class;

/// Formats as "p/q" (always with a denominator, e.g. "0/1", "8/3").
std::string to_fraction_string(const Rational& r);

/// Parses "p/q" or a bare integer "p". Throws FormatError on bad input.
Rational parse_fraction(const std::string& text);

inline double to_double(const Rational& r) { return r.get_d(); }

Rational rational_from_int(std::int64_t v);
Rational rational_from_uint(std::uint64_t v);

}  // namespace streamsplit
