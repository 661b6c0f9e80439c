#include "streamsplit/rational.hpp"

#include <string>

#include "streamsplit/errors.hpp"

namespace streamsplit {

std::string to_fraction_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_fraction(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw FormatError("not a fraction: '" + text + "'");
  }
  if (r.get_den() == 0) throw FormatError("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

Rational rational_from_int(std::int64_t v) {
  mpz_class z;
  if (v >= 0) {
    mpz_import(z.get_mpz_t(), 1, -1, sizeof(std::uint64_t), 0, 0, &v);
    return Rational(z);
  }
  const std::uint64_t mag = ~static_cast<std::uint64_t>(v) + 1;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(std::uint64_t), 0, 0, &mag);
  return Rational(-z);
}

Rational rational_from_uint(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(std::uint64_t), 0, 0, &v);
  return Rational(z);
}

}  // namespace streamsplit
