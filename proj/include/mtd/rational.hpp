#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace mtd {

using Rational = mpq_class;
using VecQ = std::vector<Rational>;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p/q" or "p" (decimal points are rejected; exactness is mandatory).
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw input_error("empty rational literal");
  for (char c : s) {
    if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
      throw input_error("bad rational literal: " + s);
  }
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw input_error("bad rational literal: " + s);
  }
}

inline std::string rational_str(const Rational& q) { return q.get_str(); }

// Canonical representative of a homogeneous coordinate vector: integer
// entries, content 1, first nonzero entry positive.
inline VecQ canonical_homogeneous(VecQ v) {
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& q : v) {
    num_gcd = gcd(num_gcd, q.get_num());
    den_lcm = lcm(den_lcm, q.get_den());
  }
  if (num_gcd == 0) throw input_error("zero homogeneous vector");
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  int lead_sign = 0;
  for (auto& q : v) {
    q *= scale;
    q.canonicalize();
    if (lead_sign == 0 && q != 0) lead_sign = sgn(q) > 0 ? 1 : -1;
  }
  if (lead_sign < 0)
    for (auto& q : v) q = -q;
  return v;
}

inline Rational dot(const VecQ& a, const VecQ& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace mtd
