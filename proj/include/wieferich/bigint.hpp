#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wieferich {

using Int = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Int& n) { return n.get_str(10); }

inline Int pow(const Int& base, unsigned long exponent) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

// Requires modulus > 0 and exponent >= 0. The result lies in [0, modulus).
inline Int powm(const Int& base, const Int& exponent, const Int& modulus) {
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

// Least non-negative residue.
inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int invert(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("invert: " + to_string(a) + " is not a unit modulo " + to_string(m));
  return r;
}

// v_p(n) for n != 0.
inline unsigned valuation(const Int& n, const Int& p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  Int rest = n;
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()));
}

inline bool fits_u64(const Int& n) { return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

inline std::uint64_t to_u64(const Int& n) {
  if (!fits_u64(n)) throw std::out_of_range("to_u64: " + to_string(n));
  std::uint64_t lo = mpz_getlimbn(n.get_mpz_t(), 0);
  return n == 0 ? 0 : lo;
}

inline Int from_u64(std::uint64_t v) {
  Int r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return r;
}

// Natural log of |n|, n != 0, without overflow for large n.
inline double log_abs(const Int& n) {
  if (n == 0) throw std::domain_error("log of zero");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace wieferich
