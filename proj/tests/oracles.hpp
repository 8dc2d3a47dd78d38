#pragma once

// Reference implementations used only by the tests. They share the number
// types with the library but none of its factoring, residue-ring or
// valuation code.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "wieferich/bigint.hpp"
#include "wieferich/ideals.hpp"
#include "wieferich/qfield.hpp"

namespace oracle {

using wieferich::Int;
using wieferich::PrimeIdeal;
using wieferich::QuadInt;
using wieferich::SplitKind;

inline std::uint64_t phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline int mobius(std::uint64_t n) {
  int r = 1;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Integer coefficients of Phi_n(X), lowest degree first, by dividing X^n - 1 by
// Phi_d for every proper divisor d.
inline std::vector<Int> cyclotomic_poly(std::uint64_t n) {
  std::vector<Int> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (std::uint64_t d = 1; d < n; ++d) {
    if (n % d) continue;
    std::vector<Int> den = cyclotomic_poly(d);
    std::size_t dn = den.size() - 1;
    std::vector<Int> q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
      Int c = num[i];  // den is monic
      q[i - dn] = c;
      for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
      if (num[i] != 0) throw std::logic_error("cyclotomic_poly: inexact division");
    num = q;
  }
  return num;
}

inline QuadInt eval_poly(const std::vector<Int>& coeffs, const QuadInt& a) {
  QuadInt acc(a.field(), 0, 0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * a + QuadInt(a.field(), coeffs[i], 0);
  return acc;
}

inline Int mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Coordinates (x, y) of x + y*omega, arithmetic modulo M.
struct Pair {
  Int x, y;
};

inline Pair pair_mul(const Pair& a, const Pair& b, const wieferich::FieldSpec& f, const Int& M) {
  Int yy = a.y * b.y;
  // omega^2 = trace*omega - norm
  return {mod(a.x * b.x - f.omega_norm() * yy, M), mod(a.x * b.y + a.y * b.x + f.omega_trace() * yy, M)};
}

inline Pair pair_pow(Pair base, Int e, const wieferich::FieldSpec& f, const Int& M) {
  Pair r{mod(1, M), 0};
  while (e > 0) {
    if (e % 2 == 1) r = pair_mul(r, base, f, M);
    base = pair_mul(base, base, f, M);
    e /= 2;
  }
  return r;
}

// beta with v_P(beta) = 0 and v_Pbar(beta) >= 2 for a split prime P = (p, omega - t):
// (omega - t')^2 with t' = trace - t the conjugate root.
inline Pair conjugate_square_witness(const wieferich::FieldSpec& f, const PrimeIdeal& P) {
  const Int p2 = P.p * P.p;
  Int t_conj = mod(f.omega_trace() - P.t, P.p);
  Pair w{mod(-t_conj, p2), 1};
  return pair_mul(w, w, f, p2);
}

// gamma in P, decided from coordinates mod p.
inline bool in_prime(const Pair& g, const PrimeIdeal& P) {
  if (P.kind == SplitKind::inert) return mod(g.x, P.p) == 0 && mod(g.y, P.p) == 0;
  return mod(g.x + g.y * P.t, P.p) == 0;
}

// Whether the order of a modulo P is exactly e: a^e = 1 and a^(e/l) != 1 for primes l | e.
inline bool has_order(const QuadInt& a, const PrimeIdeal& P, std::uint64_t e) {
  const auto& f = a.field();
  auto is_one = [&](std::uint64_t k) {
    Pair r = pair_pow({mod(a.x(), P.p), mod(a.y(), P.p)}, wieferich::from_u64(k), f, P.p);
    r.x = mod(r.x - 1, P.p);
    return in_prime(r, P);
  };
  if (!is_one(e)) return false;
  std::uint64_t rest = e;
  for (std::uint64_t l = 2; l <= rest; ++l) {
    if (rest % l) continue;
    while (rest % l == 0) rest /= l;
    if (is_one(e / l)) return false;
  }
  return true;
}

// gamma in P^2, decided from coordinates mod p^2.
inline bool in_prime_square(const Pair& g, const wieferich::FieldSpec& f, const PrimeIdeal& P) {
  const Int p2 = P.p * P.p;
  switch (P.kind) {
    case SplitKind::rational: return mod(g.x, p2) == 0;
    case SplitKind::inert: return mod(g.x, p2) == 0 && mod(g.y, p2) == 0;
    case SplitKind::ramified: return mod(g.x, P.p) == 0 && mod(g.y, P.p) == 0;  // P^2 = (p)
    case SplitKind::split: {
      Pair w = conjugate_square_witness(f, P);
      Pair prod = pair_mul(g, w, f, p2);
      return prod.x == 0 && prod.y == 0;  // gamma*beta in (p^2)
    }
  }
  return false;
}

// a^(Nm P - 1) = 1 mod P^2 by coordinatewise arithmetic mod p^2.
inline bool wieferich(const QuadInt& a, const PrimeIdeal& P) {
  const auto& f = a.field();
  const Int p2 = P.p * P.p;
  Pair r = pair_pow({mod(a.x(), p2), mod(a.y(), p2)}, P.norm() - 1, f, p2);
  r.x = mod(r.x - 1, p2);
  return in_prime_square(r, f, P);
}

// Same test on the exact integer a^(q-1) - 1; only for small q.
inline bool wieferich_exact(const QuadInt& a, const PrimeIdeal& P) {
  unsigned long e = Int(P.norm() - 1).get_ui();
  QuadInt g = wieferich::power(a, e) - 1;
  return in_prime_square({g.x(), g.y()}, a.field(), P);
}

inline unsigned vp(Int n, const Int& p) {
  if (n == 0) throw std::domain_error("vp(0)");
  unsigned v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

// v_P(gamma) from the content and the norm: for a split prime, the prime-to-content
// part of gamma lies in exactly one of P, Pbar, which then takes the whole norm valuation.
inline unsigned valuation(const QuadInt& gamma, const PrimeIdeal& P) {
  const auto& f = gamma.field();
  if (f.is_rational()) return vp(gamma.x(), P.p);
  Int g = gcd(gamma.x(), gamma.y());
  unsigned c = 0;
  while (g % P.p == 0) g /= P.p, ++c;
  Int pc = wieferich::pow(P.p, c);
  QuadInt rest(f, gamma.x() / pc, gamma.y() / pc);
  unsigned V = vp(wieferich::abs_norm(rest), P.p);
  switch (P.kind) {
    case SplitKind::inert: return c;
    case SplitKind::ramified: return 2 * c + V;
    case SplitKind::split: return mod(rest.x() + rest.y() * P.t, P.p) == 0 ? c + V : c;
    default: return 0;
  }
}

}  // namespace oracle
