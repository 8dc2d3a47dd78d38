#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wieferich/bigint.hpp"
#include "wieferich/errors.hpp"
#include "wieferich/qfield.hpp"

namespace wieferich {

// Trial-division factorization for machine-sized n >= 1.
inline std::vector<std::pair<std::uint64_t, unsigned>> small_factor(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("small_factor: n = 0");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) n /= p, ++e;
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n = 0");
  std::uint64_t r = n;
  for (auto [p, e] : small_factor(n)) r = r / p * (p - 1);
  return r;
}

inline int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius: n = 0");
  int r = 1;
  for (auto [p, e] : small_factor(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: n = 0");
  std::vector<std::uint64_t> out{1};
  for (auto [p, e] : small_factor(n)) {
    std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Phi_n(a) = prod_{d | n} (a^d - 1)^{mu(n/d)}: numerator and denominator products
/// followed by one exact division. Requires a != 0 and a not a root of unity.
inline QuadInt cyclotomic_eval(std::uint64_t n, const QuadInt& a) {
  if (n == 0) throw std::invalid_argument("cyclotomic_eval: n = 0");
  BaseClass cls = classify_base(a);
  if (cls == BaseClass::zero || cls == BaseClass::root_of_unity)
    throw std::invalid_argument("cyclotomic_eval: base must be nonzero and not a root of unity");
  QuadInt num = QuadInt::one(a.field());
  QuadInt den = QuadInt::one(a.field());
  for (std::uint64_t d : divisors(n)) {
    int mu = mobius(n / d);
    if (mu == 0) continue;
    QuadInt term = power(a, d) - 1;
    if (mu > 0) num = num * term;
    else den = den * term;
  }
  try {
    return exact_divide(num, den);
  } catch (const NotDivisible&) {
    throw InvariantViolation("cyclotomic_eval: Moebius product is not integral");
  }
}

/// c(k) = prod_{p | k} (1 - gcd(k, p) / p^2), exact.
struct DingConstant {
  std::uint64_t k = 1;
  Rational value{1};
};

inline DingConstant ding_constant(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("ding_constant: k = 0");
  Rational v = 1;
  for (auto [p, e] : small_factor(k)) {
    Int pp = from_u64(p);
    v *= Rational(pp * pp - pp, pp * pp);  // gcd(k, p) = p for p | k
  }
  v.canonicalize();
  return {k, v};
}

/// Totients 0..limit by a linear sieve.
inline std::vector<std::uint64_t> phi_table(std::uint64_t limit) {
  std::vector<std::uint64_t> phi(limit + 1);
  std::vector<std::uint64_t> primes;
  if (limit >= 1) phi[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (phi[i] == 0) {
      phi[i] = i - 1;
      primes.push_back(i);
    }
    for (std::uint64_t p : primes) {
      if (p * i > limit) break;
      if (i % p == 0) {
        phi[p * i] = phi[i] * p;
        break;
      }
      phi[p * i] = phi[i] * (p - 1);
    }
  }
  return phi;
}

/// |{n <= x : phi(nk) > (2 c(k) / 3) nk}|, compared exactly as 3 phi(nk) den > 2 num nk.
inline std::uint64_t ding_count(std::uint64_t x, std::uint64_t k) {
  if (x == 0 || k == 0) throw std::invalid_argument("ding_count: x and k must be >= 1");
  DingConstant c = ding_constant(k);
  Int num = c.value.get_num(), den = c.value.get_den();
  auto phi = phi_table(x * k);
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    std::uint64_t nk = n * k;
    Int lhs = 3 * from_u64(phi[nk]) * den;
    Int rhs = 2 * num * from_u64(nk);
    if (lhs > rhs) ++count;
  }
  return count;
}

}  // namespace wieferich
