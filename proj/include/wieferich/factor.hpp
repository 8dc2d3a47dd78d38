#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wieferich/bigint.hpp"

namespace wieferich {

/// Effort bound for integer factorization. Both limits must be positive.
struct FactorBudget {
  std::uint64_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 1'000'000;

  void validate() const {
    if (trial_limit == 0 || rho_iterations == 0) throw std::invalid_argument("factor budget must be positive");
  }
};

/// Primes up to `limit` by an Eratosthenes sieve.
inline std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

namespace detail {

// Shared sieve, grown on demand. Readers get a snapshot by value of the needed prefix bound.
class SmallPrimes {
 public:
  static const std::vector<std::uint32_t>& upto(std::uint64_t limit) {
    static SmallPrimes instance;
    std::lock_guard<std::mutex> lock(instance.mu_);
    if (limit > instance.limit_) {
      auto grown = std::make_unique<std::vector<std::uint32_t>>(primes_up_to(limit));
      instance.limit_ = limit;
      instance.tables_.push_back(std::move(grown));
    }
    return *instance.tables_.back();
  }

 private:
  std::mutex mu_;
  std::uint64_t limit_ = 0;
  std::vector<std::unique_ptr<std::vector<std::uint32_t>>> tables_{};
};

inline bool miller_rabin_round(const Int& n, const Int& n_minus_1, const Int& d, unsigned s, unsigned long base) {
  Int a = base;
  a %= n;
  if (a == 0) return true;
  Int x = powm(a, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace detail

/// Primality test. Miller-Rabin with the first thirteen prime bases is a proof for
/// n < 3.3e24; above that GMP's BPSW-based test is used.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  static constexpr unsigned long kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned long b : kBases) {
    if (n == b) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
  }
  static const Int kDeterministicBound("3317044064679887385961981");
  if (n >= kDeterministicBound) return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
  Int n_minus_1 = n - 1;
  Int d = n_minus_1;
  unsigned s = static_cast<unsigned>(mpz_scan1(d.get_mpz_t(), 0));
  d >>= s;
  for (unsigned long b : kBases)
    if (!detail::miller_rabin_round(n, n_minus_1, d, s, b)) return false;
  return true;
}

struct IntFactorization {
  std::vector<std::pair<Int, unsigned>> factors;  // sorted by prime
  Int unfactored = 1;                             // composite cofactor left over, 1 when complete

  bool complete() const { return unfactored == 1; }

  Int product() const {
    Int r = unfactored;
    for (const auto& [p, e] : factors) r *= pow(p, e);
    return r;
  }
};

namespace detail {

// Brent's cycle finding with batched gcds; returns a nontrivial factor or 0 when
// the iteration allowance runs out.
inline Int brent_rho(const Int& n, std::uint64_t& remaining) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  constexpr std::uint64_t kBatch = 128;
  for (unsigned long c = 1; remaining > 0; ++c) {
    Int y = 2, x, ys, q = 1, g = 1;
    std::uint64_t r = 1;
    auto step = [&](Int& v) {
      v = v * v + c;
      v %= n;
    };
    while (g == 1 && remaining > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1 && remaining > 0) {
        ys = y;
        std::uint64_t m = std::min({kBatch, r - k, remaining});
        for (std::uint64_t i = 0; i < m; ++i) {
          step(y);
          Int diff = x - y;
          q = q * diff % n;
        }
        remaining -= m;
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      // Batch overshot; back up one step at a time.
      do {
        step(ys);
        Int diff = x - ys;
        g = gcd(diff, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

inline void add_factor(std::map<Int, unsigned>& acc, const Int& p, unsigned e) {
  acc[p] += e;
}

// Split n (coprime to all trial primes) into primes; leftovers go to `stuck`.
inline void split_cofactor(const Int& n, unsigned mult, std::uint64_t rho_budget, std::map<Int, unsigned>& acc,
                           Int& stuck) {
  if (n == 1) return;
  if (is_prime(n)) {
    add_factor(acc, n, mult);
    return;
  }
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
      Int root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        split_cofactor(root, mult * static_cast<unsigned>(k), rho_budget, acc, stuck);
        return;
      }
    }
  }
  std::uint64_t remaining = rho_budget;
  Int f = brent_rho(n, remaining);
  if (f == 0) {
    stuck *= pow(n, mult);
    return;
  }
  Int g = n / f;
  Int common = gcd(f, g);
  if (common != 1) {
    // f and n/f share primes; peel the common part so exponents add correctly.
    Int rest = n;
    unsigned e = static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), common.get_mpz_t()));
    split_cofactor(common, mult * e, rho_budget, acc, stuck);
    split_cofactor(rest, mult, rho_budget, acc, stuck);
    return;
  }
  split_cofactor(f, mult, rho_budget, acc, stuck);
  split_cofactor(g, mult, rho_budget, acc, stuck);
}

}  // namespace detail

/// Factor n >= 1 by trial division up to budget.trial_limit, then Brent's rho with
/// at most budget.rho_iterations iterations per composite cofactor. A cofactor that
/// resists is returned in `unfactored`; that result is incomplete, not an error.
inline IntFactorization integer_factor(const Int& n, const FactorBudget& budget = {}) {
  budget.validate();
  if (n < 1) throw std::invalid_argument("integer_factor: n must be >= 1, got " + to_string(n));
  std::map<Int, unsigned> acc;
  Int rest = n;
  const auto& primes = detail::SmallPrimes::upto(budget.trial_limit);
  for (std::uint32_t p : primes) {
    if (p > budget.trial_limit) break;
    if (rest == 1) break;
    if (fits_u64(rest)) {
      std::uint64_t r = to_u64(rest);
      if (static_cast<std::uint64_t>(p) * p > r) break;
      if (r % p) continue;
      unsigned e = 0;
      while (r % p == 0) r /= p, ++e;
      acc[p] += e;
      rest = from_u64(r);
      continue;
    }
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    acc[p] += e;
  }
  Int stuck = 1;
  detail::split_cofactor(rest, 1, budget.rho_iterations, acc, stuck);
  IntFactorization out;
  for (auto& [p, e] : acc) out.factors.emplace_back(p, e);
  out.unfactored = stuck;
  return out;
}

}  // namespace wieferich
