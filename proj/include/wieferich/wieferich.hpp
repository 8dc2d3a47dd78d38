#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "wieferich/bigint.hpp"
#include "wieferich/cyclo.hpp"
#include "wieferich/errors.hpp"
#include "wieferich/factor.hpp"
#include "wieferich/ideals.hpp"
#include "wieferich/qfield.hpp"

namespace wieferich {

namespace detail {

inline ResidueRing prime_ring_for(const PrimeIdeal& P, const QuadInt& a, Residue& image) {
  ResidueRing ring(a.field(), P, 1);
  image = ring.reduce(a);
  if (ring.in_prime(image)) throw std::domain_error("base lies in " + describe(P));
  return ring;
}

// Multiplicative order of `image` given a multiple N of it and the prime factors of N.
inline Int strip_order(const ResidueRing& ring, const Residue& image, Int order,
                       const std::vector<Int>& prime_factors) {
  for (const Int& l : prime_factors) {
    while (mpz_divisible_p(order.get_mpz_t(), l.get_mpz_t())) {
      Int smaller = order / l;
      if (!(ring.pow(image, smaller) == ring.one())) break;
      order = smaller;
    }
  }
  return order;
}

}  // namespace detail

/// e_P(a), the multiplicative order of a in O_K / P. Computed from the factorization
/// of q - 1; returns nullopt when q - 1 does not factor within the budget.
inline std::optional<Int> residue_order(const PrimeIdeal& P, const QuadInt& a, const FactorBudget& budget = {}) {
  Residue image;
  ResidueRing ring = detail::prime_ring_for(P, a, image);
  Int q = P.norm();
  std::vector<Int> primes;
  // Inert: q - 1 = (p - 1)(p + 1), two smaller numbers to factor.
  std::vector<Int> pieces = P.kind == SplitKind::inert ? std::vector<Int>{P.p - 1, P.p + 1} : std::vector<Int>{q - 1};
  for (const Int& piece : pieces) {
    IntFactorization f = integer_factor(piece, budget);
    if (!f.complete()) return std::nullopt;
    for (const auto& [l, e] : f.factors) primes.push_back(l);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  if (!(ring.pow(image, q - 1) == ring.one())) throw InvariantViolation("residue_order: a^(q-1) != 1 mod P");
  return detail::strip_order(ring, image, q - 1, primes);
}

/// e_P(a) when a^n = 1 mod P is known; only n has to be factored.
inline Int residue_order_dividing(const PrimeIdeal& P, const QuadInt& a, std::uint64_t n) {
  Residue image;
  ResidueRing ring = detail::prime_ring_for(P, a, image);
  if (!(ring.pow(image, from_u64(n)) == ring.one()))
    throw InvariantViolation("residue_order_dividing: a^" + std::to_string(n) + " != 1 mod " + describe(P));
  std::vector<Int> primes;
  for (auto [l, e] : small_factor(n)) primes.push_back(from_u64(l));
  return detail::strip_order(ring, image, from_u64(n), primes);
}

/// a^(q-1) = 1 mod P^2.
inline bool is_wieferich_place(const PrimeIdeal& P, const QuadInt& a) {
  Residue r = residue_pow(a, P.norm() - 1, P, 2);
  return r == Residue{1, 0};
}

struct PlaceReport {
  PrimeIdeal prime;
  QuadInt base;
  Int norm;
  std::optional<Int> order;
  bool wieferich = false;
};

/// C, D split of (a^n - 1) and C', D' split of (Phi_n(a)).
struct CDDecomposition {
  std::uint64_t n = 0;
  QuadInt base;
  FactoredIdeal C, D, Cp, Dp;
  bool complete = false;
  Int unfactored = 1;  // leftover norm when incomplete
};

/// Memoized factorizations of (Phi_d(a)) for a fixed base. Since
/// (a^n - 1) = prod_{d | n} (Phi_d(a)), every level is assembled from these.
/// Safe to share between threads.
class LevelFactorizer {
 public:
  LevelFactorizer(QuadInt base, FactorBudget budget) : base_(std::move(base)), budget_(budget) {
    budget_.validate();
    BaseClass cls = classify_base(base_);
    if (cls == BaseClass::zero || cls == BaseClass::root_of_unity)
      throw IneligibleBase("base " + display_element(base_) + " is zero or a root of unity");
  }

  const QuadInt& base() const { return base_; }
  const FactorBudget& budget() const { return budget_; }

  const IdealFactorization& cyclotomic(std::uint64_t d) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(d);
      if (it != cache_.end()) return it->second;
    }
    IdealFactorization f = factor_principal(cyclotomic_eval(d, base_), budget_);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(d, std::move(f)).first->second;
  }

  /// Factor Phi_d(a) for every divisor d of every level, spread over worker threads.
  void prefetch(const std::vector<std::uint64_t>& levels, unsigned threads = 0) {
    std::set<std::uint64_t> wanted;
    for (auto n : levels)
      for (auto d : divisors(n)) wanted.insert(d);
    std::vector<std::uint64_t> todo;
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (auto d : wanted)
        if (!cache_.count(d)) todo.push_back(d);
    }
    // Largest first: they dominate the runtime.
    std::reverse(todo.begin(), todo.end());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, todo.size()));
    if (threads <= 1) {
      for (auto d : todo) cyclotomic(d);
      return;
    }
    std::mutex next_mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (;;) {
          std::uint64_t d;
          {
            std::lock_guard<std::mutex> lock(next_mu);
            if (next == todo.size()) return;
            d = todo[next++];
          }
          cyclotomic(d);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  CDDecomposition decompose(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("decompose: n must be >= 1");
    CDDecomposition out{n, base_, {}, {}, {}, {}, true, 1};
    FactoredIdeal whole;
    for (auto d : divisors(n)) {
      const IdealFactorization& f = cyclotomic(d);
      if (!f.complete()) {
        out.complete = false;
        out.unfactored *= f.unfactored;
      }
      whole = ideal_product(whole, f.ideal);
    }
    if (!out.complete) return out;
    PowerfulSplit split = powerful_squarefree_split(whole);
    out.C = std::move(split.squarefree);
    out.D = std::move(split.powerful);
    const FactoredIdeal& phi_n = cyclotomic(n).ideal;
    out.Cp = ideal_gcd(phi_n, out.C);
    out.Dp = ideal_gcd(phi_n, out.D);
    if (out.C.norm() * out.D.norm() != abs_norm(power(base_, n) - 1))
      throw InvariantViolation("decompose: Nm(C) Nm(D) != |Nm(a^n - 1)| at n = " + std::to_string(n));
    if (ideal_product(out.Cp, out.Dp) != phi_n || !out.Cp.squarefree())
      throw InvariantViolation("decompose: C' D' != (Phi_n(a)) at n = " + std::to_string(n));
    return out;
  }

 private:
  QuadInt base_;
  FactorBudget budget_;
  std::mutex mu_;
  std::map<std::uint64_t, IdealFactorization> cache_;
};

inline CDDecomposition cd_decompose(std::uint64_t n, const QuadInt& a, const FactorBudget& budget = {}) {
  LevelFactorizer levels(a, budget);
  return levels.decompose(n);
}

struct NonWieferichScan {
  std::uint64_t n = 0;
  bool skipped = false;  // factorization incomplete at this level
  std::vector<PlaceReport> places;
};

/// Every prime of C_{n,a} with its independently computed Wieferich status.
/// A Wieferich prime here would contradict the squarefree-part lemma and raises.
inline NonWieferichScan nonwieferich_from_cn(std::uint64_t n, LevelFactorizer& levels) {
  NonWieferichScan scan{n, false, {}};
  CDDecomposition cd = levels.decompose(n);
  if (!cd.complete) {
    scan.skipped = true;
    return scan;
  }
  const QuadInt& a = levels.base();
  for (const auto& [P, e] : cd.C.factors()) {
    PlaceReport r{P, a, P.norm(), residue_order_dividing(P, a, n), is_wieferich_place(P, a)};
    if (r.wieferich)
      throw InvariantViolation("prime " + describe(P) + " of C_{" + std::to_string(n) + "} is a Wieferich place");
    scan.places.push_back(std::move(r));
  }
  return scan;
}

inline NonWieferichScan nonwieferich_from_cn(std::uint64_t n, const QuadInt& a, const FactorBudget& budget = {}) {
  LevelFactorizer levels(a, budget);
  return nonwieferich_from_cn(n, levels);
}

/// Primes already seen in C' parts, and which levels have been absorbed.
class SeenPrimes {
 public:
  bool has_level(std::uint64_t level) const { return levels_.count(level) > 0; }
  bool contains(const PrimeIdeal& P) const { return primes_.count(P) > 0; }

  void absorb(std::uint64_t level, const CDDecomposition& cd) {
    levels_.insert(level);
    if (!cd.complete) {
      incomplete_.insert(level);
      return;
    }
    for (const auto& entry : cd.Cp.factors()) primes_.insert(entry.first);
  }

  const std::set<std::uint64_t>& incomplete_levels() const { return incomplete_; }
  std::size_t size() const { return primes_.size(); }

 private:
  std::set<PrimeIdeal> primes_;
  std::set<std::uint64_t> levels_;
  std::set<std::uint64_t> incomplete_;
};

/// The first prime (canonical order) of C'_{kq,a} that does not occur in any
/// C'_{km,a} with m < q. Missing lower levels are absorbed into `state` first,
/// and level kq is absorbed afterwards. nullopt when level kq is incomplete or
/// has no new prime.
inline std::optional<PrimeIdeal> new_prime_for(std::uint64_t k, std::uint64_t q, LevelFactorizer& levels,
                                               SeenPrimes& state) {
  if (k == 0 || !is_prime(from_u64(q))) throw std::invalid_argument("new_prime_for: need k >= 1 and q prime");
  for (std::uint64_t m = 1; m < q; ++m)
    if (!state.has_level(k * m)) state.absorb(k * m, levels.decompose(k * m));
  CDDecomposition cd = levels.decompose(k * q);
  std::optional<PrimeIdeal> found;
  if (cd.complete) {
    for (const auto& entry : cd.Cp.factors()) {
      if (!state.contains(entry.first)) {
        found = entry.first;
        break;
      }
    }
  }
  if (!state.has_level(k * q)) state.absorb(k * q, cd);
  return found;
}

enum class CensusStrategy { cprime_levels, prime_levels };

inline const char* to_string(CensusStrategy s) {
  return s == CensusStrategy::cprime_levels ? "cprime-levels" : "prime-levels";
}

struct CensusRecord {
  PrimeIdeal prime;
  std::uint64_t level = 0;
  Int norm;
  Int residue_class;  // norm mod k
};

struct ExcludedPlace {
  PrimeIdeal prime;
  std::uint64_t level = 0;
  std::string reason;
};

struct CensusSummary {
  std::vector<Int> x_grid;
  std::vector<std::uint64_t> counts;
  std::vector<double> count_over_log_x;
};

struct CensusResult {
  QuadInt base;
  std::uint64_t k = 1;
  CensusStrategy strategy = CensusStrategy::cprime_levels;
  std::vector<CensusRecord> records;
  std::vector<ExcludedPlace> excluded;
  std::vector<std::uint64_t> complete_levels;  // multipliers n with level n*k complete
  std::vector<std::uint64_t> skipped_levels;
  std::vector<std::string> warnings;
  CensusSummary summary;
};

/// The members of the small-norm exception set in Q(sqrt(-d)) and the reason a
/// base is refused or flagged.
inline std::string base_eligibility_note(const QuadInt& a) {
  std::string s = "base " + display_element(a) + " in " + a.field().name() + " has |Nm| = " +
                  to_string(abs_norm(a)) + " (" + to_string(classify_base(a)) + ")";
  if (!a.field().is_rational() && abs_norm(a) <= 3)
    s += "; it belongs to the exception set of elements with Nm <= 3 (min |sigma(a)| < 2)";
  return s;
}

inline std::uint64_t count_up_to(const std::vector<CensusRecord>& records, const Int& x) {
  return static_cast<std::uint64_t>(
      std::count_if(records.begin(), records.end(), [&](const CensusRecord& r) { return r.norm <= x; }));
}

/// Non-Wieferich places with Nm(P) = 1 mod k found as first occurrences in the
/// C' parts of levels n*k (or k*q for primes q with the prime-levels strategy).
/// Every record is re-verified: non-Wieferich, and Nm(P) = 1 mod k.
inline CensusResult census(const QuadInt& a, std::uint64_t k, std::uint64_t n_max, const FactorBudget& budget = {},
                           CensusStrategy strategy = CensusStrategy::cprime_levels,
                           std::optional<Int> x_max = std::nullopt) {
  if (k == 0 || n_max == 0) throw std::invalid_argument("census: k and n_max must be >= 1");
  BaseClass cls = classify_base(a);
  if (cls == BaseClass::zero || cls == BaseClass::root_of_unity)
    throw IneligibleBase(base_eligibility_note(a) + "; census needs a base that is not zero or a root of unity");
  CensusResult out{a, k, strategy, {}, {}, {}, {}, {}, {}};
  if (cls == BaseClass::small)
    out.warnings.push_back(base_eligibility_note(a) + "; the log x growth guarantee needs |sigma(a)| >= 2");

  std::vector<std::uint64_t> multipliers;
  for (std::uint64_t n = 1; n <= n_max; ++n)
    if (strategy == CensusStrategy::cprime_levels || is_prime(from_u64(n))) multipliers.push_back(n);

  LevelFactorizer levels(a, budget);
  std::vector<std::uint64_t> all_levels;
  std::uint64_t top = multipliers.empty() ? 0 : multipliers.back();
  for (std::uint64_t m = 1; m <= top; ++m) all_levels.push_back(k * m);
  levels.prefetch(all_levels);

  SeenPrimes seen;
  const Int kk = from_u64(k);
  for (std::uint64_t n : multipliers) {
    std::uint64_t level = k * n;
    // First occurrence is judged against every lower multiple of k.
    for (std::uint64_t m = 1; m < n; ++m)
      if (!seen.has_level(k * m)) seen.absorb(k * m, levels.decompose(k * m));
    CDDecomposition cd = levels.decompose(level);
    if (!cd.complete) {
      out.skipped_levels.push_back(n);
      seen.absorb(level, cd);
      continue;
    }
    out.complete_levels.push_back(n);
    for (const auto& [P, e] : cd.Cp.factors()) {
      if (seen.contains(P)) continue;
      if (!P.unramified()) {
        out.excluded.push_back({P, level, "ramified"});
        continue;
      }
      if (mpz_divisible_p(kk.get_mpz_t(), P.p.get_mpz_t())) {
        out.excluded.push_back({P, level, "p divides k"});
        continue;
      }
      Int q = P.norm();
      if (is_wieferich_place(P, a))
        throw InvariantViolation("census: " + describe(P) + " from C'_" + std::to_string(level) + " is Wieferich");
      Int residue = mod(q, kk);
      if (mod(q - 1, kk) != 0)
        throw InvariantViolation("census: Nm" + describe(P) + " is not 1 mod k");
      if (x_max && q > *x_max) continue;
      out.records.push_back({P, level, q, residue});
    }
    seen.absorb(level, cd);
  }

  const Int step = pow(abs_norm(a), k);
  Int x = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    x *= step;
    if (x_max && x > *x_max) break;
    std::uint64_t c = count_up_to(out.records, x);
    out.summary.x_grid.push_back(x);
    out.summary.counts.push_back(c);
    out.summary.count_over_log_x.push_back(static_cast<double>(c) / log_abs(x));
  }
  return out;
}

struct OrderCheck {
  PrimeIdeal prime;
  Int norm;
  std::uint64_t expected = 0;  // n / p^{v_p(n)}
  Int order;
};

struct OrderReport {
  std::uint64_t n = 0;
  bool skipped = false;
  std::vector<OrderCheck> checked;
  std::vector<PrimeIdeal> excluded_ramified;
  std::vector<std::string> violations;
};

/// For unramified P | (Phi_n(a)): e_P(a) = n p^{-v_p(n)} and Nm(P) = 1 modulo it.
inline OrderReport order_consistency_check(std::uint64_t n, LevelFactorizer& levels) {
  OrderReport rep{n, false, {}, {}, {}};
  const IdealFactorization& phi = levels.cyclotomic(n);
  if (!phi.complete()) {
    rep.skipped = true;
    return rep;
  }
  const QuadInt& a = levels.base();
  for (const auto& [P, e] : phi.ideal.factors()) {
    if (!P.unramified()) {
      rep.excluded_ramified.push_back(P);
      continue;
    }
    std::uint64_t expected = n;
    if (fits_u64(P.p)) {
      std::uint64_t p = to_u64(P.p);
      while (expected % p == 0) expected /= p;
    }
    Int order = residue_order_dividing(P, a, n);
    Int q = P.norm();
    if (order != from_u64(expected))
      rep.violations.push_back("n=" + std::to_string(n) + " " + describe(P) + ": order " + to_string(order) +
                               " != " + std::to_string(expected));
    if (mod(q - 1, from_u64(expected)) != 0)
      rep.violations.push_back("n=" + std::to_string(n) + " " + describe(P) + ": Nm = " + to_string(q) +
                               " is not 1 mod " + std::to_string(expected));
    rep.checked.push_back({P, q, expected, order});
  }
  return rep;
}

inline OrderReport order_consistency_check(std::uint64_t n, const QuadInt& a, const FactorBudget& budget = {}) {
  LevelFactorizer levels(a, budget);
  return order_consistency_check(n, levels);
}

}  // namespace wieferich
