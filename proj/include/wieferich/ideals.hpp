#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "wieferich/bigint.hpp"
#include "wieferich/errors.hpp"
#include "wieferich/factor.hpp"
#include "wieferich/qfield.hpp"

namespace wieferich {

// `rational` is the single prime (p) of Z in rational mode.
enum class SplitKind { split, inert, ramified, rational };

inline const char* to_string(SplitKind k) {
  switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    case SplitKind::ramified: return "ramified";
    case SplitKind::rational: return "rational";
  }
  return "?";
}

/// A prime of O_K given by the rational prime p below it, how p decomposes,
/// and (split, ramified) the root t of omega's minimal polynomial with omega = t mod P.
/// Inert and rational primes carry t = 0.
struct PrimeIdeal {
  Int p;
  SplitKind kind = SplitKind::rational;
  Int t = 0;

  Int norm() const { return kind == SplitKind::inert ? Int(p * p) : p; }
  unsigned residue_degree() const { return kind == SplitKind::inert ? 2 : 1; }
  bool unramified() const { return kind != SplitKind::ramified; }

  friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) {
    return a.p == b.p && a.kind == b.kind && a.t == b.t;
  }
  friend bool operator<(const PrimeIdeal& a, const PrimeIdeal& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.t < b.t;
  }
};

inline std::string describe(const PrimeIdeal& P) {
  std::string s = "(" + to_string(P.p) + ", " + to_string(P.kind);
  if (P.kind == SplitKind::split || P.kind == SplitKind::ramified) s += ", t=" + to_string(P.t);
  return s + ")";
}

inline void require_prime(const Int& p, const char* op) {
  if (!is_prime(p)) throw std::invalid_argument(std::string(op) + ": " + to_string(p) + " is not prime");
}

inline SplitKind splitting_type(const Int& p, const FieldSpec& field) {
  require_prime(p, "splitting_type");
  if (field.is_rational()) return SplitKind::rational;
  Int disc = static_cast<long>(field.discriminant());
  int k = mpz_kronecker(disc.get_mpz_t(), p.get_mpz_t());
  if (k == 0) return SplitKind::ramified;
  return k > 0 ? SplitKind::split : SplitKind::inert;
}

/// Square root of a quadratic residue n modulo an odd prime p (Tonelli-Shanks).
inline Int sqrt_mod(const Int& n_in, const Int& p) {
  Int n = mod(n_in, p);
  if (n == 0) return 0;
  if (mpz_legendre(n.get_mpz_t(), p.get_mpz_t()) != 1)
    throw std::domain_error("sqrt_mod: " + to_string(n) + " is a non-residue modulo " + to_string(p));
  Int q = p - 1;
  unsigned s = static_cast<unsigned>(mpz_scan1(q.get_mpz_t(), 0));
  q >>= s;
  if (s == 1) return powm(n, (p + 1) / 4, p);
  Int z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  Int c = powm(z, q, p);
  Int r = powm(n, (q + 1) / 2, p);
  Int t = powm(n, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    Int tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Int b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

/// Lift a simple root t of omega's minimal polynomial f mod p to a root mod p^m by
/// Newton steps t <- t - f(t)/f'(t), doubling the precision each step.
inline Int lift_root(const FieldSpec& field, const Int& t, const Int& p, unsigned m) {
  if (m == 0) return 0;
  Int root = mod(t, p);
  unsigned have = 1;
  while (have < m) {
    have = std::min(2 * have, m);
    Int modulus = pow(p, have);
    Int deriv = 2 * root - field.omega_trace();
    root = mod(root - field.omega_minpoly(root) * invert(deriv, modulus), modulus);
  }
  Int modulus = pow(p, m);
  if (mod(field.omega_minpoly(root), modulus) != 0)
    throw InvariantViolation("lift_root: lifted root fails the minimal polynomial");
  return root;
}

/// Primes above p, ordered by t (the smaller root labels the first split prime).
inline std::vector<PrimeIdeal> primes_above(const Int& p, const FieldSpec& field) {
  SplitKind kind = splitting_type(p, field);
  switch (kind) {
    case SplitKind::rational:
    case SplitKind::inert:
      return {PrimeIdeal{p, kind, 0}};
    case SplitKind::ramified: {
      // Double root of X^2 - tr X + n mod p.
      Int t = p == 2 ? mod(field.omega_norm(), 2) : mod(field.omega_trace() * invert(2, p), p);
      return {PrimeIdeal{p, kind, t}};
    }
    case SplitKind::split: {
      Int t1, t2;
      if (p == 2) {
        t1 = 0;
        t2 = 1;
      } else {
        Int inv2 = invert(2, p);
        Int s = sqrt_mod(Int(static_cast<long>(field.discriminant())), p);
        t1 = mod((field.omega_trace() + s) * inv2, p);
        t2 = mod((field.omega_trace() - s) * inv2, p);
        if (t2 < t1) std::swap(t1, t2);
      }
      return {PrimeIdeal{p, kind, t1}, PrimeIdeal{p, kind, t2}};
    }
  }
  return {};
}

/// v_P(gamma) for gamma != 0.
inline unsigned element_valuation(const QuadInt& gamma, const PrimeIdeal& P) {
  if (gamma.is_zero()) throw std::domain_error("element_valuation: gamma = 0");
  unsigned total = valuation(norm(gamma), P.p);
  switch (P.kind) {
    case SplitKind::rational:
    case SplitKind::ramified: return total;
    case SplitKind::inert: return total / 2;
    case SplitKind::split: break;
  }
  if (total == 0) return 0;
  // gamma in P^m iff x + y*t_m = 0 mod p^m, and t_total = t_m mod p^m for m <= total.
  Int t = lift_root(gamma.field(), P.t, P.p, total);
  Int image = mod(gamma.x() + gamma.y() * t, pow(P.p, total));
  if (image == 0) return total;
  return std::min(total, valuation(image, P.p));
}

/// An integral ideal as a sorted product of prime powers; the empty product is O_K.
class FactoredIdeal {
 public:
  using Entry = std::pair<PrimeIdeal, unsigned>;

  FactoredIdeal() = default;

  // Entries may be unsorted and repeated; zero exponents are dropped.
  explicit FactoredIdeal(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& [P, e] : entries) {
      if (e == 0) continue;
      if (!factors_.empty() && factors_.back().first == P) factors_.back().second += e;
      else factors_.emplace_back(std::move(P), e);
    }
  }

  const std::vector<Entry>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }
  std::size_t size() const { return factors_.size(); }

  unsigned exponent(const PrimeIdeal& P) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), P,
                               [](const Entry& a, const PrimeIdeal& b) { return a.first < b; });
    return it != factors_.end() && it->first == P ? it->second : 0;
  }
  bool contains(const PrimeIdeal& P) const { return exponent(P) > 0; }

  Int norm() const {
    Int n = 1;
    for (const auto& [P, e] : factors_) n *= pow(P.norm(), e);
    return n;
  }

  bool squarefree() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Entry& f) { return f.second == 1; });
  }
  bool powerful() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Entry& f) { return f.second >= 2; });
  }

  friend bool operator==(const FactoredIdeal&, const FactoredIdeal&) = default;

 private:
  std::vector<Entry> factors_;
};

inline FactoredIdeal ideal_product(const FactoredIdeal& a, const FactoredIdeal& b) {
  std::vector<FactoredIdeal::Entry> all = a.factors();
  all.insert(all.end(), b.factors().begin(), b.factors().end());
  return FactoredIdeal(std::move(all));
}

// I + J: prime-wise minimum of exponents.
inline FactoredIdeal ideal_gcd(const FactoredIdeal& a, const FactoredIdeal& b) {
  std::vector<FactoredIdeal::Entry> out;
  for (const auto& [P, e] : a.factors())
    if (unsigned f = b.exponent(P)) out.emplace_back(P, std::min(e, f));
  return FactoredIdeal(std::move(out));
}

inline FactoredIdeal radical(const FactoredIdeal& a) {
  std::vector<FactoredIdeal::Entry> out;
  for (const auto& entry : a.factors()) out.emplace_back(entry.first, 1);
  return FactoredIdeal(std::move(out));
}

struct PowerfulSplit {
  FactoredIdeal squarefree;  // C
  FactoredIdeal powerful;    // D
};

inline PowerfulSplit powerful_squarefree_split(const FactoredIdeal& F) {
  std::vector<FactoredIdeal::Entry> c, d;
  for (const auto& entry : F.factors()) (entry.second >= 2 ? d : c).push_back(entry);
  return {FactoredIdeal(std::move(c)), FactoredIdeal(std::move(d))};
}

/// The ideal (gamma) as far as the budget allows. When incomplete, `ideal` holds
/// the exact valuations at every prime found and `unfactored` the rest of |Nm(gamma)|.
struct IdealFactorization {
  FactoredIdeal ideal;
  Int unfactored = 1;

  bool complete() const { return unfactored == 1; }
};

inline IdealFactorization factor_principal(const QuadInt& gamma, const FactorBudget& budget = {}) {
  if (gamma.is_zero()) throw std::domain_error("factor_principal: gamma = 0");
  const FieldSpec& field = gamma.field();
  Int abs_nm = abs_norm(gamma);

  // Nm(gamma) = c^2 Nm(gamma / c) for the content c; factoring the pieces is cheaper.
  Int content = field.is_rational() ? Int(1) : Int(gcd(gamma.x(), gamma.y()));
  IntFactorization by_content = integer_factor(content, budget);
  IntFactorization by_norm = integer_factor(abs_nm / (content * content), budget);
  std::vector<Int> rational_primes;
  for (const auto& f : by_content.factors) rational_primes.push_back(f.first);
  for (const auto& f : by_norm.factors) rational_primes.push_back(f.first);
  std::sort(rational_primes.begin(), rational_primes.end());
  rational_primes.erase(std::unique(rational_primes.begin(), rational_primes.end()), rational_primes.end());

  std::vector<FactoredIdeal::Entry> entries;
  for (const Int& p : rational_primes) {
    auto above = primes_above(p, field);
    if (above.size() == 2) {
      unsigned total = valuation(abs_nm, p);
      unsigned first = element_valuation(gamma, above[0]);
      entries.emplace_back(above[0], first);
      entries.emplace_back(above[1], total - first);
    } else {
      entries.emplace_back(above[0], element_valuation(gamma, above[0]));
    }
  }
  IdealFactorization out{FactoredIdeal(std::move(entries)), by_content.unfactored * by_norm.unfactored};
  if (out.complete() && out.ideal.norm() != abs_nm)
    throw InvariantViolation("factor_principal: prime norms do not multiply back to |Nm(gamma)|");
  return out;
}

/// A residue in O_K / P^m. Integer encodings use c0 only; pair encodings are
/// coordinates c0 + c1*omega.
struct Residue {
  Int c0 = 0;
  Int c1 = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
};

/// O_K / P^m for m in {1, 2}:
///   split, rational        -> Z/p^m via omega -> t_m
///   inert                  -> (Z/p^m)[omega]
///   ramified, m = 1        -> Z/p via omega -> t
///   ramified, m = 2        -> O_K/(p) = (Z/p)[omega], which has nilpotents
class ResidueRing {
 public:
  ResidueRing(const FieldSpec& field, const PrimeIdeal& P, unsigned m) : field_(field), prime_(P), m_(m) {
    if (m != 1 && m != 2) throw std::invalid_argument("ResidueRing: m must be 1 or 2");
    pair_ = P.kind == SplitKind::inert || (P.kind == SplitKind::ramified && m == 2);
    modulus_ = P.kind == SplitKind::ramified ? P.p : wieferich::pow(P.p, m);
    if (P.kind == SplitKind::split) t_ = lift_root(field, P.t, P.p, m);
    else if (P.kind == SplitKind::ramified) t_ = P.t;
  }

  bool pair_encoded() const { return pair_; }
  const Int& modulus() const { return modulus_; }
  unsigned exponent() const { return m_; }

  Residue one() const { return Residue{1, 0}; }

  Residue reduce(const QuadInt& a) const {
    if (pair_) return Residue{mod(a.x(), modulus_), mod(a.y(), modulus_)};
    return Residue{mod(a.x() + a.y() * t_, modulus_), 0};
  }

  Residue mul(const Residue& a, const Residue& b) const {
    if (!pair_) return Residue{a.c0 * b.c0 % modulus_, 0};
    Int yy = a.c1 * b.c1;
    Int x = a.c0 * b.c0 - field_.omega_norm() * yy;
    Int y = a.c0 * b.c1 + a.c1 * b.c0 + field_.omega_trace() * yy;
    return Residue{mod(x, modulus_), mod(y, modulus_)};
  }

  Residue pow(Residue base, Int e) const {
    if (e < 0) throw std::invalid_argument("ResidueRing::pow: negative exponent");
    if (!pair_) return Residue{powm(base.c0, e, modulus_), 0};
    Residue r = one();
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      r = mul(r, r);
      if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, base);
    }
    return r;
  }

  // Whether the residue lies in P / P^m.
  bool in_prime(const Residue& r) const {
    const Int& p = prime_.p;
    switch (prime_.kind) {
      case SplitKind::inert: return mod(r.c0, p) == 0 && mod(r.c1, p) == 0;
      case SplitKind::ramified:
        return pair_ ? mod(r.c0 + r.c1 * t_, p) == 0 : mod(r.c0, p) == 0;
      default: return mod(r.c0, p) == 0;
    }
  }

  // Image of a residue mod P^2 in O_K / P.
  Residue to_prime_level(const Residue& r) const {
    const Int& p = prime_.p;
    if (m_ == 1) return r;
    switch (prime_.kind) {
      case SplitKind::inert: return Residue{mod(r.c0, p), mod(r.c1, p)};
      case SplitKind::ramified: return Residue{mod(r.c0 + r.c1 * t_, p), 0};
      default: return Residue{mod(r.c0, p), 0};
    }
  }

 private:
  FieldSpec field_;
  PrimeIdeal prime_;
  unsigned m_;
  bool pair_ = false;
  Int modulus_;
  Int t_ = 0;
};

/// a^e in O_K / P^m, computed by square-and-multiply inside the quotient.
inline Residue residue_pow(const QuadInt& a, const Int& e, const PrimeIdeal& P, unsigned m) {
  ResidueRing ring(a.field(), P, m);
  Residue base = ring.reduce(a);
  if (ring.in_prime(base)) throw std::domain_error("residue_pow: base lies in " + describe(P));
  return ring.pow(base, e);
}

}  // namespace wieferich
