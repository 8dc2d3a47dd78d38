#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wieferich/bigint.hpp"
#include "wieferich/cyclo.hpp"
#include "wieferich/errors.hpp"
#include "wieferich/ideals.hpp"
#include "wieferich/qfield.hpp"
#include "wieferich/wieferich.hpp"

namespace wieferich {

/// Outcome of one machine-checked inequality or identity over a parameter range.
/// `min_margin` is the smallest slack seen, in natural-log units.
struct BoundCheckReport {
  std::string check;
  std::string parameters;
  std::vector<std::string> violations;
  std::vector<std::string> skipped;
  std::optional<double> min_margin;
  std::size_t cases = 0;

  bool pass() const { return violations.empty(); }

  void note_margin(double m) {
    if (!min_margin || m < *min_margin) min_margin = m;
  }
};

/// max(|Nm(a^n - 1)|, |Nm(a^n + 1)|) <= 2^[K:Q] |Nm(a)|^n for 1 <= n <= n_max.
inline BoundCheckReport check_upper_norm_bound(const QuadInt& a, std::uint64_t n_max) {
  if (a.is_zero()) throw std::invalid_argument("check_upper_norm_bound: needs Nm(a) >= 1");
  BoundCheckReport rep{"upper_norm_bound", "a=" + display_element(a) + " n<=" + std::to_string(n_max), {}, {}, {}, 0};
  const Int two_deg = pow(Int(2), a.field().degree());
  const Int na = abs_norm(a);
  QuadInt an = QuadInt::one(a.field());
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    an = an * a;
    QuadInt minus = an - 1, plus = an + 1;
    if (minus.is_zero()) {
      rep.skipped.push_back("n=" + std::to_string(n) + ": a^n - 1 = 0");
      continue;
    }
    Int lhs = std::max(abs_norm(minus), abs_norm(plus));
    Int rhs = two_deg * pow(na, n);
    ++rep.cases;
    if (lhs > rhs)
      rep.violations.push_back("n=" + std::to_string(n) + ": " + to_string(lhs) + " > " + to_string(rhs));
    else
      rep.note_margin(log_abs(rhs) - log_abs(lhs));
  }
  return rep;
}

/// |Nm(a)|^phi(n) <= 2^[K:Q] |Nm(Phi_n(a))| for 2 <= n <= n_max; a must be eligible.
inline BoundCheckReport check_lower_phi_bound(const QuadInt& a, std::uint64_t n_max) {
  if (classify_base(a) != BaseClass::eligible)
    throw IneligibleBase("check_lower_phi_bound: " + base_eligibility_note(a) + "; needs |sigma(a)| >= 2");
  BoundCheckReport rep{"lower_phi_bound", "a=" + display_element(a) + " 2<=n<=" + std::to_string(n_max), {}, {}, {}, 0};
  const Int two_deg = pow(Int(2), a.field().degree());
  const Int na = abs_norm(a);
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    Int lhs = pow(na, euler_phi(n));
    Int rhs = two_deg * abs_norm(cyclotomic_eval(n, a));
    ++rep.cases;
    if (lhs > rhs)
      rep.violations.push_back("n=" + std::to_string(n) + ": " + to_string(lhs) + " > " + to_string(rhs));
    else
      rep.note_margin(log_abs(rhs) - log_abs(lhs));
  }
  return rep;
}

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

struct Interval {
  double lo_margin;  // certified lower bound on log 2 - |sum| (rounded down)
  bool certified;
  std::string value;
};

// Encloses S = sum_{d | n} mu(n/d) log(1 - b^-d) in [lo, hi] with directed rounding,
// then certifies -log 2 <= lo and hi <= log 2.
inline Interval sandwich_at(const Rational& b, std::uint64_t n, mpfr_prec_t prec) {
  Mpfr lo(prec), hi(prec), term_lo(prec), term_hi(prec), x(prec), log2_lo(prec), tmp(prec);
  mpfr_set_zero(lo.get(), 1);
  mpfr_set_zero(hi.get(), 1);
  const Int num = b.get_num(), den = b.get_den();
  for (std::uint64_t d : divisors(n)) {
    int mu = mobius(n / d);
    if (mu == 0) continue;
    // log(1 - b^-d) = log1p(-den^d / num^d); log1p is increasing.
    Rational r(pow(den, d), pow(num, d));
    r.canonicalize();
    mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDU);
    mpfr_neg(x.get(), x.get(), MPFR_RNDN);  // exact
    mpfr_log1p(term_lo.get(), x.get(), MPFR_RNDD);
    mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDD);
    mpfr_neg(x.get(), x.get(), MPFR_RNDN);
    mpfr_log1p(term_hi.get(), x.get(), MPFR_RNDU);
    if (mu > 0) {
      mpfr_add(lo.get(), lo.get(), term_lo.get(), MPFR_RNDD);
      mpfr_add(hi.get(), hi.get(), term_hi.get(), MPFR_RNDU);
    } else {
      mpfr_sub(lo.get(), lo.get(), term_hi.get(), MPFR_RNDD);
      mpfr_sub(hi.get(), hi.get(), term_lo.get(), MPFR_RNDU);
    }
  }
  mpfr_const_log2(log2_lo.get(), MPFR_RNDD);
  // margins: log2 - hi and lo + log2, both rounded down
  mpfr_sub(tmp.get(), log2_lo.get(), hi.get(), MPFR_RNDD);
  double upper_margin = mpfr_get_d(tmp.get(), MPFR_RNDD);
  bool ok_upper = mpfr_sgn(tmp.get()) > 0;
  mpfr_add(tmp.get(), lo.get(), log2_lo.get(), MPFR_RNDD);
  double lower_margin = mpfr_get_d(tmp.get(), MPFR_RNDD);
  bool ok_lower = mpfr_sgn(tmp.get()) > 0;
  mpfr_add(tmp.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(tmp.get(), tmp.get(), 1, MPFR_RNDN);
  return {std::min(upper_margin, lower_margin), ok_upper && ok_lower, std::to_string(mpfr_get_d(tmp.get(), MPFR_RNDN))};
}

}  // namespace detail

/// -log 2 <= sum_{d | n} mu(n/d) log(1 - b^-d) <= log 2 for 2 <= n <= n_max and real b >= 2,
/// certified with outward-rounded interval sums. Precision is raised until the
/// enclosure separates from +-log 2; an enclosure that never does is a violation.
inline BoundCheckReport check_sandwich(const Rational& b_in, std::uint64_t n_max) {
  Rational b = b_in;
  b.canonicalize();
  if (b < 2) throw std::invalid_argument("check_sandwich: b must be >= 2");
  BoundCheckReport rep{"sandwich", "b=" + b.get_str() + " 2<=n<=" + std::to_string(n_max), {}, {}, {}, 0};
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    ++rep.cases;
    mpfr_prec_t prec = 64 + 2 * static_cast<mpfr_prec_t>(n);
    detail::Interval iv{};
    for (int attempt = 0; attempt < 6; ++attempt, prec *= 2) {
      iv = detail::sandwich_at(b, n, prec);
      if (iv.certified) break;
    }
    if (!iv.certified)
      rep.violations.push_back("n=" + std::to_string(n) + ": enclosure of the sum (~" + iv.value +
                               ") does not lie inside [-log 2, log 2]");
    else
      rep.note_margin(iv.lo_margin);
  }
  return rep;
}

/// C'_{m,a} + C'_{n,a} = O_K for all complete pairs 1 <= m < n <= n_max.
inline BoundCheckReport check_chen_pairwise(LevelFactorizer& levels, std::uint64_t n_max) {
  BoundCheckReport rep{"chen_pairwise", "a=" + display_element(levels.base()) + " n<=" + std::to_string(n_max), {}, {}, {}, 0};
  std::vector<std::uint64_t> all;
  for (std::uint64_t n = 1; n <= n_max; ++n) all.push_back(n);
  levels.prefetch(all);
  std::vector<std::pair<std::uint64_t, FactoredIdeal>> parts;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    CDDecomposition cd = levels.decompose(n);
    if (!cd.complete) {
      rep.skipped.push_back("n=" + std::to_string(n) + ": factorization incomplete");
      continue;
    }
    parts.emplace_back(n, std::move(cd.Cp));
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      ++rep.cases;
      FactoredIdeal g = ideal_gcd(parts[i].second, parts[j].second);
      if (!g.is_unit())
        rep.violations.push_back("C'_" + std::to_string(parts[i].first) + " + C'_" + std::to_string(parts[j].first) +
                                 " has norm " + to_string(g.norm()));
    }
  }
  return rep;
}

inline BoundCheckReport check_chen_pairwise(const QuadInt& a, std::uint64_t n_max, const FactorBudget& budget = {}) {
  LevelFactorizer levels(a, budget);
  return check_chen_pairwise(levels, n_max);
}

/// Every prime of C_{n,a} is a non-Wieferich place, for complete n <= n_max.
inline BoundCheckReport check_squarefree_part_nonwieferich(LevelFactorizer& levels, std::uint64_t n_max) {
  BoundCheckReport rep{"squarefree_part_nonwieferich",
                       "a=" + display_element(levels.base()) + " n<=" + std::to_string(n_max), {}, {}, {}, 0};
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    try {
      NonWieferichScan scan = nonwieferich_from_cn(n, levels);
      if (scan.skipped) rep.skipped.push_back("n=" + std::to_string(n) + ": factorization incomplete");
      rep.cases += scan.places.size();
    } catch (const InvariantViolation& e) {
      rep.violations.push_back(e.what());
    }
  }
  return rep;
}

/// Order lemmas over complete levels: for unramified P | (Phi_n(a)), e_P(a) = n p^{-v_p(n)}
/// and Nm(P) = 1 mod n p^{-v_p(n)}.
inline BoundCheckReport check_order_lemmas(LevelFactorizer& levels, std::uint64_t n_max) {
  BoundCheckReport rep{"order_lemmas", "a=" + display_element(levels.base()) + " n<=" + std::to_string(n_max), {}, {}, {}, 0};
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    OrderReport o = order_consistency_check(n, levels);
    if (o.skipped) rep.skipped.push_back("n=" + std::to_string(n) + ": factorization incomplete");
    rep.cases += o.checked.size();
    rep.violations.insert(rep.violations.end(), o.violations.begin(), o.violations.end());
  }
  return rep;
}

/// If P | Phi_n(a) and P divides no Phi_m(a) with m < n, then Nm(P) = 1 mod n.
/// Levels after an incomplete one are still checked against the primes known so far.
inline BoundCheckReport check_first_occurrence_norms(LevelFactorizer& levels, std::uint64_t n_max) {
  BoundCheckReport rep{"first_occurrence_norms",
                       "a=" + display_element(levels.base()) + " n<=" + std::to_string(n_max), {}, {}, {}, 0};
  std::set<PrimeIdeal> earlier;
  bool prefix_complete = true;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const IdealFactorization& f = levels.cyclotomic(n);
    if (!f.complete() || !prefix_complete) {
      // Without every earlier prime, "first occurrence" cannot be established.
      rep.skipped.push_back("n=" + std::to_string(n) + ": earlier or current level incomplete");
      prefix_complete = prefix_complete && f.complete();
      for (const auto& entry : f.ideal.factors()) earlier.insert(entry.first);
      continue;
    }
    for (const auto& [P, e] : f.ideal.factors()) {
      if (earlier.count(P)) continue;
      ++rep.cases;
      if (mod(P.norm() - 1, from_u64(n)) != 0)
        rep.violations.push_back("n=" + std::to_string(n) + " " + describe(P) + ": Nm not 1 mod n");
    }
    for (const auto& entry : f.ideal.factors()) earlier.insert(entry.first);
  }
  return rep;
}

struct TrendPoint {
  std::uint64_t n = 0;
  double d_ratio = 0;       // log Nm(D) / (n log|Nm a|)
  double c_ratio = 0;       // log Nm(C) / (n log|Nm a|)
  double cprime_ratio = 0;  // log Nm(C') / (phi(n) log|Nm a|)
  double total_ratio = 0;   // log|Nm(a^n - 1)| / (n log|Nm a|)
};

struct TrendReport {
  QuadInt base;
  std::vector<TrendPoint> levels;
  std::vector<std::uint64_t> skipped;
  double last_quartile_max_d_ratio = 0;
  double last_quartile_min_c_ratio = 0;
};

namespace detail {
inline double log_or_zero(const Int& n) { return n == 1 ? 0.0 : log_abs(n); }
}  // namespace detail

/// Per-level growth exponents of D, C and C'. Nothing is asserted about their size;
/// the exact identity Nm(C) Nm(D) = |Nm(a^n - 1)| is checked inside decompose().
inline TrendReport bound_trend_report(LevelFactorizer& levels, std::uint64_t n_max) {
  const QuadInt& a = levels.base();
  TrendReport rep{a, {}, {}, 0, 0};
  const double log_na = log_abs(abs_norm(a));
  std::vector<std::uint64_t> all;
  for (std::uint64_t n = 1; n <= n_max; ++n) all.push_back(n);
  levels.prefetch(all);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    CDDecomposition cd = levels.decompose(n);
    if (!cd.complete) {
      rep.skipped.push_back(n);
      continue;
    }
    const double scale = static_cast<double>(n) * log_na;
    TrendPoint pt;
    pt.n = n;
    pt.d_ratio = detail::log_or_zero(cd.D.norm()) / scale;
    pt.c_ratio = detail::log_or_zero(cd.C.norm()) / scale;
    pt.cprime_ratio = detail::log_or_zero(cd.Cp.norm()) / (static_cast<double>(euler_phi(n)) * log_na);
    pt.total_ratio = detail::log_or_zero(abs_norm(power(a, n) - 1)) / scale;
    rep.levels.push_back(pt);
  }
  if (!rep.levels.empty()) {
    std::size_t tail = (rep.levels.size() + 3) / 4;
    auto first = rep.levels.end() - static_cast<std::ptrdiff_t>(tail);
    rep.last_quartile_max_d_ratio = -std::numeric_limits<double>::infinity();
    rep.last_quartile_min_c_ratio = std::numeric_limits<double>::infinity();
    for (auto it = first; it != rep.levels.end(); ++it) {
      rep.last_quartile_max_d_ratio = std::max(rep.last_quartile_max_d_ratio, it->d_ratio);
      rep.last_quartile_min_c_ratio = std::min(rep.last_quartile_min_c_ratio, it->c_ratio);
    }
  }
  return rep;
}

inline TrendReport bound_trend_report(const QuadInt& a, std::uint64_t n_max, const FactorBudget& budget = {}) {
  if (abs_norm(a) < 2) throw IneligibleBase("bound_trend_report: " + base_eligibility_note(a));
  LevelFactorizer levels(a, budget);
  return bound_trend_report(levels, n_max);
}

/// abc statistics of alpha + beta = zeta (a root of unity).
/// quality = log max(|Nm alpha|, |Nm beta|) / log(Nm rad(alpha) Nm rad(beta)).
/// Height and conductor use one normalized factor per infinite place and per
/// prime: log H = max log|Nm| / [K:Q], log N = log(prod Nm(P)) / [K:Q].
struct QualityReport {
  QuadInt alpha, beta;
  Int max_norm;
  Int rad_norm_alpha, rad_norm_beta;
  double quality = 0;
  double log_height = 0;
  double log_conductor = 0;
  double exponent_gap = 0;  // log H / log N - 1
};

inline QualityReport abc_quality(const QuadInt& alpha, const QuadInt& beta, const FactorBudget& budget = {}) {
  if (alpha.is_zero() || beta.is_zero()) throw std::invalid_argument("abc_quality: alpha and beta must be nonzero");
  QuadInt sum = alpha + beta;
  if (sum.is_zero() || abs_norm(sum) != 1)
    throw std::invalid_argument("abc_quality: alpha + beta = " + display_element(sum) + " is not a root of unity");
  IdealFactorization fa = factor_principal(alpha, budget), fb = factor_principal(beta, budget);
  if (!fa.complete() || !fb.complete()) throw BudgetExhausted("abc_quality: factorization incomplete within budget");
  QualityReport rep{alpha, beta, std::max(abs_norm(alpha), abs_norm(beta)), radical(fa.ideal).norm(),
                    radical(fb.ideal).norm(), 0, 0, 0, 0};
  Int rad = rep.rad_norm_alpha * rep.rad_norm_beta;
  if (rad == 1) throw std::domain_error("abc_quality: alpha and beta are both units");
  const double deg = alpha.field().degree();
  rep.quality = log_abs(rep.max_norm) / log_abs(rad);
  rep.log_height = log_abs(rep.max_norm) / deg;
  rep.log_conductor = log_abs(rad) / deg;
  rep.exponent_gap = rep.log_height / rep.log_conductor - 1;
  return rep;
}

struct ExceptionGroup {
  std::int64_t d = 0;
  std::vector<QuadInt> elements;  // sorted by (norm, x, y)
};

/// All a in O_K with Nm(a) <= 3, i.e. min |sigma(a)| < 2, by enumerating the norm form.
inline std::vector<ExceptionGroup> exception_set(const std::vector<std::int64_t>& d_list) {
  std::vector<ExceptionGroup> out;
  for (std::int64_t d : d_list) {
    FieldSpec f = FieldSpec::imaginary_quadratic(d);
    ExceptionGroup g{d, {}};
    // 4 Nm = (2x + tr y)^2 + d y^2 (half basis) or 4x^2 + 4d y^2, so |y| <= 12/d and |x| <= 4.
    const long ybound = static_cast<long>(std::sqrt(12.0 / static_cast<double>(d))) + 1;
    for (long y = -ybound; y <= ybound; ++y)
      for (long x = -4 - ybound; x <= 4 + ybound; ++x) {
        QuadInt a(f, x, y);
        if (norm(a) <= 3) g.elements.push_back(a);
      }
    std::sort(g.elements.begin(), g.elements.end(), [](const QuadInt& u, const QuadInt& v) {
      Int nu = norm(u), nv = norm(v);
      if (nu != nv) return nu < nv;
      if (u.x() != v.x()) return u.x() < v.x();
      return u.y() < v.y();
    });
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<std::int64_t> squarefree_up_to(std::int64_t d_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= d_max; ++d)
    if (is_squarefree(d)) out.push_back(d);
  return out;
}

/// Union across fields, identifying elements by their complex value (0 and +-1
/// appear in every field once).
inline std::vector<std::string> exception_union(const std::vector<ExceptionGroup>& groups) {
  std::set<std::string> seen;
  for (const auto& g : groups)
    for (const auto& a : g.elements) seen.insert(display_element(a));
  return {seen.begin(), seen.end()};
}

}  // namespace wieferich
