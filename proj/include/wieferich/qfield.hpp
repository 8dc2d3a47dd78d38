#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wieferich/bigint.hpp"
#include "wieferich/errors.hpp"

namespace wieferich {

enum class FieldMode { imaginary_quadratic, rational };

// sqrt: omega = sqrt(-d); half: omega = (1 + sqrt(-d)) / 2.
enum class BasisKind { sqrt, half };

inline bool is_squarefree(std::int64_t d) {
  if (d < 1) return false;
  for (std::int64_t p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

/// The ring of integers of Q(sqrt(-d)) with the fixed integral basis {1, omega},
/// or Z itself in rational mode.
///
/// omega is a root of X^2 - trace*X + norm, where (trace, norm) is (0, d) for the
/// sqrt basis and (1, (1+d)/4) for the half basis.
class FieldSpec {
 public:
  static FieldSpec rational() { return FieldSpec(FieldMode::rational, 0); }

  static FieldSpec imaginary_quadratic(std::int64_t d) {
    if (!is_squarefree(d))
      throw std::invalid_argument("field: d = " + std::to_string(d) + " must be a squarefree integer >= 1");
    return FieldSpec(FieldMode::imaginary_quadratic, d);
  }

  // The CLI naming: d = 0 selects rational mode.
  static FieldSpec from_d(std::int64_t d) { return d == 0 ? rational() : imaginary_quadratic(d); }

  FieldMode mode() const { return mode_; }
  bool is_rational() const { return mode_ == FieldMode::rational; }
  std::int64_t d() const { return d_; }
  unsigned degree() const { return is_rational() ? 1 : 2; }

  BasisKind basis() const { return d_ % 4 == 3 ? BasisKind::half : BasisKind::sqrt; }

  std::int64_t discriminant() const {
    if (is_rational()) return 1;
    return basis() == BasisKind::half ? -d_ : -4 * d_;
  }

  long omega_trace() const { return !is_rational() && basis() == BasisKind::half ? 1 : 0; }

  Int omega_norm() const {
    if (is_rational()) return 0;
    return basis() == BasisKind::half ? Int((1 + d_) / 4) : Int(static_cast<long>(d_));
  }

  // Minimal polynomial of omega evaluated at t.
  Int omega_minpoly(const Int& t) const { return t * t - omega_trace() * t + omega_norm(); }

  std::string name() const {
    if (is_rational()) return "Q";
    return "Q(sqrt(-" + std::to_string(d_) + "))";
  }

  bool operator==(const FieldSpec&) const = default;

 private:
  FieldSpec(FieldMode mode, std::int64_t d) : mode_(mode), d_(d) {}

  FieldMode mode_;
  std::int64_t d_;
};

/// x + y*omega with exact coordinates.
class QuadInt {
 public:
  explicit QuadInt(const FieldSpec& field, Int x = 0, Int y = 0)
      : field_(field), x_(std::move(x)), y_(std::move(y)) {
    if (field_.is_rational() && y_ != 0)
      throw std::invalid_argument("QuadInt: rational mode forces y = 0");
  }

  static QuadInt one(const FieldSpec& f) { return QuadInt(f, 1, 0); }
  static QuadInt omega(const FieldSpec& f) { return QuadInt(f, 0, 1); }

  const FieldSpec& field() const { return field_; }
  const Int& x() const { return x_; }
  const Int& y() const { return y_; }

  bool is_zero() const { return x_ == 0 && y_ == 0; }

  bool operator==(const QuadInt& o) const { return field_ == o.field_ && x_ == o.x_ && y_ == o.y_; }

 private:
  FieldSpec field_;
  Int x_;
  Int y_;
};

namespace detail {
inline void require_same_field(const QuadInt& a, const QuadInt& b, const char* op) {
  if (a.field() != b.field())
    throw FieldMismatch(std::string(op) + ": operands lie in " + a.field().name() + " and " + b.field().name());
}
}  // namespace detail

inline QuadInt operator+(const QuadInt& a, const QuadInt& b) {
  detail::require_same_field(a, b, "add");
  return QuadInt(a.field(), a.x() + b.x(), a.y() + b.y());
}

inline QuadInt operator-(const QuadInt& a, const QuadInt& b) {
  detail::require_same_field(a, b, "subtract");
  return QuadInt(a.field(), a.x() - b.x(), a.y() - b.y());
}

inline QuadInt operator-(const QuadInt& a) { return QuadInt(a.field(), -a.x(), -a.y()); }

inline QuadInt operator+(const QuadInt& a, long c) { return QuadInt(a.field(), a.x() + c, a.y()); }
inline QuadInt operator-(const QuadInt& a, long c) { return QuadInt(a.field(), a.x() - c, a.y()); }

// omega^2 = trace*omega - norm.
inline QuadInt multiply(const QuadInt& a, const QuadInt& b) {
  detail::require_same_field(a, b, "multiply");
  const FieldSpec& f = a.field();
  if (f.is_rational()) return QuadInt(f, a.x() * b.x());
  Int yy = a.y() * b.y();
  Int x = a.x() * b.x() - f.omega_norm() * yy;
  Int y = a.x() * b.y() + a.y() * b.x() + f.omega_trace() * yy;
  return QuadInt(f, std::move(x), std::move(y));
}

inline QuadInt operator*(const QuadInt& a, const QuadInt& b) { return multiply(a, b); }

inline QuadInt operator*(const QuadInt& a, const Int& c) { return QuadInt(a.field(), a.x() * c, a.y() * c); }

inline QuadInt conjugate(const QuadInt& a) {
  const FieldSpec& f = a.field();
  if (f.is_rational()) return a;
  if (f.basis() == BasisKind::sqrt) return QuadInt(f, a.x(), -a.y());
  return QuadInt(f, a.x() + a.y(), -a.y());
}

// Signed in rational mode, non-negative otherwise.
inline Int norm(const QuadInt& a) {
  const FieldSpec& f = a.field();
  if (f.is_rational()) return a.x();
  return a.x() * a.x() + f.omega_trace() * a.x() * a.y() + f.omega_norm() * a.y() * a.y();
}

inline Int abs_norm(const QuadInt& a) {
  Int n = norm(a);
  return n < 0 ? Int(-n) : n;
}

inline QuadInt exact_divide(const QuadInt& a, const QuadInt& b) {
  detail::require_same_field(a, b, "exact_divide");
  if (b.is_zero()) throw std::domain_error("exact_divide: division by zero");
  const FieldSpec& f = a.field();
  if (f.is_rational()) {
    if (!mpz_divisible_p(a.x().get_mpz_t(), b.x().get_mpz_t()))
      throw NotDivisible("exact_divide: " + to_string(b.x()) + " does not divide " + to_string(a.x()));
    Int q = a.x() / b.x();
    return QuadInt(f, q);
  }
  QuadInt num = multiply(a, conjugate(b));
  Int n = norm(b);
  if (!mpz_divisible_p(num.x().get_mpz_t(), n.get_mpz_t()) || !mpz_divisible_p(num.y().get_mpz_t(), n.get_mpz_t()))
    throw NotDivisible("exact_divide: divisor does not divide dividend in O_K");
  Int qx = num.x() / n;
  Int qy = num.y() / n;
  return QuadInt(f, std::move(qx), std::move(qy));
}

inline QuadInt power(QuadInt base, unsigned long n) {
  QuadInt r = QuadInt::one(base.field());
  while (n) {
    if (n & 1) r = multiply(r, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return r;
}

enum class BaseClass { zero, root_of_unity, small, eligible };

inline const char* to_string(BaseClass c) {
  switch (c) {
    case BaseClass::zero: return "zero";
    case BaseClass::root_of_unity: return "root-of-unity";
    case BaseClass::small: return "small";
    case BaseClass::eligible: return "eligible";
  }
  return "?";
}

// Both complex embeddings have |sigma(a)|^2 = Nm(a), so |sigma(a)| >= 2 for all
// sigma iff |Nm(a)| >= 2^[K:Q]. In rational mode that reads |a| >= 2.
inline BaseClass classify_base(const QuadInt& a) {
  if (a.is_zero()) return BaseClass::zero;
  Int n = abs_norm(a);
  if (n == 1) return BaseClass::root_of_unity;
  if (n < (a.field().is_rational() ? 2 : 4)) return BaseClass::small;
  return BaseClass::eligible;
}

// "x,y" in the fixed basis; a bare "x" means y = 0.
inline QuadInt parse_element(const FieldSpec& f, const std::string& text) {
  auto comma = text.find(',');
  std::string xs = text.substr(0, comma);
  std::string ys = comma == std::string::npos ? "0" : text.substr(comma + 1);
  Int x, y;
  if (xs.empty() || x.set_str(xs, 10) != 0 || ys.empty() || y.set_str(ys, 10) != 0)
    throw std::invalid_argument("cannot parse element '" + text + "' (expected x,y)");
  return QuadInt(f, std::move(x), std::move(y));
}

inline std::string format_element(const QuadInt& a) {
  if (a.field().is_rational()) return to_string(a.x());
  return to_string(a.x()) + "," + to_string(a.y());
}

/// Human-readable form as (re + im*sqrt(-d)) / 2 with the common factor removed,
/// e.g. "1+i", "(-1+sqrt(-3))/2", "-sqrt(-2)".
inline std::string display_element(const QuadInt& a) {
  const FieldSpec& f = a.field();
  Int re2 = 2 * a.x(), im2 = 2 * a.y();
  if (!f.is_rational() && f.basis() == BasisKind::half) {
    re2 = 2 * a.x() + a.y();
    im2 = a.y();
  }
  bool halves = (re2 % 2 != 0) || (im2 % 2 != 0);
  Int re = halves ? re2 : Int(re2 / 2);
  Int im = halves ? im2 : Int(im2 / 2);
  std::string unit = f.is_rational() ? "" : (f.d() == 1 ? "i" : "sqrt(-" + std::to_string(f.d()) + ")");
  std::ostringstream s;
  if (im == 0) {
    s << to_string(re);
  } else {
    if (re != 0) s << to_string(re);
    if (im < 0) s << "-";
    else if (re != 0) s << "+";
    Int mag = im < 0 ? Int(-im) : im;
    if (mag != 1) s << to_string(mag) << "*";
    s << unit;
  }
  if (halves) return "(" + s.str() + ")/2";
  return s.str();
}

inline std::ostream& operator<<(std::ostream& os, const QuadInt& a) { return os << display_element(a); }

}  // namespace wieferich
