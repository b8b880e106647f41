#pragma once

// Closed real intervals with MPFR endpoints. Every operation rounds the lower
// endpoint down and the upper endpoint up, so the result always contains the
// exact value of the corresponding real operation.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace sparsity {

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval exact(const mpq_class& q, mpfr_prec_t prec);
  static Interval exact(long v, mpfr_prec_t prec);
  /// [lo, hi] from two rationals (lo <= hi).
  static Interval between(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);
  static Interval pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up
  double mid_double() const;
  /// Upper bound on hi - lo.
  double width() const;
  /// Upper bound on hi - lo at working precision.
  Interval width_interval() const;
  Interval midpoint() const;

  bool certainly_positive() const;  // lo > 0
  bool certainly_less(const Interval& other) const;  // hi < other.lo
  bool certainly_le(double v) const;  // hi <= v
  bool contains(const Interval& other) const;
  bool overlaps(const Interval& other) const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws DomainError when b contains 0.
  friend Interval operator/(const Interval& a, const Interval& b);

  /// Exact scaling by 2^e.
  Interval mul_2exp(long e) const;
  Interval sqr() const;
  /// Throws DomainError when the interval has negative points.
  Interval sqrt() const;
  /// Sharp on intervals inside a monotone branch; otherwise [-1, 1].
  Interval sin() const;
  Interval cos() const;
  /// Subtracts floor(x), which must be constant on the interval.
  Interval frac() const;

  std::string to_string(int digits = 20) const;

 private:
  using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  /// min and max of op over the four endpoint combinations.
  static Interval endpoint_hull(const Interval& a, const Interval& b, BinaryOp op);

  mpfr_prec_t prec_;
  mpfr_t lo_, hi_;
};

struct ComplexInterval {
  Interval re, im;

  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  /// |re + i im|
  Interval abs() const;
};

}  // namespace sparsity
