#include "sparsity/interval.hpp"

#include <algorithm>
#include <vector>

#include "sparsity/error.hpp"

namespace sparsity {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this == &other) return *this;
  prec_ = other.prec_;
  mpfr_set_prec(lo_, prec_);
  mpfr_set_prec(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact(const mpq_class& q, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::exact(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::between(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
  if (lo > hi) throw Error(ErrorKind::DomainError, "interval endpoints out of order");
  Interval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const { return midpoint().lo_double(); }

Interval Interval::width_interval() const {
  Interval w(prec_);
  mpfr_sub(w.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(w.hi_, hi_, lo_, MPFR_RNDU);
  return w;
}

double Interval::width() const { return width_interval().hi_double(); }

Interval Interval::midpoint() const {
  Interval m(prec_);
  mpfr_add(m.lo_, lo_, hi_, MPFR_RNDD);
  mpfr_add(m.hi_, lo_, hi_, MPFR_RNDU);
  mpfr_div_2ui(m.lo_, m.lo_, 1, MPFR_RNDD);
  mpfr_div_2ui(m.hi_, m.hi_, 1, MPFR_RNDU);
  return m;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_less(const Interval& o) const { return mpfr_less_p(hi_, o.lo_) != 0; }
bool Interval::certainly_le(double v) const { return mpfr_cmp_d(hi_, v) <= 0; }

bool Interval::contains(const Interval& o) const {
  return mpfr_lessequal_p(lo_, o.lo_) && mpfr_lessequal_p(o.hi_, hi_);
}

bool Interval::overlaps(const Interval& o) const {
  return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_);
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::endpoint_hull(const Interval& a, const Interval& b, BinaryOp op) {
  const auto prec = std::max(a.prec_, b.prec_);
  Interval r(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  bool first = true;
  for (mpfr_srcptr x : {a.lo_, a.hi_}) {
    for (mpfr_srcptr y : {b.lo_, b.hi_}) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  return Interval::endpoint_hull(a, b, mpfr_mul);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) {
    throw Error(ErrorKind::DomainError, "interval division by an interval containing 0");
  }
  return Interval::endpoint_hull(a, b, mpfr_div);
}

Interval Interval::mul_2exp(long e) const {
  Interval r(prec_);
  mpfr_mul_2si(r.lo_, lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, hi_, e, MPFR_RNDU);
  return r;
}

Interval Interval::sqr() const {
  Interval r(prec_);
  if (mpfr_sgn(lo_) >= 0) {
    mpfr_sqr(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
  } else if (mpfr_sgn(hi_) <= 0) {
    mpfr_sqr(r.lo_, hi_, MPFR_RNDD);
    mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
    mpfr_sqr(t, hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw Error(ErrorKind::DomainError, "sqrt of an interval with negative points");
  Interval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sin() const {
  // increasing on [-pi/2, pi/2]
  const auto half_pi = pi(prec_).mul_2exp(-1);
  Interval r(prec_);
  if (mpfr_greaterequal_p(lo_, (-half_pi).lo()) && mpfr_lessequal_p(hi_, half_pi.lo())) {
    mpfr_sin(r.lo_, lo_, MPFR_RNDD);
    mpfr_sin(r.hi_, hi_, MPFR_RNDU);
  } else {
    mpfr_set_si(r.lo_, -1, MPFR_RNDD);
    mpfr_set_si(r.hi_, 1, MPFR_RNDU);
  }
  return r;
}

Interval Interval::cos() const {
  // decreasing on [0, pi]
  const auto p = pi(prec_);
  Interval r(prec_);
  if (mpfr_sgn(lo_) >= 0 && mpfr_lessequal_p(hi_, p.lo())) {
    mpfr_cos(r.lo_, hi_, MPFR_RNDD);
    mpfr_cos(r.hi_, lo_, MPFR_RNDU);
  } else if (mpfr_sgn(hi_) <= 0 && mpfr_greaterequal_p(lo_, (-p).hi())) {
    mpfr_cos(r.lo_, lo_, MPFR_RNDD);
    mpfr_cos(r.hi_, hi_, MPFR_RNDU);
  } else {
    mpfr_set_si(r.lo_, -1, MPFR_RNDD);
    mpfr_set_si(r.hi_, 1, MPFR_RNDU);
  }
  return r;
}

Interval Interval::frac() const {
  mpfr_t fl, fh;
  mpfr_init2(fl, prec_);
  mpfr_init2(fh, prec_);
  mpfr_floor(fl, lo_);
  mpfr_floor(fh, hi_);
  const bool same = mpfr_equal_p(fl, fh) != 0;
  Interval r(prec_);
  if (same) {
    mpfr_sub(r.lo_, lo_, fl, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, fl, MPFR_RNDU);
  }
  mpfr_clear(fl);
  mpfr_clear(fh);
  if (!same) throw Error(ErrorKind::PrecisionInsufficient, "interval straddles an integer");
  return r;
}

std::string Interval::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  std::string out = "[";
  mpfr_snprintf(buf.data(), buf.size(), "%.*RDe", digits, lo_);
  out += buf.data();
  out += ", ";
  mpfr_snprintf(buf.data(), buf.size(), "%.*RUe", digits, hi_);
  out += buf.data();
  out += "]";
  return out;
}

Interval ComplexInterval::abs() const { return (re.sqr() + im.sqr()).sqrt(); }

}  // namespace sparsity
