#include "sparsity/example21.hpp"

#include "sparsity/error.hpp"

namespace sparsity {

namespace {

/// sum_{j >= first} (j-1) / 2^(b_j - offset), keeping terms with exponent
/// <= max_exp and bounding the rest by 2^-max_exp. Consecutive terms shrink
/// by at least a factor 2^(2^b_j + 1) / 2 >= 16, so the omitted tail is at
/// most twice its first term.
Interval dyadic_series(unsigned first, const mpz_class& offset, unsigned long max_exp,
                       mpfr_prec_t prec) {
  const auto b = example21_b_sequence(4);  // b_2 .. b_5
  mpq_class sum = 0;
  for (unsigned j = first;; ++j) {
    if (j > 5) throw std::logic_error("series truncation point beyond b_5");
    const mpz_class D = b[j - 2] - offset;
    if (D > max_exp) {
      // first omitted term (j-1)/2^D, tail <= (j-1) 2^(1-D) <= 2^-max_exp
      const auto bits = mpz_sizeinbase(mpz_class(j - 1).get_mpz_t(), 2);
      if (D - 1 - static_cast<long>(bits) < max_exp) {
        throw std::logic_error("tail bound does not reach the requested exponent");
      }
      break;
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, D.get_ui());
    sum += mpq_class(j - 1, den);
  }
  sum.canonicalize();
  mpz_class tail_den;
  mpz_ui_pow_ui(tail_den.get_mpz_t(), 2, max_exp);
  return Interval::between(sum, sum + mpq_class(1, tail_den), prec);
}

ComplexInterval sin_form(unsigned n, const Interval& t, const mpz_class& bn, mpfr_prec_t prec) {
  // (2^(1 + 2^b_n) sin(pi t) / pi) (cos pi t + i sin pi t)
  const auto pi = Interval::pi(prec);
  const auto pt = pi * t;
  mpz_class P;
  mpz_ui_pow_ui(P.get_mpz_t(), 2, bn.get_ui());
  const auto modulus = (pt.sin() / pi).mul_2exp(1 + P.get_si());
  return {Interval::exact(static_cast<long>(n), prec) - modulus * pt.cos(), -(modulus * pt.sin())};
}

ComplexInterval direct_form(unsigned n, const Interval& t, const mpz_class& bn, mpfr_prec_t prec) {
  // (2^P / pi)(sin 2 pi t + i (1 - cos 2 pi t)), P = 2^b_n
  const auto pi = Interval::pi(prec);
  const auto angle = (pi * t).mul_2exp(1);
  mpz_class P;
  mpz_ui_pow_ui(P.get_mpz_t(), 2, bn.get_ui());
  const auto scale = (Interval::exact(1L, prec) / pi).mul_2exp(P.get_si());
  const auto one = Interval::exact(1L, prec);
  return {Interval::exact(static_cast<long>(n), prec) - scale * angle.sin(),
          -(scale * (one - angle.cos()))};
}

}  // namespace

std::vector<mpz_class> example21_b_sequence(unsigned count) {
  if (count > 4) throw Error(ErrorKind::DomainError, "b_6 and later are too large to represent");
  std::vector<mpz_class> b;
  mpz_class cur = 2;
  for (unsigned i = 0; i < count; ++i) {
    b.push_back(cur);
    if (i + 1 < count) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), 2, cur.get_ui());
      cur = p + cur + 1;
    }
  }
  return b;
}

Interval example21_alpha(mpfr_prec_t prec) {
  return dyadic_series(2, 0, 4 * static_cast<unsigned long>(prec), prec);
}

Interval example21_t(unsigned n, mpfr_prec_t prec) {
  if (n < 2 || n > 3) throw Error(ErrorKind::DomainError, "t_n is supported for n in {2, 3}");
  const auto b = example21_b_sequence(4);
  return dyadic_series(n + 1, b[n - 2], 4 * static_cast<unsigned long>(prec), prec);
}

Example21Report example21_verify(unsigned n, long precision_bits) {
  if (n < 2 || n > 3) {
    throw Error(ErrorKind::DomainError,
                "n must be 2 or 3; n = 4 needs about 2^136 bits of working precision");
  }
  if (precision_bits < 512) throw Error(ErrorKind::DomainError, "precision_bits must be >= 512");
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  const auto b = example21_b_sequence(4);
  const mpz_class& bn = b[n - 2];
  const mpz_class& bn1 = b[n - 1];

  Example21Report r;
  r.n = n;
  r.precision_bits = precision_bits;
  r.b_seq.assign(b.begin(), b.begin() + n);
  r.t_n = example21_t(n, prec);
  r.deviation = sin_form(n, r.t_n, bn, prec).abs();

  const auto t_direct = example21_alpha(prec).mul_2exp(bn.get_si()).frac();
  r.deviation_direct = direct_form(n, t_direct, bn, prec).abs();
  r.routes_agree = r.deviation.overlaps(r.deviation_direct);

  r.budget = static_cast<double>(n) / bn1.get_d();
  const auto budget = Interval::exact(mpq_class(n, bn1), prec);
  r.pass = r.deviation.certainly_less(budget) ||
           mpfr_lessequal_p(r.deviation.hi(), budget.lo()) != 0;
  if (r.deviation.width() > 0.01 * r.budget) {
    throw Error(ErrorKind::PrecisionInsufficient,
                "deviation interval width exceeds 1% of the budget at " +
                    std::to_string(precision_bits) + " bits");
  }

  // t_n - n/2^(b_{n+1}-b_n) = sum_{j >= n+2} (j-1)/2^(b_j - b_n), positive;
  // it is at most 2(n+1)/2^(b_{n+2}-b_n), and b_{n+2} - b_n - 2^b_{n+1} =
  // b_{n+1} + 1 - b_n, so the upper inequality is 2(n+1) < 2^(b_{n+1}+1-b_n)
  {
    const mpz_class e = bn1 + 1 - bn;
    r.sandwich_symbolic = mpz_sizeinbase(mpz_class(2 * (n + 1)).get_mpz_t(), 2) <= e;
  }
  mpz_class two_pow_bn1;
  if (bn1 < 64) {
    mpz_ui_pow_ui(two_pow_bn1.get_mpz_t(), 2, bn1.get_ui());
    if (two_pow_bn1 < 4 * prec) {
      const mpz_class shift = bn1 - bn;
      const auto lead = Interval::exact(static_cast<long>(n), prec).mul_2exp(-shift.get_si());
      const auto diff = r.t_n - lead;
      const auto ceiling = Interval::exact(1L, prec).mul_2exp(-two_pow_bn1.get_si());
      r.sandwich_numeric = diff.certainly_positive() && diff.certainly_less(ceiling);
    }
  }
  return r;
}

Example21Stability example21_stability(unsigned n, long precision_bits) {
  Example21Stability s{example21_verify(n, precision_bits), example21_verify(n, 2 * precision_bits)};
  const auto mid_low = s.low.deviation.midpoint();
  const auto mid_high = s.high.deviation.midpoint();
  s.shift = std::max((mid_high - mid_low).hi_double(), (mid_low - mid_high).hi_double());
  s.within = s.low.deviation.contains(mid_high);
  return s;
}

}  // namespace sparsity
