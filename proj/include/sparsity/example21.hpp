#pragma once

// The counterexample to extending the search to several bases:
// b_2 = 2, b_{j+1} = 2^b_j + b_j + 1, alpha_example = sum_{j>=2} (j-1) / 2^b_j
// and lambda = 2 e(alpha_example). For n in {2, 3} the deviation
// |n - (i/pi)(2^(2^b_n) - lambda^(2^b_n))| is bracketed rigorously and
// compared with n / b_{n+1}.

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "sparsity/interval.hpp"

namespace sparsity {

/// b_2, ..., b_{count+1}. Throws DomainError for count > 4 (b_6 has more
/// than 2^136 bits).
std::vector<mpz_class> example21_b_sequence(unsigned count);

/// alpha_example with truncation error below 2^-(4 prec).
Interval example21_alpha(mpfr_prec_t prec);

/// t_n = sum_{j>n} (j-1) / 2^(b_j - b_n), truncated with a rigorous tail.
Interval example21_t(unsigned n, mpfr_prec_t prec);

struct Example21Report {
  unsigned n = 0;
  long precision_bits = 0;
  std::vector<mpz_class> b_seq;  // b_2 .. b_{n+1}
  Interval t_n{64};
  /// via (2^(1+2^b_n) sin(pi t)/pi) e^(pi i t)
  Interval deviation{64};
  /// via (2^(2^b_n)/pi)(sin 2 pi t + i (1 - cos 2 pi t)), t = frac(2^b_n alpha)
  Interval deviation_direct{64};
  double budget = 0;  // n / b_{n+1}
  bool pass = false;  // deviation <= budget, rigorously
  bool routes_agree = false;
  /// 0 < t_n - n/2^(b_{n+1}-b_n) < 2^-(2^b_{n+1}), decided on exact exponents
  bool sandwich_symbolic = false;
  /// the same inequalities on the interval value of t_n; absent when
  /// 2^-(2^b_{n+1}) is below every representable precision
  std::optional<bool> sandwich_numeric;
};

/// Requires n in {2, 3} and precision_bits >= 512. Throws
/// PrecisionInsufficient when the deviation interval is wider than 1% of
/// the budget.
Example21Report example21_verify(unsigned n, long precision_bits);

struct Example21Stability {
  Example21Report low, high;  // at precision_bits and 2 precision_bits
  double shift = 0;           // |mid(high) - mid(low)|, rounded up
  bool within = false;        // mid(high) lies in the low-precision interval
};

Example21Stability example21_stability(unsigned n, long precision_bits);

}  // namespace sparsity
