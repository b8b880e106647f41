#pragma once

// Bounded-exponent search for |Q(n) - (c_1 lambda^k_1 + ... + c_m lambda^k_m)| <= B
// over exact Gaussian rationals, with the instance constants N0, Delta, b0.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sparsity/exec.hpp"

namespace sparsity {

/// re + i im with rational parts.
struct GaussRat {
  mpq_class re, im;

  GaussRat() = default;
  GaussRat(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  mpq_class norm() const { return re * re + im * im; }  // |z|^2
  double abs() const;
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b);
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b);
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b);
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator<(const GaussRat& a, const GaussRat& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  }
};

/// Parses "3", "-1/2", "2.5", "1+2i", "-i", "0.5-3/4i". Decimals are exact.
/// Throws ConfigError on malformed input.
GaussRat parse_gauss(std::string_view text);
mpq_class parse_rational(std::string_view text);
std::string to_string(const GaussRat& z);

struct ApproxInstance {
  std::vector<GaussRat> q_coeffs;  // a_0 .. a_d
  GaussRat lambda;
  std::vector<GaussRat> c;
  mpq_class B = 0;

  std::size_t degree() const { return q_coeffs.empty() ? 0 : q_coeffs.size() - 1; }
  GaussRat eval_q(std::uint64_t n) const;
  /// Throws DegenerateInstance for |lambda| <= 1 or constant Q, and
  /// DomainError for a zero leading coefficient, zero c_i or B < 0.
  void validate() const;
};

struct InstanceConstants {
  std::uint64_t n0 = 1;
  unsigned delta = 1;
  double b0 = 0;
};

/// N0: least integer >= 1 with N0 >= sum_{i<d} |a_i|/|a_d|,
/// N0 >= sum_i i |a_i| / |a_d| and |a_d| 2^(d-2) N0^d > 2B.
/// Delta: least integer >= 1 with |c_m| |lambda|^Delta >= 2 sum_{i<m} |c_i| + |c_m|.
/// b0 = max(log A, d) / log |lambda| with A = (4 |a_d| + 2B) / min_i |c_i|.
InstanceConstants instance_constants(const ApproxInstance& inst);

/// Checks |Q(n)| <= 2 |a_d| n^d and |Q(n1 + n2) - Q(n1)| > 2B for
/// n, n1, n2 in [N0, N0 + span] exactly. Returns the number of failures.
std::uint64_t verify_n0_on_grid(const ApproxInstance& inst, std::uint64_t n0, std::uint64_t span);

struct Representation {
  std::uint64_t n = 0;
  /// exponent of c_i (original coefficient order)
  std::vector<std::uint64_t> k;
  double residual = 0;  // |Q(n) - sum c_i lambda^k_i|
};

struct SearchResult {
  std::vector<Representation> found;  // ascending n, one witness each
  InstanceConstants constants;
  std::uint64_t exponent_cap = 0;     // cap used at the top level
  std::uint64_t tuples_examined = 0;
  double log_ratio = 0;  // count / (log N)^m
};

/// Every n in [1, N] for which some exponents k_i >= k_lo satisfy the
/// inequality. Each n carries the lexicographically smallest witness among
/// those produced by the search.
SearchResult search_representations(const ApproxInstance& inst, std::uint64_t N,
                                    std::uint64_t k_lo = 0, const Budget& budget = {});

}  // namespace sparsity
