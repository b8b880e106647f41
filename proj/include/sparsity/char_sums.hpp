#pragma once

// Character and exponential sums over prime fields and over Z/(ell r):
// complete diagonal-form sums, Jacobi sums along powers of theta, the CRT
// product formula, incomplete sums, Korobov sums and the square-sieve
// statistics.
//
// Every twisted sum is accumulated as an exact integer histogram indexed by
// the phase numerator; the complex value is formed once at the end. This
// makes serial and parallel results bit-identical and keeps untwisted sums
// exact.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "sparsity/exec.hpp"
#include "sparsity/sieve_set.hpp"
#include "sparsity/sparse_forms.hpp"

namespace sparsity {

using Complex = std::complex<double>;

/// Slack applied to bounds whose implied constant is not specified.
inline constexpr double kDefaultSlack = 4.0;
/// Tolerance for comparing complex sums.
inline constexpr double kComplexTol = 1e-9;

/// sum_p hist[p] e(p / denom), summed pairwise.
Complex phase_sum(const std::vector<std::int64_t>& hist);

struct QuadDiagSum {
  std::int64_t value = 0;
  double bound = 0;  // d^(m-1) (q-1) q^((m-1)/2)
  bool within_bound = false;  // decided in exact integer arithmetic
};

/// S = sum over x in F_q^m of eta(a_1 x_1^d + ... + a_m x_m^d), eta the
/// quadratic character with eta(0) = 0. Requires q an odd prime, d even,
/// gcd(d, q) = 1 and every a_i a unit mod q.
QuadDiagSum quad_diag_sum(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                          const Budget& budget = {}, Exec exec = Exec::parallel);

struct TwistedSum {
  Complex value;
  double reference = 0;  // d^m q^((m+1)/2)
  double ratio = 0;      // |value| / reference
  std::uint64_t root = 0;
};

/// sum eta(sum a_i x_i^d) prod chi_i(x_i) with chi_i(x) = e(c_i ind(x)/(q-1))
/// relative to `root` (0 selects the smallest primitive root). A
/// non-principal chi_i vanishes at 0; a principal one is 1 there.
TwistedSum twisted_diag_sum(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                            const std::vector<std::int64_t>& chi_exponents,
                            std::uint64_t root = 0, const Budget& budget = {},
                            Exec exec = Exec::parallel);

struct CompleteSum {
  Complex value;
  std::optional<std::int64_t> exact;  // present when every twist is trivial
  std::uint64_t modulus = 0;
  std::uint64_t period = 0;  // t = order of theta
};

/// S_ell = sum_{x in [1,t]^m} ((a_1 theta^x_1 + ... + a_m theta^x_m)/ell)
///         e((b_1 x_1 + ... + b_m x_m)/t),  t = tau_ell(theta).
/// Also serves the composite modulus ell r (Jacobi symbol).
CompleteSum complete_sum(std::uint64_t modulus, std::uint64_t theta,
                         const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                         const Budget& budget = {}, Exec exec = Exec::parallel);

struct SEll {
  CompleteSum sum;
  double generic_ratio = 0;  // |S| / ell^((m+1)/2)
  bool generic_pass = false; // generic_ratio <= slack
  /// b = 0 and t odd only:
  std::optional<double> explicit_bound;  // t sum_j C(m,j) d^(j-m) ell^((j-1)/2)
  std::optional<double> zero_twist_ratio;  // |S| / (t ell^((m-1)/2))
  bool explicit_pass = true;
};

/// S_ell with its bounds. Throws HypothesisViolated naming the failed
/// condition (ell odd prime, gcd(ell, a_1...a_m theta) = 1).
SEll s_ell(std::uint64_t ell, std::uint64_t theta, const std::vector<std::int64_t>& a,
           const std::vector<std::int64_t>& b, double slack = kDefaultSlack,
           const Budget& budget = {}, Exec exec = Exec::parallel);

/// S_ell recomputed through its diagonal-form representation: theta = rho^d
/// for a primitive root rho (derived from `root`), and
/// S_ell = d^-m sum_{w in (F_ell^*)^m} eta(sum a_i w_i^d) prod chi_i(w_i).
Complex s_ell_via_diagonal(std::uint64_t ell, std::uint64_t theta,
                           const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                           std::uint64_t root);

struct CrtSplit {
  std::vector<std::int64_t> b_ell;  // 0 <= b_{i,ell} < t_ell
  std::vector<std::int64_t> b_r;    // 0 <= b_{i,r} < t_r
};

/// Unique residues with b_{i,ell} t_r + b_{i,r} t_ell = b_i (mod t_ell t_r).
/// Throws NotCoprimeOrders when gcd(t_ell, t_r) > 1.
CrtSplit crt_split(std::uint64_t t_ell, std::uint64_t t_r, const std::vector<std::int64_t>& b);

struct ProductSum {
  CompleteSum S, S_ell, S_r;
  std::uint64_t t_ell = 0, t_r = 0, t = 0;
  CrtSplit split;
  bool agree = false;  // exact when untwisted, else |S - S_ell S_r| <= tol
  double discrepancy = 0;
};

/// Direct S modulo ell r over [1,t]^m against S_ell S_r with CRT-split twists.
ProductSum product_sum(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                       const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                       const Budget& budget = {}, Exec exec = Exec::parallel);

struct IncompleteSum {
  std::int64_t value = 0;
  double bound = 0;  // the incomplete-sum bound with constant 1
  double ratio = 0;
  bool pass = false;  // ratio <= slack
  std::uint64_t t = 0;
};

/// sum_{k_i = 1..L_i} ((a_1 theta^k_1 + ... + a_m theta^k_m)/(ell r)) by
/// residue cycling with period t = tau_{ell r}(theta). Requires odd,
/// coprime orders mod ell and mod r.
IncompleteSum incomplete_sum(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                             const std::vector<std::int64_t>& a,
                             const std::vector<std::uint64_t>& lengths,
                             double slack = kDefaultSlack, const Budget& budget = {});

enum class KorobovDenominator { ell, tau };

struct KorobovSum {
  Complex value;
  double magnitude = 0;
  double bound = 0;  // sqrt(ell)
  bool pass = false;
  std::uint64_t t = 0;
};

/// sum_{k=1..t} e(a theta^k / ell), t = tau_ell(theta). The `tau`
/// denominator variant sums e(a theta^k / t) instead; its comparison with
/// sqrt(ell) is informational.
KorobovSum korobov_sum(std::int64_t a, std::uint64_t theta, std::uint64_t ell,
                       KorobovDenominator denom = KorobovDenominator::ell);

struct TmCount {
  std::uint64_t count = 0;
  std::uint64_t tau = 0;
  /// (K+1)^(m-1) ((K+1)/tau + 1); present when some c_i is a unit mod ell
  std::optional<double> trivial_bound;
  bool trivial_pass = true;
  /// ((K+1)/t + 1)^m (t^m/ell + ell^((m-2)/2) t); every c_i a unit, m >= 2
  std::optional<double> explicit_bound;
  bool explicit_pass = true;
  /// K^m z^-1 + K^m z^(m/2 - alpha(m-1) - 1); m >= 3, K >= z, tau >= z^alpha
  std::optional<double> asymptotic_bound;
  double asymptotic_ratio = 0;
  bool asymptotic_pass = true;
};

struct SieveContext {
  double z = 0;
  double alpha = SieveSet::kDefaultAlpha;
};

/// Number of k in {0..K}^m with F(k) = 0 (mod ell), with every applicable bound.
TmCount t_m_count(const SparseForm& form, unsigned K, std::uint64_t ell,
                  std::optional<SieveContext> ctx = std::nullopt, double slack = kDefaultSlack);

struct SieveStatistics {
  std::uint64_t M = 0;
  std::uint64_t zero_hits = 0;
  std::int64_t W = 0, U = 0, V = 0;
  bool split_exact = false;  // W == U + V
  std::uint64_t identity_checked = 0;
  std::uint64_t identity_failures = 0;
  double term_alpha = 0;  // K^m z^-alpha
  double term_m1 = 0;     // K^(m-1)
  double term_w = 0;      // z^-2 W
  double term_v = 0;      // z^-2 V
};

/// Exact M, W, U, V for the box {0..K}^m against L; checks the square-sieve
/// identity sum_ell (F/ell) = #L - omega_z(F) on every square tuple.
SieveStatistics sieve_statistics(const SparseForm& form, unsigned K, const SieveSet& set,
                                 const Budget& budget = {}, Exec exec = Exec::parallel);

/// Table of Jacobi symbols (x / modulus) for x in [0, modulus).
std::vector<std::int8_t> jacobi_table(std::uint64_t modulus);

}  // namespace sparsity
