#pragma once

// The sieving prime set L_z and the arithmetic sums over it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparsity/arith.hpp"
#include "sparsity/exec.hpp"

namespace sparsity {

struct SparseForm;

struct SievePrime {
  std::uint64_t ell = 0;
  std::uint64_t tau = 0;        // multiplicative order of g mod ell
  std::uint64_t p_largest = 0;  // P(ell - 1)
  unsigned nu2 = 0;             // nu_2(tau)

  bool operator==(const SievePrime&) const = default;
};

struct SieveSet {
  static constexpr double kDefaultAlpha = 0.677;
  static constexpr double kDefaultC1 = 2.0;

  std::uint64_t g = 2;
  double z = 0;
  double alpha = kDefaultAlpha;
  double c1 = kDefaultC1;
  unsigned u0 = 0;
  std::vector<SievePrime> primes;  // ascending, no duplicates
  /// Sizes of every 2-adic class before the majority decision, indexed by nu2.
  std::vector<std::size_t> class_sizes;

  std::size_t size() const { return primes.size(); }
  std::vector<std::uint64_t> ells() const;
};

/// Scans primes in [z, c1 z] not dividing g and keeps those with
/// P(ell-1) >= z^alpha and P(ell-1) | tau_ell(g); returns the largest class
/// of equal nu_2(tau) (ties go to the smaller valuation).
/// Throws EmptySet when nothing survives.
SieveSet build_sieve_set(std::uint64_t g, double z, double alpha = SieveSet::kDefaultAlpha,
                         double c1 = SieveSet::kDefaultC1, Exec exec = Exec::parallel);

/// A set made of explicitly listed primes (used for hand-picked L such as
/// {23, 31}); tau, P and nu2 are filled in, no membership filter applied.
SieveSet make_sieve_set(std::uint64_t g, const std::vector<std::uint64_t>& ells, double z = 0,
                        double alpha = SieveSet::kDefaultAlpha);

/// Independently re-checks the three membership predicates and the interval.
/// Returns an empty string when valid, otherwise a description of the first
/// violated condition.
std::string check_sieve_set(const SieveSet& set);

/// Number of ell in L dividing n. Throws ZeroInput for n == 0.
unsigned omega_z(const BigInt& n, const SieveSet& set);

struct OmegaSum {
  std::uint64_t sum = 0;
  double bound_ratio = 0;  // sum / ((K^m z^-alpha + K^(m-1)) #L)
};

/// Exact sum of omega_z(F(k)) over the box {0..K}^m, counted per prime by
/// cycling residues of g^k (period tau) instead of evaluating F.
OmegaSum omega_sum(const SparseForm& form, unsigned K, const SieveSet& set);

struct GcdSum {
  double value = 0;
  std::optional<BigInt> exact;  // set when kappa is an integer
  double bound_ratio = 0;       // value / z^(kappa + alpha - alpha kappa + 1)
};

/// D_kappa: sum of gcd(ell-1, r-1)^kappa over ordered pairs with
/// P(ell-1) != P(r-1).
GcdSum gcd_sum(const SieveSet& set, double kappa);

void write_sieve_csv(std::ostream& out, const SieveSet& set);

/// Parses the CSV written by write_sieve_csv (header comment included).
SieveSet read_sieve_csv(std::istream& in);

}  // namespace sparsity
