#pragma once

// Sparse forms F(k) = c_1 g^k_1 + ... + c_m g^k_m over exponent boxes
// {0..K}^m: square counting, representable-n counting, sparse-digit squares
// and the (g^h_1 + ... + g^h_s)^2 lower-bound family.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "sparsity/arith.hpp"
#include "sparsity/exec.hpp"

namespace sparsity {

struct SparseForm {
  std::uint64_t g = 2;
  std::vector<std::int64_t> coeffs;

  SparseForm() = default;
  SparseForm(std::uint64_t base, std::vector<std::int64_t> c);

  std::size_t arity() const { return coeffs.size(); }
  /// sum |c_i|
  std::uint64_t weight() const;
};

using ExponentTuple = std::vector<unsigned>;

struct SquareHit {
  ExponentTuple k;
  BigInt value;
  BigInt root;

  bool operator==(const SquareHit&) const = default;
};

enum class SquareCountMode { brute_force, meet_in_middle };

struct SquareCount {
  std::uint64_t count = 0;     // M, including tuples with F(k) == 0
  std::uint64_t zero_hits = 0; // tuples with F(k) == 0 (flagged)
  std::vector<SquareHit> hits; // lexicographic in k
};

struct Representables {
  std::vector<std::uint64_t> ns;  // ascending
  /// one representing tuple per n (the lexicographically first)
  std::vector<ExponentTuple> witnesses;

  std::size_t count() const { return ns.size(); }
};

struct LowerBoundEntry {
  BigInt square;
  std::vector<unsigned> h;  // h_1 <= ... <= h_s
};

struct LowerBoundFamily {
  unsigned h_max = 0;
  std::vector<LowerBoundEntry> entries;  // ascending by square, then h
  /// expanded coefficient pattern of (sum g^h_i)^2 before carrying
  /// (coefficients ordered by exponent) -> how many tuples produce it
  std::map<std::vector<unsigned>, std::uint64_t> pattern_multiplicity;
};

/// Exact sum c_i g^k_i.
BigInt eval_form(const SparseForm& form, const ExponentTuple& k);

/// Table g^0..g^K.
std::vector<BigInt> power_table(std::uint64_t g, unsigned K);

/// M = #{k in {0..K}^m : F(k) is a perfect square} with witnesses.
SquareCount count_square_tuples(const SparseForm& form, unsigned K, const Budget& budget = {},
                                SquareCountMode mode = SquareCountMode::brute_force,
                                Exec exec = Exec::parallel);

/// #{1 <= n <= N : n^2 = F(k) for some k in {0..K}^m}.
Representables count_representable_n(const SparseForm& form, std::uint64_t N, unsigned K,
                                     const Budget& budget = {}, Exec exec = Exec::parallel);

/// Number of squares 1 <= n^2 < g^K whose base-g expansion has at most m
/// non-zero digits. Computed by scanning n and by enumerating digit
/// patterns; the two counts must agree.
std::uint64_t count_sparse_squares(std::uint64_t g, unsigned m, unsigned K,
                                   const Budget& budget = {});
std::uint64_t count_sparse_squares_scan(std::uint64_t g, unsigned m, unsigned K,
                                        const Budget& budget = {});
std::uint64_t count_sparse_squares_patterns(std::uint64_t g, unsigned m, unsigned K,
                                            const Budget& budget = {});

/// All (g^h_1 + ... + g^h_s)^2 with h_1 <= ... <= h_s and
/// s^2 g^(2 h_i) <= N.
LowerBoundFamily lower_bound_family(std::uint64_t g, unsigned s, const BigInt& N);

/// gamma_3 = 677/1969, gamma_m = 677m/(1323m + 1354) for m >= 4.
mpq_class gamma_m(std::uint64_t m);

/// Number of k in {0..K}^m with F(k) = 0 (mod ell), by residue cycling.
/// ell need not be prime, but must be >= 2.
std::uint64_t count_zero_residues(const SparseForm& form, unsigned K, std::uint64_t ell);

}  // namespace sparsity
