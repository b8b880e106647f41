#pragma once

// Exact integer primitives: primality, factorization, multiplicative
// orders, 2-adic valuation, Jacobi symbols and square testing.
//
// Word-size routines work on uint64_t with __int128 products. BigInt is
// GMP's mpz_class.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace sparsity {

using BigInt = mpz_class;

struct Factorization {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, unsigned>> factors;  // sorted by prime

  std::uint64_t largest_prime() const { return factors.empty() ? 1 : factors.back().first; }
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

/// Modular inverse of a mod m (m >= 1). Returns 0 when m == 1.
/// Throws NotCoprime when gcd(a, m) > 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

/// Deterministic for every 64-bit input (Miller-Rabin with the first twelve
/// prime bases).
bool is_prime(std::uint64_t n);

/// Inputs below 2^64 use the deterministic test. Larger inputs use a
/// probabilistic test with error probability below 2^-128.
bool is_prime(const BigInt& n);

/// Full factorization by trial division and Pollard-Brent rho.
/// Throws WorkloadExceeded when n exceeds `bound` (default: anything that
/// fits in 64 bits) and DomainError for n < 2.
Factorization factorize(std::uint64_t n);
Factorization factorize(const BigInt& n, const BigInt& bound = BigInt(1) << 64);

/// P(n): the largest prime dividing n (n >= 2).
std::uint64_t largest_prime_factor(std::uint64_t n);

/// nu_2(s) for s >= 1.
unsigned two_adic_valuation(std::uint64_t s);

/// Least tau >= 1 with g^tau = 1 (mod q). Works for any modulus q >= 2
/// coprime to g; the search descends through divisors of the group order
/// phi(q) instead of iterating powers. Throws NotCoprime when gcd(g,q) > 1.
std::uint64_t mul_order(std::uint64_t g, std::uint64_t q);

/// Jacobi symbol (a/q), q odd and positive. Throws EvenModulus otherwise.
int jacobi(std::int64_t a, std::uint64_t q);
int jacobi_u64(std::uint64_t a, std::uint64_t q);
int jacobi(const BigInt& a, std::uint64_t q);

/// Exact square test. Negative inputs are never squares; 0 = 0^2.
bool is_perfect_square(const BigInt& n, BigInt* root = nullptr);

/// Primes in [lo, hi] (segmented sieve of Eratosthenes).
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

/// Smallest primitive root modulo an odd prime p.
std::uint64_t primitive_root(std::uint64_t p);

}  // namespace sparsity
