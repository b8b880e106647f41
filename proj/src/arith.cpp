#include "sparsity/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sparsity/error.hpp"

namespace sparsity {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::WorkloadExceeded: return "WorkloadExceeded";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::EvenModulus: return "EvenModulus";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::OddD: return "OddD";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotCoprimeOrders: return "NotCoprimeOrders";
    case ErrorKind::DegenerateInstance: return "DegenerateInstance";
    case ErrorKind::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / gcd_u64(a, b) * b; }

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  if (old_r != 1) {
    throw Error(ErrorKind::NotCoprime,
                "no inverse of " + std::to_string(a) + " modulo " + std::to_string(m));
  }
  __int128 x = old_s % static_cast<__int128>(m);
  if (x < 0) x += m;
  return static_cast<std::uint64_t>(x);
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t d, unsigned r, std::uint64_t a) {
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (auto a : kBases) {
    if (!miller_rabin_witness(n, d, r, a)) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (sgn(n) <= 0) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
  // 64 rounds: error below 4^-64 = 2^-128.
  return mpz_probab_prime_p(n.get_mpz_t(), 64) != 0;
}

namespace {

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  std::uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n < 2) throw Error(ErrorKind::DomainError, "factorize needs n >= 2");
  std::map<std::uint64_t, unsigned> acc;
  std::uint64_t m = n;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    while (m % p == 0) {
      ++acc[p];
      m /= p;
    }
  }
  // wheel mod 30 trial division up to a small limit, rho for the rest
  static constexpr std::uint64_t kWheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t p = 7;
  for (unsigned i = 0; p <= 1000 && p * p <= m; p += kWheel[i++ % 8]) {
    while (m % p == 0) {
      ++acc[p];
      m /= p;
    }
  }
  if (m > 1) factor_into(m, acc);

  Factorization f;
  f.n = n;
  f.factors.assign(acc.begin(), acc.end());
  return f;
}

Factorization factorize(const BigInt& n, const BigInt& bound) {
  if (n < 2) throw Error(ErrorKind::DomainError, "factorize needs n >= 2");
  if (n >= bound || !mpz_fits_ulong_p(n.get_mpz_t())) {
    throw Error(ErrorKind::WorkloadExceeded,
                "factorize input " + n.get_str() + " exceeds bound " + bound.get_str());
  }
  return factorize(static_cast<std::uint64_t>(n.get_ui()));
}

std::uint64_t largest_prime_factor(std::uint64_t n) { return factorize(n).largest_prime(); }

unsigned two_adic_valuation(std::uint64_t s) {
  if (s == 0) throw Error(ErrorKind::DomainError, "two_adic_valuation needs s >= 1");
  return static_cast<unsigned>(__builtin_ctzll(s));
}

std::uint64_t mul_order(std::uint64_t g, std::uint64_t q) {
  if (q < 2) throw Error(ErrorKind::DomainError, "mul_order needs modulus >= 2");
  if (gcd_u64(g % q, q) != 1) {
    throw Error(ErrorKind::NotCoprime,
                "gcd(" + std::to_string(g) + ", " + std::to_string(q) + ") > 1");
  }
  // phi(q) and its factorization
  std::map<std::uint64_t, unsigned> phi_factors;
  std::uint64_t phi = 1;
  for (auto [p, e] : factorize(q).factors) {
    std::uint64_t pk = 1;
    for (unsigned i = 1; i < e; ++i) pk *= p;
    phi *= pk * (p - 1);
    if (e > 1) phi_factors[p] += e - 1;
    if (p > 2) {
      for (auto [r, f] : factorize(p - 1).factors) phi_factors[r] += f;
    }
  }
  std::uint64_t tau = phi;
  for (auto [p, e] : phi_factors) {
    for (unsigned i = 0; i < e && tau % p == 0; ++i) {
      if (powmod(g, tau / p, q) != 1) break;
      tau /= p;
    }
  }
  return tau;
}

int jacobi_u64(std::uint64_t a, std::uint64_t n) {
  if (n == 0 || (n & 1) == 0) {
    throw Error(ErrorKind::EvenModulus, "Jacobi symbol needs an odd positive modulus, got " +
                                            std::to_string(n));
  }
  a %= n;
  int sign = 1;
  while (a != 0) {
    unsigned tz = static_cast<unsigned>(__builtin_ctzll(a));
    a >>= tz;
    // (2/n) = -1 iff n = 3, 5 (mod 8)
    if ((tz & 1) && ((n & 7) == 3 || (n & 7) == 5)) sign = -sign;
    // reciprocity: flip when both are 3 mod 4
    if ((a & 3) == 3 && (n & 3) == 3) sign = -sign;
    std::swap(a, n);
    a %= n;
  }
  return n == 1 ? sign : 0;
}

int jacobi(std::int64_t a, std::uint64_t q) {
  if (q == 0 || (q & 1) == 0) return jacobi_u64(0, q);  // throws
  std::int64_t r = static_cast<std::int64_t>(static_cast<__int128>(a) % static_cast<__int128>(q));
  if (r < 0) r += static_cast<std::int64_t>(q);
  return jacobi_u64(static_cast<std::uint64_t>(r), q);
}

int jacobi(const BigInt& a, std::uint64_t q) {
  if (q == 0 || (q & 1) == 0) return jacobi_u64(0, q);
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), q);
  return jacobi_u64(r.get_ui(), q);
}

bool is_perfect_square(const BigInt& n, BigInt* root) {
  if (sgn(n) < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;

  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }
  std::vector<bool> seg(hi - lo + 1, true);
  for (auto p : base) {
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = false;
  }
  for (std::uint64_t i = 0; i < seg.size(); ++i) {
    if (seg[i]) out.push_back(lo + i);
  }
  return out;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  auto f = factorize(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto [q, e] : f.factors) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(ErrorKind::DomainError, "no primitive root modulo " + std::to_string(p));
}

}  // namespace sparsity
