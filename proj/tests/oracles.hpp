#pragma once

// Brute-force reference implementations used only by the tests. They follow
// the definitions literally (Euler's criterion, iterated powers, direct
// evaluation of F in big integers, term-by-term complex sums) and share no
// code with the library kernels.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = b % m;
  for (; e; e >>= 1) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
  }
  return static_cast<std::uint64_t>(r);
}

/// Legendre symbol by Euler's criterion, p an odd prime.
inline int euler(std::int64_t a, std::uint64_t p) {
  const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                            static_cast<std::int64_t>(p));
  const auto v = pow_mod(r, (p - 1) / 2, p);
  return v == 0 ? 0 : (v == 1 ? 1 : -1);
}

inline int euler(const mpz_class& a, std::uint64_t p) {
  mpz_class r, e = (p - 1) / 2, m = p;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  mpz_powm(r.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Jacobi symbol as the product of Euler values over the prime factors of q.
inline int jacobi(std::int64_t a, std::uint64_t q) {
  int s = 1;
  for (auto p : prime_factors(q)) s *= euler(a, p);
  return s;
}

inline int jacobi(const mpz_class& a, std::uint64_t q) {
  int s = 1;
  for (auto p : prime_factors(q)) s *= euler(a, p);
  return s;
}

inline std::uint64_t order(std::uint64_t g, std::uint64_t q) {
  std::uint64_t x = g % q;
  for (std::uint64_t k = 1;; ++k) {
    if (x == 1) return k;
    x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * g % q);
  }
}

inline std::uint64_t largest_prime(std::uint64_t n) { return prime_factors(n).back(); }

inline mpz_class eval(std::uint64_t g, const std::vector<std::int64_t>& c,
                      const std::vector<unsigned>& k) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    mpz_class p = 1;
    for (unsigned j = 0; j < k[i]; ++j) p *= g;
    s += p * c[i];
  }
  return s;
}

inline bool is_square(const mpz_class& v) {
  if (v < 0) return false;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r * r == v;
}

/// Visits every tuple in {0..K}^m.
inline void for_box(std::size_t m, unsigned K, const std::function<void(const std::vector<unsigned>&)>& f) {
  std::vector<unsigned> k(m, 0);
  for (;;) {
    f(k);
    std::size_t i = m;
    while (i > 0) {
      if (++k[i - 1] <= K) break;
      k[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

inline std::uint64_t square_tuples(std::uint64_t g, const std::vector<std::int64_t>& c, unsigned K) {
  std::uint64_t n = 0;
  for_box(c.size(), K, [&](const auto& k) { n += is_square(eval(g, c, k)); });
  return n;
}

inline std::vector<std::uint64_t> representable(std::uint64_t g, const std::vector<std::int64_t>& c,
                                                std::uint64_t N, unsigned K) {
  std::set<std::uint64_t> ns;
  for_box(c.size(), K, [&](const auto& k) {
    const auto v = eval(g, c, k);
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (v == mpz_class(n) * n) ns.insert(n);
    }
  });
  return {ns.begin(), ns.end()};
}

inline std::uint64_t sparse_squares(std::uint64_t g, unsigned m, unsigned K) {
  mpz_class top = 1;
  for (unsigned i = 0; i < K; ++i) top *= g;
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; mpz_class(n) * n < top; ++n) {
    mpz_class v = mpz_class(n) * n;
    unsigned digits = 0;
    while (v > 0) {
      digits += mpz_class(v % g) != 0;
      v /= g;
    }
    count += digits <= m;
  }
  return count;
}

inline std::uint64_t congruence_count(std::uint64_t g, const std::vector<std::int64_t>& c, unsigned K,
                                      std::uint64_t ell) {
  std::uint64_t n = 0;
  for_box(c.size(), K, [&](const auto& k) {
    mpz_class r;
    mpz_class v = eval(g, c, k);
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), mpz_class(ell).get_mpz_t());
    n += r == 0;
  });
  return n;
}

using cplx = std::complex<double>;

inline cplx e(double x) { return std::polar(1.0, 2 * std::numbers::pi * x); }

/// Discrete log of x to base root mod p by scanning powers.
inline std::uint64_t dlog(std::uint64_t x, std::uint64_t root, std::uint64_t p) {
  std::uint64_t y = 1;
  for (std::uint64_t j = 0; j < p - 1; ++j) {
    if (y == x % p) return j;
    y = y * root % p;
  }
  return UINT64_MAX;
}

inline std::int64_t quad_diag(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a) {
  std::int64_t s = 0;
  for_box(a.size(), static_cast<unsigned>(q - 1), [&](const auto& x) {
    std::int64_t v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      v += a[i] * static_cast<std::int64_t>(pow_mod(x[i], d, q));
    }
    s += euler(v, q);
  });
  return s;
}

inline cplx twisted_diag(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                         const std::vector<std::int64_t>& chi, std::uint64_t root) {
  cplx s = 0;
  for_box(a.size(), static_cast<unsigned>(q - 1), [&](const auto& x) {
    cplx w = 1;
    std::int64_t v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      v += a[i] * static_cast<std::int64_t>(pow_mod(x[i], d, q));
      const bool principal = chi[i] % static_cast<std::int64_t>(q - 1) == 0;
      if (x[i] == 0) {
        if (!principal) w = 0;
      } else {
        w *= e(static_cast<double>(chi[i]) * static_cast<double>(dlog(x[i], root, q)) /
               static_cast<double>(q - 1));
      }
    }
    s += w * static_cast<double>(euler(v, q));
  });
  return s;
}

/// sum_{x in [1,t]^m} ((sum a_i theta^x_i)/M) e(sum b_i x_i / t), t = ord_M(theta).
inline cplx complete(std::uint64_t M, std::uint64_t theta, const std::vector<std::int64_t>& a,
                     const std::vector<std::int64_t>& b) {
  const auto t = order(theta, M);
  cplx s = 0;
  for_box(a.size(), static_cast<unsigned>(t - 1), [&](const auto& x0) {
    std::int64_t v = 0;
    double phase = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto x = x0[i] + 1;
      v += a[i] * static_cast<std::int64_t>(pow_mod(theta, x, M));
      phase += static_cast<double>(b[i]) * static_cast<double>(x) / static_cast<double>(t);
    }
    s += static_cast<double>(jacobi(v, M)) * e(phase);
  });
  return s;
}

inline std::int64_t incomplete(std::uint64_t M, std::uint64_t theta, const std::vector<std::int64_t>& a,
                               const std::vector<std::uint64_t>& L) {
  std::int64_t s = 0;
  std::vector<std::uint64_t> k(a.size(), 1);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t v) {
    if (i == a.size()) {
      s += jacobi(v, M);
      return;
    }
    for (std::uint64_t x = 1; x <= L[i]; ++x) {
      rec(i + 1, v + a[i] * static_cast<std::int64_t>(pow_mod(theta, x, M)));
    }
  };
  rec(0, 0);
  return s;
}

inline cplx korobov(std::int64_t a, std::uint64_t theta, std::uint64_t ell) {
  const auto t = order(theta, ell);
  cplx s = 0;
  for (std::uint64_t k = 1; k <= t; ++k) {
    const auto r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(ell)) + static_cast<std::int64_t>(ell)) %
                                              static_cast<std::int64_t>(ell)) *
                   pow_mod(theta, k, ell) % ell;
    s += e(static_cast<double>(r) / static_cast<double>(ell));
  }
  return s;
}

struct SieveStats {
  std::int64_t W = 0, U = 0, V = 0;
};

inline SieveStats sieve_stats(std::uint64_t g, const std::vector<std::int64_t>& c, unsigned K,
                              const std::vector<std::uint64_t>& L) {
  SieveStats st;
  for_box(c.size(), K, [&](const auto& k) {
    const auto v = eval(g, c, k);
    std::int64_t total = 0;
    std::vector<int> s;
    for (auto ell : L) {
      s.push_back(euler(v, ell));
      total += s.back();
    }
    st.W += total * total;
    for (std::size_t i = 0; i < L.size(); ++i) {
      for (std::size_t j = 0; j < L.size(); ++j) {
        const std::int64_t prod = s[i] * s[j];
        if (largest_prime(L[i] - 1) == largest_prime(L[j] - 1)) {
          st.U += prod;
        } else {
          st.V += prod;
        }
      }
    }
  });
  return st;
}

/// Members of L_z by the definition: primes in [z, c1 z] not dividing g with
/// P(ell-1) >= z^alpha and P(ell-1) | ord_ell(g), restricted to the most
/// common 2-adic valuation of the order (smallest valuation on ties).
inline std::vector<std::uint64_t> sieve_members(std::uint64_t g, double z, double alpha, double c1,
                                                unsigned* u0 = nullptr) {
  std::vector<std::vector<std::uint64_t>> classes(64);
  for (auto ell = static_cast<std::uint64_t>(std::ceil(z)); ell <= static_cast<std::uint64_t>(std::floor(c1 * z));
       ++ell) {
    if (!is_prime(ell) || g % ell == 0) continue;
    const auto p = largest_prime(ell - 1);
    if (static_cast<long double>(p) < std::pow(static_cast<long double>(z), static_cast<long double>(alpha))) {
      continue;
    }
    const auto t = order(g, ell);
    if (t % p != 0) continue;
    unsigned v = 0;
    for (auto tt = t; tt % 2 == 0; tt /= 2) ++v;
    classes[v].push_back(ell);
  }
  std::size_t best = 0;
  for (std::size_t v = 1; v < classes.size(); ++v) {
    if (classes[v].size() > classes[best].size()) best = v;
  }
  if (u0) *u0 = static_cast<unsigned>(best);
  return classes[best];
}

}  // namespace oracle
