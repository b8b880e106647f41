#include "sparsity/char_sums.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sparsity/arith.hpp"
#include "sparsity/error.hpp"

namespace sparsity {

namespace {

std::uint64_t mod_i64(std::int64_t a, std::uint64_t m) {
  const auto r = static_cast<__int128>(a) % static_cast<__int128>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

/// One admissible value of a summation variable: its contribution to the
/// character argument, to the phase numerator, and its multiplicity.
struct Entry {
  std::uint64_t residue;
  std::uint64_t phase;
  std::int64_t weight;
};

using Coordinates = std::vector<std::vector<Entry>>;

void walk(const Coordinates& coords, std::size_t i, std::uint64_t res, std::uint64_t phase,
          std::int64_t weight, std::uint64_t modulus, std::uint64_t period,
          const std::vector<std::int8_t>& symbol, std::vector<std::int64_t>& hist) {
  if (i == coords.size()) {
    hist[phase] += weight * symbol[res];
    return;
  }
  for (const auto& e : coords[i]) {
    std::uint64_t r = res + e.residue;
    if (r >= modulus) r -= modulus;
    std::uint64_t p = phase + e.phase;
    if (p >= period) p -= period;
    walk(coords, i + 1, r, p, weight * e.weight, modulus, period, symbol, hist);
  }
}

/// hist[p] = sum of weight * symbol(sum of residues) over all tuples whose
/// phases add up to p (mod period). Parallel over the first coordinate;
/// per-entry histograms are added in entry order, so the result does not
/// depend on scheduling.
std::vector<std::int64_t> phase_histogram(const Coordinates& coords, std::uint64_t modulus,
                                          std::uint64_t period,
                                          const std::vector<std::int8_t>& symbol, Exec exec) {
  std::vector<std::int64_t> total(period, 0);
  if (coords.empty()) return total;
  const auto& lead = coords[0];
  std::vector<std::vector<std::int64_t>> parts(lead.size());
  auto run = [&](std::size_t j) {
    parts[j].assign(period, 0);
    const auto& e = lead[j];
    walk(coords, 1, e.residue % modulus, e.phase % period, e.weight, modulus, period, symbol,
         parts[j]);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < static_cast<long>(lead.size()); ++j) run(static_cast<std::size_t>(j));
  } else {
    for (std::size_t j = 0; j < lead.size(); ++j) run(j);
  }
  for (const auto& part : parts) {
    for (std::uint64_t p = 0; p < period; ++p) total[p] += part[p];
  }
  return total;
}

Complex pairwise(const std::vector<Complex>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    Complex s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    return s;
  }
  const auto mid = lo + (hi - lo) / 2;
  return pairwise(xs, lo, mid) + pairwise(xs, mid, hi);
}

bool all_zero_mod(const std::vector<std::int64_t>& b, std::uint64_t t) {
  return std::all_of(b.begin(), b.end(), [&](auto bi) { return mod_i64(bi, t) == 0; });
}

void require_odd_prime(std::uint64_t p, const char* what) {
  if (p < 3 || !is_prime(p)) {
    throw Error(ErrorKind::HypothesisViolated, std::string(what) + " = " + std::to_string(p) +
                                                   " is not an odd prime");
  }
}

void require_units(const std::vector<std::int64_t>& a, std::uint64_t modulus) {
  for (auto ai : a) {
    if (gcd_u64(mod_i64(ai, modulus), modulus) != 1) {
      throw Error(ErrorKind::HypothesisViolated,
                  "coefficient " + std::to_string(ai) + " is not a unit mod " +
                      std::to_string(modulus));
    }
  }
}

/// ind[x] = discrete log of x to base root, x in [1, p).
std::vector<std::uint64_t> index_table(std::uint64_t p, std::uint64_t root) {
  std::vector<std::uint64_t> ind(p, 0);
  std::uint64_t x = 1;
  for (std::uint64_t j = 0; j + 1 < p; ++j) {
    ind[x] = j;
    x = mulmod(x, root, p);
  }
  return ind;
}

std::uint64_t checked_root(std::uint64_t q, std::uint64_t root) {
  if (root == 0) return primitive_root(q);
  if (root % q == 0 || mul_order(root % q, q) != q - 1) {
    throw Error(ErrorKind::DomainError,
                std::to_string(root) + " is not a primitive root mod " + std::to_string(q));
  }
  return root % q;
}

}  // namespace

std::vector<std::int8_t> jacobi_table(std::uint64_t modulus) {
  std::vector<std::int8_t> t(modulus);
  for (std::uint64_t x = 0; x < modulus; ++x) t[x] = static_cast<std::int8_t>(jacobi_u64(x, modulus));
  return t;
}

Complex phase_sum(const std::vector<std::int64_t>& hist) {
  const auto n = hist.size();
  if (n == 0) return 0;
  std::vector<Complex> terms(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (hist[p] == 0) continue;
    if (p == 0) {
      terms[p] = static_cast<double>(hist[p]);
      continue;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    terms[p] = static_cast<double>(hist[p]) * Complex(std::cos(angle), std::sin(angle));
  }
  return pairwise(terms, 0, n);
}

QuadDiagSum quad_diag_sum(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                          const Budget& budget, Exec exec) {
  if (d % 2 != 0) throw Error(ErrorKind::OddD, "d = " + std::to_string(d) + " is odd");
  require_odd_prime(q, "q");
  if (d == 0 || d % q == 0) {
    throw Error(ErrorKind::HypothesisViolated, "gcd(d, q) != 1");
  }
  if (a.empty()) throw Error(ErrorKind::DomainError, "quad_diag_sum needs m >= 1");
  require_units(a, q);
  const auto m = a.size();
  budget.require(sat_pow(q, static_cast<unsigned>(m)), "quad_diag_sum");

  std::vector<std::uint64_t> xd(q);
  for (std::uint64_t x = 0; x < q; ++x) xd[x] = powmod(x, d, q);
  Coordinates coords(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ai = mod_i64(a[i], q);
    for (std::uint64_t x = 0; x < q; ++x) coords[i].push_back({mulmod(ai, xd[x], q), 0, 1});
  }
  const auto hist = phase_histogram(coords, q, 1, jacobi_table(q), exec);

  QuadDiagSum out;
  out.value = hist[0];
  out.bound = std::pow(static_cast<double>(d), static_cast<double>(m - 1)) *
              static_cast<double>(q - 1) * std::pow(static_cast<double>(q), (m - 1) / 2.0);
  // S^2 <= d^(2(m-1)) (q-1)^2 q^(m-1)
  BigInt lhs = BigInt(out.value) * out.value, rhs, tmp;
  mpz_ui_pow_ui(rhs.get_mpz_t(), d, 2 * (m - 1));
  rhs *= BigInt(q - 1) * (q - 1);
  mpz_ui_pow_ui(tmp.get_mpz_t(), q, m - 1);
  rhs *= tmp;
  out.within_bound = lhs <= rhs;
  return out;
}

TwistedSum twisted_diag_sum(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                            const std::vector<std::int64_t>& chi_exponents, std::uint64_t root,
                            const Budget& budget, Exec exec) {
  require_odd_prime(q, "q");
  if (d == 0 || d % q == 0) throw Error(ErrorKind::HypothesisViolated, "gcd(d, q) != 1");
  if (a.empty()) throw Error(ErrorKind::DomainError, "twisted_diag_sum needs m >= 1");
  if (chi_exponents.size() != a.size()) {
    throw Error(ErrorKind::DomainError, "one character exponent per coefficient is required");
  }
  require_units(a, q);
  const auto m = a.size();
  budget.require(sat_pow(q, static_cast<unsigned>(m)), "twisted_diag_sum");

  const auto rho = checked_root(q, root);
  const auto ind = index_table(q, rho);
  const auto period = q - 1;
  Coordinates coords(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ai = mod_i64(a[i], q);
    const auto ci = mod_i64(chi_exponents[i], period);
    if (ci == 0) coords[i].push_back({0, 0, 1});  // principal character: chi(0) = 1
    for (std::uint64_t x = 1; x < q; ++x) {
      coords[i].push_back({mulmod(ai, powmod(x, d, q), q), mulmod(ci, ind[x], period), 1});
    }
  }
  TwistedSum out;
  out.root = rho;
  out.value = phase_sum(phase_histogram(coords, q, period, jacobi_table(q), exec));
  out.reference = std::pow(static_cast<double>(d), static_cast<double>(m)) *
                  std::pow(static_cast<double>(q), (m + 1) / 2.0);
  out.ratio = std::abs(out.value) / out.reference;
  return out;
}

CompleteSum complete_sum(std::uint64_t modulus, std::uint64_t theta,
                         const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                         const Budget& budget, Exec exec) {
  if (modulus < 3 || modulus % 2 == 0) {
    throw Error(ErrorKind::EvenModulus, "modulus must be odd and >= 3");
  }
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorKind::DomainError, "a and b must be non-empty and of equal length");
  }
  const auto t = mul_order(theta % modulus, modulus);
  const auto m = a.size();
  budget.require(sat_pow(t, static_cast<unsigned>(m)), "complete_sum");

  std::vector<std::uint64_t> pw(t + 1);
  pw[0] = 1;
  for (std::uint64_t x = 1; x <= t; ++x) pw[x] = mulmod(pw[x - 1], theta % modulus, modulus);
  Coordinates coords(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ai = mod_i64(a[i], modulus);
    const auto bi = mod_i64(b[i], t);
    for (std::uint64_t x = 1; x <= t; ++x) {
      coords[i].push_back({mulmod(ai, pw[x], modulus), mulmod(bi, x % t, t), 1});
    }
  }
  const auto hist = phase_histogram(coords, modulus, t, jacobi_table(modulus), exec);
  CompleteSum out;
  out.modulus = modulus;
  out.period = t;
  if (all_zero_mod(b, t)) {
    out.exact = hist[0];
    out.value = static_cast<double>(hist[0]);
  } else {
    out.value = phase_sum(hist);
  }
  return out;
}

SEll s_ell(std::uint64_t ell, std::uint64_t theta, const std::vector<std::int64_t>& a,
           const std::vector<std::int64_t>& b, double slack, const Budget& budget, Exec exec) {
  require_odd_prime(ell, "ell");
  if (theta % ell == 0) {
    throw Error(ErrorKind::HypothesisViolated, "ell divides theta");
  }
  require_units(a, ell);
  SEll out;
  out.sum = complete_sum(ell, theta, a, b, budget, exec);
  const auto m = static_cast<double>(a.size());
  const auto L = static_cast<double>(ell);
  const double mag = std::abs(out.sum.value);
  out.generic_ratio = mag / std::pow(L, (m + 1) / 2);
  out.generic_pass = out.generic_ratio <= slack;
  const auto t = out.sum.period;
  if (out.sum.exact && t % 2 == 1) {
    // inclusion-exclusion over zero coordinates of the diagonal form,
    // each complete part bounded by the diagonal-sum bound
    const double d = static_cast<double>((ell - 1) / t);
    double total = 0, binom = 1;
    const auto mi = a.size();
    for (std::size_t j = 1; j <= mi; ++j) {
      binom = binom * static_cast<double>(mi - j + 1) / static_cast<double>(j);
      total += binom * std::pow(d, static_cast<double>(j) - m) * std::pow(L, (j - 1.0) / 2);
    }
    out.explicit_bound = static_cast<double>(t) * total;
    out.zero_twist_ratio = mag / (static_cast<double>(t) * std::pow(L, (m - 1) / 2));
    out.explicit_pass = mag <= *out.explicit_bound * (1 + 1e-12);
  }
  return out;
}

Complex s_ell_via_diagonal(std::uint64_t ell, std::uint64_t theta,
                           const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                           std::uint64_t root) {
  require_odd_prime(ell, "ell");
  if (theta % ell == 0) throw Error(ErrorKind::HypothesisViolated, "ell divides theta");
  require_units(a, ell);
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorKind::DomainError, "a and b must be non-empty and of equal length");
  }
  const auto base = checked_root(ell, root);
  const auto t = mul_order(theta % ell, ell);
  const auto d = (ell - 1) / t;
  const auto base_ind = index_table(ell, base);
  const auto v = base_ind[theta % ell];
  if (v % d != 0) throw std::logic_error("index of theta not divisible by d");
  // rho = base^u with u = v/d (mod t) and gcd(u, ell - 1) = 1, so rho^d = theta
  std::uint64_t u = v / d;
  while (gcd_u64(u, ell - 1) != 1) u += t;
  const auto rho = powmod(base, u, ell);
  const auto ind = index_table(ell, rho);

  Coordinates coords(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ai = mod_i64(a[i], ell);
    const auto bi = mod_i64(b[i], t);
    for (std::uint64_t w = 1; w < ell; ++w) {
      coords[i].push_back({mulmod(ai, powmod(w, d, ell), ell), mulmod(bi, ind[w] % t, t), 1});
    }
  }
  const auto hist = phase_histogram(coords, ell, t, jacobi_table(ell), Exec::serial);
  return phase_sum(hist) / std::pow(static_cast<double>(d), static_cast<double>(a.size()));
}

CrtSplit crt_split(std::uint64_t t_ell, std::uint64_t t_r, const std::vector<std::int64_t>& b) {
  if (t_ell == 0 || t_r == 0) throw Error(ErrorKind::DomainError, "orders must be positive");
  if (gcd_u64(t_ell, t_r) != 1) {
    throw Error(ErrorKind::NotCoprimeOrders, "gcd(" + std::to_string(t_ell) + ", " +
                                                 std::to_string(t_r) + ") != 1");
  }
  const auto inv_r = invmod(t_r % t_ell, t_ell);
  const auto inv_ell = invmod(t_ell % t_r, t_r);
  const auto t = t_ell * t_r;
  CrtSplit out;
  for (auto bi : b) {
    const auto x = mulmod(mod_i64(bi, t_ell), inv_r, t_ell);
    const auto y = mulmod(mod_i64(bi, t_r), inv_ell, t_r);
    if ((mulmod(x, t_r, t) + mulmod(y, t_ell, t)) % t != mod_i64(bi, t)) {
      throw std::logic_error("crt_split back-substitution failed");
    }
    out.b_ell.push_back(static_cast<std::int64_t>(x));
    out.b_r.push_back(static_cast<std::int64_t>(y));
  }
  return out;
}

ProductSum product_sum(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                       const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                       const Budget& budget, Exec exec) {
  require_odd_prime(ell, "ell");
  require_odd_prime(r, "r");
  if (ell == r) throw Error(ErrorKind::HypothesisViolated, "ell and r must be distinct");
  if (theta % ell == 0 || theta % r == 0) {
    throw Error(ErrorKind::HypothesisViolated, "gcd(ell r, theta) != 1");
  }
  require_units(a, ell * r);
  ProductSum out;
  out.t_ell = mul_order(theta % ell, ell);
  out.t_r = mul_order(theta % r, r);
  out.split = crt_split(out.t_ell, out.t_r, b);
  out.S = complete_sum(ell * r, theta, a, b, budget, exec);
  out.t = out.S.period;
  out.S_ell = complete_sum(ell, theta, a, out.split.b_ell, budget, exec);
  out.S_r = complete_sum(r, theta, a, out.split.b_r, budget, exec);
  if (out.S.exact && out.S_ell.exact && out.S_r.exact) {
    const auto prod = *out.S_ell.exact * *out.S_r.exact;
    out.discrepancy = std::abs(static_cast<double>(*out.S.exact - prod));
    out.agree = *out.S.exact == prod;
  } else {
    out.discrepancy = std::abs(out.S.value - out.S_ell.value * out.S_r.value);
    out.agree = out.discrepancy <= kComplexTol;
  }
  return out;
}

IncompleteSum incomplete_sum(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                             const std::vector<std::int64_t>& a,
                             const std::vector<std::uint64_t>& lengths, double slack,
                             const Budget& budget) {
  require_odd_prime(ell, "ell");
  require_odd_prime(r, "r");
  if (ell == r) throw Error(ErrorKind::HypothesisViolated, "ell and r must be distinct");
  if (theta % ell == 0 || theta % r == 0) {
    throw Error(ErrorKind::HypothesisViolated, "gcd(ell r, theta) != 1");
  }
  if (a.empty() || a.size() != lengths.size()) {
    throw Error(ErrorKind::DomainError, "a and L must be non-empty and of equal length");
  }
  const auto M = ell * r;
  require_units(a, M);
  const auto t_ell = mul_order(theta % ell, ell), t_r = mul_order(theta % r, r);
  if (t_ell % 2 == 0 || t_r % 2 == 0) {
    throw Error(ErrorKind::HypothesisViolated, "orders of theta mod ell and mod r must be odd");
  }
  if (gcd_u64(t_ell, t_r) != 1) {
    throw Error(ErrorKind::HypothesisViolated, "orders of theta mod ell and mod r must be coprime");
  }
  const auto t = mul_order(theta % M, M);
  const auto m = a.size();

  std::uint64_t weight_bound = 1, states = 1;
  for (auto L : lengths) {
    weight_bound = sat_mul(weight_bound, L);
    states = sat_mul(states, std::min(L, t));
  }
  if (weight_bound > (std::uint64_t{1} << 62)) {
    throw Error(ErrorKind::WorkloadExceeded, "product of lengths exceeds 2^62");
  }
  budget.require(states, "incomplete_sum");

  std::vector<std::uint64_t> pw(t);
  pw[0] = 1;
  for (std::uint64_t j = 1; j < t; ++j) pw[j] = mulmod(pw[j - 1], theta % M, M);
  Coordinates coords(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ai = mod_i64(a[i], M);
    const auto L = lengths[i];
    for (std::uint64_t j = 0; j < t; ++j) {
      // k in [1, L] with k = j (mod t)
      const auto full = L / t, rem = L % t;
      const std::uint64_t count = full + ((j >= 1 && j <= rem) ? 1 : 0);
      if (count) coords[i].push_back({mulmod(ai, pw[j], M), 0, static_cast<std::int64_t>(count)});
    }
  }
  IncompleteSum out;
  out.t = t;
  const bool empty_range =
      std::any_of(coords.begin(), coords.end(), [](const auto& c) { return c.empty(); });
  if (!empty_range) out.value = phase_histogram(coords, M, 1, jacobi_table(M), Exec::serial)[0];

  const double Lmax = static_cast<double>(*std::max_element(lengths.begin(), lengths.end()));
  const double md = static_cast<double>(m), td = static_cast<double>(t), lr = static_cast<double>(M);
  double prod = 1;
  for (auto L : lengths) prod *= static_cast<double>(L);
  out.bound = prod * std::pow(td, 1 - md) * std::pow(lr, (md - 1) / 2) +
              (std::pow(Lmax, md - 1) * std::pow(td, 1 - md) + 1) * std::pow(lr, (md + 1) / 2) *
                  std::pow(std::log(lr), md);
  out.ratio = std::abs(static_cast<double>(out.value)) / out.bound;
  out.pass = out.ratio <= slack;
  return out;
}

KorobovSum korobov_sum(std::int64_t a, std::uint64_t theta, std::uint64_t ell,
                       KorobovDenominator denom) {
  if (ell < 2 || !is_prime(ell)) {
    throw Error(ErrorKind::DomainError, std::to_string(ell) + " is not prime");
  }
  if (mod_i64(a, ell) == 0 || theta % ell == 0) {
    throw Error(ErrorKind::NotCoprime, "gcd(ell, a theta) != 1");
  }
  KorobovSum out;
  out.t = mul_order(theta % ell, ell);
  const auto n = denom == KorobovDenominator::ell ? ell : out.t;
  std::vector<std::int64_t> hist(n, 0);
  if (denom == KorobovDenominator::ell) {
    std::uint64_t x = mod_i64(a, ell);
    for (std::uint64_t k = 1; k <= out.t; ++k) {
      x = mulmod(x, theta % ell, ell);
      ++hist[x];
    }
  } else {
    const auto an = mod_i64(a, n);
    for (std::uint64_t k = 1; k <= out.t; ++k) ++hist[mulmod(an, powmod(theta % n, k, n), n)];
  }
  out.value = phase_sum(hist);
  out.magnitude = std::abs(out.value);
  out.bound = std::sqrt(static_cast<double>(ell));
  out.pass = std::norm(out.value) <= static_cast<double>(ell) * (1 + 1e-12);
  return out;
}

TmCount t_m_count(const SparseForm& form, unsigned K, std::uint64_t ell,
                  std::optional<SieveContext> ctx, double slack) {
  if (ell < 2 || !is_prime(ell)) {
    throw Error(ErrorKind::DomainError, std::to_string(ell) + " is not prime");
  }
  if (form.g % ell == 0) throw Error(ErrorKind::HypothesisViolated, "ell divides g");
  TmCount out;
  out.count = count_zero_residues(form, K, ell);
  out.tau = mul_order(form.g % ell, ell);
  const double m = static_cast<double>(form.arity());
  const double K1 = K + 1.0, tau = static_cast<double>(out.tau), L = static_cast<double>(ell);
  const auto unit = [&](std::int64_t c) { return mod_i64(c, ell) != 0; };
  const double count = static_cast<double>(out.count);
  if (std::any_of(form.coeffs.begin(), form.coeffs.end(), unit)) {
    out.trivial_bound = std::pow(K1, m - 1) * (K1 / tau + 1);
    out.trivial_pass = count <= *out.trivial_bound * (1 + 1e-12);
  }
  if (form.arity() >= 2 && std::all_of(form.coeffs.begin(), form.coeffs.end(), unit)) {
    out.explicit_bound =
        std::pow(K1 / tau + 1, m) * (std::pow(tau, m) / L + std::pow(L, (m - 2) / 2) * tau);
    out.explicit_pass = count <= *out.explicit_bound * (1 + 1e-12);
  }
  if (ctx && form.arity() >= 3 && K >= ctx->z && tau >= std::pow(ctx->z, ctx->alpha)) {
    const double Km = std::pow(static_cast<double>(K), m);
    out.asymptotic_bound =
        Km / ctx->z + Km * std::pow(ctx->z, m / 2 - ctx->alpha * (m - 1) - 1);
    out.asymptotic_ratio = count / *out.asymptotic_bound;
    out.asymptotic_pass = out.asymptotic_ratio <= slack;
  }
  return out;
}

SieveStatistics sieve_statistics(const SparseForm& form, unsigned K, const SieveSet& set,
                                 const Budget& budget, Exec exec) {
  const auto m = form.arity();
  const auto n_ell = set.size();
  if (n_ell == 0) throw Error(ErrorKind::EmptySet, "sieve set is empty");
  const auto box = sat_pow(std::uint64_t{K} + 1, static_cast<unsigned>(m));
  budget.require(sat_mul(box, sat_mul(n_ell, n_ell)), "sieve_statistics");

  // per prime: symbol table and c_i g^k mod ell for every k in [0, K]
  std::vector<std::vector<std::int8_t>> symbol(n_ell);
  std::vector<std::vector<std::vector<std::uint64_t>>> term(n_ell);
  for (std::size_t j = 0; j < n_ell; ++j) {
    const auto ell = set.primes[j].ell;
    symbol[j] = jacobi_table(ell);
    term[j].assign(m, std::vector<std::uint64_t>(K + 1));
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t x = mod_i64(form.coeffs[i], ell);
      for (unsigned k = 0; k <= K; ++k) {
        term[j][i][k] = x;
        x = mulmod(x, form.g % ell, ell);
      }
    }
  }

  struct Acc {
    std::int64_t W = 0, U = 0, V = 0;
  };
  std::vector<Acc> parts(K + 1);
  auto run_lead = [&](unsigned lead) {
    Acc acc;
    ExponentTuple k(m, 0);
    k[0] = lead;
    std::vector<int> s(n_ell);
    const std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i < m) {
        for (unsigned v = 0; v <= K; ++v) {
          k[i] = v;
          rec(i + 1);
        }
        return;
      }
      std::int64_t total = 0;
      for (std::size_t j = 0; j < n_ell; ++j) {
        const auto ell = set.primes[j].ell;
        std::uint64_t x = 0;
        for (std::size_t c = 0; c < m; ++c) x = (x + term[j][c][k[c]]) % ell;
        s[j] = symbol[j][x];
        total += s[j];
      }
      acc.W += total * total;
      for (std::size_t p = 0; p < n_ell; ++p) {
        for (std::size_t q = 0; q < n_ell; ++q) {
          const std::int64_t prod = s[p] * s[q];
          if (set.primes[p].p_largest == set.primes[q].p_largest) {
            acc.U += prod;
          } else {
            acc.V += prod;
          }
        }
      }
    };
    rec(1);
    parts[lead] = acc;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long lead = 0; lead <= static_cast<long>(K); ++lead) run_lead(static_cast<unsigned>(lead));
  } else {
    for (unsigned lead = 0; lead <= K; ++lead) run_lead(lead);
  }

  SieveStatistics st;
  for (const auto& p : parts) {
    st.W += p.W;
    st.U += p.U;
    st.V += p.V;
  }
  st.split_exact = st.W == st.U + st.V;

  const auto squares = count_square_tuples(form, K, budget, SquareCountMode::brute_force, exec);
  st.M = squares.count;
  st.zero_hits = squares.zero_hits;
  for (const auto& hit : squares.hits) {
    std::int64_t lhs = 0;
    for (const auto& p : set.primes) lhs += jacobi(hit.value, p.ell);
    const auto omega = sgn(hit.value) == 0 ? static_cast<unsigned>(n_ell) : omega_z(hit.value, set);
    ++st.identity_checked;
    if (lhs != static_cast<std::int64_t>(n_ell) - static_cast<std::int64_t>(omega)) {
      ++st.identity_failures;
    }
  }

  const double Kd = K, md = static_cast<double>(m), z = set.z;
  st.term_alpha = std::pow(Kd, md) * std::pow(z, -set.alpha);
  st.term_m1 = std::pow(Kd, md - 1);
  st.term_w = static_cast<double>(st.W) / (z * z);
  st.term_v = static_cast<double>(st.V) / (z * z);
  return st;
}

}  // namespace sparsity
