#include "sparsity/sieve_set.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "sparsity/error.hpp"
#include "sparsity/format.hpp"
#include "sparsity/sparse_forms.hpp"

namespace sparsity {

std::vector<std::uint64_t> SieveSet::ells() const {
  std::vector<std::uint64_t> out;
  out.reserve(primes.size());
  for (const auto& p : primes) out.push_back(p.ell);
  return out;
}

namespace {

std::optional<SievePrime> examine(std::uint64_t g, std::uint64_t ell, long double threshold) {
  if (g % ell == 0) return std::nullopt;
  const auto p = largest_prime_factor(ell - 1);
  if (static_cast<long double>(p) < threshold) return std::nullopt;
  const auto tau = mul_order(g, ell);
  if (tau % p != 0) return std::nullopt;
  return SievePrime{ell, tau, p, two_adic_valuation(tau)};
}

SievePrime describe(std::uint64_t g, std::uint64_t ell) {
  if (ell < 3 || !is_prime(ell)) {
    throw Error(ErrorKind::DomainError, std::to_string(ell) + " is not an odd prime");
  }
  const auto tau = mul_order(g, ell);
  return SievePrime{ell, tau, largest_prime_factor(ell - 1), two_adic_valuation(tau)};
}

}  // namespace

SieveSet build_sieve_set(std::uint64_t g, double z, double alpha, double c1, Exec exec) {
  if (g < 2) throw Error(ErrorKind::DomainError, "sieve base g must be >= 2");
  if (!(z >= 3)) throw Error(ErrorKind::DomainError, "sieve set needs z >= 3");
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorKind::DomainError, "alpha must lie in (0, 1)");
  if (!(c1 > 1)) throw Error(ErrorKind::DomainError, "c1 must exceed 1");

  const auto lo = static_cast<std::uint64_t>(std::ceil(z));
  const auto hi = static_cast<std::uint64_t>(std::floor(c1 * z));
  const auto candidates = primes_in(lo, hi);
  const long double threshold = std::pow(static_cast<long double>(z), static_cast<long double>(alpha));

  std::vector<std::optional<SievePrime>> verdict(candidates.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < static_cast<long>(candidates.size()); ++i) {
      verdict[i] = examine(g, candidates[i], threshold);
    }
  } else {
    for (std::size_t i = 0; i < candidates.size(); ++i) verdict[i] = examine(g, candidates[i], threshold);
  }

  std::map<unsigned, std::vector<SievePrime>> classes;
  for (auto& v : verdict) {
    if (v) classes[v->nu2].push_back(*v);
  }
  if (classes.empty()) {
    std::ostringstream msg;
    msg << "no prime in [" << lo << ", " << hi << "] survives for g=" << g << " alpha=" << alpha;
    throw Error(ErrorKind::EmptySet, msg.str());
  }

  SieveSet set;
  set.g = g;
  set.z = z;
  set.alpha = alpha;
  set.c1 = c1;
  set.class_sizes.assign(classes.rbegin()->first + 1, 0);
  // majority decision; std::map iterates ascending so ties keep the smaller u0
  const std::vector<SievePrime>* best = nullptr;
  for (const auto& [nu, members] : classes) {
    set.class_sizes[nu] = members.size();
    if (best == nullptr || members.size() > best->size()) {
      best = &members;
      set.u0 = nu;
    }
  }
  set.primes = *best;
  return set;
}

SieveSet make_sieve_set(std::uint64_t g, const std::vector<std::uint64_t>& ells, double z,
                        double alpha) {
  if (ells.empty()) throw Error(ErrorKind::EmptySet, "explicit sieve set is empty");
  SieveSet set;
  set.g = g;
  set.alpha = alpha;
  std::vector<std::uint64_t> sorted = ells;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto ell : sorted) set.primes.push_back(describe(g, ell));
  set.z = z > 0 ? z : static_cast<double>(sorted.front());
  set.c1 = static_cast<double>(sorted.back()) / set.z;
  set.u0 = set.primes.front().nu2;
  return set;
}

std::string check_sieve_set(const SieveSet& set) {
  const long double threshold =
      std::pow(static_cast<long double>(set.z), static_cast<long double>(set.alpha));
  const auto lo = static_cast<std::uint64_t>(std::ceil(set.z));
  const auto hi = static_cast<std::uint64_t>(std::floor(set.c1 * set.z));
  for (std::size_t i = 0; i < set.primes.size(); ++i) {
    const auto& p = set.primes[i];
    const std::string tag = "ell=" + std::to_string(p.ell) + ": ";
    if (i > 0 && set.primes[i - 1].ell >= p.ell) return tag + "not strictly ascending";
    // trial division, independent of the Miller-Rabin path
    for (std::uint64_t d = 2; d * d <= p.ell; ++d) {
      if (p.ell % d == 0) return tag + "not prime";
    }
    if (p.ell < lo || p.ell > hi) return tag + "outside [z, c1 z]";
    // largest prime factor of ell - 1 by trial division
    std::uint64_t rest = p.ell - 1, largest = 1;
    for (std::uint64_t d = 2; d * d <= rest; ++d) {
      while (rest % d == 0) {
        largest = d;
        rest /= d;
      }
    }
    if (rest > 1) largest = std::max(largest, rest);
    if (largest != p.p_largest) return tag + "P(ell-1) mismatch";
    if (static_cast<long double>(largest) < threshold) return tag + "P(ell-1) < z^alpha";
    // order by naive iteration
    std::uint64_t tau = 1, acc = set.g % p.ell;
    while (acc != 1) {
      acc = acc * (set.g % p.ell) % p.ell;
      ++tau;
    }
    if (tau != p.tau) return tag + "tau mismatch";
    if (tau % largest != 0) return tag + "P(ell-1) does not divide tau";
    unsigned nu = 0;
    for (auto t = tau; t % 2 == 0; t /= 2) ++nu;
    if (nu != p.nu2 || nu != set.u0) return tag + "nu_2(tau) != u0";
  }
  return {};
}

unsigned omega_z(const BigInt& n, const SieveSet& set) {
  if (sgn(n) == 0) throw Error(ErrorKind::ZeroInput, "omega_z(0) is undefined");
  unsigned count = 0;
  for (const auto& p : set.primes) count += mpz_divisible_ui_p(n.get_mpz_t(), p.ell) != 0;
  return count;
}

OmegaSum omega_sum(const SparseForm& form, unsigned K, const SieveSet& set) {
  if (set.primes.empty()) throw Error(ErrorKind::EmptySet, "omega_sum needs a non-empty set");
  OmegaSum r;
  for (const auto& p : set.primes) r.sum += count_zero_residues(form, K, p.ell);
  const double m = static_cast<double>(form.arity());
  const double Kd = K;
  const double denom =
      (std::pow(Kd, m) * std::pow(set.z, -set.alpha) + std::pow(Kd, m - 1)) * set.primes.size();
  r.bound_ratio = denom > 0 ? static_cast<double>(r.sum) / denom : 0.0;
  return r;
}

GcdSum gcd_sum(const SieveSet& set, double kappa) {
  if (!(kappa >= 1)) throw Error(ErrorKind::DomainError, "gcd_sum needs kappa >= 1");
  GcdSum r;
  const bool integral = std::floor(kappa) == kappa;
  BigInt exact = 0;
  long double approx = 0;
  for (const auto& a : set.primes) {
    for (const auto& b : set.primes) {
      if (a.p_largest == b.p_largest) continue;
      const auto d = gcd_u64(a.ell - 1, b.ell - 1);
      if (integral) {
        BigInt term;
        mpz_ui_pow_ui(term.get_mpz_t(), d, static_cast<unsigned long>(kappa));
        exact += term;
      } else {
        approx += std::pow(static_cast<long double>(d), static_cast<long double>(kappa));
      }
    }
  }
  if (integral) {
    r.exact = exact;
    r.value = exact.get_d();
  } else {
    r.value = static_cast<double>(approx);
  }
  const double exponent = kappa + set.alpha - set.alpha * kappa + 1;
  r.bound_ratio = r.value / std::pow(set.z, exponent);
  return r;
}

void write_sieve_csv(std::ostream& out, const SieveSet& set) {
  out << "# g=" << set.g << " z=" << fmt_double(set.z) << " alpha=" << fmt_double(set.alpha)
      << " c1=" << fmt_double(set.c1) << " u0=" << set.u0 << "\n";
  out << "ell,tau,p_largest,nu2\n";
  for (const auto& p : set.primes) {
    out << p.ell << "," << p.tau << "," << p.p_largest << "," << p.nu2 << "\n";
  }
}

SieveSet read_sieve_csv(std::istream& in) {
  SieveSet set;
  std::string line;
  bool have_meta = false, have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      for (const auto& tok : split(trim(line.substr(1)), ' ')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "g") set.g = std::stoull(val);
        else if (key == "z") set.z = std::stod(val);
        else if (key == "alpha") set.alpha = std::stod(val);
        else if (key == "c1") set.c1 = std::stod(val);
        else if (key == "u0") set.u0 = static_cast<unsigned>(std::stoul(val));
        else continue;
        have_meta = true;
      }
      continue;
    }
    if (!have_header) {
      if (line != "ell,tau,p_largest,nu2") {
        throw Error(ErrorKind::ConfigError, "unexpected sieve CSV header: " + line);
      }
      have_header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw Error(ErrorKind::ConfigError, "bad sieve CSV row: " + line);
    set.primes.push_back({std::stoull(cols[0]), std::stoull(cols[1]), std::stoull(cols[2]),
                          static_cast<unsigned>(std::stoul(cols[3]))});
  }
  if (!have_meta || !have_header) {
    throw Error(ErrorKind::ConfigError, "sieve CSV lacks its metadata or header line");
  }
  return set;
}

}  // namespace sparsity
