#include "sparsity/sparse_forms.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "sparsity/error.hpp"

namespace sparsity {

SparseForm::SparseForm(std::uint64_t base, std::vector<std::int64_t> c)
    : g(base), coeffs(std::move(c)) {
  if (g < 2) throw Error(ErrorKind::DomainError, "sparse form base must be >= 2");
  if (coeffs.empty()) throw Error(ErrorKind::DomainError, "sparse form needs m >= 1");
  for (auto ci : coeffs) {
    if (ci == 0) throw Error(ErrorKind::DomainError, "sparse form coefficients must be non-zero");
  }
}

std::uint64_t SparseForm::weight() const {
  std::uint64_t w = 0;
  for (auto ci : coeffs) w += static_cast<std::uint64_t>(ci < 0 ? -ci : ci);
  return w;
}

BigInt eval_form(const SparseForm& form, const ExponentTuple& k) {
  if (k.size() != form.arity()) throw Error(ErrorKind::DomainError, "exponent tuple arity mismatch");
  BigInt sum = 0, term;
  for (std::size_t i = 0; i < k.size(); ++i) {
    mpz_ui_pow_ui(term.get_mpz_t(), form.g, k[i]);
    sum += term * form.coeffs[i];
  }
  return sum;
}

std::vector<BigInt> power_table(std::uint64_t g, unsigned K) {
  std::vector<BigInt> pw(K + 1);
  pw[0] = 1;
  for (unsigned k = 1; k <= K; ++k) pw[k] = pw[k - 1] * g;
  return pw;
}

namespace {

std::uint64_t box_size(std::size_t m, unsigned K) { return sat_pow(std::uint64_t{K} + 1, static_cast<unsigned>(m)); }

/// Visits every tuple of {0..K}^len in lexicographic order with the first
/// `fixed.size()` coordinates pinned.
template <class Visit>
void for_each_tail(ExponentTuple& k, std::size_t from, unsigned K, Visit&& visit) {
  if (from == k.size()) {
    visit(k);
    return;
  }
  for (unsigned v = 0; v <= K; ++v) {
    k[from] = v;
    for_each_tail(k, from + 1, K, visit);
  }
}

/// Runs `body(lead, out)` for lead = 0..K and concatenates the per-lead
/// outputs in lead order, so the result is independent of scheduling.
template <class T, class Body>
std::vector<T> gather_by_lead(unsigned K, Exec exec, Body&& body) {
  std::vector<std::vector<T>> parts(K + 1);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long lead = 0; lead <= static_cast<long>(K); ++lead) {
      body(static_cast<unsigned>(lead), parts[lead]);
    }
  } else {
    for (unsigned lead = 0; lead <= K; ++lead) body(lead, parts[lead]);
  }
  std::vector<T> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

void accumulate(BigInt& acc, const SparseForm& form, const std::vector<BigInt>& pw,
                const ExponentTuple& k, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    auto c = form.coeffs[i];
    if (c > 0) {
      mpz_addmul_ui(acc.get_mpz_t(), pw[k[i]].get_mpz_t(), static_cast<unsigned long>(c));
    } else {
      mpz_submul_ui(acc.get_mpz_t(), pw[k[i]].get_mpz_t(), static_cast<unsigned long>(-c));
    }
  }
}

struct BigIntHash {
  std::size_t operator()(const BigInt& v) const {
    const mpz_srcptr z = v.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(z->_mp_size);
    const auto n = static_cast<std::size_t>(z->_mp_size < 0 ? -z->_mp_size : z->_mp_size);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

SquareCount count_brute(const SparseForm& form, unsigned K, Exec exec) {
  const auto m = form.arity();
  const auto pw = power_table(form.g, K);
  auto hits = gather_by_lead<SquareHit>(K, exec, [&](unsigned lead, std::vector<SquareHit>& out) {
    ExponentTuple k(m, 0);
    k[0] = lead;
    BigInt value, root;
    for_each_tail(k, 1, K, [&](const ExponentTuple& t) {
      value = 0;
      accumulate(value, form, pw, t, 0, m);
      if (is_perfect_square(value, &root)) out.push_back({t, value, root});
    });
  });
  SquareCount result;
  result.count = hits.size();
  result.zero_hits = static_cast<std::uint64_t>(
      std::count_if(hits.begin(), hits.end(), [](const SquareHit& h) { return h.value == 0; }));
  result.hits = std::move(hits);
  return result;
}

SquareCount count_meet_in_middle(const SparseForm& form, unsigned K, Exec exec) {
  const auto m = form.arity();
  const std::size_t left = (m + 1) / 2;
  const auto pw = power_table(form.g, K);

  // Right half: distinct partial sums -> every right tuple producing it.
  std::unordered_map<BigInt, std::vector<ExponentTuple>, BigIntHash> right;
  {
    ExponentTuple k(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == m) {
        BigInt partial = 0;
        accumulate(partial, form, pw, k, left, m);
        right[partial].emplace_back(k.begin() + static_cast<long>(left), k.end());
        return;
      }
      for (unsigned v = 0; v <= K; ++v) {
        k[i] = v;
        rec(i + 1);
      }
    };
    rec(left);
  }
  // iteration order of the hash map is irrelevant: hits are sorted below
  std::vector<const std::pair<const BigInt, std::vector<ExponentTuple>>*> groups;
  groups.reserve(right.size());
  for (const auto& entry : right) groups.push_back(&entry);

  auto hits = gather_by_lead<SquareHit>(K, exec, [&](unsigned lead, std::vector<SquareHit>& out) {
    ExponentTuple k(m, 0);
    k[0] = lead;
    BigInt partial, total, root;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == left) {
        partial = 0;
        accumulate(partial, form, pw, k, 0, left);
        for (const auto* group : groups) {
          total = partial + group->first;
          if (!is_perfect_square(total, &root)) continue;
          for (const auto& tail : group->second) {
            ExponentTuple full(k.begin(), k.begin() + static_cast<long>(left));
            full.insert(full.end(), tail.begin(), tail.end());
            out.push_back({std::move(full), total, root});
          }
        }
        return;
      }
      for (unsigned v = 0; v <= K; ++v) {
        k[i] = v;
        rec(i + 1);
      }
    };
    rec(1);
  });
  std::sort(hits.begin(), hits.end(),
            [](const SquareHit& a, const SquareHit& b) { return a.k < b.k; });
  SquareCount result;
  result.count = hits.size();
  result.zero_hits = static_cast<std::uint64_t>(
      std::count_if(hits.begin(), hits.end(), [](const SquareHit& h) { return h.value == 0; }));
  result.hits = std::move(hits);
  return result;
}

}  // namespace

SquareCount count_square_tuples(const SparseForm& form, unsigned K, const Budget& budget,
                                SquareCountMode mode, Exec exec) {
  budget.require(box_size(form.arity(), K), "count_square_tuples");
  return mode == SquareCountMode::brute_force ? count_brute(form, K, exec)
                                              : count_meet_in_middle(form, K, exec);
}

Representables count_representable_n(const SparseForm& form, std::uint64_t N, unsigned K,
                                     const Budget& budget, Exec exec) {
  budget.require(box_size(form.arity(), K), "count_representable_n");
  const auto m = form.arity();
  const auto pw = power_table(form.g, K);
  const BigInt limit = BigInt(N) * N;

  struct Found {
    std::uint64_t n;
    ExponentTuple k;
  };
  auto found = gather_by_lead<Found>(K, exec, [&](unsigned lead, std::vector<Found>& out) {
    ExponentTuple k(m, 0);
    k[0] = lead;
    BigInt value, root;
    for_each_tail(k, 1, K, [&](const ExponentTuple& t) {
      value = 0;
      accumulate(value, form, pw, t, 0, m);
      if (sgn(value) <= 0 || value > limit) return;
      if (is_perfect_square(value, &root)) out.push_back({root.get_ui(), t});
    });
  });
  // found is in lexicographic tuple order; keep the first tuple per n
  std::map<std::uint64_t, ExponentTuple> first;
  for (auto& f : found) first.try_emplace(f.n, std::move(f.k));
  Representables r;
  for (auto& [n, k] : first) {
    r.ns.push_back(n);
    r.witnesses.push_back(std::move(k));
  }
  return r;
}

namespace {

unsigned nonzero_digits(BigInt v, std::uint64_t g) {
  unsigned count = 0;
  while (sgn(v) != 0) {
    if (mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), g) != 0) ++count;
  }
  return count;
}

unsigned nonzero_digits(std::uint64_t v, std::uint64_t g) {
  unsigned count = 0;
  for (; v != 0; v /= g) count += (v % g) != 0;
  return count;
}

}  // namespace

std::uint64_t count_sparse_squares_scan(std::uint64_t g, unsigned m, unsigned K,
                                        const Budget& budget) {
  if (K < 1) throw Error(ErrorKind::DomainError, "count_sparse_squares needs K >= 1");
  BigInt top;
  mpz_ui_pow_ui(top.get_mpz_t(), g, K);
  BigInt n_max;
  mpz_sqrt(n_max.get_mpz_t(), BigInt(top - 1).get_mpz_t());
  if (!mpz_fits_ulong_p(n_max.get_mpz_t())) {
    budget.require(UINT64_MAX, "count_sparse_squares scan");
  }
  const std::uint64_t nmax = n_max.get_ui();
  budget.require(nmax, "count_sparse_squares scan");

  std::uint64_t count = 0;
  if (nmax <= 0xFFFFFFFFULL) {
    for (std::uint64_t n = 1; n <= nmax; ++n) count += nonzero_digits(n * n, g) <= m;
  } else {
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      BigInt sq = BigInt(n) * n;
      count += nonzero_digits(sq, g) <= m;
    }
  }
  return count;
}

std::uint64_t count_sparse_squares_patterns(std::uint64_t g, unsigned m, unsigned K,
                                            const Budget& budget) {
  if (K < 1) throw Error(ErrorKind::DomainError, "count_sparse_squares needs K >= 1");
  // sum_{j=1..m} C(K, j) (g-1)^j
  std::uint64_t states = 0, binom = 1;
  for (unsigned j = 1; j <= std::min(m, K); ++j) {
    binom = sat_mul(binom, K - j + 1) / j;
    states = std::min<std::uint64_t>(UINT64_MAX - 1, states + sat_mul(binom, sat_pow(g - 1, j)));
  }
  budget.require(states, "count_sparse_squares patterns");

  const auto pw = power_table(g, K);
  std::uint64_t count = 0;
  BigInt value = 0;
  // choose positions in increasing order, each with a digit in 1..g-1
  std::function<void(unsigned, unsigned)> rec = [&](unsigned next_pos, unsigned used) {
    if (used > 0 && is_perfect_square(value)) ++count;
    if (used == m) return;
    for (unsigned pos = next_pos; pos < K; ++pos) {
      for (std::uint64_t d = 1; d < g; ++d) {
        mpz_addmul_ui(value.get_mpz_t(), pw[pos].get_mpz_t(), d);
        rec(pos + 1, used + 1);
        mpz_submul_ui(value.get_mpz_t(), pw[pos].get_mpz_t(), d);
      }
    }
  };
  rec(0, 0);
  return count;
}

std::uint64_t count_sparse_squares(std::uint64_t g, unsigned m, unsigned K, const Budget& budget) {
  const auto by_scan = count_sparse_squares_scan(g, m, K, budget);
  const auto by_pattern = count_sparse_squares_patterns(g, m, K, budget);
  if (by_scan != by_pattern) {
    throw std::logic_error("count_sparse_squares: scan gave " + std::to_string(by_scan) +
                           ", pattern enumeration gave " + std::to_string(by_pattern));
  }
  return by_scan;
}

LowerBoundFamily lower_bound_family(std::uint64_t g, unsigned s, const BigInt& N) {
  if (s < 1) throw Error(ErrorKind::DomainError, "lower_bound_family needs s >= 1");
  LowerBoundFamily fam;
  const BigInt s2 = BigInt(s) * s;
  if (s2 > N) return fam;
  // largest h with s^2 g^(2h) <= N
  BigInt scaled = s2;
  while (scaled * g * g <= N) {
    scaled *= g * g;
    ++fam.h_max;
  }
  const auto pw = power_table(g, fam.h_max);
  std::vector<unsigned> h(s, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned lo) {
    if (i == s) {
      BigInt base = 0;
      for (auto hi : h) base += pw[hi];
      std::map<unsigned, unsigned> expanded;
      for (auto a : h) {
        for (auto b : h) ++expanded[a + b];
      }
      std::vector<unsigned> pattern;
      unsigned total = 0;
      for (auto [e, c] : expanded) {
        pattern.push_back(c);
        total += c;
      }
      if (total != s * s) throw std::logic_error("lower_bound_family: expansion weight mismatch");
      ++fam.pattern_multiplicity[pattern];
      fam.entries.push_back({base * base, h});
      return;
    }
    for (unsigned v = lo; v <= fam.h_max; ++v) {
      h[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, 0);
  std::sort(fam.entries.begin(), fam.entries.end(), [](const auto& a, const auto& b) {
    return a.square != b.square ? a.square < b.square : a.h < b.h;
  });
  return fam;
}

mpq_class gamma_m(std::uint64_t m) {
  if (m < 3) throw Error(ErrorKind::DomainError, "gamma_m is defined for m >= 3");
  if (m == 3) return mpq_class(677, 1969);
  mpq_class g(BigInt(677) * m, BigInt(1323) * m + 1354);
  g.canonicalize();
  return g;
}

std::uint64_t count_zero_residues(const SparseForm& form, unsigned K, std::uint64_t ell) {
  if (ell < 2) throw Error(ErrorKind::DomainError, "modulus must be >= 2");
  const auto m = form.arity();
  if (box_size(m, K) == UINT64_MAX) {
    throw Error(ErrorKind::WorkloadExceeded, "box size overflows 64-bit counters");
  }
  // g^k mod ell: preperiod + cycle, found by walking until a residue repeats
  std::vector<std::uint64_t> seq;
  std::vector<std::int64_t> first_seen(ell, -1);
  std::uint64_t r = 1 % ell;
  std::uint64_t pre = 0, period = 0;
  for (std::uint64_t k = 0;; ++k) {
    if (k > K) {
      pre = seq.size();
      period = 0;
      break;
    }
    if (first_seen[r] >= 0) {
      pre = static_cast<std::uint64_t>(first_seen[r]);
      period = k - pre;
      break;
    }
    first_seen[r] = static_cast<std::int64_t>(k);
    seq.push_back(r);
    r = mulmod(r, form.g % ell, ell);
  }
  // how many k in [0, K] land on seq[j]
  std::vector<std::uint64_t> mult(seq.size(), 0);
  for (std::uint64_t j = 0; j < seq.size(); ++j) {
    if (j < pre || period == 0) {
      mult[j] = j <= K ? 1 : 0;
    } else {
      mult[j] = j <= K ? (K - j) / period + 1 : 0;
    }
  }
  auto term_hist = [&](std::int64_t c) {
    std::vector<std::uint64_t> h(ell, 0);
    const std::uint64_t cm = static_cast<std::uint64_t>(((c % static_cast<std::int64_t>(ell)) +
                                                         static_cast<std::int64_t>(ell)) %
                                                        static_cast<std::int64_t>(ell));
    for (std::uint64_t j = 0; j < seq.size(); ++j) h[mulmod(cm, seq[j], ell)] += mult[j];
    return h;
  };
  // distribution of partial sums mod ell
  std::vector<std::uint64_t> dist(ell, 0);
  dist[0] = 1;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    auto h = term_hist(form.coeffs[i]);
    std::vector<std::uint64_t> next(ell, 0);
    for (std::uint64_t a = 0; a < ell; ++a) {
      if (h[a] == 0) continue;
      for (std::uint64_t s = 0; s < ell; ++s) {
        if (dist[s] != 0) next[(s + a) % ell] += dist[s] * h[a];
      }
    }
    dist = std::move(next);
  }
  auto last = term_hist(form.coeffs[m - 1]);
  std::uint64_t total = 0;
  for (std::uint64_t a = 0; a < ell; ++a) total += last[a] * dist[(ell - a) % ell];
  return total;
}

}  // namespace sparsity
