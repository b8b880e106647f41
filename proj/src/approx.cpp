#include "sparsity/approx.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "sparsity/error.hpp"

namespace sparsity {

double GaussRat::abs() const { return std::sqrt(norm().get_d()); }

GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
GaussRat operator*(const GaussRat& a, const GaussRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

mpq_class parse_rational(std::string_view text) {
  auto fail = [&]() -> mpq_class {
    throw Error(ErrorKind::ConfigError, "malformed number '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  std::string s(text);
  bool neg = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  if (body.empty()) return fail();
  mpq_class q;
  const auto slash = body.find('/');
  const auto dot = body.find('.');
  auto digits = [](const std::string& d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  if (slash != std::string::npos) {
    const auto num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) return fail();
    q = mpq_class(mpz_class(num, 10), mpz_class(den, 10));
    if (q.get_den() == 0) return fail();
  } else if (dot != std::string::npos) {
    auto whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (frac.empty() || !digits(whole) || !digits(frac)) return fail();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    q = mpq_class(mpz_class(whole + frac, 10), den);
  } else {
    if (!digits(body)) return fail();
    q = mpq_class(mpz_class(body, 10));
  }
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

GaussRat parse_gauss(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s += ch;
  }
  if (s.empty()) throw Error(ErrorKind::ConfigError, "empty complex number");
  if (s.back() != 'i') return {parse_rational(s), 0};
  s.pop_back();
  // split "re(+|-)im" at the last sign that is not the leading one
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  }
  auto imag = [](std::string part) {
    if (part.empty() || part == "+") return mpq_class(1);
    if (part == "-") return mpq_class(-1);
    return parse_rational(part);
  };
  if (split == std::string::npos) return {0, imag(s)};
  return {parse_rational(s.substr(0, split)), imag(s.substr(split))};
}

std::string to_string(const GaussRat& z) {
  if (sgn(z.im) == 0) return z.re.get_str();
  std::string out = sgn(z.re) == 0 ? "" : z.re.get_str();
  if (sgn(z.im) > 0 && !out.empty()) out += "+";
  out += z.im.get_str() + "i";
  return out;
}

GaussRat ApproxInstance::eval_q(std::uint64_t n) const {
  GaussRat acc;
  const GaussRat x{mpq_class(mpz_class(n))};
  for (std::size_t i = q_coeffs.size(); i-- > 0;) acc = acc * x + q_coeffs[i];
  return acc;
}

void ApproxInstance::validate() const {
  if (q_coeffs.empty()) throw Error(ErrorKind::DegenerateInstance, "Q has no coefficients");
  if (q_coeffs.back().is_zero()) {
    throw Error(ErrorKind::DomainError, "leading coefficient of Q must be non-zero");
  }
  if (degree() < 1) throw Error(ErrorKind::DegenerateInstance, "Q is constant");
  if (lambda.norm() <= 1) throw Error(ErrorKind::DegenerateInstance, "|lambda| <= 1");
  if (c.empty()) throw Error(ErrorKind::DomainError, "at least one coefficient c_i is required");
  for (const auto& ci : c) {
    if (ci.is_zero()) throw Error(ErrorKind::DomainError, "coefficients c_i must be non-zero");
  }
  if (sgn(B) < 0) throw Error(ErrorKind::DomainError, "B must be >= 0");
}

namespace {

constexpr double kMargin = 1e-12;

unsigned gap_threshold(const std::vector<GaussRat>& c, double lambda_abs) {
  double lower = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) lower += c[i].abs();
  const double top = c.back().abs();
  const double target = (2 * lower + top) * (1 + kMargin);
  unsigned delta = 1;
  while (top * std::pow(lambda_abs, delta) < target) ++delta;
  return delta;
}

}  // namespace

InstanceConstants instance_constants(const ApproxInstance& inst) {
  inst.validate();
  const auto d = inst.degree();
  const double ad = inst.q_coeffs[d].abs();
  double r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < d; ++i) {
    r1 += inst.q_coeffs[i].abs();
    r2 += static_cast<double>(i) * inst.q_coeffs[i].abs();
  }
  InstanceConstants k;
  k.n0 = static_cast<std::uint64_t>(std::max({1.0, std::ceil(r1 / ad * (1 + kMargin)),
                                              std::ceil(r2 / ad * (1 + kMargin))}));
  const double twoB = 2 * inst.B.get_d();
  while (ad * std::pow(2.0, static_cast<double>(d) - 2) * std::pow(static_cast<double>(k.n0), d) <=
         twoB * (1 + kMargin)) {
    ++k.n0;
  }
  const double lam = inst.lambda.abs();
  k.delta = gap_threshold(inst.c, lam);
  double cmin = inst.c[0].abs();
  for (const auto& ci : inst.c) cmin = std::min(cmin, ci.abs());
  const double A = (4 * ad + twoB) / cmin;
  k.b0 = std::max(std::log(A), static_cast<double>(d)) / std::log(lam);
  return k;
}

std::uint64_t verify_n0_on_grid(const ApproxInstance& inst, std::uint64_t n0, std::uint64_t span) {
  const auto d = inst.degree();
  const mpq_class ad2 = inst.q_coeffs[d].norm();
  const mpq_class fourB2 = 4 * inst.B * inst.B;
  std::uint64_t failures = 0;
  for (std::uint64_t n = n0; n <= n0 + span; ++n) {
    mpz_class nd;
    mpz_ui_pow_ui(nd.get_mpz_t(), n, 2 * d);
    if (inst.eval_q(n).norm() > 4 * ad2 * nd) ++failures;
  }
  for (std::uint64_t n1 = n0; n1 <= n0 + span; ++n1) {
    for (std::uint64_t n2 = n0; n2 <= n0 + span; ++n2) {
      if ((inst.eval_q(n1 + n2) - inst.eval_q(n1)).norm() <= fourB2) ++failures;
    }
  }
  return failures;
}

namespace {

using Emit = std::function<void(std::uint64_t n, const std::vector<std::uint64_t>& k)>;

class Searcher {
 public:
  Searcher(const ApproxInstance& inst, std::uint64_t N, const InstanceConstants& k,
           const Budget& budget)
      : inst_(inst), N_(N), consts_(k), budget_(budget), B2_(inst.B * inst.B) {
    values_.reserve(N);
    for (std::uint64_t n = 1; n <= N; ++n) values_.push_back(inst.eval_q(n));
    order_.resize(N);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return values_[a].re != values_[b].re ? values_[a].re < values_[b].re : a < b;
    });
    mpq_class qmax2 = 0;
    for (const auto& v : values_) qmax2 = std::max(qmax2, v.norm());
    qmax_ = std::sqrt(qmax2.get_d());
    lambda_abs_ = inst.lambda.abs();
    powers_.push_back(GaussRat{1});
  }

  std::uint64_t tuples() const { return tuples_; }

  /// Largest exponent worth trying for a dominant top coefficient c.
  std::uint64_t cap_for(const GaussRat& c) const {
    const double from_q =
        std::log(2 * (qmax_ + inst_.B.get_d()) / c.abs()) / std::log(lambda_abs_);
    const double from_b0 = consts_.b0 * (1 + std::log(static_cast<double>(N_)));
    const double cap = std::max({0.0, from_q, from_b0});
    return static_cast<std::uint64_t>(std::floor(cap)) + 1;
  }

  void solve(const std::vector<GaussRat>& c, std::uint64_t k_lo, const Emit& emit) {
    const auto m = c.size();
    if (m == 0) {
      lookup(GaussRat{}, [&](std::uint64_t n) { emit(n, {}); });
      return;
    }
    const auto cap = cap_for(c.back());
    if (m == 1) {
      for (std::uint64_t k = k_lo; k <= cap; ++k) {
        count_tuple();
        const auto v = c[0] * power(k);
        lookup(v, [&](std::uint64_t n) { emit(n, {k}); });
      }
      return;
    }
    const unsigned delta = gap_threshold(c, lambda_abs_);
    // top gap >= delta: the top term dominates, so k_m <= cap
    std::vector<std::uint64_t> k(m);
    std::function<void(std::size_t, std::uint64_t, const GaussRat&)> lower =
        [&](std::size_t i, std::uint64_t from, const GaussRat& partial) {
          if (i + 1 == m) {
            count_tuple();
            const auto v = partial + c[m - 1] * power(k[m - 1]);
            lookup(v, [&](std::uint64_t n) { emit(n, k); });
            return;
          }
          for (std::uint64_t e = from; e + delta <= k[m - 1]; ++e) {
            k[i] = e;
            lower(i + 1, e, partial + c[i] * power(e));
          }
        };
    for (std::uint64_t top = k_lo + delta; top <= cap; ++top) {
      k[m - 1] = top;
      lower(0, k_lo, GaussRat{});
    }
    // top gap h < delta: merge c_{m-1} + c_m lambda^h and recurse
    for (unsigned h = 0; h < delta; ++h) {
      const auto merged = c[m - 2] + c[m - 1] * power(h);
      std::vector<GaussRat> rest(c.begin(), c.end() - 2);
      if (!merged.is_zero()) {
        rest.push_back(merged);
        solve(rest, k_lo, [&](std::uint64_t n, const std::vector<std::uint64_t>& kk) {
          auto full = kk;
          full.push_back(kk.back() + h);
          emit(n, full);
        });
      } else {
        solve(rest, k_lo, [&](std::uint64_t n, const std::vector<std::uint64_t>& kk) {
          auto full = kk;
          const auto base = kk.empty() ? k_lo : kk.back();
          full.push_back(base);
          full.push_back(base + h);
          emit(n, full);
        });
      }
    }
  }

  double residual(std::uint64_t n, const std::vector<GaussRat>& c,
                  const std::vector<std::uint64_t>& k) {
    GaussRat v;
    for (std::size_t i = 0; i < c.size(); ++i) v = v + c[i] * power(k[i]);
    return (values_[n - 1] - v).abs();
  }

 private:
  const GaussRat& power(std::uint64_t k) {
    while (powers_.size() <= k) powers_.push_back(powers_.back() * inst_.lambda);
    return powers_[k];
  }

  void count_tuple() {
    if (++tuples_ > budget_.max_states) {
      budget_.require(tuples_, "search_representations");
    }
  }

  template <class F>
  void lookup(const GaussRat& v, F&& found) {
    const mpq_class lo = v.re - inst_.B, hi = v.re + inst_.B;
    auto it = std::lower_bound(order_.begin(), order_.end(), lo,
                               [&](std::size_t idx, const mpq_class& x) { return values_[idx].re < x; });
    std::uint64_t large = 0;
    for (; it != order_.end() && values_[*it].re <= hi; ++it) {
      if ((values_[*it] - v).norm() > B2_) continue;
      const std::uint64_t n = *it + 1;
      if (n >= consts_.n0 && ++large > consts_.n0) {
        throw std::logic_error("more than N0 candidates with n >= N0 for one tuple");
      }
      found(n);
    }
  }

  const ApproxInstance& inst_;
  std::uint64_t N_;
  InstanceConstants consts_;
  Budget budget_;
  mpq_class B2_;
  std::vector<GaussRat> values_;  // Q(1..N)
  std::vector<std::size_t> order_;  // indices sorted by Re Q
  double qmax_ = 0;
  double lambda_abs_ = 0;
  std::vector<GaussRat> powers_;
  std::uint64_t tuples_ = 0;
};

}  // namespace

SearchResult search_representations(const ApproxInstance& inst, std::uint64_t N,
                                    std::uint64_t k_lo, const Budget& budget) {
  if (N < 2) throw Error(ErrorKind::DomainError, "search needs N >= 2");
  SearchResult result;
  result.constants = instance_constants(inst);
  Searcher searcher(inst, N, result.constants, budget);

  const auto m = inst.c.size();
  // class id per coefficient; permuting ids enumerates distinct arrangements
  std::vector<GaussRat> distinct = inst.c;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> ids;
  for (const auto& ci : inst.c) {
    ids.push_back(static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), ci) -
                                           distinct.begin()));
  }
  std::sort(ids.begin(), ids.end());

  std::map<std::uint64_t, std::vector<std::uint64_t>> best;
  std::uint64_t cap = 0;
  do {
    std::vector<GaussRat> arranged;
    for (auto id : ids) arranged.push_back(distinct[id]);
    cap = std::max(cap, searcher.cap_for(arranged.back()));
    // rank position -> original coefficient index (equal coefficients in order)
    std::vector<std::size_t> original(m);
    std::vector<bool> used(m, false);
    for (std::size_t pos = 0; pos < m; ++pos) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!used[i] && inst.c[i] == arranged[pos]) {
          original[pos] = i;
          used[i] = true;
          break;
        }
      }
    }
    searcher.solve(arranged, k_lo, [&](std::uint64_t n, const std::vector<std::uint64_t>& k) {
      std::vector<std::uint64_t> kk(m);
      for (std::size_t pos = 0; pos < m; ++pos) kk[original[pos]] = k[pos];
      auto [it, inserted] = best.try_emplace(n, kk);
      if (!inserted && kk < it->second) it->second = kk;
    });
  } while (std::next_permutation(ids.begin(), ids.end()));

  for (auto& [n, k] : best) {
    result.found.push_back({n, k, searcher.residual(n, inst.c, k)});
  }
  result.exponent_cap = cap;
  result.tuples_examined = searcher.tuples();
  result.log_ratio = static_cast<double>(result.found.size()) /
                     std::pow(std::log(static_cast<double>(N)), static_cast<double>(m));
  return result;
}

}  // namespace sparsity
