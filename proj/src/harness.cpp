#include "sparsity/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "sparsity/approx.hpp"
#include "sparsity/arith.hpp"
#include "sparsity/char_sums.hpp"
#include "sparsity/error.hpp"
#include "sparsity/example21.hpp"
#include "sparsity/format.hpp"
#include "sparsity/sieve_set.hpp"

namespace sparsity {

namespace {

const std::vector<std::string> kGlobalKeys = {"mode", "seed", "budget", "out", "format"};

const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::vector<std::string> sum_keys = {
      "a", "alpha", "b", "c", "chi", "d", "denominator", "ell", "g", "K", "L",
      "q", "r", "root", "slack", "theta", "z"};
  static const std::map<std::string, std::vector<std::string>> table = [] {
    std::map<std::string, std::vector<std::string>> t = {
        {"sieve", {"g", "z", "alpha", "c1"}},
        {"count-squares", {"g", "c", "K", "N", "method"}},
        {"count-sparse", {"g", "m", "K"}},
        {"approx-search", {"q", "lambda", "c", "B", "N", "k_lo"}},
        {"example-21", {"n", "precision_bits", "stability"}},
        {"sieve-stats", {"g", "c", "K", "L", "z", "alpha", "c1"}},
        {"growth-table", {"g", "c", "N_grid"}},
    };
    t["char-sum"] = sum_keys;
    t["char-sum"].push_back("sum");
    t["verify-lemma"] = sum_keys;
    t["verify-lemma"].insert(t["verify-lemma"].end(), {"lemma", "grid", "c1"});
    return t;
  }();
  return table;
}

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& m) : m_(m) {}

  bool has(const std::string& key) const { return m_.count(key) != 0; }

  const std::string& str(const std::string& key) const {
    auto it = m_.find(key);
    if (it == m_.end()) throw Error(ErrorKind::ConfigError, "missing key '" + key + "'");
    return it->second;
  }
  std::string str(const std::string& key, const std::string& def) const {
    return has(key) ? str(key) : def;
  }

  std::uint64_t u64(const std::string& key) const {
    const auto& s = str(key);
    try {
      std::size_t pos = 0;
      if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad value for key '" + key + "': '" + s + "'");
    }
  }
  std::uint64_t u64(const std::string& key, std::uint64_t def) const { return has(key) ? u64(key) : def; }

  std::int64_t i64_of(const std::string& key, const std::string& s) const {
    try {
      std::size_t pos = 0;
      const auto v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad value for key '" + key + "': '" + s + "'");
    }
  }
  std::int64_t i64(const std::string& key) const { return i64_of(key, str(key)); }

  double real(const std::string& key) const {
    const auto& s = str(key);
    try {
      std::size_t pos = 0;
      const auto v = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad value for key '" + key + "': '" + s + "'");
    }
  }
  double real(const std::string& key, double def) const { return has(key) ? real(key) : def; }

  bool flag(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& s = str(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw Error(ErrorKind::ConfigError, "bad value for key '" + key + "': '" + s + "'");
  }

  std::vector<std::string> items(const std::string& key) const {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : str(key)) {
      if (ch == ',' || ch == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  std::vector<std::int64_t> i64_list(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const auto& s : items(key)) out.push_back(i64_of(key, s));
    return out;
  }

  std::vector<std::uint64_t> u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& s : items(key)) {
      const auto v = i64_of(key, s);
      if (v < 0) throw Error(ErrorKind::ConfigError, "negative value in key '" + key + "'");
      out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
  }

 private:
  const std::map<std::string, std::string>& m_;
};

std::string list_cell(const std::vector<std::int64_t>& xs) { return join(xs, " "); }
std::string list_cell(const std::vector<std::uint64_t>& xs) { return join(xs, " "); }

Value opt(const std::optional<double>& v) {
  return v ? Value(*v) : Value(std::monostate{});
}

unsigned as_unsigned(std::uint64_t v, const char* key) {
  if (v > 1'000'000) throw Error(ErrorKind::ConfigError, std::string("value of '") + key + "' is too large");
  return static_cast<unsigned>(v);
}

/// "key=value;..." in the given key order, lists space separated.
class ParamString {
 public:
  template <class T>
  ParamString& add(const std::string& key, const T& v) {
    if (!s_.empty()) s_ += ";";
    s_ += key + "=";
    if constexpr (std::is_same_v<T, std::vector<std::int64_t>> ||
                  std::is_same_v<T, std::vector<std::uint64_t>>) {
      s_ += join(v, " ");
    } else if constexpr (std::is_same_v<T, std::string>) {
      s_ += v;
    } else {
      s_ += std::to_string(v);
    }
    return *this;
  }
  const std::string& str() const { return s_; }

 private:
  std::string s_;
};

std::uint64_t next_primitive_root(std::uint64_t p, std::uint64_t after) {
  for (std::uint64_t g = after + 1; g < p; ++g) {
    if (mul_order(g, p) == p - 1) return g;
  }
  return after;
}

// ---- individual checks ---------------------------------------------------

struct Evaluation {
  Complex value;
  LemmaCheck check;
};

Evaluation eval_diag(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                     const Budget& budget) {
  const auto s = quad_diag_sum(q, d, a, budget);
  Evaluation e;
  e.value = static_cast<double>(s.value);
  e.check.lemma = "diag-bound";
  e.check.params = ParamString().add("q", q).add("d", d).add("a", a).str();
  e.check.value = std::abs(static_cast<double>(s.value));
  e.check.bound = s.bound;
  e.check.ratio = e.check.value / s.bound;
  e.check.pass = s.within_bound;
  return e;
}

Evaluation eval_twisted(std::uint64_t q, unsigned d, const std::vector<std::int64_t>& a,
                        const std::vector<std::int64_t>& chi, std::uint64_t root, double slack,
                        const Budget& budget) {
  const auto s = twisted_diag_sum(q, d, a, chi, root, budget);
  Evaluation e;
  e.value = s.value;
  e.check.lemma = "twisted-bound";
  e.check.params =
      ParamString().add("q", q).add("d", d).add("a", a).add("chi", chi).add("root", s.root).str();
  e.check.value = std::abs(s.value);
  e.check.bound = s.reference;
  e.check.ratio = s.ratio;
  e.check.pass = s.ratio <= slack;
  return e;
}

Evaluation eval_complete(std::uint64_t ell, std::uint64_t theta, const std::vector<std::int64_t>& a,
                         const std::vector<std::int64_t>& b, double slack, const Budget& budget) {
  const auto s = s_ell(ell, theta, a, b, slack, budget);
  // the diagonal-form route with two primitive roots must reproduce S_ell
  const auto r1 = primitive_root(ell);
  const auto r2 = next_primitive_root(ell, r1);
  const bool roots_agree = std::abs(s_ell_via_diagonal(ell, theta, a, b, r1) - s.sum.value) <= kComplexTol &&
                           std::abs(s_ell_via_diagonal(ell, theta, a, b, r2) - s.sum.value) <= kComplexTol;
  Evaluation e;
  e.value = s.sum.value;
  e.check.lemma = "complete-sum";
  e.check.params = ParamString().add("ell", ell).add("theta", theta).add("a", a).add("b", b).str();
  e.check.value = std::abs(s.sum.value);
  if (s.explicit_bound) {
    e.check.bound = *s.explicit_bound;
    e.check.ratio = e.check.value / *s.explicit_bound;
  } else {
    e.check.bound = std::pow(static_cast<double>(ell), (static_cast<double>(a.size()) + 1) / 2);
    e.check.ratio = s.generic_ratio;
  }
  e.check.pass = s.generic_pass && s.explicit_pass && roots_agree;
  return e;
}

Evaluation eval_product(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                        const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                        const Budget& budget) {
  const auto p = product_sum(ell, r, theta, a, b, budget);
  Evaluation e;
  e.value = p.S.value;
  e.check.lemma = "product-formula";
  e.check.params =
      ParamString().add("ell", ell).add("r", r).add("theta", theta).add("a", a).add("b", b).str();
  e.check.value = p.discrepancy;
  e.check.bound = p.S.exact ? 0.0 : kComplexTol;
  e.check.pass = p.agree;
  return e;
}

Evaluation eval_incomplete(std::uint64_t ell, std::uint64_t r, std::uint64_t theta,
                           const std::vector<std::int64_t>& a, const std::vector<std::uint64_t>& L,
                           double slack, const Budget& budget) {
  const auto s = incomplete_sum(ell, r, theta, a, L, slack, budget);
  Evaluation e;
  e.value = static_cast<double>(s.value);
  e.check.lemma = "incomplete-sum";
  e.check.params =
      ParamString().add("ell", ell).add("r", r).add("theta", theta).add("a", a).add("L", L).str();
  e.check.value = std::abs(static_cast<double>(s.value));
  e.check.bound = s.bound;
  e.check.ratio = s.ratio;
  e.check.pass = s.pass;
  return e;
}

Evaluation eval_korobov(std::int64_t a, std::uint64_t theta, std::uint64_t ell,
                        KorobovDenominator denom) {
  const auto s = korobov_sum(a, theta, ell, denom);
  Evaluation e;
  e.value = s.value;
  e.check.lemma = "korobov";
  e.check.params = ParamString()
                       .add("a", a)
                       .add("theta", theta)
                       .add("ell", ell)
                       .add("denominator", std::string(denom == KorobovDenominator::ell ? "ell" : "tau"))
                       .str();
  e.check.value = s.magnitude;
  e.check.bound = s.bound;
  e.check.ratio = s.magnitude / s.bound;
  e.check.pass = s.pass;
  return e;
}

Evaluation eval_congruence(const SparseForm& form, unsigned K, std::uint64_t ell,
                           std::optional<SieveContext> ctx, double slack, bool trivial_only) {
  const auto t = t_m_count(form, K, ell, ctx, slack);
  Evaluation e;
  e.value = static_cast<double>(t.count);
  e.check.lemma = trivial_only ? "trivial-congruence" : "congruence-count";
  ParamString ps;
  ps.add("c", form.coeffs).add("g", form.g).add("K", K).add("ell", ell);
  if (ctx && !trivial_only) ps.add("z", fmt_double(ctx->z)).add("alpha", fmt_double(ctx->alpha));
  e.check.params = ps.str();
  e.check.value = static_cast<double>(t.count);
  if (trivial_only) {
    if (t.trivial_bound) {
      e.check.bound = *t.trivial_bound;
      e.check.ratio = e.check.value / *t.trivial_bound;
    }
    e.check.pass = t.trivial_pass;
    return e;
  }
  if (t.asymptotic_bound) {
    e.check.bound = *t.asymptotic_bound;
    e.check.ratio = t.asymptotic_ratio;
  } else if (t.explicit_bound) {
    e.check.bound = *t.explicit_bound;
    e.check.ratio = e.check.value / *t.explicit_bound;
  }
  e.check.pass = t.trivial_pass && t.explicit_pass && t.asymptotic_pass;
  return e;
}

Evaluation eval_sieve_identity(const SparseForm& form, unsigned K, const SieveSet& set,
                               const Budget& budget) {
  const auto st = sieve_statistics(form, K, set, budget);
  Evaluation e;
  e.value = static_cast<double>(st.identity_failures);
  e.check.lemma = "sieve-identity";
  e.check.params =
      ParamString().add("c", form.coeffs).add("g", form.g).add("K", K).add("L", set.ells()).str();
  e.check.value = static_cast<double>(st.identity_failures);
  e.check.bound = 0.0;
  e.check.pass = st.identity_failures == 0 && st.split_exact;
  return e;
}

SieveSet sieve_from_params(const Params& p, std::uint64_t g) {
  if (p.has("L")) {
    return make_sieve_set(g, p.u64_list("L"), p.real("z", 0),
                          p.real("alpha", SieveSet::kDefaultAlpha));
  }
  return build_sieve_set(g, p.real("z"), p.real("alpha", SieveSet::kDefaultAlpha),
                         p.real("c1", SieveSet::kDefaultC1));
}

Evaluation evaluate(const std::string& lemma, const Params& p, const Budget& budget) {
  const double slack = p.real("slack", kDefaultSlack);
  if (lemma == "diag-bound") {
    return eval_diag(p.u64("q"), as_unsigned(p.u64("d"), "d"), p.i64_list("a"), budget);
  }
  if (lemma == "twisted-bound") {
    return eval_twisted(p.u64("q"), as_unsigned(p.u64("d"), "d"), p.i64_list("a"),
                        p.i64_list("chi"), p.u64("root", 0), slack, budget);
  }
  auto b_or_zero = [&](std::size_t m) {
    return p.has("b") ? p.i64_list("b") : std::vector<std::int64_t>(m, 0);
  };
  if (lemma == "complete-sum") {
    const auto a = p.i64_list("a");
    return eval_complete(p.u64("ell"), p.u64("theta"), a, b_or_zero(a.size()), slack, budget);
  }
  if (lemma == "product-formula") {
    const auto a = p.i64_list("a");
    return eval_product(p.u64("ell"), p.u64("r"), p.u64("theta"), a, b_or_zero(a.size()), budget);
  }
  if (lemma == "incomplete-sum") {
    return eval_incomplete(p.u64("ell"), p.u64("r"), p.u64("theta"), p.i64_list("a"),
                           p.u64_list("L"), slack, budget);
  }
  if (lemma == "korobov") {
    const auto denom = p.str("denominator", "ell");
    if (denom != "ell" && denom != "tau") {
      throw Error(ErrorKind::ConfigError, "bad value for key 'denominator': '" + denom + "'");
    }
    return eval_korobov(p.i64("a"), p.u64("theta"), p.u64("ell"),
                        denom == "ell" ? KorobovDenominator::ell : KorobovDenominator::tau);
  }
  if (lemma == "congruence-count" || lemma == "trivial-congruence") {
    const SparseForm form(p.u64("g", 2), p.i64_list("c"));
    std::optional<SieveContext> ctx;
    if (p.has("z")) ctx = SieveContext{p.real("z"), p.real("alpha", SieveSet::kDefaultAlpha)};
    return eval_congruence(form, as_unsigned(p.u64("K"), "K"), p.u64("ell"), ctx, slack,
                           lemma == "trivial-congruence");
  }
  if (lemma == "sieve-identity") {
    const SparseForm form(p.u64("g", 2), p.i64_list("c"));
    return eval_sieve_identity(form, as_unsigned(p.u64("K"), "K"), sieve_from_params(p, form.g),
                               budget);
  }
  throw Error(ErrorKind::ConfigError, "unknown lemma '" + lemma + "'");
}

// ---- grids ---------------------------------------------------------------

std::vector<std::uint64_t> odd_primes_below(std::uint64_t n) { return primes_in(3, n - 1); }

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Non-zero values in [-3, 3] coprime to `modulus`.
std::int64_t draw_unit(std::mt19937_64& rng, std::uint64_t modulus) {
  for (;;) {
    const auto v = draw(rng, -3, 3);
    if (v != 0 && gcd_u64(static_cast<std::uint64_t>(v < 0 ? -v : v), modulus) == 1) return v;
  }
}

std::vector<LemmaCheck> grid_diag(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  for (std::uint64_t q : {3, 5, 7, 11, 13}) {
    for (unsigned d : {2u, 4u}) {
      for (std::size_t m = 1; m <= 3; ++m) {
        for (int rep = 0; rep < 20; ++rep) {
          std::vector<std::int64_t> a(m);
          for (auto& ai : a) ai = draw(rng, 1, static_cast<std::int64_t>(q) - 1);
          out.push_back(eval_diag(q, d, a, budget).check);
        }
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_twisted(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  for (std::uint64_t q : {3, 5, 7, 11, 13}) {
    for (unsigned d : {2u, 4u}) {
      for (std::size_t m = 1; m <= 2; ++m) {
        for (int rep = 0; rep < 5; ++rep) {
          std::vector<std::int64_t> a(m), chi(m);
          for (auto& ai : a) ai = draw(rng, 1, static_cast<std::int64_t>(q) - 1);
          for (auto& ci : chi) ci = draw(rng, 0, static_cast<std::int64_t>(q) - 2);
          out.push_back(eval_twisted(q, d, a, chi, 0, kDefaultSlack, budget).check);
        }
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_complete(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  for (auto ell : odd_primes_below(50)) {
    for (std::uint64_t theta : {2, 3}) {
      if (theta % ell == 0) continue;
      const auto t = mul_order(theta, ell);
      for (std::size_t m = 1; m <= 2; ++m) {
        std::vector<std::int64_t> a(m), b(m, 0);
        for (auto& ai : a) ai = draw_unit(rng, ell);
        out.push_back(eval_complete(ell, theta, a, b, kDefaultSlack, budget).check);
        for (auto& bi : b) bi = draw(rng, 0, static_cast<std::int64_t>(t) - 1);
        out.push_back(eval_complete(ell, theta, a, b, kDefaultSlack, budget).check);
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_product(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  const auto primes = odd_primes_below(51);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const auto ell = primes[i], r = primes[j];
      for (std::uint64_t theta : {2, 3}) {
        if (theta % ell == 0 || theta % r == 0) continue;
        const auto t_ell = mul_order(theta, ell), t_r = mul_order(theta, r);
        if (gcd_u64(t_ell, t_r) != 1) continue;
        const auto t = t_ell * t_r;
        for (std::size_t m = 1; m <= 2; ++m) {
          if (m == 2 && t > 300) continue;
          std::vector<std::int64_t> a(m), b(m, 0);
          for (auto& ai : a) ai = draw_unit(rng, ell * r);
          out.push_back(eval_product(ell, r, theta, a, b, budget).check);
          for (auto& bi : b) bi = draw(rng, 0, static_cast<std::int64_t>(t) - 1);
          out.push_back(eval_product(ell, r, theta, a, b, budget).check);
        }
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_incomplete(std::uint64_t seed, const Budget& budget) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  const auto primes = odd_primes_below(51);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const auto ell = primes[i], r = primes[j];
      for (std::uint64_t theta : {2, 3}) {
        if (theta % ell == 0 || theta % r == 0) continue;
        const auto t_ell = mul_order(theta, ell), t_r = mul_order(theta, r);
        if (t_ell % 2 == 0 || t_r % 2 == 0 || gcd_u64(t_ell, t_r) != 1) continue;
        const auto t = t_ell * t_r;
        for (std::size_t m = 1; m <= 2; ++m) {
          std::vector<std::int64_t> a(m);
          std::vector<std::uint64_t> L(m);
          for (auto& ai : a) ai = draw_unit(rng, ell * r);
          for (auto& Li : L) Li = static_cast<std::uint64_t>(draw(rng, 0, 2 * static_cast<std::int64_t>(t)));
          out.push_back(eval_incomplete(ell, r, theta, a, L, kDefaultSlack, budget).check);
        }
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_korobov() {
  std::vector<LemmaCheck> out;
  for (auto ell : primes_in(2, 199)) {
    for (std::uint64_t theta : {2, 3, 5}) {
      if (theta % ell == 0) continue;
      for (std::uint64_t a = 1; a < ell; ++a) {
        out.push_back(eval_korobov(static_cast<std::int64_t>(a), theta, ell, KorobovDenominator::ell).check);
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_congruence(std::uint64_t seed, bool trivial_only) {
  std::mt19937_64 rng(seed);
  std::vector<LemmaCheck> out;
  for (std::uint64_t g : {2, 3}) {
    for (std::size_t m = 2; m <= 3; ++m) {
      for (unsigned K = 3; K <= 6; ++K) {
        std::vector<std::int64_t> c(m);
        for (auto& ci : c) ci = draw(rng, 1, 3) * (draw(rng, 0, 1) ? 1 : -1);
        const SparseForm form(g, c);
        for (auto ell : primes_in(3, 40)) {
          if (g % ell == 0) continue;
          out.push_back(eval_congruence(form, K, ell, std::nullopt, kDefaultSlack, trivial_only).check);
        }
      }
    }
  }
  if (!trivial_only) {
    // large boxes against the members of L_z(2; 11, 0.5, 3)
    const auto set = build_sieve_set(2, 11, 0.5, 3);
    for (unsigned K = 11; K <= 14; ++K) {
      std::vector<std::int64_t> c(3);
      for (auto& ci : c) ci = draw(rng, 1, 3) * (draw(rng, 0, 1) ? 1 : -1);
      const SparseForm form(2, c);
      for (const auto& p : set.primes) {
        out.push_back(eval_congruence(form, K, p.ell, SieveContext{set.z, set.alpha},
                                      kDefaultSlack, false)
                          .check);
      }
    }
  }
  return out;
}

std::vector<LemmaCheck> grid_sieve_identity(const Budget& budget) {
  std::vector<LemmaCheck> out;
  const auto small = make_sieve_set(2, {23, 31}, 11, 0.5);
  for (const auto& c : std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 2}, {9, 1}, {1, 1, 1}, {2, -1}}) {
    const unsigned K = c.size() == 3 ? 8 : 10;
    out.push_back(eval_sieve_identity(SparseForm(2, c), K, small, budget).check);
  }
  const auto built = build_sieve_set(2, 100, SieveSet::kDefaultAlpha, SieveSet::kDefaultC1);
  out.push_back(eval_sieve_identity(SparseForm(2, {1, 1}), 12, built, budget).check);
  return out;
}

// ---- modes ---------------------------------------------------------------

struct ModeResult {
  std::vector<Record> records;
  bool bound_failure = false;
  std::string failure_note;
};

ModeResult mode_sieve(const Params& p) {
  const auto set = build_sieve_set(p.u64("g", 2), p.real("z"), p.real("alpha", SieveSet::kDefaultAlpha),
                                   p.real("c1", SieveSet::kDefaultC1));
  ModeResult r;
  for (const auto& sp : set.primes) {
    r.records.push_back(Record()
                            .add("ell", sp.ell)
                            .add("tau", sp.tau)
                            .add("p_largest", sp.p_largest)
                            .add("nu2", std::uint64_t{sp.nu2})
                            .add("u0", std::uint64_t{set.u0}));
  }
  const auto problem = check_sieve_set(set);
  if (!problem.empty()) {
    r.bound_failure = true;
    r.failure_note = "sieve set re-check failed: " + problem;
  }
  return r;
}

ModeResult mode_count_squares(const Params& p, const Budget& budget) {
  const SparseForm form(p.u64("g", 2), p.i64_list("c"));
  const auto method = p.str("method", "brute");
  if (method != "brute" && method != "mitm") {
    throw Error(ErrorKind::ConfigError, "bad value for key 'method': '" + method + "'");
  }
  std::optional<std::uint64_t> N;
  if (p.has("N")) N = p.u64("N");
  unsigned K = 0;
  if (p.has("K")) {
    K = as_unsigned(p.u64("K"), "K");
  } else if (N) {
    K = derive_box_cap(form, *N);
  } else {
    throw Error(ErrorKind::ConfigError, "missing key 'K' (or 'N' to derive it)");
  }
  const auto sq = count_square_tuples(
      form, K, budget,
      method == "brute" ? SquareCountMode::brute_force : SquareCountMode::meet_in_middle);
  Record rec;
  rec.add("g", form.g).add("c", list_cell(form.coeffs)).add("K", std::uint64_t{K});
  rec.add("method", method).add("M", sq.count).add("zero_hits", sq.zero_hits);
  if (N) {
    const auto reps = count_representable_n(form, *N, K, budget);
    rec.add("N", *N).add("representable_count", std::uint64_t{reps.count()});
    rec.add("representable", list_cell(reps.ns));
  } else {
    rec.add("N", std::monostate{}).add("representable_count", std::monostate{});
    rec.add("representable", std::monostate{});
  }
  return {{rec}, false, {}};
}

ModeResult mode_count_sparse(const Params& p, const Budget& budget) {
  const auto g = p.u64("g", 2);
  const auto m = as_unsigned(p.u64("m"), "m");
  const auto K = as_unsigned(p.u64("K"), "K");
  const auto count = count_sparse_squares(g, m, K, budget);
  return {{Record().add("g", g).add("m", std::uint64_t{m}).add("K", std::uint64_t{K}).add("count", count)},
          false,
          {}};
}

const std::map<std::string, std::string>& sum_to_lemma() {
  static const std::map<std::string, std::string> m = {
      {"quad", "diag-bound"},          {"twisted", "twisted-bound"},
      {"complete", "complete-sum"},    {"product", "product-formula"},
      {"incomplete", "incomplete-sum"}, {"korobov", "korobov"},
      {"congruence", "congruence-count"}};
  return m;
}

ModeResult mode_char_sum(const Params& p, const Budget& budget) {
  const auto sum = p.str("sum");
  const auto it = sum_to_lemma().find(sum);
  if (it == sum_to_lemma().end()) {
    throw Error(ErrorKind::ConfigError, "bad value for key 'sum': '" + sum + "'");
  }
  const auto e = evaluate(it->second, p, budget);
  Record rec;
  rec.add("sum", sum).add("params", e.check.params);
  rec.add("re", e.value.real()).add("im", e.value.imag()).add("magnitude", std::abs(e.value));
  rec.add("bound", opt(e.check.bound)).add("ratio", opt(e.check.ratio)).add("pass", e.check.pass);
  return {{rec}, !e.check.pass, e.check.pass ? "" : it->second + " check failed"};
}

ModeResult mode_verify_lemma(const Params& p, std::uint64_t seed, const Budget& budget) {
  const auto lemma = p.str("lemma");
  std::vector<LemmaCheck> checks;
  if (p.flag("grid", false)) {
    checks = lemma_grid(lemma, seed, budget);
  } else {
    checks.push_back(evaluate(lemma, p, budget).check);
  }
  ModeResult r;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    r.records.push_back(c.record());
    failed += !c.pass;
  }
  if (failed) {
    r.bound_failure = true;
    r.failure_note = std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed";
  }
  return r;
}

std::vector<GaussRat> gauss_list(const Params& p, const std::string& key) {
  std::vector<GaussRat> out;
  for (const auto& s : p.items(key)) out.push_back(parse_gauss(s));
  return out;
}

ModeResult mode_approx_search(const Params& p, const Budget& budget) {
  ApproxInstance inst;
  inst.q_coeffs = gauss_list(p, "q");
  inst.lambda = parse_gauss(p.str("lambda"));
  inst.c = gauss_list(p, "c");
  inst.B = p.has("B") ? parse_rational(p.str("B")) : mpq_class(0);
  const auto res = search_representations(inst, p.u64("N"), p.u64("k_lo", 0), budget);
  ModeResult r;
  for (const auto& rep : res.found) {
    Record rec;
    rec.add("n", rep.n);
    for (std::size_t i = 0; i < rep.k.size(); ++i) rec.add("k_" + std::to_string(i + 1), rep.k[i]);
    rec.add("residual", rep.residual);
    r.records.push_back(std::move(rec));
  }
  return r;
}

ModeResult mode_example21(const Params& p) {
  const auto n = as_unsigned(p.u64("n"), "n");
  const long bits = static_cast<long>(p.u64("precision_bits", n == 2 ? 512 : 1024));
  const bool stability = p.flag("stability", true);
  const auto rep = example21_verify(n, bits);
  Record rec;
  rec.add("n", std::uint64_t{n}).add("precision_bits", static_cast<std::int64_t>(bits));
  rec.add("deviation", rep.deviation.mid_double());
  rec.add("deviation_lo", rep.deviation.lo_double()).add("deviation_hi", rep.deviation.hi_double());
  rec.add("deviation_direct", rep.deviation_direct.mid_double());
  rec.add("budget", rep.budget).add("pass", rep.pass).add("routes_agree", rep.routes_agree);
  rec.add("sandwich_symbolic", rep.sandwich_symbolic);
  rec.add("sandwich_numeric",
          rep.sandwich_numeric ? Value(*rep.sandwich_numeric) : Value(std::monostate{}));
  bool stable = true;
  if (stability) {
    const auto st = example21_stability(n, bits);
    stable = st.within;
    rec.add("stability_shift", st.shift).add("stable", st.within);
  } else {
    rec.add("stability_shift", std::monostate{}).add("stable", std::monostate{});
  }
  ModeResult r;
  r.records.push_back(rec);
  const bool ok = rep.pass && rep.routes_agree && rep.sandwich_symbolic &&
                  rep.sandwich_numeric.value_or(true) && stable;
  if (!ok) {
    r.bound_failure = true;
    r.failure_note = "deviation " + fmt_double(rep.deviation.hi_double()) + " vs budget " +
                     fmt_double(rep.budget);
  }
  return r;
}

ModeResult mode_sieve_stats(const Params& p, const Budget& budget) {
  const SparseForm form(p.u64("g", 2), p.i64_list("c"));
  const auto set = sieve_from_params(p, form.g);
  const auto st = sieve_statistics(form, as_unsigned(p.u64("K"), "K"), set, budget);
  Record rec;
  rec.add("M", st.M).add("zero_hits", st.zero_hits);
  rec.add("W", st.W).add("U", st.U).add("V", st.V).add("split_exact", st.split_exact);
  rec.add("identity_checked", st.identity_checked).add("identity_failures", st.identity_failures);
  rec.add("term_alpha", st.term_alpha).add("term_m1", st.term_m1);
  rec.add("term_w", st.term_w).add("term_v", st.term_v);
  ModeResult r;
  r.records.push_back(rec);
  if (!st.split_exact || st.identity_failures) {
    r.bound_failure = true;
    r.failure_note = "sieve identity or W = U + V failed";
  }
  return r;
}

ModeResult mode_growth_table(const Params& p, const Budget& budget) {
  const SparseForm form(p.u64("g", 2), p.i64_list("c"));
  const auto grid = p.has("N_grid") ? p.u64_list("N_grid") : std::vector<std::uint64_t>{};
  ModeResult r;
  for (const auto& row : growth_table(form, grid, budget)) {
    r.records.push_back(Record()
                            .add("N", row.N)
                            .add("K", std::uint64_t{row.K})
                            .add("count", row.count)
                            .add("log_m", row.log_m)
                            .add("log_m_gamma", opt(row.log_m_gamma))
                            .add("ratio_m", row.ratio_m)
                            .add("ratio_gamma", opt(row.ratio_gamma)));
  }
  return r;
}

}  // namespace

// ---- public API ----------------------------------------------------------

std::map<std::string, std::string> ExperimentConfig::resolved() const {
  auto m = params;
  m["mode"] = mode;
  m["seed"] = std::to_string(seed);
  m["budget"] = std::to_string(budget);
  m["format"] = format == OutputFormat::csv ? "csv" : "jsonl";
  return m;
}

const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes = {"sieve",         "count-squares", "count-sparse",
                                                 "char-sum",      "verify-lemma",  "approx-search",
                                                 "example-21",    "sieve-stats",   "growth-table"};
  return modes;
}

const std::vector<std::string>& mode_keys(const std::string& mode) {
  const auto& t = key_table();
  auto it = t.find(mode);
  if (it == t.end()) throw Error(ErrorKind::ConfigError, "unknown mode '" + mode + "'");
  return it->second;
}

namespace {

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "jsonl") return OutputFormat::jsonl;
  throw Error(ErrorKind::ConfigError, "bad value for key 'format': '" + s + "'");
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& s) {
  std::map<std::string, std::string> m{{key, s}};
  return Params(m).u64(key);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key");
    if (key == "mode") {
      cfg.mode = value;
    } else if (key == "seed") {
      cfg.seed = parse_u64_value(key, value);
    } else if (key == "budget") {
      cfg.budget = parse_u64_value(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      cfg.format = parse_format(value);
    } else {
      if (cfg.params.count(key)) {
        throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
      cfg.params[key] = value;
    }
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.mode.empty()) throw Error(ErrorKind::ConfigError, "no mode given");
  const auto& keys = mode_keys(cfg.mode);
  for (const auto& [k, v] : cfg.params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw Error(ErrorKind::ConfigError, "unknown key '" + k + "' for mode " + cfg.mode);
    }
  }
}

void apply_budget_env(ExperimentConfig& cfg) {
  if (const char* env = std::getenv(kBudgetEnv); env != nullptr && *env != '\0') {
    cfg.budget = parse_u64_value(kBudgetEnv, env);
  }
}

unsigned derive_box_cap(const SparseForm& form, std::uint64_t N) {
  if (N < 2) throw Error(ErrorKind::DomainError, "derive_box_cap needs N >= 2");
  const BigInt target = BigInt(form.weight()) * N * N;
  BigInt power = BigInt(form.g) * form.g;
  unsigned K = 2;
  while (power <= target) {
    power *= form.g;
    ++K;
  }
  return K;
}

std::vector<GrowthRow> growth_table(const SparseForm& form, const std::vector<std::uint64_t>& grid,
                                    const Budget& budget) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw Error(ErrorKind::DomainError, "N grid must be ascending");
  }
  const auto m = form.arity();
  std::optional<double> gamma;
  if (m >= 3) gamma = gamma_m(m).get_d();
  std::vector<GrowthRow> rows;
  for (auto N : grid) {
    GrowthRow row;
    row.N = N;
    row.K = derive_box_cap(form, std::max<std::uint64_t>(N, 2));
    row.count = count_representable_n(form, N, row.K, budget).count();
    const double L = std::log(static_cast<double>(N));
    row.log_m = std::pow(L, static_cast<double>(m));
    row.ratio_m = static_cast<double>(row.count) / row.log_m;
    if (gamma) {
      row.log_m_gamma = std::pow(L, static_cast<double>(m) - *gamma);
      row.ratio_gamma = static_cast<double>(row.count) / *row.log_m_gamma;
    }
    rows.push_back(row);
  }
  return rows;
}

Record LemmaCheck::record() const {
  Record r;
  r.add("lemma", lemma).add("params", params).add("value", value);
  r.add("bound", opt(bound)).add("ratio", opt(ratio)).add("pass", pass);
  return r;
}

const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names = {
      "diag-bound",     "twisted-bound", "complete-sum",     "product-formula",    "incomplete-sum",
      "korobov",        "congruence-count", "trivial-congruence", "sieve-identity"};
  return names;
}

LemmaCheck check_lemma(const std::string& lemma, const std::map<std::string, std::string>& params,
                       const Budget& budget) {
  return evaluate(lemma, Params(params), budget).check;
}

std::vector<LemmaCheck> lemma_grid(const std::string& lemma, std::uint64_t seed, const Budget& budget) {
  if (lemma == "diag-bound") return grid_diag(seed, budget);
  if (lemma == "twisted-bound") return grid_twisted(seed, budget);
  if (lemma == "complete-sum") return grid_complete(seed, budget);
  if (lemma == "product-formula") return grid_product(seed, budget);
  if (lemma == "incomplete-sum") return grid_incomplete(seed, budget);
  if (lemma == "korobov") return grid_korobov();
  if (lemma == "congruence-count") return grid_congruence(seed, false);
  if (lemma == "trivial-congruence") return grid_congruence(seed, true);
  if (lemma == "sieve-identity") return grid_sieve_identity(budget);
  throw Error(ErrorKind::ConfigError, "unknown lemma '" + lemma + "'");
}

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate_config(cfg);
    const Params p(cfg.params);
    const Budget budget{cfg.budget};
    ModeResult result;
    if (cfg.mode == "sieve") {
      result = mode_sieve(p);
    } else if (cfg.mode == "count-squares") {
      result = mode_count_squares(p, budget);
    } else if (cfg.mode == "count-sparse") {
      result = mode_count_sparse(p, budget);
    } else if (cfg.mode == "char-sum") {
      result = mode_char_sum(p, budget);
    } else if (cfg.mode == "verify-lemma") {
      result = mode_verify_lemma(p, cfg.seed, budget);
    } else if (cfg.mode == "approx-search") {
      result = mode_approx_search(p, budget);
    } else if (cfg.mode == "example-21") {
      result = mode_example21(p);
    } else if (cfg.mode == "sieve-stats") {
      result = mode_sieve_stats(p, budget);
    } else {
      result = mode_growth_table(p, budget);
    }
    if (cfg.out.empty()) {
      write_records(out, cfg.format, cfg.resolved(), result.records);
    } else {
      std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(ErrorKind::ConfigError, "cannot open output file '" + cfg.out + "'");
      write_records(file, cfg.format, cfg.resolved(), result.records);
    }
    if (result.bound_failure) {
      err << "bound failure: " << result.failure_note << '\n';
      return kExitBound;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.kind() == ErrorKind::WorkloadExceeded ? kExitWorkload : kExitConfig;
  }
}

}  // namespace sparsity
