// Acceptance run: one PASS/FAIL line per criterion. The first argument is a
// directory for the determinism artifacts.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sparsity/approx.hpp"
#include "sparsity/arith.hpp"
#include "sparsity/char_sums.hpp"
#include "sparsity/example21.hpp"
#include "sparsity/harness.hpp"
#include "sparsity/sieve_set.hpp"
#include "sparsity/sparse_forms.hpp"

using namespace sparsity;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome jacobi_euler() {
  std::uint64_t checked = 0;
  for (std::uint64_t p = 3; p < 1000; p += 2) {
    if (!oracle::is_prime(p)) continue;
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a, ++checked) {
      if (jacobi(a, p) != oracle::euler(a, p)) {
        return {false, "mismatch at a=" + std::to_string(a) + " ell=" + std::to_string(p)};
      }
    }
  }
  return {true, std::to_string(checked) + " symbols"};
}

Outcome order_naive() {
  std::uint64_t checked = 0;
  for (std::uint64_t g : {2, 3, 5, 10}) {
    for (std::uint64_t ell = 2; ell < 5000; ++ell) {
      if (!oracle::is_prime(ell) || g % ell == 0) continue;
      ++checked;
      if (mul_order(g, ell) != oracle::order(g, ell)) {
        return {false, "mismatch at g=" + std::to_string(g) + " ell=" + std::to_string(ell)};
      }
    }
  }
  return {true, std::to_string(checked) + " orders"};
}

Outcome sieve_golden() {
  const auto s = build_sieve_set(2, 11, 0.5, 3);
  const auto problem = check_sieve_set(s);
  const bool ok = s.u0 == 0 && s.ells() == std::vector<std::uint64_t>{23, 31} && problem.empty() &&
                  oracle::sieve_members(2, 11, 0.5, 3) == s.ells();
  return {ok, "u0=" + std::to_string(s.u0) + " L={" + [&] {
                std::string out;
                for (auto e : s.ells()) out += (out.empty() ? "" : ",") + std::to_string(e);
                return out;
              }() + "}" + (problem.empty() ? "" : " " + problem)};
}

Outcome product_formula() {
  const auto grid = lemma_grid("product-formula", 1);
  std::size_t failed = 0;
  for (const auto& c : grid) failed += !c.pass;

  // untwisted m=1 specs over every admissible prime pair, compared as integers
  std::size_t exact_specs = 0, exact_failed = 0;
  const auto primes = primes_in(3, 50);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      for (std::uint64_t theta : {2, 3}) {
        const auto ell = primes[i], r = primes[j];
        if (ell % theta == 0 || r % theta == 0) continue;
        if (std::gcd(mul_order(theta, ell), mul_order(theta, r)) != 1) continue;
        for (std::int64_t a = 1; a <= 3; ++a) {
          if (ell == 3 && a == 3) continue;
          const auto p = product_sum(ell, r, theta, {a}, {0});
          ++exact_specs;
          exact_failed += !(p.S.exact && p.S_ell.exact && p.S_r.exact &&
                            *p.S.exact == *p.S_ell.exact * *p.S_r.exact);
        }
      }
    }
  }
  const auto golden = product_sum(5, 7, 2, {1}, {0});
  const bool golden_ok = golden.S.exact == 0 && golden.S_ell.exact == 0 && golden.S_r.exact == 3;
  std::ostringstream d;
  d << grid.size() << " grid specs (" << failed << " failed), " << exact_specs << " untwisted specs ("
    << exact_failed << " failed), (5,7,2): S=" << golden.S.exact.value_or(-999)
    << " S_r=" << golden.S_r.exact.value_or(-999);
  return {grid.size() >= 50 && failed == 0 && exact_failed == 0 && golden_ok, d.str()};
}

Outcome diag_bound() {
  const auto grid = lemma_grid("diag-bound", 1);
  std::size_t failed = 0;
  for (const auto& c : grid) failed += !c.pass;
  const auto zero = quad_diag_sum(3, 2, {1, 1}).value;
  return {grid.size() == 600 && failed == 0 && zero == 0,
          std::to_string(grid.size()) + " sums, " + std::to_string(failed) +
              " over the bound, S(3,2,(1,1))=" + std::to_string(zero)};
}

Outcome korobov() {
  std::size_t checked = 0, failed = 0;
  double worst = 0;
  for (auto ell : primes_in(2, 199)) {
    for (std::uint64_t theta : {2, 3, 5}) {
      if (ell % theta == 0) continue;
      for (std::int64_t a = 1; a < static_cast<std::int64_t>(ell); ++a) {
        const auto k = korobov_sum(a, theta, ell);
        ++checked;
        failed += !k.pass;
        worst = std::max(worst, k.magnitude / k.bound);
      }
    }
  }
  std::ostringstream d;
  d << checked << " sums, max |S|/sqrt(ell)=" << worst << ", " << failed << " failed";
  return {failed == 0, d.str()};
}

Outcome sieve_identity() {
  const auto set = make_sieve_set(2, {23, 31});
  const SparseForm f(2, {1, 1});
  const auto st = sieve_statistics(f, 10, set);
  // independent re-check of the identity on each square tuple
  std::size_t squares = 0, bad = 0;
  oracle::for_box(2, 10, [&](const auto& k) {
    const auto v = oracle::eval(2, {1, 1}, k);
    if (!oracle::is_square(v)) return;
    ++squares;
    int lhs = 0, omega = 0;
    for (auto ell : set.ells()) {
      lhs += oracle::euler(v, ell);
      omega += mpz_divisible_ui_p(v.get_mpz_t(), ell) != 0;
    }
    bad += lhs != static_cast<int>(set.size()) - omega;
  });
  const auto o = oracle::sieve_stats(2, {1, 1}, 10, set.ells());
  const bool ok = st.identity_failures == 0 && bad == 0 && squares == st.M && st.split_exact &&
                  st.W == st.U + st.V && st.W == o.W && st.U == o.U && st.V == o.V;
  std::ostringstream d;
  d << squares << " square tuples, W=" << st.W << " U=" << st.U << " V=" << st.V;
  return {ok, d.str()};
}

Outcome counting_goldens() {
  const SparseForm f(2, {1, 1});
  const auto m = count_square_tuples(f, 10).count;
  const auto reps = count_representable_n(f, 20, derive_box_cap(f, 20)).ns;
  const auto t = t_m_count(f, 3, 3).count;
  const auto sparse = count_sparse_squares(2, 2, 4);
  const std::vector<std::uint64_t> want{2, 3, 4, 6, 8, 12, 16};
  const bool oracle_ok = oracle::square_tuples(2, {1, 1}, 10) == 13 && oracle::representable(2, {1, 1}, 20, 12) == want &&
                         oracle::congruence_count(2, {1, 1}, 3, 3) == 8 && oracle::sparse_squares(2, 2, 4) == 3;
  std::ostringstream d;
  d << "M=" << m << " reps=" << reps.size() << " T=" << t << " sparse=" << sparse
    << (oracle_ok ? "" : " (oracle disagrees with frozen goldens)");
  return {oracle_ok && m == 13 && reps == want && t == 8 && sparse == 3, d.str()};
}

Outcome approx_vs_counting() {
  struct Case {
    std::uint64_t g;
    std::vector<std::int64_t> c;
    std::uint64_t N;
  };
  const std::vector<Case> cases{{2, {1}, 500},       {2, {1, 1}, 500},    {3, {1, 3}, 500},   {2, {1, 8}, 300},
                                {10, {1, 6}, 500},   {2, {1, 1, 1}, 200}, {3, {1, 2, 1}, 150}, {5, {4, 1}, 500},
                                {2, {7, 9}, 400},    {4, {1, 2, 1}, 100}};
  std::size_t agree = 0;
  std::string first_bad;
  for (const auto& c : cases) {
    ApproxInstance inst;
    inst.q_coeffs = {GaussRat(0), GaussRat(0), GaussRat(1)};
    inst.lambda = GaussRat(mpq_class(c.g));
    for (auto x : c.c) inst.c.emplace_back(mpq_class(x));
    inst.B = 0;
    const auto found = search_representations(inst, c.N);
    std::vector<std::uint64_t> a;
    for (const auto& r : found.found) a.push_back(r.n);
    const SparseForm f(c.g, c.c);
    const auto b = count_representable_n(f, c.N, derive_box_cap(f, c.N)).ns;
    if (a == b) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = " first mismatch g=" + std::to_string(c.g) + " N=" + std::to_string(c.N);
    }
  }
  return {agree == cases.size(), std::to_string(agree) + "/" + std::to_string(cases.size()) + " instances" + first_bad};
}

Outcome example21() {
  const auto two = example21_stability(2, 512);
  const auto three = example21_stability(3, 1024);
  auto sandwich = [](const Example21Report& r) {
    return r.sandwich_symbolic && r.sandwich_numeric.value_or(true);
  };
  std::ostringstream d;
  d << "n=2 deviation in " << two.low.deviation.to_string() << " vs 2/7: " << (two.low.pass ? "ok" : "EXCEEDED")
    << "; n=3 deviation in " << three.low.deviation.to_string() << " vs 3/136: "
    << (three.low.pass ? "ok" : "EXCEEDED") << "; sandwich " << (sandwich(two.low) && sandwich(three.low) ? "ok" : "FAILED")
    << "; doubled precision " << (two.within && three.within ? "stable" : "UNSTABLE");
  const bool ok = two.low.pass && three.low.pass && sandwich(two.low) && sandwich(three.low) && two.within &&
                  three.within && two.low.routes_agree && three.low.routes_agree;
  return {ok, d.str()};
}

Outcome gamma_arith() {
  const bool g3 = gamma_m(3) == mpq_class(677, 1969);
  std::uint64_t first = 0;
  for (std::uint64_t m = 3; m < 1000 && first == 0; ++m) {
    if (gamma_m(m) > mpq_class(1, 2)) first = m;
  }
  mpq_class gap = mpq_class(677, 1323) - gamma_m(1000000);
  const bool limit = gap > 0 && gap < mpq_class(1, 1000);
  std::ostringstream d;
  d << "gamma_3=" << gamma_m(3).get_str() << ", first m with gamma_m>1/2: " << first
    << ", 677/1323 - gamma_1e6 = " << gap.get_d();
  return {g3 && first == 44 && limit, d.str()};
}

Outcome determinism(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::string> configs{
      "mode=count-squares\ng=2\nc=1,1\nK=10\n",
      "mode=sieve\ng=2\nz=11\nalpha=0.5\nc1=3\n",
      "mode=verify-lemma\nlemma=product-formula\ngrid=true\nseed=1\nformat=jsonl\n",
      "mode=verify-lemma\nlemma=diag-bound\ngrid=true\nseed=7\n",
      "mode=approx-search\nq=0,0,1\nlambda=2\nc=1,1,1\nN=200\n",
      "mode=sieve-stats\ng=2\nc=1,1\nK=10\nL=23,31\nformat=jsonl\n",
      "mode=growth-table\ng=2\nc=1,1,1\nN_grid=20,100,500\n",
      "mode=example-21\nn=3\nprecision_bits=1024\n",
  };
  std::size_t identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::istringstream in(configs[i]);
      auto cfg = parse_config(in);
      cfg.out = (dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".out")).string();
      std::ostringstream sink, err;
      if (run(cfg, sink, err) != kExitOk) return {false, "config " + std::to_string(i) + " failed: " + err.str()};
      std::ifstream f(cfg.out, std::ios::binary);
      bytes[rep].assign(std::istreambuf_iterator<char>(f), {});
    }
    identical += !bytes[0].empty() && bytes[0] == bytes[1];
  }
  return {identical == configs.size(),
          std::to_string(identical) + "/" + std::to_string(configs.size()) + " artifacts byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "acceptance_artifacts";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"jacobi-euler agreement", jacobi_euler},
      {"multiplicative order", order_naive},
      {"sieve set golden case", sieve_golden},
      {"product formula", product_formula},
      {"diagonal sum bound", diag_bound},
      {"korobov bound", korobov},
      {"square-sieve identity", sieve_identity},
      {"counting goldens", counting_goldens},
      {"search vs counting", approx_vs_counting},
      {"dyadic counterexample", example21},
      {"gamma arithmetic", gamma_arith},
      {"determinism", [&] { return determinism(dir); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %2zu %-24s %s  (%.2f s)  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
