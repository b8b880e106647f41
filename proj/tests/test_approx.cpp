#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sparsity/error.hpp"
#include "sparsity/approx.hpp"
#include "sparsity/sparse_forms.hpp"

using namespace sparsity;

namespace {

ApproxInstance integer_instance(std::vector<long> q, long lambda, std::vector<long> c, mpq_class B) {
  ApproxInstance inst;
  for (auto x : q) inst.q_coeffs.emplace_back(mpq_class(x));
  inst.lambda = GaussRat(mpq_class(lambda));
  for (auto x : c) inst.c.emplace_back(mpq_class(x));
  inst.B = B;
  return inst;
}

std::vector<std::uint64_t> ns_of(const SearchResult& r) {
  std::vector<std::uint64_t> out;
  for (const auto& f : r.found) out.push_back(f.n);
  return out;
}

/// Every n <= N with |Q(n) - sum c_i lambda^k_i| <= B for k in {0..K}^m,
/// checked exactly.
std::vector<std::uint64_t> brute(const ApproxInstance& inst, std::uint64_t N, unsigned K) {
  std::set<std::uint64_t> ns;
  oracle::for_box(inst.c.size(), K, [&](const auto& k) {
    GaussRat s;
    for (std::size_t i = 0; i < k.size(); ++i) {
      GaussRat p(1);
      for (unsigned j = 0; j < k[i]; ++j) p = p * inst.lambda;
      s = s + inst.c[i] * p;
    }
    for (std::uint64_t n = 1; n <= N; ++n) {
      if ((inst.eval_q(n) - s).norm() <= inst.B * inst.B) ns.insert(n);
    }
  });
  return {ns.begin(), ns.end()};
}

}  // namespace

TEST_CASE("parsing Gaussian rationals") {
  CHECK(parse_gauss("3") == GaussRat(3));
  CHECK(parse_gauss("-1/2") == GaussRat(mpq_class(-1, 2)));
  CHECK(parse_gauss("2.5") == GaussRat(mpq_class(5, 2)));
  CHECK(parse_gauss("1+2i") == GaussRat(1, 2));
  CHECK(parse_gauss("-i") == GaussRat(0, -1));
  CHECK(parse_gauss("0.5-3/4i") == GaussRat(mpq_class(1, 2), mpq_class(-3, 4)));
  CHECK(parse_rational("0.125") == mpq_class(1, 8));
  for (const char* bad : {"", "abc", "1/0", "1++2i", "2i3"}) CHECK_THROWS_AS(parse_gauss(bad), Error);
  for (const char* s : {"3", "-1/2", "1+2i", "-i", "7/3-5/2i"}) {
    CHECK(parse_gauss(to_string(parse_gauss(s))) == parse_gauss(s));
  }
}

TEST_CASE("instance validation") {
  auto kind = [](const ApproxInstance& inst) {
    try {
      inst.validate();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConfigError;
  };
  CHECK(kind(integer_instance({0, 0, 1}, 1, {1}, 0)) == ErrorKind::DegenerateInstance);
  CHECK(kind(integer_instance({5}, 2, {1}, 0)) == ErrorKind::DegenerateInstance);
  CHECK(kind(integer_instance({0, 0, 1}, 2, {0}, 0)) == ErrorKind::DomainError);
  CHECK(kind(integer_instance({0, 0, 1}, 2, {1}, -1)) == ErrorKind::DomainError);
  ApproxInstance unit = integer_instance({0, 1}, 2, {1}, 0);
  unit.lambda = GaussRat(mpq_class(3, 5), mpq_class(4, 5));
  CHECK(kind(unit) == ErrorKind::DegenerateInstance);
}

TEST_CASE("instance constants satisfy their defining inequalities") {
  for (const auto& inst : {integer_instance({0, 0, 1}, 2, {1, 1}, 0), integer_instance({3, -2, 5}, 3, {1, 2, 7}, 4),
                           integer_instance({1, 0, 0, 2}, 2, {5, 1}, mpq_class(1, 2)),
                           integer_instance({0, 1}, 2, {1}, mpq_class(1, 2))}) {
    const auto k = instance_constants(inst);
    CHECK(k.n0 >= 1);
    CHECK(k.delta >= 1);
    CHECK(verify_n0_on_grid(inst, k.n0, 30) == 0);
  }
}

TEST_CASE("n0 is invariant under scaling Q and B together") {
  const auto base = integer_instance({3, -2, 5}, 3, {1, 2}, 4);
  auto scaled = base;
  for (auto& a : scaled.q_coeffs) a = a * GaussRat(7);
  scaled.B *= 7;
  CHECK(instance_constants(base).n0 == instance_constants(scaled).n0);
}

TEST_CASE("search agrees with exhaustive enumeration") {
  const auto sq = integer_instance({0, 0, 1}, 2, {1, 1}, 0);
  CHECK(ns_of(search_representations(sq, 20)) == std::vector<std::uint64_t>{2, 3, 4, 6, 8, 12, 16});
  const auto lin = integer_instance({0, 1}, 2, {1}, mpq_class(1, 2));
  CHECK(ns_of(search_representations(lin, 8)) == std::vector<std::uint64_t>{1, 2, 4, 8});

  struct Case {
    ApproxInstance inst;
    std::uint64_t N;
    unsigned K;
  };
  for (const auto& c : {Case{integer_instance({0, 0, 1}, 3, {1, 3}, 0), 60, 9},
                        Case{integer_instance({0, 0, 1}, 2, {1, 1, 1}, 1), 40, 12},
                        Case{integer_instance({1, 1}, 2, {3, 1}, 2), 50, 7},
                        Case{integer_instance({0, 0, 1}, -2, {1, 2}, 3), 30, 11}}) {
    CHECK(ns_of(search_representations(c.inst, c.N)) == brute(c.inst, c.N, c.K));
  }
}

TEST_CASE("search matches square counting for integer instances") {
  const SparseForm f(3, {1, 2, 1});
  auto inst = integer_instance({0, 0, 1}, 3, {1, 2, 1}, 0);
  const auto res = search_representations(inst, 200);
  CHECK(ns_of(res) == count_representable_n(f, 200, 12).ns);
  for (const auto& r : res.found) CHECK(r.residual == 0);
}

TEST_CASE("search result is monotone in B") {
  auto inst = integer_instance({0, 0, 1}, 2, {1, 1}, 0);
  std::vector<std::uint64_t> prev;
  for (int b = 0; b <= 6; ++b) {
    inst.B = b;
    const auto cur = ns_of(search_representations(inst, 60));
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST_CASE("search respects k_lo and the budget") {
  const auto sq = integer_instance({0, 0, 1}, 2, {1, 1}, 0);
  const auto r = search_representations(sq, 20, 2);
  for (const auto& f : r.found) {
    for (auto k : f.k) CHECK(k >= 2);
  }
  CHECK_THROWS_AS(search_representations(sq, 1), Error);
  CHECK_THROWS_AS(search_representations(integer_instance({0, 0, 1}, 2, {1, 1, 1}, 0), 100000, 0, Budget{50}),
                  Error);
}
