#include "doctest.h"
#include "oracles.hpp"
#include "sparsity/error.hpp"
#include "sparsity/sparse_forms.hpp"

using namespace sparsity;

TEST_CASE("square tuples match box enumeration") {
  struct Case {
    std::uint64_t g;
    std::vector<std::int64_t> c;
    unsigned K;
  };
  for (const auto& c : {Case{2, {1, 1}, 10}, Case{2, {1, 1, 1}, 8}, Case{3, {1, -1}, 12},
                        Case{10, {1, 6}, 7}, Case{2, {1, -3, 5}, 6}, Case{5, {4}, 9},
                        Case{2, {7, 9}, 10}}) {
    const SparseForm f(c.g, c.c);
    const auto expect = oracle::square_tuples(c.g, c.c, c.K);
    const auto brute = count_square_tuples(f, c.K, {}, SquareCountMode::brute_force, Exec::serial);
    const auto mim = count_square_tuples(f, c.K, {}, SquareCountMode::meet_in_middle, Exec::serial);
    const auto par = count_square_tuples(f, c.K, {}, SquareCountMode::brute_force, Exec::parallel);
    CHECK(brute.count == expect);
    CHECK(mim.count == expect);
    CHECK(par.count == expect);
    CHECK(par.hits == brute.hits);
    CHECK(mim.hits == brute.hits);
    for (const auto& h : brute.hits) CHECK(h.root * h.root == h.value);
  }
  CHECK(count_square_tuples(SparseForm(2, {1, 1}), 10).count == 13);
}

TEST_CASE("zero values are counted and flagged") {
  const auto r = count_square_tuples(SparseForm(2, {1, -1}), 5);
  CHECK(r.zero_hits == 6);
  CHECK(r.count >= r.zero_hits);
}

TEST_CASE("representable n match a direct search") {
  struct Case {
    std::uint64_t g;
    std::vector<std::int64_t> c;
    std::uint64_t N;
    unsigned K;
  };
  for (const auto& c : {Case{2, {1, 1}, 20, 10}, Case{4, {9}, 12, 6}, Case{2, {1, 1, 1}, 40, 11},
                        Case{3, {1, 3}, 30, 8}, Case{2, {1, -1}, 30, 10}}) {
    const SparseForm f(c.g, c.c);
    const auto r = count_representable_n(f, c.N, c.K, {}, Exec::serial);
    CHECK(r.ns == oracle::representable(c.g, c.c, c.N, c.K));
    CHECK(count_representable_n(f, c.N, c.K, {}, Exec::parallel).ns == r.ns);
    for (std::size_t i = 0; i < r.ns.size(); ++i) {
      CHECK(eval_form(f, r.witnesses[i]) == BigInt(r.ns[i]) * r.ns[i]);
    }
  }
  CHECK(count_representable_n(SparseForm(2, {1, 1}), 20, 10).ns ==
        std::vector<std::uint64_t>{2, 3, 4, 6, 8, 12, 16});
  CHECK(count_representable_n(SparseForm(4, {9}), 12, 6).ns == std::vector<std::uint64_t>{3, 6, 12});
  CHECK(count_representable_n(SparseForm(4, {9}), 1, 6).ns.empty());
}

TEST_CASE("representable count is monotone in N") {
  const SparseForm f(2, {1, 1, 1});
  std::size_t prev = 0;
  for (std::uint64_t N = 1; N <= 200; N += 7) {
    const auto c = count_representable_n(f, N, 18).count();
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("sparse squares: scan, patterns and digits agree") {
  for (std::uint64_t g : {2, 3, 10}) {
    for (unsigned m = 1; m <= 3; ++m) {
      for (unsigned K = 1; K <= (g == 2 ? 16u : 7u); ++K) {
        const auto expect = oracle::sparse_squares(g, m, K);
        REQUIRE(count_sparse_squares_scan(g, m, K) == expect);
        REQUIRE(count_sparse_squares_patterns(g, m, K) == expect);
      }
    }
  }
  CHECK(count_sparse_squares(10, 1, 3) == 6);
  CHECK(count_sparse_squares(2, 1, 5) == 3);
  CHECK(count_sparse_squares(2, 2, 4) == 3);
}

TEST_CASE("lower bound family squares are sparse") {
  const auto fam = lower_bound_family(2, 2, BigInt(1) << 20);
  CHECK_FALSE(fam.entries.empty());
  for (const auto& e : fam.entries) {
    BigInt s = 0;
    for (auto h : e.h) s += BigInt(1) << h;
    CHECK(s * s == e.square);
  }
  for (std::size_t i = 1; i < fam.entries.size(); ++i) {
    CHECK(fam.entries[i - 1].square <= fam.entries[i].square);
  }
}

TEST_CASE("gamma_m exact values") {
  CHECK(gamma_m(3) == mpq_class(677, 1969));
  CHECK(gamma_m(4) == mpq_class(1354, 3323));
  CHECK(gamma_m(43) <= mpq_class(1, 2));
  CHECK(gamma_m(44) > mpq_class(1, 2));
  for (std::uint64_t m = 4; m < 200; ++m) CHECK(gamma_m(m) < gamma_m(m + 1));
}

TEST_CASE("zero residues match big-integer evaluation") {
  struct Case {
    std::uint64_t g;
    std::vector<std::int64_t> c;
    unsigned K;
    std::uint64_t ell;
  };
  for (const auto& c : {Case{2, {1, 6}, 3, 7}, Case{2, {1, 1}, 3, 3}, Case{2, {1, 1, 1}, 6, 7},
                        Case{3, {2, -1, 5}, 5, 11}, Case{10, {1, 1}, 6, 9}, Case{2, {3, 5}, 6, 15}}) {
    CHECK(count_zero_residues(SparseForm(c.g, c.c), c.K, c.ell) ==
          oracle::congruence_count(c.g, c.c, c.K, c.ell));
  }
}

TEST_CASE("workload budget") {
  Budget tiny{100};
  try {
    count_square_tuples(SparseForm(2, {1, 1, 1}), 50, tiny);
    FAIL("expected WorkloadExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WorkloadExceeded);
  }
}
