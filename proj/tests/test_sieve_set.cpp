#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sparsity/error.hpp"
#include "sparsity/sieve_set.hpp"
#include "sparsity/sparse_forms.hpp"

using namespace sparsity;

TEST_CASE("sieve set golden values") {
  const auto s = build_sieve_set(2, 11, 0.5, 3);
  CHECK(s.ells() == std::vector<std::uint64_t>{23, 31});
  CHECK(s.u0 == 0);
  CHECK(s.primes[0].tau == 11);
  CHECK(s.primes[1].tau == 5);
  CHECK(check_sieve_set(s).empty());

  CHECK(build_sieve_set(3, 5, 0.5, 3).ells() == std::vector<std::uint64_t>{11, 13});
  CHECK(build_sieve_set(2, 11, 0.99, 3).ells() == std::vector<std::uint64_t>{23});

  const auto big = build_sieve_set(2, 100, 0.677, 2);
  CHECK(big.u0 == 1);
  CHECK(big.ells() == std::vector<std::uint64_t>{107, 139, 179});
  CHECK(big.class_sizes == std::vector<std::size_t>{1, 3, 2});
}

TEST_CASE("sieve set agrees with the definition") {
  struct Case {
    std::uint64_t g;
    double z, alpha, c1;
  };
  for (const Case& c : {Case{2, 11, 0.5, 3}, Case{2, 100, 0.677, 2}, Case{3, 50, 0.6, 2},
                        Case{10, 200, 0.7, 2.5}, Case{5, 1000, 0.677, 2}, Case{7, 37.5, 0.55, 1.7}}) {
    unsigned u0 = 0;
    const auto expect = oracle::sieve_members(c.g, c.z, c.alpha, c.c1, &u0);
    const auto got = build_sieve_set(c.g, c.z, c.alpha, c.c1);
    CHECK(got.ells() == expect);
    CHECK(got.u0 == u0);
    CHECK(check_sieve_set(got).empty());
    CHECK(build_sieve_set(c.g, c.z, c.alpha, c.c1, Exec::serial).primes == got.primes);
  }
}

TEST_CASE("sieve set members are unique and ascending") {
  const auto s = build_sieve_set(2, 5000, 0.677, 2);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.primes[i - 1].ell < s.primes[i].ell);
}

TEST_CASE("sieve set errors") {
  CHECK_THROWS_AS(build_sieve_set(2, 1, 0.5, 3), Error);
  CHECK_THROWS_AS(build_sieve_set(2, 11, 1.5, 3), Error);
  try {
    build_sieve_set(2, 3, 0.99, 1.1);
    FAIL("expected EmptySet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptySet);
  }
}

TEST_CASE("check_sieve_set detects tampering") {
  auto s = build_sieve_set(2, 100, 0.677, 2);
  s.primes[0].tau += 1;
  CHECK_FALSE(check_sieve_set(s).empty());
}

TEST_CASE("omega_z and omega_sum") {
  const auto s = make_sieve_set(2, {23, 31});
  CHECK(omega_z(BigInt(23 * 31 * 4), s) == 2);
  CHECK(omega_z(BigInt(-31), s) == 1);
  CHECK_THROWS_AS(omega_z(BigInt(0), s), Error);

  const SparseForm f(2, {1, 1});
  CHECK(omega_sum(f, 4, s).sum == 0);
  CHECK(omega_sum(SparseForm(2, {23}), 3, s).sum == 4);

  // direct evaluation
  const SparseForm h(2, {1, -3, 5});
  std::uint64_t direct = 0;
  oracle::for_box(3, 12, [&](const auto& k) {
    const auto v = oracle::eval(2, {1, -3, 5}, k);
    for (auto ell : s.ells()) {
      mpz_class r;
      mpz_mod(r.get_mpz_t(), v.get_mpz_t(), mpz_class(ell).get_mpz_t());
      direct += r == 0;
    }
  });
  CHECK(omega_sum(h, 12, s).sum == direct);
}

TEST_CASE("gcd_sum") {
  const auto s = make_sieve_set(2, {23, 31});
  CHECK(*gcd_sum(s, 1).exact == 4);
  CHECK(*gcd_sum(s, 2).exact == 8);
  CHECK(gcd_sum(s, 1.5).value == doctest::Approx(2 * std::pow(2.0, 1.5)));
  CHECK_THROWS_AS(gcd_sum(s, 0.5), Error);
}

TEST_CASE("sieve CSV round trip") {
  const auto s = build_sieve_set(2, 100, 0.677, 2);
  std::stringstream io;
  write_sieve_csv(io, s);
  const auto back = read_sieve_csv(io);
  CHECK(back.primes == s.primes);
  CHECK(back.u0 == s.u0);
  CHECK(back.g == s.g);
  std::istringstream bad("# g=2\nell,tau\n");
  CHECK_THROWS_AS(read_sieve_csv(bad), Error);
}
