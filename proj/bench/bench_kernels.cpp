// Serial reference against the OpenMP kernels on a few fixed workloads.
// Prints one line per kernel: name, serial seconds, parallel seconds,
// speedup, and whether the two results are identical.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "sparsity/char_sums.hpp"
#include "sparsity/sieve_set.hpp"
#include "sparsity/sparse_forms.hpp"

namespace {

using namespace sparsity;

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class T>
void compare(const char* name, const std::function<T(Exec)>& kernel) {
  T serial{}, parallel{};
  const double ts = seconds([&] { serial = kernel(Exec::serial); });
  const double tp = seconds([&] { parallel = kernel(Exec::parallel); });
  std::printf("%-28s serial %8.4fs  parallel %8.4fs  speedup %5.2f  identical %s\n", name, ts, tp,
              tp > 0 ? ts / tp : 0.0, serial == parallel ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  const SparseForm triple(2, {1, 1, 1});

  compare<std::uint64_t>("count_square_tuples m=3 K=150", [&](Exec e) {
    return count_square_tuples(triple, 150, {}, SquareCountMode::brute_force, e).count;
  });
  compare<std::uint64_t>("count_representable_n m=3", [&](Exec e) {
    return count_representable_n(triple, 100000, 40, {}, e).count();
  });
  compare<std::vector<std::uint64_t>>("build_sieve_set z=1e6", [&](Exec e) {
    return build_sieve_set(2, 1e6, SieveSet::kDefaultAlpha, SieveSet::kDefaultC1, e).ells();
  });
  compare<std::int64_t>("quad_diag_sum q=211 m=3", [&](Exec e) {
    return quad_diag_sum(211, 2, {1, 3, 5}, {}, e).value;
  });
  compare<std::int64_t>("product_sum 43*47 m=2", [&](Exec e) {
    const auto p = product_sum(43, 47, 3, {1, 2}, {0, 0}, {}, e);
    return *p.S.exact;
  });
  compare<std::int64_t>("sieve_statistics m=3 K=60", [&](Exec e) {
    const auto set = build_sieve_set(2, 100, SieveSet::kDefaultAlpha, SieveSet::kDefaultC1, e);
    return sieve_statistics(triple, 60, set, {}, e).W;
  });
  return 0;
}
