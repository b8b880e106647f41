#pragma once

#include <cstdint>

#include "sparsity/error.hpp"

namespace sparsity {

/// Selects between the serial reference path and the OpenMP kernel.
/// Both paths must produce identical results; the serial one is what the
/// tests treat as ground truth.
enum class Exec { serial, parallel };

/// Maximum number of enumerated states (lattice points, field elements,
/// candidate tuples) a single operation may visit.
struct Budget {
  static constexpr std::uint64_t kDefault = 100'000'000ULL;
  std::uint64_t max_states = kDefault;

  void require(std::uint64_t states, const char* what) const {
    if (states > max_states) {
      throw Error(ErrorKind::WorkloadExceeded,
                  std::string(what) + " needs " + std::to_string(states) +
                      " states, budget is " + std::to_string(max_states));
    }
  }
};

/// Saturating product used for workload estimates.
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t sat_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace sparsity
