#pragma once

// Experiment configuration, dispatch to the computational modules, and the
// bound checks reported by verify-lemma.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsity/exec.hpp"
#include "sparsity/records.hpp"
#include "sparsity/sparse_forms.hpp"

namespace sparsity {

inline constexpr const char* kBudgetEnv = "SPARSITY_LAB_BUDGET";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitBound = 2, kExitWorkload = 3 };

struct ExperimentConfig {
  std::string mode;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::uint64_t budget = Budget::kDefault;
  std::string out;  // empty: standard output
  OutputFormat format = OutputFormat::csv;

  /// Everything that determines the output (the output path excluded).
  std::map<std::string, std::string> resolved() const;
};

const std::vector<std::string>& known_modes();

/// Parameter keys accepted by a mode. Throws ConfigError for unknown modes.
const std::vector<std::string>& mode_keys(const std::string& mode);

/// Reads flat "key=value" lines; '#' starts a comment, blank lines are
/// skipped. The keys mode, seed, budget, out and format are global; every
/// other key is a mode parameter. Throws ConfigError naming the offending
/// line or key.
ExperimentConfig parse_config(std::istream& in);

/// Rejects unknown modes and keys (ConfigError names the key).
void validate_config(const ExperimentConfig& cfg);

/// Applies SPARSITY_LAB_BUDGET when set; it takes precedence over --budget.
void apply_budget_env(ExperimentConfig& cfg);

/// Smallest K >= 2 with g^K > (sum |c_i|) N^2. For coefficients of one sign
/// every tuple with a larger exponent has |F| > N^2.
unsigned derive_box_cap(const SparseForm& form, std::uint64_t N);

struct GrowthRow {
  std::uint64_t N = 0;
  unsigned K = 0;
  std::uint64_t count = 0;
  double log_m = 0;                    // (log N)^m
  std::optional<double> log_m_gamma;   // (log N)^(m - gamma_m), m >= 3
  double ratio_m = 0;
  std::optional<double> ratio_gamma;
};

/// Rows for an ascending grid; throws DomainError when the grid is not ascending.
std::vector<GrowthRow> growth_table(const SparseForm& form, const std::vector<std::uint64_t>& grid,
                                    const Budget& budget = {});

/// One bound or identity check: {lemma, params, value, bound, ratio, pass}.
struct LemmaCheck {
  std::string lemma;
  std::string params;
  double value = 0;
  std::optional<double> bound;
  std::optional<double> ratio;
  bool pass = false;

  Record record() const;
};

/// Checks understood by verify-lemma.
const std::vector<std::string>& lemma_names();

/// Single check from explicit parameters (same keys as char-sum).
LemmaCheck check_lemma(const std::string& lemma, const std::map<std::string, std::string>& params,
                       const Budget& budget = {});

/// The default grid of a check, sampled with `seed` where coefficients are random.
std::vector<LemmaCheck> lemma_grid(const std::string& lemma, std::uint64_t seed,
                                   const Budget& budget = {});

/// Runs the experiment, writing records to cfg.out (or `out` when empty).
/// Diagnostics go to `err`. Returns an ExitCode.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace sparsity
