#pragma once

// Brute-force reference implementations and random instance generators.
// Nothing here calls into the fast paths it is meant to check.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "maxjsr/jsr.hpp"
#include "maxjsr/maxcore.hpp"

namespace maxjsr::oracles {

inline constexpr std::size_t kMaxEnumerationDim = 9;

struct BruteForceCycles {
  double mu = 0.0;
  /// Every elementary cycle attaining mu within tolerance, each starting at
  /// its smallest node.
  std::vector<std::vector<std::size_t>> attaining;
};

/// Enumerates every elementary cycle.  Throws BudgetError for n > 9.
BruteForceCycles bf_cycle_mean(const MaxMatrix& a, Tolerance tol = {});

struct GsrTruncation {
  double lower = 0.0;       // (max_B mu(B))^(1/m)
  double norm_upper = 0.0;  // (max_B ||B||_inf)^(1/m)
};

/// Enumerates all |Psi|^m products with naive loops (budget 10^6).
GsrTruncation bf_gsr_truncation(const MatrixSet& psi, unsigned m,
                                std::size_t budget = kProductBudget);

/// Plain triple-loop max-times product.
MaxMatrix naive_product(const MaxMatrix& a, const MaxMatrix& b);

/// Strong connectivity by Warshall closure over positive entries.
bool naive_irreducible(const MaxMatrix& a);

struct InstanceSpec {
  std::size_t n = 3;
  std::size_t set_size = 2;
  double density = 1.0;     // probability an entry is positive, in (0, 1]
  double low = 0.1;         // positive entries log-uniform in [low, high]
  double high = 10.0;
  std::uint64_t seed = 1;
  bool require_irreducible = false;
  std::size_t max_retries = 1000;
};

/// Deterministic in the seed; rejection-samples until S(Psi) is irreducible
/// when requested (RetryExhaustedError after max_retries).
MatrixSet generate(const InstanceSpec& spec);

MaxMatrix random_matrix(std::size_t n, double density, double low, double high,
                        std::mt19937_64& rng);

/// Random permutation with log-uniform weights in [1/4, 4].
MaxPermutation random_permutation(std::size_t n, std::mt19937_64& rng);

}  // namespace maxjsr::oracles
