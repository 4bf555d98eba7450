#pragma once

// Sampling probes for the local Lipschitz / Hoelder behaviour of mu and of
// the joint spectral radius, and eccentricity tracking along set paths.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "maxjsr/execution.hpp"
#include "maxjsr/jsr.hpp"

namespace maxjsr {

inline constexpr std::size_t kDefaultProbePairs = 2048;

struct ProbeWitness {
  MatrixSet first;
  MatrixSet second;
  double value_first = 0.0;
  double value_second = 0.0;
  double distance = 0.0;
};

struct RegularityProbe {
  std::size_t pairs = 0;      // requested
  std::size_t evaluated = 0;  // pairs with nonzero distance
  std::size_t skipped = 0;    // zero-distance pairs
  std::size_t clamped = 0;    // samples where an entry was clamped at 0
  double max_ratio = 0.0;     // max |f(X) - f(Y)| / d(X, Y)^alpha
  double alpha = 1.0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  MatrixSet center;
  std::optional<ProbeWitness> witness;  // pair attaining max_ratio
};

/// Uniform sample from the ball of the given radius in the matrix norm
/// induced by the vector infinity norm (every row in an l1 ball), added to
/// `a` and clamped at 0.  Sets `clamped` when clamping happened.
MaxMatrix perturb_in_ball(const MaxMatrix& a, double radius, std::mt19937_64& rng, bool& clamped);

RegularityProbe probe_matrix_regularity(const MaxMatrix& a, double radius,
                                        std::size_t pairs = kDefaultProbePairs, double alpha = 1.0,
                                        std::uint64_t seed = kDefaultSeed,
                                        Execution exec = Execution::parallel);

/// Members are perturbed independently; distance is the Hausdorff metric.
RegularityProbe probe_set_regularity(const MatrixSet& psi, double radius,
                                     std::size_t pairs = kDefaultProbePairs, double alpha = 1.0,
                                     std::uint64_t seed = kDefaultSeed,
                                     Execution exec = Execution::parallel);

/// Member-wise (1 - t) Psi + t Phi.
MatrixSet interpolate(const MatrixSet& psi, const MatrixSet& phi, double t);

/// Eccentricity of the constructed Barabanov norm at t = s / steps for
/// s = 0..steps (s < steps when the target itself is excluded).  Throws
/// HypothesisError naming the first step whose aggregate is reducible.
std::vector<double> eccentricity_along_sequence(const MatrixSet& psi, const MatrixSet& target,
                                                std::size_t steps, bool include_target = true,
                                                Tolerance tol = {});

/// Lipschitz constant of the linear map D -> <G, D> for the infinity-induced
/// matrix norm: sum over rows of the largest |g_ij|.
double gradient_dual_norm(std::span<const double> gradient, std::size_t n);

}  // namespace maxjsr
