#pragma once

// Max-convex hulls and spans, Hausdorff distance between matrix sets,
// eccentricity of weighted max norms and the strict-dominance test.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maxjsr/jsr.hpp"
#include "maxjsr/maxcore.hpp"
#include "maxjsr/tolerance.hpp"

namespace maxjsr {

enum class HullMode { span, conv };

struct MembershipCertificate {
  bool inside = false;
  /// Residuated coefficients, one per generator (clamped at 1 in conv mode).
  std::vector<double> coefficients;
  HullMode mode = HullMode::span;
};

/// Tests x in span (alpha_i >= 0) or conv (max alpha_i = 1) of the
/// generators via residuation alpha_i = min_j x_j / (g_i)_j.  Matrices are
/// handled through their row-major entries.
MembershipCertificate hull_membership(std::span<const double> x,
                                      const std::vector<std::span<const double>>& generators,
                                      HullMode mode, Tolerance tol = {});
MembershipCertificate hull_membership(const MaxVector& x, const std::vector<MaxVector>& generators,
                                      HullMode mode, Tolerance tol = {});
MembershipCertificate hull_membership(const MaxMatrix& x, const std::vector<MaxMatrix>& generators,
                                      HullMode mode, Tolerance tol = {});

/// (+)_i alpha_i g_i, used to re-check a certificate.
std::vector<double> evaluate_combination(const std::vector<std::span<const double>>& generators,
                                         std::span<const double> coefficients);

enum class HausdorffSide { first, second };

struct HausdorffReport {
  double distance = 0.0;
  HausdorffSide argmax_side = HausdorffSide::first;
  std::string argmax_member;
};

/// ||A - B|| in the norm induced by the vector infinity norm.
double distance_inf(const MaxMatrix& a, const MaxMatrix& b);

HausdorffReport hausdorff(const MatrixSet& psi, const MatrixSet& phi);

/// (max v) / (min v): eccentricity of nu against the infinity norm.
double eccentricity(const WeightedMaxNorm& nu);

struct DominanceResult {
  bool dominated = false;
  /// 1 / max_{s1_ij > 0} s1_ij / s2_ij; +inf when S1 = 0, 0 when r is infinite.
  double lambda = 0.0;
};

/// Sufficient test for mu(Psi1) < mu(Psi2): lambda S1 <= S2 for some
/// lambda > 1.  Throws HypothesisError when S(Psi2) is reducible.
DominanceResult strict_dominance(const MatrixSet& psi1, const MatrixSet& psi2);

}  // namespace maxjsr
