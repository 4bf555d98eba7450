#pragma once

// Max-algebraic joint spectral radius of finite matrix sets, weighted max
// norms, Barabanov norm construction and finiteness certificates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxjsr/execution.hpp"
#include "maxjsr/maxcore.hpp"
#include "maxjsr/spectral.hpp"
#include "maxjsr/tolerance.hpp"

namespace maxjsr {

inline constexpr std::uint64_t kDefaultSeed = 20170611;
inline constexpr std::size_t kProductBudget = 1'000'000;
inline constexpr std::size_t kDefaultVerifySamples = 256;

struct NamedMatrix {
  std::string name;
  MaxMatrix matrix;
};

/// Nonempty finite list of same-dimension matrices with unique names.
class MatrixSet {
 public:
  explicit MatrixSet(std::vector<NamedMatrix> members);
  /// Members named A1, A2, ...
  static MatrixSet from_matrices(std::vector<MaxMatrix> matrices);

  std::size_t dim() const noexcept { return members_.front().matrix.dim(); }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<NamedMatrix>& members() const noexcept { return members_; }
  const MaxMatrix& operator[](std::size_t i) const { return members_[i].matrix; }
  const NamedMatrix* find(const std::string& name) const;

  MatrixSet scaled(double c) const;
  /// Appends a member; the name must be new.
  MatrixSet with(NamedMatrix extra) const;

 private:
  std::vector<NamedMatrix> members_;
};

/// nu(x) = max_i v_i |x_i| with v >> 0.
class WeightedMaxNorm {
 public:
  explicit WeightedMaxNorm(MaxVector weights);
  static WeightedMaxNorm uniform(std::size_t n) { return WeightedMaxNorm(MaxVector(n, 1.0)); }

  const MaxVector& weights() const noexcept { return weights_; }
  std::size_t dim() const noexcept { return weights_.size(); }
  double operator()(std::span<const double> x) const;
  double operator()(const MaxVector& x) const { return (*this)(x.values()); }

 private:
  MaxVector weights_;
};

/// S(Psi): entrywise maximum over the members.
MaxMatrix aggregate(const MatrixSet& psi);

/// mu(Psi) = mu(S(Psi)).
double jsr(const MatrixSet& psi, Tolerance tol = {});

/// max over x > 0 of nu(A x) / nu(x) = max over a_ij > 0 of v_i a_ij / v_j.
double induced_norm(const MaxMatrix& a, const WeightedMaxNorm& nu);

/// Maxima of several functionals over every product of length m.
struct ProductExtrema {
  double max_mu = 0.0;         // max mu(B)
  double max_induced = 0.0;    // max eta_nu(B)
  double max_norm_inf = 0.0;   // max ||B||_inf (row sums)
  std::vector<std::size_t> argmax_mu_word;  // member indices, applied last-first
};

/// Enumerates Psi^m (|Psi|^m <= budget, else BudgetError).  The parallel
/// kernel splits over word prefixes; results do not depend on the schedule.
ProductExtrema product_extrema(const MatrixSet& psi, unsigned m, const WeightedMaxNorm& nu,
                               Execution exec = Execution::parallel,
                               std::size_t budget = kProductBudget, Tolerance tol = {});

/// Product A_{w[0]} (x) A_{w[1]} (x) ... of the given member indices.
MaxMatrix word_product(const MatrixSet& psi, std::span<const std::size_t> word);

struct JsrBounds {
  unsigned m = 1;
  double lower = 0.0;  // (max mu(B))^(1/m)
  double upper = 0.0;  // (max eta_nu(B))^(1/m)
  std::vector<std::size_t> lower_word;
};

JsrBounds jsr_bounds(const MatrixSet& psi, unsigned m, const WeightedMaxNorm& nu,
                     std::size_t budget = kProductBudget, Tolerance tol = {});

/// Left principal eigenvector of S(Psi) as a norm.  Throws ReducibleError
/// when S(Psi) is reducible.
WeightedMaxNorm barabanov_norm(const MatrixSet& psi, Tolerance tol = {});

struct VerifyResult {
  bool ok = true;
  double level = 0.0;  // mu(Psi) the check was run against
  std::optional<std::vector<double>> counterexample;
  std::string reason;
};

/// nu(A x) <= mu nu(x) for all A, x: closed form eta_nu(A) <= mu, plus
/// `samples` random positive vectors checked pointwise.
VerifyResult verify_extremal(const MatrixSet& psi, const WeightedMaxNorm& nu,
                             std::size_t samples = kDefaultVerifySamples,
                             std::uint64_t seed = kDefaultSeed, Tolerance tol = {});

/// Extremal and, for every x, some A attains nu(A x) = mu nu(x).  Closed
/// form max_i v_i s_ij = mu v_j plus sampled vectors (log-uniform entries in
/// [1e-3, 1e3]).
VerifyResult verify_barabanov(const MatrixSet& psi, const WeightedMaxNorm& nu,
                              std::size_t samples = kDefaultVerifySamples,
                              std::uint64_t seed = kDefaultSeed, Tolerance tol = {});

/// Same check against a caller-supplied level instead of jsr(Psi).
VerifyResult verify_barabanov_at(const MatrixSet& psi, const WeightedMaxNorm& nu, double level,
                                 std::size_t samples = kDefaultVerifySamples,
                                 std::uint64_t seed = kDefaultSeed, Tolerance tol = {});

/// The level at which nu satisfies the closed-form Barabanov identity on S,
/// if it does (all ratios max_i v_i s_ij / v_j agree within tolerance).
std::optional<double> barabanov_level(const MatrixSet& psi, const WeightedMaxNorm& nu,
                                      Tolerance tol = {});

struct NonexistenceResult {
  bool no_barabanov_norm = false;
  FrobeniusForm form;
  /// Present when no_barabanov_norm: the slow class, its eigenvalue and
  /// x >= 0, x != 0 with S x = eigenvalue * x.
  std::optional<std::size_t> witness_class;
  double eigenvalue = 0.0;
  std::optional<MaxVector> witness;
};

/// Detects reducible sets for which no Barabanov norm exists: some class of
/// S with block mu below mu(S) is accessed only by classes of equal mu.
NonexistenceResult barabanov_nonexistence(const MatrixSet& psi, Tolerance tol = {});

struct FinitenessCertificate {
  std::vector<std::size_t> region_cycle;    // 0-based region (node) indices
  std::vector<std::string> matrix_names;    // A_1, ..., A_k in application order
  std::vector<std::size_t> matrix_indices;  // member indices of the same
  MaxMatrix product{1};                     // A_k (x) ... (x) A_1
  std::size_t k = 0;
  double mu = 0.0;                          // mu(Psi)
};

/// A product of length k <= n whose mu equals mu(Psi)^k.
FinitenessCertificate finiteness_product(const MatrixSet& psi, Tolerance tol = {});

/// Max-convex combination (+)_i alpha_i A_i.
MaxMatrix max_convex_combination(const MatrixSet& psi, std::span<const double> alphas);

/// Adjoins `trials` random max-convex combinations (max alpha = 1) and checks
/// that the joint spectral radius does not move.
bool conv_invariance_check(const MatrixSet& psi, std::size_t trials,
                           std::uint64_t seed = kDefaultSeed, Tolerance tol = {});

}  // namespace maxjsr
