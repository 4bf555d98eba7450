#pragma once

// Spectral quantities of a single nonnegative matrix in the max-times
// semiring: maximal cycle geometric mean, critical cycles, eigenvectors,
// Frobenius normal form and the derivative of mu.

#include <cstddef>
#include <string>
#include <vector>

#include "maxjsr/error.hpp"
#include "maxjsr/maxcore.hpp"
#include "maxjsr/tolerance.hpp"

namespace maxjsr {

struct CycleMeanResult {
  /// Maximal geometric mean (a_{i1 i2} ... a_{ik i1})^(1/k) over elementary cycles.
  double mu = 0.0;
  /// Nodes (0-based) of one cycle attaining mu; empty iff mu == 0.
  std::vector<std::size_t> witness_cycle;
  /// Exactly one cycle (up to rotation) attains mu within tolerance.
  bool unique_critical = false;
};

CycleMeanResult cycle_mean(const MaxMatrix& a, Tolerance tol = {});

/// Geometric mean of the cycle i_1 -> i_2 -> ... -> i_k -> i_1.
double cycle_geometric_mean(const MaxMatrix& a, const std::vector<std::size_t>& cycle);

/// Positive-entry digraph is strongly connected.  1x1 matrices count as
/// irreducible.
bool is_irreducible(const MaxMatrix& a);

/// Strongly connected components of D(A) in reverse topological order:
/// edges only run from later classes to earlier classes (or inside a class).
std::vector<std::vector<std::size_t>> strongly_connected_components(const MaxMatrix& a);

struct FrobeniusForm {
  /// New position -> original node; classes appear as contiguous runs.
  std::vector<std::size_t> permutation;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<double> block_mus;
  /// access[i][j]: class i reaches class j in D(A) (reflexive).
  std::vector<std::vector<bool>> access;

  std::size_t class_of(std::size_t node) const;
  std::string describe() const;
};

FrobeniusForm frobenius_form(const MaxMatrix& a, Tolerance tol = {});

/// Raised when an operation needs an irreducible matrix or set.
class ReducibleError : public HypothesisError {
 public:
  ReducibleError(const std::string& what, FrobeniusForm form)
      : HypothesisError(what + "; " + form.describe()), form_(std::move(form)) {}
  const FrobeniusForm& form() const noexcept { return form_; }

 private:
  FrobeniusForm form_;
};

enum class Side { right, left };

struct EigenPair {
  double lambda = 0.0;
  MaxVector vector{1};
  Side side = Side::right;
};

/// mu(A) together with a strictly positive eigenvector normalized to max 1.
/// The vector is the column of (A/mu)* at the smallest critical node.  Left
/// eigenvectors are computed on A^T.
EigenPair principal_eigenpair(const MaxMatrix& a, Side side, Tolerance tol = {});

/// Nodes lying on some cycle that attains mu (within tolerance), ascending.
std::vector<std::size_t> critical_nodes(const MaxMatrix& a, Tolerance tol = {});

/// d mu / d a_pq at a matrix with a unique critical cycle of length k:
/// mu / (k a_pq) on the cycle's edges, 0 elsewhere.  Row-major n*n.
std::vector<double> mu_gradient(const MaxMatrix& a, Tolerance tol = {});

}  // namespace maxjsr
