#pragma once

// Max-times semiring (R_+, max, *) on dense square matrices and vectors.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "maxjsr/execution.hpp"
#include "maxjsr/tolerance.hpp"

namespace maxjsr {

/// Nonnegative vector; every entry finite and >= 0.
class MaxVector {
 public:
  explicit MaxVector(std::size_t n, double fill = 0.0);
  explicit MaxVector(std::vector<double> entries);
  MaxVector(std::initializer_list<double> entries);

  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  void set(std::size_t i, double value);

  std::span<const double> values() const noexcept { return data_; }
  double max() const;
  double min() const;
  /// Every entry strictly positive (x >> 0).
  bool strictly_positive() const;

  friend bool operator==(const MaxVector&, const MaxVector&) = default;

 private:
  std::vector<double> data_;
};

/// Square nonnegative matrix stored row-major.
class MaxMatrix {
 public:
  /// n x n matrix filled with `fill`.
  explicit MaxMatrix(std::size_t n, double fill = 0.0);
  MaxMatrix(std::size_t n, std::vector<double> row_major);
  MaxMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static MaxMatrix identity(std::size_t n);
  static MaxMatrix zero(std::size_t n) { return MaxMatrix(n); }

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value);

  std::span<const double> values() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * n_, n_);
  }

  MaxMatrix transpose() const;
  MaxMatrix scaled(double c) const;
  /// Principal submatrix on the given index set (in the given order).
  MaxMatrix principal(std::span<const std::size_t> indices) const;

  double max_entry() const;
  /// Maximum absolute row sum, the norm induced by the vector infinity norm.
  double norm_inf() const;

  friend bool operator==(const MaxMatrix&, const MaxMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// (A (x) B)_ij = max_k a_ik b_kj.  Large products run the OpenMP kernel.
MaxMatrix max_mul(const MaxMatrix& a, const MaxMatrix& b);
MaxMatrix max_mul(const MaxMatrix& a, const MaxMatrix& b, Execution exec);

/// Entrywise maximum.
MaxMatrix max_add(const MaxMatrix& a, const MaxMatrix& b);

/// A^0 = I, A^p = A (x) A^(p-1).
MaxMatrix max_power(const MaxMatrix& a, unsigned p);

/// I + B + ... + B^(n-1).  Throws DivergenceError when the maximal cycle
/// geometric mean of B exceeds 1 + tau.
MaxMatrix kleene_star(const MaxMatrix& b, Tolerance tol = {});

/// (A (x) x)_i = max_j a_ij x_j.
MaxVector apply(const MaxMatrix& a, const MaxVector& x);
/// (v^T (x) A)_j = max_i v_i a_ij.
MaxVector left_apply(const MaxVector& v, const MaxMatrix& a);

/// Max-invertible (generalized permutation) matrix: row i holds v_i in
/// column sigma(i) and zeros elsewhere.
class MaxPermutation {
 public:
  MaxPermutation(std::vector<std::size_t> sigma, MaxVector weights);

  std::size_t dim() const noexcept { return sigma_.size(); }
  std::span<const std::size_t> sigma() const noexcept { return sigma_; }
  const MaxVector& weights() const noexcept { return weights_; }
  MaxMatrix to_matrix() const;

 private:
  std::vector<std::size_t> sigma_;
  MaxVector weights_;
};

/// Q = P^-1 with q_ij = 1/v_j at j = sigma^-1(i).
MaxPermutation perm_inverse(const MaxPermutation& p);

/// P (x) A (x) P^-1, computed entrywise as (v_i / v_j) a_{sigma(i), sigma(j)}.
MaxMatrix perm_conjugate(const MaxPermutation& p, const MaxMatrix& a);

namespace detail {

MaxMatrix max_mul_serial(const MaxMatrix& a, const MaxMatrix& b);
MaxMatrix max_mul_parallel(const MaxMatrix& a, const MaxMatrix& b);

/// Max-times transitive closure I + B + B^2 + ... via Floyd-Warshall without
/// the divergence check.  Equals the Kleene star whenever mu(B) <= 1.
MaxMatrix closure(const MaxMatrix& b);

}  // namespace detail

}  // namespace maxjsr
