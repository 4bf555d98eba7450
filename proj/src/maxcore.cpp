#include "maxjsr/maxcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxjsr/error.hpp"
#include "maxjsr/spectral.hpp"

namespace maxjsr {

namespace {

// Below this dimension the thread fork costs more than the product.
constexpr std::size_t kParallelMulThreshold = 64;

void check_entry(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidValueError("entries must be finite and nonnegative, got " +
                            std::to_string(value));
  }
}

void check_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

// ---------------------------------------------------------------- MaxVector

MaxVector::MaxVector(std::size_t n, double fill) : data_(n, fill) {
  if (n == 0) throw InvalidValueError("vector dimension must be positive");
  check_entry(fill);
}

MaxVector::MaxVector(std::vector<double> entries) : data_(std::move(entries)) {
  if (data_.empty()) throw InvalidValueError("vector dimension must be positive");
  for (double x : data_) check_entry(x);
}

MaxVector::MaxVector(std::initializer_list<double> entries)
    : MaxVector(std::vector<double>(entries)) {}

void MaxVector::set(std::size_t i, double value) {
  check_entry(value);
  data_.at(i) = value;
}

double MaxVector::max() const { return *std::max_element(data_.begin(), data_.end()); }
double MaxVector::min() const { return *std::min_element(data_.begin(), data_.end()); }

bool MaxVector::strictly_positive() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x > 0.0; });
}

// ---------------------------------------------------------------- MaxMatrix

MaxMatrix::MaxMatrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {
  if (n == 0) throw InvalidValueError("matrix dimension must be positive");
  check_entry(fill);
}

MaxMatrix::MaxMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (n == 0) throw InvalidValueError("matrix dimension must be positive");
  if (data_.size() != n * n) {
    throw DimensionError("expected " + std::to_string(n * n) + " entries, got " +
                         std::to_string(data_.size()));
  }
  for (double x : data_) check_entry(x);
}

MaxMatrix::MaxMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  if (n_ == 0) throw InvalidValueError("matrix dimension must be positive");
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw DimensionError("ragged initializer");
    for (double x : r) {
      check_entry(x);
      data_.push_back(x);
    }
  }
}

MaxMatrix MaxMatrix::identity(std::size_t n) {
  MaxMatrix id(n);
  for (std::size_t i = 0; i < n; ++i) id.data_[i * n + i] = 1.0;
  return id;
}

void MaxMatrix::set(std::size_t i, std::size_t j, double value) {
  check_entry(value);
  data_.at(i * n_ + j) = value;
}

MaxMatrix MaxMatrix::transpose() const {
  MaxMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t.data_[j * n_ + i] = data_[i * n_ + j];
  return t;
}

MaxMatrix MaxMatrix::scaled(double c) const {
  check_entry(c);
  MaxMatrix s(n_);
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] = c * data_[k];
  return s;
}

MaxMatrix MaxMatrix::principal(std::span<const std::size_t> indices) const {
  MaxMatrix sub(indices.size());
  const std::size_t m = indices.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      sub.data_[i * m + j] = (*this)(indices[i], indices[j]);
  return sub;
}

double MaxMatrix::max_entry() const { return *std::max_element(data_.begin(), data_.end()); }

double MaxMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (double x : row(i)) sum += x;
    best = std::max(best, sum);
  }
  return best;
}

// --------------------------------------------------------------- arithmetic

namespace detail {

MaxMatrix max_mul_serial(const MaxMatrix& a, const MaxMatrix& b) {
  check_same_dim(a.dim(), b.dim(), "max_mul");
  const std::size_t n = a.dim();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) row[j] = std::max(row[j], aik * bk[j]);
    }
  }
  return MaxMatrix(n, std::move(out));
}

MaxMatrix max_mul_parallel(const MaxMatrix& a, const MaxMatrix& b) {
  check_same_dim(a.dim(), b.dim(), "max_mul");
  const std::size_t n = a.dim();
  std::vector<double> out(n * n, 0.0);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* row = out.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) row[j] = std::max(row[j], aik * bk[j]);
    }
  }
  return MaxMatrix(n, std::move(out));
}

MaxMatrix closure(const MaxMatrix& b) {
  const std::size_t n = b.dim();
  std::vector<double> c(b.values().begin(), b.values().end());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double cik = c[i * n + k];
      if (cik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        c[i * n + j] = std::max(c[i * n + j], cik * c[k * n + j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) c[i * n + i] = std::max(c[i * n + i], 1.0);
  return MaxMatrix(n, std::move(c));
}

}  // namespace detail

MaxMatrix max_mul(const MaxMatrix& a, const MaxMatrix& b) {
  return max_mul(a, b,
                 a.dim() >= kParallelMulThreshold ? Execution::parallel
                                                  : Execution::serial);
}

MaxMatrix max_mul(const MaxMatrix& a, const MaxMatrix& b, Execution exec) {
  return exec == Execution::parallel ? detail::max_mul_parallel(a, b)
                                     : detail::max_mul_serial(a, b);
}

MaxMatrix max_add(const MaxMatrix& a, const MaxMatrix& b) {
  check_same_dim(a.dim(), b.dim(), "max_add");
  const std::size_t n = a.dim();
  std::vector<double> out(n * n);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::max(a.values()[k], b.values()[k]);
  return MaxMatrix(n, std::move(out));
}

MaxMatrix max_power(const MaxMatrix& a, unsigned p) {
  MaxMatrix result = MaxMatrix::identity(a.dim());
  for (unsigned i = 0; i < p; ++i) result = max_mul(a, result);
  return result;
}

MaxMatrix kleene_star(const MaxMatrix& b, Tolerance tol) {
  const double mu = cycle_mean(b, tol).mu;
  if (!tol.less_equal(mu, 1.0)) {
    throw DivergenceError("Kleene star diverges: maximal cycle mean " +
                          std::to_string(mu) + " exceeds 1");
  }
  return detail::closure(b);
}

MaxVector apply(const MaxMatrix& a, const MaxVector& x) {
  check_same_dim(a.dim(), x.size(), "apply");
  const std::size_t n = a.dim();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] = std::max(out[i], a(i, j) * x[j]);
  return MaxVector(std::move(out));
}

MaxVector left_apply(const MaxVector& v, const MaxMatrix& a) {
  check_same_dim(a.dim(), v.size(), "left_apply");
  const std::size_t n = a.dim();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j] = std::max(out[j], v[i] * a(i, j));
  return MaxVector(std::move(out));
}

// ----------------------------------------------------------- MaxPermutation

MaxPermutation::MaxPermutation(std::vector<std::size_t> sigma, MaxVector weights)
    : sigma_(std::move(sigma)), weights_(std::move(weights)) {
  check_same_dim(sigma_.size(), weights_.size(), "MaxPermutation");
  std::vector<bool> seen(sigma_.size(), false);
  for (std::size_t s : sigma_) {
    if (s >= sigma_.size() || seen[s]) throw InvalidValueError("sigma is not a permutation");
    seen[s] = true;
  }
  if (!weights_.strictly_positive())
    throw InvalidValueError("max-invertible weights must be strictly positive");
}

MaxMatrix MaxPermutation::to_matrix() const {
  MaxMatrix p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p.set(i, sigma_[i], weights_[i]);
  return p;
}

MaxPermutation perm_inverse(const MaxPermutation& p) {
  // Row i of Q has 1/v_j in column j = sigma^-1(i).
  const std::size_t n = p.dim();
  std::vector<std::size_t> inv(n);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = p.sigma()[j];
    inv[i] = j;
    w[i] = 1.0 / p.weights()[j];
  }
  return MaxPermutation(std::move(inv), MaxVector(std::move(w)));
}

MaxMatrix perm_conjugate(const MaxPermutation& p, const MaxMatrix& a) {
  check_same_dim(p.dim(), a.dim(), "perm_conjugate");
  const std::size_t n = a.dim();
  const auto sigma = p.sigma();
  const auto& v = p.weights();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = v[i] / v[j] * a(sigma[i], sigma[j]);
  return MaxMatrix(n, std::move(out));
}

}  // namespace maxjsr
