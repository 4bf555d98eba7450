#include "maxjsr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxjsr/error.hpp"

namespace maxjsr::oracles {

namespace {

double geometric_mean(const MaxMatrix& a, const std::vector<std::size_t>& cycle) {
  double product = 1.0;
  for (std::size_t t = 0; t < cycle.size(); ++t)
    product *= a(cycle[t], cycle[(t + 1) % cycle.size()]);
  return cycle.size() == 1 ? product : std::pow(product, 1.0 / static_cast<double>(cycle.size()));
}

// All elementary cycles whose smallest node is `start`.
void cycles_from(const MaxMatrix& a, std::size_t start, std::vector<std::size_t>& path,
                 std::vector<bool>& used, std::vector<std::vector<std::size_t>>& out) {
  const std::size_t v = path.back();
  for (std::size_t w = start; w < a.dim(); ++w) {
    if (a(v, w) <= 0.0) continue;
    if (w == start) {
      out.push_back(path);
    } else if (!used[w]) {
      used[w] = true;
      path.push_back(w);
      cycles_from(a, start, path, used, out);
      path.pop_back();
      used[w] = false;
    }
  }
}

double norm_inf(const MaxMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) row += a(i, j);
    best = std::max(best, row);
  }
  return best;
}

}  // namespace

BruteForceCycles bf_cycle_mean(const MaxMatrix& a, Tolerance tol) {
  if (a.dim() > kMaxEnumerationDim)
    throw BudgetError("brute-force cycle enumeration limited to n <= 9");
  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t s = 0; s < a.dim(); ++s) {
    std::vector<std::size_t> path{s};
    std::vector<bool> used(a.dim(), false);
    used[s] = true;
    cycles_from(a, s, path, used, cycles);
  }
  BruteForceCycles out;
  std::vector<double> means;
  means.reserve(cycles.size());
  for (const auto& c : cycles) {
    means.push_back(geometric_mean(a, c));
    out.mu = std::max(out.mu, means.back());
  }
  if (out.mu == 0.0) return out;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    if (tol.equal(means[i], out.mu)) out.attaining.push_back(cycles[i]);
  return out;
}

MaxMatrix naive_product(const MaxMatrix& a, const MaxMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("naive_product");
  const std::size_t n = a.dim();
  MaxMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double best = 0.0;
      for (std::size_t k = 0; k < n; ++k) best = std::max(best, a(i, k) * b(k, j));
      c.set(i, j, best);
    }
  return c;
}

GsrTruncation bf_gsr_truncation(const MatrixSet& psi, unsigned m, std::size_t budget) {
  if (m == 0) throw InvalidValueError("product length must be positive");
  std::size_t count = 1;
  for (unsigned t = 0; t < m; ++t) {
    if (count > budget / psi.size()) throw BudgetError("|Psi|^m exceeds the oracle budget");
    count *= psi.size();
  }
  double max_mu = 0.0;
  double max_norm = 0.0;
  std::vector<std::size_t> word(m, 0);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (unsigned pos = 0; pos < m; ++pos) {
      word[pos] = c % psi.size();
      c /= psi.size();
    }
    MaxMatrix product = psi[word[0]];
    for (unsigned pos = 1; pos < m; ++pos) product = naive_product(product, psi[word[pos]]);
    max_mu = std::max(max_mu, bf_cycle_mean(product).mu);
    max_norm = std::max(max_norm, norm_inf(product));
  }
  const double root = 1.0 / static_cast<double>(m);
  return {std::pow(max_mu, root), std::pow(max_norm, root)};
}

bool naive_irreducible(const MaxMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<char> reach(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i * n + j] = (i == j) || a(i, j) > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i * n + k] && reach[k * n + j]) reach[i * n + j] = 1;
  return std::all_of(reach.begin(), reach.end(), [](char r) { return r != 0; });
}

MaxMatrix random_matrix(std::size_t n, double density, double low, double high,
                        std::mt19937_64& rng) {
  std::bernoulli_distribution positive(density);
  std::uniform_real_distribution<double> log_entry(std::log(low), std::log(high));
  std::vector<double> entries(n * n, 0.0);
  for (double& e : entries)
    if (positive(rng)) e = std::exp(log_entry(rng));
  return MaxMatrix(n, std::move(entries));
}

MaxPermutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::uniform_real_distribution<double> log_weight(std::log(0.25), std::log(4.0));
  std::vector<double> w(n);
  for (double& x : w) x = std::exp(log_weight(rng));
  return MaxPermutation(std::move(sigma), MaxVector(std::move(w)));
}

MatrixSet generate(const InstanceSpec& spec) {
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw InvalidValueError("density must lie in (0, 1]");
  if (!(spec.low > 0.0 && spec.low <= spec.high))
    throw InvalidValueError("entry range must satisfy 0 < low <= high");
  if (spec.n == 0 || spec.set_size == 0) throw InvalidValueError("empty instance requested");

  std::mt19937_64 rng(spec.seed);
  for (std::size_t attempt = 0; attempt <= spec.max_retries; ++attempt) {
    std::vector<MaxMatrix> members;
    for (std::size_t m = 0; m < spec.set_size; ++m)
      members.push_back(random_matrix(spec.n, spec.density, spec.low, spec.high, rng));
    MatrixSet set = MatrixSet::from_matrices(std::move(members));
    if (!spec.require_irreducible) return set;
    MaxMatrix s = set[0];
    for (std::size_t m = 1; m < set.size(); ++m)
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j) s.set(i, j, std::max(s(i, j), set[m](i, j)));
    if (naive_irreducible(s)) return set;
  }
  throw RetryExhaustedError("no irreducible instance after " + std::to_string(spec.max_retries) +
                            " retries");
}

}  // namespace maxjsr::oracles
