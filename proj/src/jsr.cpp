#include "maxjsr/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "maxjsr/error.hpp"

namespace maxjsr {

// ---------------------------------------------------------------- MatrixSet

MatrixSet::MatrixSet(std::vector<NamedMatrix> members) : members_(std::move(members)) {
  if (members_.empty()) throw InvalidValueError("matrix set must be nonempty");
  std::set<std::string> names;
  for (const auto& m : members_) {
    if (m.matrix.dim() != members_.front().matrix.dim())
      throw DimensionError("member '" + m.name + "' has dimension " +
                           std::to_string(m.matrix.dim()) + ", expected " +
                           std::to_string(members_.front().matrix.dim()));
    if (!names.insert(m.name).second)
      throw InvalidValueError("duplicate member name '" + m.name + "'");
  }
}

MatrixSet MatrixSet::from_matrices(std::vector<MaxMatrix> matrices) {
  std::vector<NamedMatrix> members;
  members.reserve(matrices.size());
  for (std::size_t i = 0; i < matrices.size(); ++i)
    members.push_back({"A" + std::to_string(i + 1), std::move(matrices[i])});
  return MatrixSet(std::move(members));
}

const NamedMatrix* MatrixSet::find(const std::string& name) const {
  for (const auto& m : members_)
    if (m.name == name) return &m;
  return nullptr;
}

MatrixSet MatrixSet::scaled(double c) const {
  std::vector<NamedMatrix> out;
  for (const auto& m : members_) out.push_back({m.name, m.matrix.scaled(c)});
  return MatrixSet(std::move(out));
}

MatrixSet MatrixSet::with(NamedMatrix extra) const {
  std::vector<NamedMatrix> out = members_;
  out.push_back(std::move(extra));
  return MatrixSet(std::move(out));
}

// ---------------------------------------------------------- WeightedMaxNorm

WeightedMaxNorm::WeightedMaxNorm(MaxVector weights) : weights_(std::move(weights)) {
  if (!weights_.strictly_positive())
    throw InvalidValueError("norm weights must be strictly positive");
}

double WeightedMaxNorm::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionError("norm evaluation");
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, weights_[i] * std::abs(x[i]));
  return best;
}

// ------------------------------------------------------------- basic pieces

MaxMatrix aggregate(const MatrixSet& psi) {
  MaxMatrix s = psi[0];
  for (std::size_t i = 1; i < psi.size(); ++i) s = max_add(s, psi[i]);
  return s;
}

double jsr(const MatrixSet& psi, Tolerance tol) { return cycle_mean(aggregate(psi), tol).mu; }

double induced_norm(const MaxMatrix& a, const WeightedMaxNorm& nu) {
  if (a.dim() != nu.dim()) throw DimensionError("induced_norm");
  const auto& v = nu.weights();
  double best = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (a(i, j) > 0.0) best = std::max(best, v[i] * a(i, j) / v[j]);
  return best;
}

MaxMatrix word_product(const MatrixSet& psi, std::span<const std::size_t> word) {
  MaxMatrix p = MaxMatrix::identity(psi.dim());
  for (std::size_t idx : word) p = max_mul(p, psi[idx], Execution::serial);
  return p;
}

// ------------------------------------------------------ product enumeration

namespace {

std::size_t checked_word_count(std::size_t letters, unsigned m, std::size_t budget) {
  std::size_t count = 1;
  for (unsigned t = 0; t < m; ++t) {
    if (count > budget / letters)
      throw BudgetError("|Psi|^m = " + std::to_string(letters) + "^" + std::to_string(m) +
                        " exceeds the enumeration budget " + std::to_string(budget));
    count *= letters;
  }
  return count;
}

void absorb(ProductExtrema& acc, const ProductExtrema& part) {
  if (acc.argmax_mu_word.empty() || part.max_mu > acc.max_mu) {
    acc.max_mu = part.max_mu;
    acc.argmax_mu_word = part.argmax_mu_word;
  }
  acc.max_induced = std::max(acc.max_induced, part.max_induced);
  acc.max_norm_inf = std::max(acc.max_norm_inf, part.max_norm_inf);
}

// Depth-first extension of a fixed prefix; words visited in lexicographic
// order so ties keep the first word.
void extend(const MatrixSet& psi, unsigned m, const WeightedMaxNorm& nu, Tolerance tol,
            std::vector<std::size_t>& word, const MaxMatrix& prefix, ProductExtrema& out) {
  if (word.size() == m) {
    const double mu = cycle_mean(prefix, tol).mu;
    if (out.argmax_mu_word.empty() || mu > out.max_mu) {
      out.max_mu = mu;
      out.argmax_mu_word = word;
    }
    out.max_induced = std::max(out.max_induced, induced_norm(prefix, nu));
    out.max_norm_inf = std::max(out.max_norm_inf, prefix.norm_inf());
    return;
  }
  for (std::size_t j = 0; j < psi.size(); ++j) {
    word.push_back(j);
    extend(psi, m, nu, tol, word, max_mul(prefix, psi[j], Execution::serial), out);
    word.pop_back();
  }
}

}  // namespace

ProductExtrema product_extrema(const MatrixSet& psi, unsigned m, const WeightedMaxNorm& nu,
                               Execution exec, std::size_t budget, Tolerance tol) {
  if (m == 0) throw InvalidValueError("product length must be positive");
  if (nu.dim() != psi.dim()) throw DimensionError("product_extrema norm");
  checked_word_count(psi.size(), m, budget);

  // Split on prefixes of length d so there is enough independent work.
  unsigned d = 0;
  std::size_t tasks = 1;
  while (d < m && tasks < 256) {
    tasks *= psi.size();
    ++d;
  }
  if (exec == Execution::serial) {
    d = 0;
    tasks = 1;
  }

  std::vector<ProductExtrema> parts(tasks);
  const auto run = [&](std::size_t t) {
    std::vector<std::size_t> word(d);
    std::size_t code = t;
    for (unsigned pos = d; pos-- > 0;) {
      word[pos] = code % psi.size();
      code /= psi.size();
    }
    word.reserve(m);
    extend(psi, m, nu, tol, word, word_product(psi, word), parts[t]);
  };
  if (exec == Execution::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(tasks);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < count; ++t) run(static_cast<std::size_t>(t));
  } else {
    run(0);
  }

  ProductExtrema total;
  for (const auto& part : parts) absorb(total, part);
  return total;
}

JsrBounds jsr_bounds(const MatrixSet& psi, unsigned m, const WeightedMaxNorm& nu,
                     std::size_t budget, Tolerance tol) {
  const ProductExtrema e = product_extrema(psi, m, nu, Execution::parallel, budget, tol);
  const double root = 1.0 / static_cast<double>(m);
  return JsrBounds{m, std::pow(e.max_mu, root), std::pow(e.max_induced, root),
                   e.argmax_mu_word};
}

// ---------------------------------------------------------- Barabanov norms

WeightedMaxNorm barabanov_norm(const MatrixSet& psi, Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  if (!is_irreducible(s))
    throw ReducibleError("Barabanov norm construction needs an irreducible S(Psi)",
                         frobenius_form(s, tol));
  return WeightedMaxNorm(principal_eigenpair(s, Side::left, tol).vector);
}

namespace {

std::vector<double> unit_vector(std::size_t n, std::size_t j, double scale) {
  std::vector<double> e(n, 0.0);
  e[j] = scale;
  return e;
}

MaxVector log_uniform_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = std::pow(10.0, exponent(rng));
  return MaxVector(std::move(x));
}

// Closed-form extremality eta_nu(A) <= level for every member.
bool extremal_closed_form(const MatrixSet& psi, const WeightedMaxNorm& nu, double level,
                          Tolerance tol, VerifyResult& out) {
  const auto& v = nu.weights();
  for (const auto& m : psi.members()) {
    const MaxMatrix& a = m.matrix;
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) {
        if (a(i, j) == 0.0) continue;
        if (!tol.less_equal(v[i] * a(i, j) / v[j], level)) {
          out.ok = false;
          out.reason = "induced norm of '" + m.name + "' exceeds the joint spectral radius";
          out.counterexample = unit_vector(a.dim(), j, 1.0 / v[j]);
          return false;
        }
      }
  }
  return true;
}

}  // namespace

VerifyResult verify_extremal(const MatrixSet& psi, const WeightedMaxNorm& nu,
                             std::size_t samples, std::uint64_t seed, Tolerance tol) {
  VerifyResult out;
  out.level = jsr(psi, tol);
  if (!extremal_closed_form(psi, nu, out.level, tol, out)) return out;
  for (std::size_t s = 0; s < samples; ++s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    const MaxVector x = log_uniform_vector(psi.dim(), rng);
    const double bound = out.level * nu(x);
    for (const auto& m : psi.members()) {
      if (!tol.less_equal(nu(apply(m.matrix, x)), bound)) {
        out.ok = false;
        out.reason = "nu(A x) > mu nu(x) for member '" + m.name + "'";
        out.counterexample = std::vector<double>(x.values().begin(), x.values().end());
        return out;
      }
    }
  }
  return out;
}

VerifyResult verify_barabanov_at(const MatrixSet& psi, const WeightedMaxNorm& nu, double level,
                                 std::size_t samples, std::uint64_t seed, Tolerance tol) {
  VerifyResult out;
  out.level = level;
  if (nu.dim() != psi.dim()) throw DimensionError("verify_barabanov");
  if (!extremal_closed_form(psi, nu, level, tol, out)) return out;

  const MaxMatrix s = aggregate(psi);
  const MaxVector vs = left_apply(nu.weights(), s);
  for (std::size_t j = 0; j < s.dim(); ++j) {
    if (!tol.equal(vs[j], level * nu.weights()[j])) {
      out.ok = false;
      out.reason = "max_i v_i s_ij != mu v_j at column " + std::to_string(j + 1);
      out.counterexample = unit_vector(s.dim(), j, 1.0 / nu.weights()[j]);
      return out;
    }
  }

  for (std::size_t t = 0; t < samples; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    const MaxVector x = log_uniform_vector(psi.dim(), rng);
    const double target = level * nu(x);
    double best = 0.0;
    for (const auto& m : psi.members()) best = std::max(best, nu(apply(m.matrix, x)));
    if (!tol.equal(best, target)) {
      out.ok = false;
      out.reason = "no member attains nu(A x) = mu nu(x)";
      out.counterexample = std::vector<double>(x.values().begin(), x.values().end());
      return out;
    }
  }
  return out;
}

VerifyResult verify_barabanov(const MatrixSet& psi, const WeightedMaxNorm& nu,
                              std::size_t samples, std::uint64_t seed, Tolerance tol) {
  return verify_barabanov_at(psi, nu, jsr(psi, tol), samples, seed, tol);
}

std::optional<double> barabanov_level(const MatrixSet& psi, const WeightedMaxNorm& nu,
                                      Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  const MaxVector vs = left_apply(nu.weights(), s);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    const double ratio = vs[j] / nu.weights()[j];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!tol.equal(lo, hi)) return std::nullopt;
  return hi;
}

// ------------------------------------------------------------ nonexistence

NonexistenceResult barabanov_nonexistence(const MatrixSet& psi, Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  NonexistenceResult out;
  out.form = frobenius_form(s, tol);
  const auto& form = out.form;
  const std::size_t p = form.classes.size();
  const double mu_s = *std::max_element(form.block_mus.begin(), form.block_mus.end());

  for (std::size_t i = 0; i < p; ++i) {
    const double mu_i = form.block_mus[i];
    if (!(mu_i < mu_s) || tol.equal(mu_i, mu_s)) continue;
    bool isolated = true;
    for (std::size_t j = 0; j < p && isolated; ++j)
      if (j != i && form.access[j][i] && !tol.equal(form.block_mus[j], mu_i)) isolated = false;
    if (!isolated) continue;

    // Nodes of every class that reaches class i; all share mu_i.
    std::vector<std::size_t> upstream;
    for (std::size_t j = 0; j < p; ++j)
      if (form.access[j][i])
        upstream.insert(upstream.end(), form.classes[j].begin(), form.classes[j].end());
    std::sort(upstream.begin(), upstream.end());

    std::vector<double> x(s.dim(), 0.0);
    if (mu_i == 0.0) {
      // Acyclic upstream part: a node nobody points to spans ker S.
      for (std::size_t c : upstream) {
        bool source = true;
        for (std::size_t r = 0; r < s.dim(); ++r)
          if (s(r, c) > 0.0) source = false;
        if (source) {
          x[c] = 1.0;
          break;
        }
      }
    } else {
      const MaxMatrix sub = s.principal(upstream).scaled(1.0 / mu_i);
      const MaxMatrix star = detail::closure(sub);
      const auto block_critical = critical_nodes(s.principal(form.classes[i]), tol);
      if (block_critical.empty()) throw ToleranceError("no critical node in the slow class");
      const std::size_t c_node = form.classes[i][block_critical.front()];
      const auto c_pos = static_cast<std::size_t>(
          std::find(upstream.begin(), upstream.end(), c_node) - upstream.begin());
      double top = 0.0;
      for (std::size_t r = 0; r < upstream.size(); ++r) top = std::max(top, star(r, c_pos));
      for (std::size_t r = 0; r < upstream.size(); ++r) x[upstream[r]] = star(r, c_pos) / top;
    }
    if (std::all_of(x.begin(), x.end(), [](double xi) { return xi == 0.0; })) continue;

    out.no_barabanov_norm = true;
    out.witness_class = i;
    out.eigenvalue = mu_i;
    out.witness = MaxVector(std::move(x));
    return out;
  }
  return out;
}

// --------------------------------------------------------------- finiteness

namespace {

FinitenessCertificate finiteness_irreducible(const MatrixSet& psi, Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  const double mu = cycle_mean(s, tol).mu;
  const MaxVector v = principal_eigenpair(s, Side::left, tol).vector;
  const std::size_t n = psi.dim();

  // Region i -> region l via member A when v_l a_li = mu v_i.
  const auto edge_member = [&](std::size_t i, std::size_t l) -> std::optional<std::size_t> {
    for (std::size_t m = 0; m < psi.size(); ++m) {
      const double a = psi[m](l, i);
      if (a > 0.0 && tol.equal(v[l] * a, mu * v[i])) return m;
    }
    return std::nullopt;
  };

  std::vector<std::ptrdiff_t> position(n, -1);
  std::vector<std::size_t> regions;
  std::vector<std::size_t> members;
  std::size_t node = 0;
  while (position[node] < 0) {
    position[node] = static_cast<std::ptrdiff_t>(regions.size());
    regions.push_back(node);
    std::optional<std::size_t> chosen;
    std::size_t next = n;
    for (std::size_t l = 0; l < n && !chosen; ++l) {
      chosen = edge_member(node, l);
      if (chosen) next = l;
    }
    if (!chosen)
      throw ToleranceError("region " + std::to_string(node + 1) +
                           " has no outgoing edge; try a smaller tolerance");
    members.push_back(*chosen);
    node = next;
  }
  const auto start = static_cast<std::size_t>(position[node]);

  FinitenessCertificate cert;
  cert.region_cycle.assign(regions.begin() + static_cast<std::ptrdiff_t>(start), regions.end());
  cert.matrix_indices.assign(members.begin() + static_cast<std::ptrdiff_t>(start), members.end());
  cert.k = cert.region_cycle.size();
  cert.mu = mu;
  return cert;
}

}  // namespace

FinitenessCertificate finiteness_product(const MatrixSet& psi, Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  const double mu = cycle_mean(s, tol).mu;
  if (mu == 0.0) throw DegenerateSpectrumError("mu(Psi) = 0: nothing to certify");

  FinitenessCertificate cert;
  if (is_irreducible(s)) {
    cert = finiteness_irreducible(psi, tol);
  } else {
    const FrobeniusForm form = frobenius_form(s, tol);
    std::size_t block = form.classes.size();
    for (std::size_t c = 0; c < form.classes.size() && block == form.classes.size(); ++c)
      if (tol.equal(form.block_mus[c], mu)) block = c;
    if (block == form.classes.size()) throw ToleranceError("no block attains mu(S)");
    const auto& nodes = form.classes[block];
    std::vector<NamedMatrix> restricted;
    for (const auto& m : psi.members()) restricted.push_back({m.name, m.matrix.principal(nodes)});
    cert = finiteness_irreducible(MatrixSet(std::move(restricted)), tol);
    for (auto& r : cert.region_cycle) r = nodes[r];
  }

  // Members are applied first to last: product = A_k (x) ... (x) A_1.
  std::vector<std::size_t> word(cert.matrix_indices.rbegin(), cert.matrix_indices.rend());
  cert.product = word_product(psi, word);
  cert.matrix_names.clear();
  for (std::size_t idx : cert.matrix_indices) cert.matrix_names.push_back(psi.members()[idx].name);
  cert.mu = mu;

  const double product_mu = cycle_mean(cert.product, tol).mu;
  const double expected = std::pow(mu, static_cast<double>(cert.k));
  if (cert.k > psi.dim() || !tol.equal(product_mu, expected))
    throw ToleranceError("finiteness certificate failed re-verification: mu(product) = " +
                         std::to_string(product_mu) + ", mu^k = " + std::to_string(expected));
  return cert;
}

// ----------------------------------------------------- max-convex invariance

MaxMatrix max_convex_combination(const MatrixSet& psi, std::span<const double> alphas) {
  if (alphas.size() != psi.size()) throw DimensionError("one coefficient per member required");
  MaxMatrix out = MaxMatrix::zero(psi.dim());
  for (std::size_t i = 0; i < psi.size(); ++i) out = max_add(out, psi[i].scaled(alphas[i]));
  return out;
}

bool conv_invariance_check(const MatrixSet& psi, std::size_t trials, std::uint64_t seed,
                           Tolerance tol) {
  const double base = jsr(psi, tol);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    std::vector<double> alphas(psi.size());
    for (double& a : alphas) a = unit(rng);
    alphas[std::uniform_int_distribution<std::size_t>(0, psi.size() - 1)(rng)] = 1.0;
    const MatrixSet extended =
        psi.with({"conv#" + std::to_string(t), max_convex_combination(psi, alphas)});
    if (!tol.equal(jsr(extended, tol), base)) return false;
  }
  return true;
}

}  // namespace maxjsr
