#include "maxjsr/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "maxjsr/error.hpp"
#include "maxjsr/geometry.hpp"
#include "maxjsr/oracles.hpp"
#include "maxjsr/regularity.hpp"

namespace maxjsr {

namespace {

class Recorder {
 public:
  void add(std::string name, bool passed, std::string detail = {}) {
    out.push_back({std::move(name), passed, std::move(detail)});
  }
  std::vector<PropertyOutcome> out;
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::size_t max_depth(std::size_t letters, std::size_t limit, std::size_t budget) {
  std::size_t depth = 0;
  std::size_t count = 1;
  while (depth < limit && count <= budget / letters) {
    count *= letters;
    ++depth;
  }
  return depth;
}

MatrixSet perturbed_copy(const MatrixSet& psi, double radius, std::mt19937_64& rng) {
  std::vector<NamedMatrix> members;
  bool clamped = false;
  for (const auto& m : psi.members())
    members.push_back({m.name, perturb_in_ball(m.matrix, radius, rng, clamped)});
  return MatrixSet(std::move(members));
}

}  // namespace

std::vector<PropertyOutcome> run_invariant_suite(const MatrixSet& psi, std::uint64_t seed,
                                                 Tolerance tol) {
  Recorder rec;
  std::mt19937_64 rng(seed);
  const std::size_t n = psi.dim();
  const MaxMatrix s = aggregate(psi);
  const CycleMeanResult cm = cycle_mean(s, tol);
  const double mu = cm.mu;

  if (n <= 7) {
    const double bf = oracles::bf_cycle_mean(s, tol).mu;
    rec.add("oracle equivalence", std::abs(bf - mu) <= 1e-12 * std::max(1.0, bf),
            "karp " + num(mu) + " vs enumeration " + num(bf));
  }
  rec.add("witness attains mu",
          cm.witness_cycle.empty() ? mu == 0.0 : tol.equal(cycle_geometric_mean(s, cm.witness_cycle), mu));
  rec.add("transpose invariance", tol.equal(cycle_mean(s.transpose(), tol).mu, mu));
  {
    bool ok = true;
    for (unsigned k = 2; k <= 4; ++k)
      ok = ok && tol.equal(cycle_mean(max_power(s, k), tol).mu, std::pow(mu, k));
    rec.add("power law", ok);
  }
  {
    const MaxPermutation p = oracles::random_permutation(n, rng);
    std::vector<NamedMatrix> conj;
    for (const auto& m : psi.members()) conj.push_back({m.name, perm_conjugate(p, m.matrix)});
    const double mu_conj = jsr(MatrixSet(std::move(conj)), tol);
    rec.add("similarity invariance", tol.equal(mu_conj, mu), num(mu_conj) + " vs " + num(mu));
  }
  rec.add("homogeneity", tol.equal(jsr(psi.scaled(2.5), tol), 2.5 * mu) &&
                             tol.equal(jsr(psi.scaled(0.4), tol), 0.4 * mu));

  const std::size_t depth = max_depth(psi.size(), 5, 200'000);
  {
    bool ok = true;
    std::string detail;
    std::vector<double> u;
    for (unsigned m = 1; m <= depth; ++m) {
      const ProductExtrema e = product_extrema(psi, m, WeightedMaxNorm::uniform(n),
                                               Execution::parallel, kProductBudget, tol);
      const double root = 1.0 / m;
      const double lower = std::pow(e.max_mu, root);
      const double upper = std::pow(e.max_induced, root);
      u.push_back(std::pow(e.max_norm_inf, root));
      if (!tol.less_equal(lower, mu) || !tol.less_equal(mu, upper) || !tol.less_equal(mu, u.back())) {
        ok = false;
        detail = "depth " + std::to_string(m) + ": " + num(lower) + " <= " + num(mu) + " <= " +
                 num(upper) + " violated";
      }
    }
    rec.add("sandwich bounds", ok, detail);
    if (u.size() == 5) rec.add("Berger-Wang approach", u[4] - mu < u[0] - mu + tol.slack(u[0], mu));
  }
  if (n <= oracles::kMaxEnumerationDim && psi.size() <= 3) {
    bool ok = true;
    for (unsigned m = 1; m <= std::min<std::size_t>(depth, 4); ++m) {
      const auto t = oracles::bf_gsr_truncation(psi, m);
      ok = ok && tol.less_equal(t.lower, mu) && tol.less_equal(mu, t.norm_upper);
    }
    rec.add("truncated GSR oracle", ok);
  }
  rec.add("max-convex hull invariance", conv_invariance_check(psi, 16, seed, tol));
  {
    std::vector<MaxMatrix> gens;
    for (const auto& m : psi.members()) gens.push_back(m.matrix);
    const auto cert = hull_membership(s, gens, HullMode::conv, tol);
    rec.add("aggregate in max-convex hull",
            cert.inside && std::all_of(cert.coefficients.begin(), cert.coefficients.end(),
                                       [&](double a) { return tol.equal(a, 1.0); }));
  }

  const bool irreducible = is_irreducible(s);
  if (irreducible && mu > 0.0) {
    const WeightedMaxNorm nu = barabanov_norm(psi, tol);
    const auto ext = verify_extremal(psi, nu, kDefaultVerifySamples, seed, tol);
    const auto bar = verify_barabanov(psi, nu, kDefaultVerifySamples, seed, tol);
    rec.add("Barabanov norm verifies", ext.ok && bar.ok, ext.reason + bar.reason);
    double eta = 0.0;
    for (const auto& m : psi.members()) eta = std::max(eta, induced_norm(m.matrix, nu));
    rec.add("norm characterization", tol.equal(eta, mu), num(eta) + " vs " + num(mu));
    const auto level = barabanov_level(psi, nu, tol);
    rec.add("Barabanov converse", level && tol.equal(*level, mu));
    rec.add("eccentricity >= 1", eccentricity(nu) >= 1.0);

    const EigenPair right = principal_eigenpair(s, Side::right, tol);
    const MaxVector sv = apply(s, right.vector);
    bool eig = right.vector.strictly_positive();
    for (std::size_t i = 0; i < n; ++i) eig = eig && tol.equal(sv[i], mu * right.vector[i]);
    rec.add("eigenvector consistency", eig);

    try {
      const auto cert = finiteness_product(psi, tol);
      rec.add("finiteness certificate",
              cert.k <= n && tol.equal(std::pow(cycle_mean(cert.product, tol).mu, 1.0 / cert.k), mu));
    } catch (const Error& e) {
      rec.add("finiteness certificate", false, e.what());
    }

    const MatrixSet normalized = psi.scaled(1.0 / mu);
    const double bound = detail::closure(aggregate(normalized)).max_entry();
    bool bounded = true;
    for (unsigned m = 1; m <= max_depth(psi.size(), 6, 50'000); ++m) {
      const auto e = product_extrema(normalized, m, WeightedMaxNorm::uniform(n),
                                     Execution::parallel, kProductBudget, tol);
      // max entry of B equals eta of B for the uniform norm.
      bounded = bounded && tol.less_equal(e.max_induced, bound);
    }
    rec.add("normalized semigroup bounded", bounded);

    rec.add("nonexistence detector silent", !barabanov_nonexistence(psi, tol).no_barabanov_norm);
  } else {
    const auto ne = barabanov_nonexistence(psi, tol);
    if (ne.no_barabanov_norm) {
      const MaxVector sx = apply(s, *ne.witness);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && tol.equal(sx[i], ne.eigenvalue * (*ne.witness)[i]);
      rec.add("nonexistence witness", ok && ne.eigenvalue < mu);
    }
  }

  if (cm.unique_critical && mu > 0.0) {
    const std::vector<double> grad = mu_gradient(s, tol);
    const double h = 1e-6;
    bool ok = true;
    for (std::size_t k = 0; k < n * n && ok; ++k) {
      if (s.values()[k] <= h) continue;
      std::vector<double> up(s.values().begin(), s.values().end());
      std::vector<double> down = up;
      up[k] += h;
      down[k] -= h;
      const double fd = (cycle_mean(MaxMatrix(n, up), tol).mu - cycle_mean(MaxMatrix(n, down), tol).mu) / (2 * h);
      ok = std::abs(fd - grad[k]) <= 1e-5;
    }
    rec.add("gradient matches finite differences", ok);
  }

  {
    const MatrixSet phi = perturbed_copy(psi, 0.05, rng);
    const auto h1 = hausdorff(psi, phi);
    const auto h2 = hausdorff(phi, psi);
    rec.add("Hausdorff symmetry", tol.equal(h1.distance, h2.distance));
    // Entrywise, not in the row-sum norm: different rows of S may take
    // their maxima from different members, so row sums can add up.
    const MaxMatrix t = aggregate(phi);
    double entry_gap = 0.0;
    for (std::size_t k = 0; k < n * n; ++k)
      entry_gap = std::max(entry_gap, std::abs(s.values()[k] - t.values()[k]));
    rec.add("aggregate map 1-Lipschitz (entrywise)", tol.less_equal(entry_gap, h1.distance),
            num(entry_gap) + " vs " + num(h1.distance));
    if (irreducible && is_irreducible(aggregate(phi)) && mu > 0.0) {
      const double c = std::max(eccentricity(barabanov_norm(psi, tol)),
                                eccentricity(barabanov_norm(phi, tol)));
      const double diff = std::abs(jsr(phi, tol) - mu);
      rec.add("Lipschitz transfer", diff <= c * h1.distance + 1e-8,
              num(diff) + " <= " + num(c) + " * " + num(h1.distance));
    }
  }
  return rec.out;
}

}  // namespace maxjsr
