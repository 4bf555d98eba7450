// Acceptance checks.  One line per criterion:
//   acceptance                 run all
//   acceptance --criterion N   run one (exit status reflects it)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "maxjsr/certificate.hpp"
#include "maxjsr/commands.hpp"
#include "maxjsr/geometry.hpp"
#include "maxjsr/oracles.hpp"
#include "maxjsr/regularity.hpp"
#include "maxjsr/setfile.hpp"

using namespace maxjsr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Json run_cli_json(std::vector<std::string> args) {
  args.insert(args.begin(), "maxjsr");
  args.push_back("--json");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw std::runtime_error("maxjsr " + args[1] + " exited " + std::to_string(code) + ": " + err.str());
  return Json::parse(out.str());
}

// Mixed sizes and densities with a fixed seed per instance.  Irreducible
// instances start at n = 2 so that mu > 0 (a 1x1 zero matrix is irreducible).
oracles::InstanceSpec spec_for(std::size_t t, std::size_t max_n, std::size_t max_set, std::uint64_t base,
                               bool irreducible) {
  static constexpr double kDensities[] = {0.3, 0.6, 1.0};
  oracles::InstanceSpec spec;
  const std::size_t min_n = irreducible ? 2 : 1;
  spec.n = min_n + t % (max_n - min_n + 1);
  spec.set_size = 1 + (t / max_n) % max_set;
  spec.density = kDensities[t % 3];
  spec.seed = derive_seed(base, t);
  spec.require_irreducible = irreducible;
  return spec;
}

// ------------------------------------------------------------------ 1

Outcome paper_example() {
  const auto t0 = Clock::now();
  const std::string file = std::string(MAXJSR_TEST_DATA) + "/paper_example.json";
  Outcome o;
  std::ostringstream d;

  const double mu = run_cli_json({"jsr", file})["payload"]["spectrum"]["mu"].get<double>();
  const bool jsr_ok = rel_close(mu, 1.0, 1e-12);
  d << "jsr=" << num(mu) << (jsr_ok ? "" : " (!)");

  const Json fin = run_cli_json({"finiteness", file})["payload"];
  const auto k = fin["k"].get<std::size_t>();
  const auto names = fin["matrix_names"].get<std::vector<std::string>>();
  const MaxMatrix product = matrix_from_json(fin["product"]);
  const bool k_ok = k == 3 && names == std::vector<std::string>{"A1", "A2", "A1"};
  d << "; k=" << k << " names=";
  for (const auto& n : names) d << n << (&n == &names.back() ? "" : ",");

  const MaxMatrix printed{{1.0, 1.0 / 3, 1.0 / 4},
                          {4.0 / 3, 20.0 / 45, 8.0 / 75},
                          {1.0 / 4, 2.0 / 15, 4.0 / 125}};
  bool product_ok = true;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (!rel_close(product(i, j), printed(i, j), 1e-12)) {
        product_ok = false;
        d << "; product(" << i + 1 << "," << j + 1 << ")=" << num(product(i, j)) << " vs printed "
          << num(printed(i, j));
      }
  const double mu_p = oracles::bf_cycle_mean(product).mu;
  const bool mu_p_ok = rel_close(mu_p, 1.0, 1e-12);
  d << "; mu(product)=" << num(mu_p);

  const double elapsed = seconds_since(t0);
  d << "; " << num(elapsed) << " s";
  o.pass = jsr_ok && k_ok && product_ok && mu_p_ok && elapsed < 1.0;
  o.detail = d.str();
  return o;
}

// ------------------------------------------------------------------ 2

Outcome barabanov_construction() {
  const auto t0 = Clock::now();
  const Tolerance tol{1e-9};
  std::size_t failures = 0;
  std::string first;
  for (std::size_t t = 0; t < 500; ++t) {
    const MatrixSet psi = oracles::generate(spec_for(t, 6, 4, 2002, true));
    const std::uint64_t seed = derive_seed(12, t);
    const WeightedMaxNorm nu = barabanov_norm(psi, tol);
    const auto ext = verify_extremal(psi, nu, 256, seed, tol);
    const auto bar = verify_barabanov(psi, nu, 256, seed, tol);
    if (!ext.ok || !bar.ok) {
      ++failures;
      if (first.empty()) first = "instance " + std::to_string(t) + ": " + ext.reason + bar.reason;
    }
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed < 60.0,
          "500 sets, " + std::to_string(failures) + " failures" + (first.empty() ? "" : " (" + first + ")") +
              "; " + num(elapsed) + " s"};
}

// ------------------------------------------------------------------ 3

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  static constexpr double kDensities[] = {0.2, 0.5, 1.0};
  std::mt19937_64 rng(3003);
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) {
    const MaxMatrix a = oracles::random_matrix(1 + t % 7, kDensities[t % 3], 0.1, 10.0, rng);
    const double fast = cycle_mean(a).mu;
    const double slow = oracles::bf_cycle_mean(a).mu;
    const double rel = fast == slow ? 0.0 : std::abs(fast - slow) / std::max(std::abs(fast), std::abs(slow));
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++mismatches;
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 120.0, "1000 matrices, " + std::to_string(mismatches) +
                                                  " mismatches, worst relative gap " + num(worst) + "; " +
                                                  num(elapsed) + " s"};
}

// ------------------------------------------------------------------ 4

Outcome sandwich_bounds() {
  std::size_t violations = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    const MatrixSet psi = oracles::generate(spec_for(t, 4, 3, 4004, false));
    const double mu = jsr(psi);
    for (unsigned m = 1; m <= 5; ++m) {
      const auto g = oracles::bf_gsr_truncation(psi, m);
      if (g.lower > mu + 1e-9) ++violations;
      if (g.norm_upper < mu - 1e-9) ++violations;
      const auto b = jsr_bounds(psi, m, WeightedMaxNorm::uniform(psi.dim()));
      if (b.lower > mu + 1e-9 || b.upper < mu - 1e-9) ++violations;
    }
  }
  return {violations == 0, "200 sets x m=1..5, " + std::to_string(violations) + " violations"};
}

// ------------------------------------------------------------------ 5

Outcome similarity_invariance() {
  std::size_t violations = 0;
  double worst = 0.0;
  std::mt19937_64 rng(5005);
  for (std::size_t t = 0; t < 200; ++t) {
    const MatrixSet psi = oracles::generate(spec_for(t, 6, 4, 5005, false));
    const MaxPermutation p = oracles::random_permutation(psi.dim(), rng);
    const MaxMatrix pm = p.to_matrix();
    const MaxMatrix pinv = perm_inverse(p).to_matrix();
    std::vector<NamedMatrix> conj;
    for (const auto& m : psi.members())
      conj.push_back({m.name, oracles::naive_product(oracles::naive_product(pm, m.matrix), pinv)});
    const double a = jsr(psi);
    const double b = jsr(MatrixSet(std::move(conj)));
    const double gap = std::abs(a - b) / std::max(1.0, a);
    worst = std::max(worst, gap);
    if (gap > 1e-9) ++violations;
  }
  return {violations == 0, "200 pairs, " + std::to_string(violations) + " violations, worst " + num(worst)};
}

// ------------------------------------------------------------------ 6

Outcome finiteness_property() {
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < 300; ++t) {
    const MatrixSet psi = oracles::generate(spec_for(t, 6, 4, 6006, true));
    const auto cert = finiteness_product(psi);
    // Rebuild A_k (x) ... (x) A_1 from the names with the naive product.
    MaxMatrix product = MaxMatrix::identity(psi.dim());
    for (const auto& name : cert.matrix_names) product = oracles::naive_product(psi.find(name)->matrix, product);
    const double mu_product = oracles::bf_cycle_mean(product).mu;
    const double gap = std::abs(std::pow(mu_product, 1.0 / cert.k) - jsr(psi));
    worst = std::max(worst, gap);
    if (cert.k > psi.dim() || cert.k != cert.matrix_names.size() || gap > 1e-8) ++failures;
  }
  return {failures == 0, "300 sets, " + std::to_string(failures) + " failures, worst gap " + num(worst)};
}

// ------------------------------------------------------------------ 7

Outcome lipschitz_transfer() {
  std::size_t violations = 0, pairs = 0, attempts = 0;
  double worst = -1.0;
  while (pairs < 200 && attempts < 2000) {
    const std::size_t t = attempts++;
    const MatrixSet psi = oracles::generate(spec_for(t, 6, 3, 7007, true));
    std::mt19937_64 rng(derive_seed(7007, t + 100000));
    const double radius = std::uniform_real_distribution<double>(0.001, 0.1)(rng);
    std::vector<NamedMatrix> moved;
    bool clamped = false;
    for (const auto& m : psi.members()) moved.push_back({m.name, perturb_in_ball(m.matrix, radius, rng, clamped)});
    const MatrixSet phi(std::move(moved));
    const double h = hausdorff(psi, phi).distance;
    if (h > 0.1 || !is_irreducible(aggregate(phi))) continue;
    ++pairs;
    const double c = std::max(eccentricity(barabanov_norm(psi)), eccentricity(barabanov_norm(phi)));
    const double slack = std::abs(jsr(phi) - jsr(psi)) - c * h;
    worst = std::max(worst, slack);
    if (slack > 1e-8) ++violations;
  }
  return {pairs == 200 && violations == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(violations) +
              " violations, max(|dmu| - C H) = " + num(worst)};
}

// ------------------------------------------------------------------ 8

Outcome hoelder_probe() {
  const auto t0 = Clock::now();
  const MaxMatrix a{{0, 1}, {0, 0}};
  std::vector<double> half;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    half.push_back(probe_matrix_regularity(a, 1e-2, 2048, 0.5, seed).max_ratio);
  const auto [lo, hi] = std::minmax_element(half.begin(), half.end());
  const double spread = *hi / *lo;

  // Same seed at every radius: the samples are rescaled copies of each other.
  const double radii[] = {1e-2, 1e-4, 1e-6};
  std::vector<double> lip;
  for (double r : radii) lip.push_back(probe_matrix_regularity(a, r, 2048, 1.0, 1).max_ratio);
  bool growth_ok = true;
  std::ostringstream d;
  d << "alpha=1/2 spread " << num(spread) << "x over 10 seeds; alpha=1 ratios";
  for (std::size_t k = 0; k < lip.size(); ++k) {
    d << " " << num(lip[k]);
    if (k > 0) growth_ok = growth_ok && lip[k] >= 10.0 * lip[k - 1];
  }
  d << " (growth";
  for (std::size_t k = 1; k < lip.size(); ++k) d << " " << num(lip[k] / lip[k - 1]) << "x";
  const double elapsed = seconds_since(t0);
  d << "); " << num(elapsed) << " s";
  return {spread < 3.0 && growth_ok && elapsed < 30.0, d.str()};
}

// ------------------------------------------------------------------ 9

Outcome gradient_check() {
  std::mt19937_64 rng(9009);
  std::size_t checked = 0, failures = 0, draws = 0;
  double worst = 0.0;
  const double h = 1e-6;
  while (checked < 100 && draws < 10000) {
    ++draws;
    const std::size_t n = 2 + draws % 5;
    const MaxMatrix a = oracles::random_matrix(n, 1.0, 0.1, 10.0, rng);
    if (oracles::bf_cycle_mean(a).attaining.size() != 1) continue;
    ++checked;
    const auto grad = mu_gradient(a);
    for (std::size_t k = 0; k < n * n; ++k) {
      std::vector<double> up(a.values().begin(), a.values().end()), down = up;
      up[k] += h;
      down[k] -= h;
      const double fd =
          (oracles::bf_cycle_mean(MaxMatrix(n, up)).mu - oracles::bf_cycle_mean(MaxMatrix(n, down)).mu) / (2 * h);
      const double err = std::abs(fd - grad[k]);
      worst = std::max(worst, err);
      if (err > 1e-5) ++failures;
    }
  }
  return {checked == 100 && failures == 0, std::to_string(checked) + " matrices, " + std::to_string(failures) +
                                               " entries off, worst abs error " + num(worst)};
}

// ------------------------------------------------------------------ 10

Outcome nonexistence_detector() {
  const MaxMatrix s{{2, 0}, {1, 1}};
  const auto r = barabanov_nonexistence(MatrixSet::from_matrices({s}));
  bool ok = r.no_barabanov_norm && r.witness && *r.witness == MaxVector{0.0, 1.0} &&
            apply(s, *r.witness) == *r.witness;
  std::ostringstream d;
  d << "reducible example " << (ok ? "detected with x=(0,1), S x = x" : "NOT detected correctly");
  std::size_t false_alarms = 0;
  for (std::size_t t = 0; t < 300; ++t)
    if (barabanov_nonexistence(oracles::generate(spec_for(t, 6, 4, 1010, true))).no_barabanov_norm) ++false_alarms;
  d << "; 300 irreducible sets, " << false_alarms << " false alarms";
  return {ok && false_alarms == 0, d.str()};
}

// ------------------------------------------------------------------ 11

using Rational = boost::multiprecision::cpp_rational;

// Exact residuation test for span membership on the exact values of the doubles.
bool exact_span_member(const std::vector<double>& x, const std::vector<std::vector<double>>& gens) {
  std::vector<Rational> best(x.size(), Rational(0));
  for (const auto& g : gens) {
    bool any = false;
    Rational alpha;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (g[j] == 0.0) continue;
      const Rational ratio = Rational(x[j]) / Rational(g[j]);
      if (!any || ratio < alpha) alpha = ratio;
      any = true;
    }
    if (!any) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Rational v = alpha * Rational(g[j]);
      if (v > best[j]) best[j] = v;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j)
    if (best[j] != Rational(x[j])) return false;
  return true;
}

Outcome membership_certificates() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t inside = 0, bad_certs = 0, rechecked = 0, disagreements = 0;
  for (std::size_t t = 0; t < 500; ++t) {
    const std::size_t n = 2 + t % 5;
    const std::size_t count = 1 + (t / 5) % 5;
    const HullMode mode = t % 2 == 0 ? HullMode::span : HullMode::conv;
    std::vector<std::vector<double>> gens(count, std::vector<double>(n));
    for (auto& g : gens)
      for (auto& e : g) e = unit(rng) < 0.2 ? 0.0 : std::exp(unit(rng) * 6 - 3);
    std::vector<double> x(n, 0.0);
    if ((t / 2) % 2 == 0) {
      // Inside by construction; power-of-two coefficients keep every
      // product exact, and in conv mode one coefficient is 1.
      const std::size_t unit_index = t % count;
      for (std::size_t i = 0; i < count; ++i) {
        const double alpha =
            mode == HullMode::conv && i == unit_index ? 1.0 : std::ldexp(1.0, -static_cast<int>(rng() % 7));
        for (std::size_t j = 0; j < n; ++j) x[j] = std::max(x[j], alpha * gens[i][j]);
      }
    } else {
      for (auto& e : x) e = std::exp(unit(rng) * 6 - 3);
    }
    std::vector<std::span<const double>> spans;
    for (const auto& g : gens) spans.push_back(g);
    const auto cert = hull_membership(x, spans, mode);
    if (cert.inside) {
      ++inside;
      const auto back = evaluate_combination(spans, cert.coefficients);
      bool ok = true;
      for (std::size_t j = 0; j < n; ++j) ok = ok && rel_close(back[j], x[j], 1e-12);
      if (mode == HullMode::conv)
        ok = ok && *std::max_element(cert.coefficients.begin(), cert.coefficients.end()) == 1.0;
      if (!ok) ++bad_certs;
    }
    if (t % 10 == 0) {
      ++rechecked;
      const bool float_span = hull_membership(x, spans, HullMode::span).inside;
      if (float_span != exact_span_member(x, gens)) ++disagreements;
    }
  }
  return {bad_certs == 0 && disagreements == 0,
          "500 instances, " + std::to_string(inside) + " inside, " + std::to_string(bad_certs) +
              " certificates failed re-evaluation; rational recheck " + std::to_string(rechecked) +
              " instances, " + std::to_string(disagreements) + " disagreements"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "paper golden example", paper_example},
      {2, "Barabanov construction", barabanov_construction},
      {3, "oracle equivalence", oracle_equivalence},
      {4, "sandwich bounds", sandwich_bounds},
      {5, "similarity invariance", similarity_invariance},
      {6, "finiteness property", finiteness_property},
      {7, "Lipschitz transfer", lipschitz_transfer},
      {8, "Hoelder probe", hoelder_probe},
      {9, "gradient check", gradient_check},
      {10, "nonexistence detector", nonexistence_detector},
      {11, "membership certificates", membership_certificates},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  int failed = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
