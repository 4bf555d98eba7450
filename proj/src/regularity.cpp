#include "maxjsr/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "maxjsr/error.hpp"
#include "maxjsr/geometry.hpp"

namespace maxjsr {

MaxMatrix perturb_in_ball(const MaxMatrix& a, double radius, std::mt19937_64& rng, bool& clamped) {
  const std::size_t n = a.dim();
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> out(a.values().begin(), a.values().end());
  std::vector<double> e(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // (E_1..E_n) / (E_1 + ... + E_{n+1}) is uniform on the solid simplex;
    // random signs turn it into the l1 ball.
    double total = 0.0;
    for (double& x : e) total += (x = expo(rng));
    for (std::size_t j = 0; j < n; ++j) {
      const double d = radius * e[j] / total * (sign(rng) ? 1.0 : -1.0);
      double& entry = out[i * n + j];
      entry += d;
      if (entry < 0.0) {
        entry = 0.0;
        clamped = true;
      }
    }
  }
  return MaxMatrix(n, std::move(out));
}

namespace {

struct Sample {
  double ratio = 0.0;
  bool zero_distance = false;
  bool clamped = false;
};

template <typename Draw, typename Value, typename Distance>
RegularityProbe run_probe(const MatrixSet& center, double radius, std::size_t pairs, double alpha,
                          std::uint64_t seed, Execution exec, Draw draw, Value value,
                          Distance distance) {
  if (radius < 0.0 || !std::isfinite(radius)) throw InvalidValueError("radius must be >= 0");
  if (!(alpha > 0.0)) throw InvalidValueError("alpha must be positive");

  std::vector<Sample> samples(pairs);
  const auto evaluate = [&](std::size_t p) {
    std::mt19937_64 rng(derive_seed(seed, p));
    Sample& s = samples[p];
    const MatrixSet x = draw(rng, s.clamped);
    const MatrixSet y = draw(rng, s.clamped);
    const double d = distance(x, y);
    if (d == 0.0) {
      s.zero_distance = true;
      return;
    }
    s.ratio = std::abs(value(x) - value(y)) / std::pow(d, alpha);
  };
  if (exec == Execution::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(pairs);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) evaluate(static_cast<std::size_t>(p));
  } else {
    for (std::size_t p = 0; p < pairs; ++p) evaluate(p);
  }

  RegularityProbe probe{pairs, 0, 0, 0, 0.0, alpha, radius, seed, center, std::nullopt};
  std::size_t best = pairs;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Sample& s = samples[p];
    if (s.clamped) ++probe.clamped;
    if (s.zero_distance) {
      ++probe.skipped;
      continue;
    }
    ++probe.evaluated;
    if (best == pairs || s.ratio > probe.max_ratio) {
      probe.max_ratio = s.ratio;
      best = p;
    }
  }
  if (best < pairs) {
    // Replay the attaining pair; the per-pair stream makes this exact.
    std::mt19937_64 rng(derive_seed(seed, best));
    bool ignored = false;
    MatrixSet x = draw(rng, ignored);
    MatrixSet y = draw(rng, ignored);
    const double vx = value(x);
    const double vy = value(y);
    const double d = distance(x, y);
    probe.witness = ProbeWitness{std::move(x), std::move(y), vx, vy, d};
  }
  return probe;
}

}  // namespace

RegularityProbe probe_matrix_regularity(const MaxMatrix& a, double radius, std::size_t pairs,
                                        double alpha, std::uint64_t seed, Execution exec) {
  const MatrixSet center({{"A", a}});
  return run_probe(
      center, radius, pairs, alpha, seed, exec,
      [&](std::mt19937_64& rng, bool& clamped) {
        return MatrixSet({{"A", perturb_in_ball(a, radius, rng, clamped)}});
      },
      [](const MatrixSet& x) { return cycle_mean(x[0]).mu; },
      [](const MatrixSet& x, const MatrixSet& y) { return distance_inf(x[0], y[0]); });
}

RegularityProbe probe_set_regularity(const MatrixSet& psi, double radius, std::size_t pairs,
                                     double alpha, std::uint64_t seed, Execution exec) {
  return run_probe(
      psi, radius, pairs, alpha, seed, exec,
      [&](std::mt19937_64& rng, bool& clamped) {
        std::vector<NamedMatrix> members;
        for (const auto& m : psi.members())
          members.push_back({m.name, perturb_in_ball(m.matrix, radius, rng, clamped)});
        return MatrixSet(std::move(members));
      },
      [](const MatrixSet& x) { return jsr(x); },
      [](const MatrixSet& x, const MatrixSet& y) { return hausdorff(x, y).distance; });
}

MatrixSet interpolate(const MatrixSet& psi, const MatrixSet& phi, double t) {
  if (psi.size() != phi.size())
    throw DimensionError("interpolation pairs members by position; member counts differ");
  if (psi.dim() != phi.dim()) throw DimensionError("interpolate");
  std::vector<NamedMatrix> members;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    std::vector<double> entries(psi[i].values().size());
    for (std::size_t k = 0; k < entries.size(); ++k)
      entries[k] = (1.0 - t) * psi[i].values()[k] + t * phi[i].values()[k];
    members.push_back({psi.members()[i].name, MaxMatrix(psi.dim(), std::move(entries))});
  }
  return MatrixSet(std::move(members));
}

std::vector<double> eccentricity_along_sequence(const MatrixSet& psi, const MatrixSet& target,
                                                std::size_t steps, bool include_target,
                                                Tolerance tol) {
  if (steps == 0) throw InvalidValueError("steps must be positive");
  std::vector<double> out;
  const std::size_t last = include_target ? steps : steps - 1;
  for (std::size_t s = 0; s <= last; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    const MatrixSet step = interpolate(psi, target, t);
    const MaxMatrix agg = aggregate(step);
    if (!is_irreducible(agg))
      throw ReducibleError("interpolated set at step " + std::to_string(s) + " (t = " +
                               std::to_string(t) + ") has a reducible aggregate",
                           frobenius_form(agg, tol));
    out.push_back(eccentricity(barabanov_norm(step, tol)));
  }
  return out;
}

double gradient_dual_norm(std::span<const double> gradient, std::size_t n) {
  if (gradient.size() != n * n) throw DimensionError("gradient_dual_norm");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row = std::max(row, std::abs(gradient[i * n + j]));
    total += row;
  }
  return total;
}

}  // namespace maxjsr
