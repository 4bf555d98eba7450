#include "maxjsr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxjsr/error.hpp"

namespace maxjsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T>
std::vector<std::span<const double>> as_spans(const std::vector<T>& items) {
  std::vector<std::span<const double>> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.values());
  return out;
}

}  // namespace

std::vector<double> evaluate_combination(const std::vector<std::span<const double>>& generators,
                                         std::span<const double> coefficients) {
  if (generators.empty()) throw InvalidValueError("no generators");
  if (coefficients.size() != generators.size())
    throw DimensionError("one coefficient per generator required");
  std::vector<double> out(generators.front().size(), 0.0);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].size() != out.size()) throw DimensionError("generator shapes differ");
    for (std::size_t j = 0; j < out.size(); ++j)
      if (generators[i][j] > 0.0) out[j] = std::max(out[j], coefficients[i] * generators[i][j]);
  }
  return out;
}

MembershipCertificate hull_membership(std::span<const double> x,
                                      const std::vector<std::span<const double>>& generators,
                                      HullMode mode, Tolerance tol) {
  if (generators.empty()) throw InvalidValueError("hull membership needs generators");
  for (const auto& g : generators)
    if (g.size() != x.size()) throw DimensionError("generator and target shapes differ");

  MembershipCertificate cert;
  cert.mode = mode;
  cert.coefficients.reserve(generators.size());
  for (const auto& g : generators) {
    double alpha = kInf;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (g[j] > 0.0) alpha = std::min(alpha, x[j] / g[j]);
    if (mode == HullMode::conv) {
      alpha = std::min(alpha, 1.0);
    } else if (alpha == kInf) {
      alpha = 0.0;  // zero generator contributes nothing
    }
    cert.coefficients.push_back(alpha);
  }

  const std::vector<double> combo = evaluate_combination(generators, cert.coefficients);
  cert.inside = true;
  for (std::size_t j = 0; j < x.size() && cert.inside; ++j)
    cert.inside = tol.equal(combo[j], x[j]);
  if (cert.inside && mode == HullMode::conv) {
    const double top = *std::max_element(cert.coefficients.begin(), cert.coefficients.end());
    cert.inside = tol.equal(top, 1.0);
  }
  return cert;
}

MembershipCertificate hull_membership(const MaxVector& x, const std::vector<MaxVector>& generators,
                                      HullMode mode, Tolerance tol) {
  return hull_membership(x.values(), as_spans(generators), mode, tol);
}

MembershipCertificate hull_membership(const MaxMatrix& x, const std::vector<MaxMatrix>& generators,
                                      HullMode mode, Tolerance tol) {
  return hull_membership(x.values(), as_spans(generators), mode, tol);
}

double distance_inf(const MaxMatrix& a, const MaxMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("distance_inf");
  double best = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) sum += std::abs(a(i, j) - b(i, j));
    best = std::max(best, sum);
  }
  return best;
}

HausdorffReport hausdorff(const MatrixSet& psi, const MatrixSet& phi) {
  if (psi.dim() != phi.dim()) throw DimensionError("hausdorff");
  HausdorffReport report;
  report.argmax_member = psi.members().front().name;
  const auto sweep = [&](const MatrixSet& from, const MatrixSet& to, HausdorffSide side) {
    for (const auto& a : from.members()) {
      double nearest = kInf;
      for (const auto& b : to.members()) nearest = std::min(nearest, distance_inf(a.matrix, b.matrix));
      if (nearest > report.distance) {
        report.distance = nearest;
        report.argmax_side = side;
        report.argmax_member = a.name;
      }
    }
  };
  sweep(psi, phi, HausdorffSide::first);
  sweep(phi, psi, HausdorffSide::second);
  return report;
}

double eccentricity(const WeightedMaxNorm& nu) {
  return nu.weights().max() / nu.weights().min();
}

DominanceResult strict_dominance(const MatrixSet& psi1, const MatrixSet& psi2) {
  if (psi1.dim() != psi2.dim()) throw DimensionError("strict_dominance");
  const MaxMatrix s1 = aggregate(psi1);
  const MaxMatrix s2 = aggregate(psi2);
  if (!is_irreducible(s2))
    throw ReducibleError("strict dominance requires an irreducible S(Psi2)", frobenius_form(s2));

  double r = 0.0;
  for (std::size_t k = 0; k < s1.values().size(); ++k) {
    const double a = s1.values()[k];
    if (a == 0.0) continue;
    const double b = s2.values()[k];
    r = std::max(r, b > 0.0 ? a / b : kInf);
  }
  DominanceResult out;
  out.dominated = r < 1.0;
  out.lambda = r == 0.0 ? kInf : 1.0 / r;
  return out;
}

}  // namespace maxjsr
