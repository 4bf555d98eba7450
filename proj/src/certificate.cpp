#include "maxjsr/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "maxjsr/error.hpp"

namespace maxjsr {

namespace {

Json indices_to_json(const std::vector<std::size_t>& idx) {
  Json out = Json::array();
  for (std::size_t i : idx) out.push_back(i + 1);
  return out;
}

std::vector<std::size_t> indices_from_json(const Json& j, std::size_t n) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    const auto i = v.get<std::size_t>();
    if (i == 0 || i > n) throw InvalidValueError("index out of range in certificate");
    out.push_back(i - 1);
  }
  return out;
}

Json vector_to_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

// x_i = max_j closure(A / mu)_ij satisfies A x <= mu x and x >> 0.
std::vector<double> subeigenvector(const MaxMatrix& a, double mu) {
  const MaxMatrix c = detail::closure(a.scaled(1.0 / mu));
  std::vector<double> x(a.dim(), 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) x[i] = std::max(x[i], c(i, j));
  return x;
}

// Order in which every positive entry a_ij has i before j (D(A) acyclic).
std::vector<std::size_t> topological_order(const MaxMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> indegree(n, 0), order;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > 0.0) ++indegree[j];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > 0.0 && --indegree[j] == 0) ready.push(j);
  }
  return order;
}

Json spectrum_evidence(const MaxMatrix& a, Tolerance tol) {
  const CycleMeanResult r = cycle_mean(a, tol);
  Json out;
  out["mu"] = r.mu;
  out["witness_cycle"] = indices_to_json(r.witness_cycle);
  out["unique_critical"] = r.unique_critical;
  if (r.mu > 0.0)
    out["subeigenvector"] = subeigenvector(a, r.mu);
  else
    out["topological_order"] = indices_to_json(topological_order(a));
  return out;
}

// ------------------------------------------------------------- verification

struct Checker {
  Tolerance tol;
  std::string failure;

  bool require(bool condition, const std::string& what) {
    if (!condition && failure.empty()) failure = what;
    return condition;
  }
};

// mu(A) == claimed: the witness gives >=, a positive subeigenvector (or an
// acyclic ordering when the claim is 0) gives <=.
void check_spectrum(Checker& c, const MaxMatrix& a, const Json& ev) {
  const double mu = ev.at("mu").get<double>();
  const auto cycle = indices_from_json(ev.at("witness_cycle"), a.dim());
  if (mu == 0.0) {
    c.require(cycle.empty(), "witness cycle given for mu = 0");
    const auto order = indices_from_json(ev.at("topological_order"), a.dim());
    std::vector<std::size_t> pos(a.dim(), a.dim());
    for (std::size_t t = 0; t < order.size(); ++t) pos[order[t]] = t;
    bool acyclic = order.size() == a.dim() &&
                   std::none_of(pos.begin(), pos.end(), [&](std::size_t p) { return p == a.dim(); });
    for (std::size_t i = 0; i < a.dim() && acyclic; ++i)
      for (std::size_t j = 0; j < a.dim(); ++j)
        if (a(i, j) > 0.0 && pos[i] >= pos[j]) acyclic = false;
    c.require(acyclic, "topological order does not certify an acyclic digraph");
    return;
  }
  std::vector<bool> seen(a.dim(), false);
  bool distinct = !cycle.empty();
  for (std::size_t i : cycle) {
    distinct = distinct && !seen[i];
    seen[i] = true;
  }
  c.require(distinct, "witness is not an elementary cycle");
  if (distinct) c.require(c.tol.equal(cycle_geometric_mean(a, cycle), mu), "witness cycle does not attain mu");
  const auto x = ev.at("subeigenvector").get<std::vector<double>>();
  c.require(x.size() == a.dim() && std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; }),
            "subeigenvector must be strictly positive");
  if (x.size() != a.dim()) return;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) ax = std::max(ax, a(i, j) * x[j]);
    c.require(c.tol.less_equal(ax, mu * x[i]), "A x <= mu x fails at row " + std::to_string(i + 1));
  }
}

MaxMatrix recompute_aggregate(const MatrixSet& psi) {
  return aggregate(psi);
}

void check_frobenius(Checker& c, const MaxMatrix& s, const Json& fj) {
  const std::size_t n = s.dim();
  std::vector<std::vector<std::size_t>> classes;
  for (const auto& cls : fj.at("classes")) classes.push_back(indices_from_json(cls, n));
  std::vector<std::size_t> owner(n, classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (std::size_t i : classes[k]) {
      c.require(owner[i] == classes.size(), "classes overlap");
      owner[i] = k;
    }
  c.require(std::none_of(owner.begin(), owner.end(), [&](std::size_t o) { return o == classes.size(); }),
            "classes do not cover all nodes");
  if (!c.failure.empty()) return;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s(i, j) > 0.0)
        c.require(owner[i] >= owner[j], "normal form is not block lower triangular");
}

CertificateCheck finish(const Checker& c, const std::string& ok_message) {
  if (c.failure.empty()) return {true, ok_message};
  return {false, c.failure};
}

}  // namespace

// ------------------------------------------------------------ serialization

Json matrix_to_json(const MaxMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) rows.push_back(vector_to_json(a.row(i)));
  return rows;
}

MaxMatrix matrix_from_json(const Json& rows) {
  const std::size_t n = rows.size();
  std::vector<double> entries;
  for (const auto& r : rows) {
    if (r.size() != n) throw InvalidValueError("ragged matrix in certificate");
    for (const auto& x : r) entries.push_back(x.get<double>());
  }
  return MaxMatrix(n, std::move(entries));
}

Json set_to_json(const MatrixSet& psi) {
  Json out = Json::array();
  for (const auto& m : psi.members()) out.push_back({{"name", m.name}, {"rows", matrix_to_json(m.matrix)}});
  return out;
}

MatrixSet set_from_json(const Json& members) {
  std::vector<NamedMatrix> out;
  for (const auto& m : members)
    out.push_back({m.at("name").get<std::string>(), matrix_from_json(m.at("rows"))});
  return MatrixSet(std::move(out));
}

Json frobenius_to_json(const FrobeniusForm& form) {
  Json classes = Json::array();
  for (const auto& cls : form.classes) classes.push_back(indices_to_json(cls));
  Json access = Json::array();
  for (const auto& row : form.access) access.push_back(row);
  return {{"permutation", indices_to_json(form.permutation)},
          {"classes", classes},
          {"block_mus", form.block_mus},
          {"access", access}};
}

Json make_certificate(const std::string& kind, const Json& payload, Tolerance tol) {
  return {{"kind", kind}, {"tool_version", kToolVersion}, {"tolerance_used", tol.tau}, {"payload", payload}};
}

// ------------------------------------------------------------- construction

Json mu_certificate(const MaxMatrix& a, const std::string& name, Tolerance tol) {
  Json payload{{"name", name}, {"matrix", matrix_to_json(a)}};
  payload["spectrum"] = spectrum_evidence(a, tol);
  return make_certificate("mu", payload, tol);
}

Json jsr_certificate(const MatrixSet& psi, std::optional<unsigned> bounds_depth, Tolerance tol) {
  const MaxMatrix s = aggregate(psi);
  Json payload{{"set", set_to_json(psi)}, {"aggregate", matrix_to_json(s)}};
  payload["spectrum"] = spectrum_evidence(s, tol);
  const double mu = payload["spectrum"]["mu"].get<double>();
  if (bounds_depth) {
    // Barabanov weights when available (tight upper bound), else uniform.
    WeightedMaxNorm nu = WeightedMaxNorm::uniform(psi.dim());
    if (is_irreducible(s) && mu > 0.0) nu = barabanov_norm(psi, tol);
    const JsrBounds b = jsr_bounds(psi, *bounds_depth, nu, kProductBudget, tol);
    Json word = Json::array();
    for (std::size_t i : b.lower_word) word.push_back(psi.members()[i].name);
    const CycleMeanResult lower_cm = cycle_mean(word_product(psi, b.lower_word), tol);
    payload["bounds"] = {{"m", b.m},
                         {"lower", b.lower},
                         {"upper", b.upper},
                         {"norm_weights", vector_to_json(nu.weights().values())},
                         {"lower_word", word},
                         {"lower_cycle", indices_to_json(lower_cm.witness_cycle)}};
  }
  return make_certificate("jsr", payload, tol);
}

Json barabanov_certificate(const MatrixSet& psi, std::size_t samples, std::uint64_t seed,
                           Tolerance tol) {
  const WeightedMaxNorm nu = barabanov_norm(psi, tol);
  const auto ext = verify_extremal(psi, nu, samples, seed, tol);
  const auto bar = verify_barabanov(psi, nu, samples, seed, tol);
  const MaxMatrix s = aggregate(psi);
  Json payload{{"set", set_to_json(psi)}, {"weights", vector_to_json(nu.weights().values())}};
  payload["spectrum"] = spectrum_evidence(s, tol);
  payload["eccentricity"] = eccentricity(nu);
  payload["verification"] = {{"samples", samples},
                             {"seed", seed},
                             {"extremal", ext.ok},
                             {"barabanov", bar.ok},
                             {"reason", ext.reason + bar.reason}};
  return make_certificate("barabanov", payload, tol);
}

Json finiteness_certificate(const MatrixSet& psi, Tolerance tol) {
  const FinitenessCertificate cert = finiteness_product(psi, tol);
  const MaxMatrix s = aggregate(psi);
  Json payload{{"set", set_to_json(psi)},
               {"k", cert.k},
               {"mu", cert.mu},
               {"region_cycle", indices_to_json(cert.region_cycle)},
               {"matrix_names", cert.matrix_names},
               {"product", matrix_to_json(cert.product)},
               {"subeigenvector", subeigenvector(s, cert.mu)}};
  return make_certificate("finiteness", payload, tol);
}

Json hausdorff_certificate(const MatrixSet& psi, const MatrixSet& phi, Tolerance tol) {
  const HausdorffReport r = hausdorff(psi, phi);
  Json payload{{"first", set_to_json(psi)},
               {"second", set_to_json(phi)},
               {"distance", r.distance},
               {"argmax_side", r.argmax_side == HausdorffSide::first ? "first" : "second"},
               {"argmax_member", r.argmax_member}};
  return make_certificate("hausdorff", payload, tol);
}

Json nonexistence_certificate(const MatrixSet& psi, Tolerance tol) {
  const NonexistenceResult r = barabanov_nonexistence(psi, tol);
  const MaxMatrix s = aggregate(psi);
  Json payload{{"set", set_to_json(psi)},
               {"no_barabanov_norm", r.no_barabanov_norm},
               {"frobenius", frobenius_to_json(r.form)}};
  payload["spectrum"] = spectrum_evidence(s, tol);
  if (r.no_barabanov_norm) {
    payload["witness_class"] = *r.witness_class + 1;
    payload["eigenvalue"] = r.eigenvalue;
    payload["witness"] = vector_to_json(r.witness->values());
  }
  return make_certificate("nonexistence", payload, tol);
}

Json probe_certificate(const RegularityProbe& probe, bool set_probe, Tolerance tol) {
  Json payload{{"target", set_probe ? "set" : "matrix"},
               {"center", set_to_json(probe.center)},
               {"radius", probe.radius},
               {"alpha", probe.alpha},
               {"seed", probe.seed},
               {"pairs", probe.pairs},
               {"evaluated", probe.evaluated},
               {"skipped", probe.skipped},
               {"clamped", probe.clamped},
               {"max_ratio", probe.max_ratio}};
  if (probe.witness) {
    payload["witness"] = {{"first", set_to_json(probe.witness->first)},
                          {"second", set_to_json(probe.witness->second)},
                          {"value_first", probe.witness->value_first},
                          {"value_second", probe.witness->value_second},
                          {"distance", probe.witness->distance}};
  }
  return make_certificate("probe", payload, tol);
}

Json reducible_certificate(const std::string& kind, const ReducibleError& error, const MatrixSet& psi,
                           Tolerance tol) {
  Json payload{{"set", set_to_json(psi)},
               {"error", error.what()},
               {"frobenius", frobenius_to_json(error.form())}};
  return make_certificate(kind, payload, tol);
}

// ------------------------------------------------------------- verification

CertificateCheck verify_certificate(const Json& cert) {
  try {
    const std::string kind = cert.at("kind").get<std::string>();
    Checker c{Tolerance{cert.at("tolerance_used").get<double>()}, {}};
    const Json& p = cert.at("payload");

    if (p.contains("error")) {
      // Hypothesis failure: the embedded normal form must prove reducibility.
      const MaxMatrix s = recompute_aggregate(set_from_json(p.at("set")));
      check_frobenius(c, s, p.at("frobenius"));
      c.require(p.at("frobenius").at("classes").size() > 1, "single class: aggregate is irreducible");
      return finish(c, "reducibility certificate verified");
    }

    if (kind == "mu") {
      check_spectrum(c, matrix_from_json(p.at("matrix")), p.at("spectrum"));
      return finish(c, "mu certificate verified");
    }
    if (kind == "jsr") {
      const MatrixSet psi = set_from_json(p.at("set"));
      const MaxMatrix s = recompute_aggregate(psi);
      c.require(s == matrix_from_json(p.at("aggregate")), "aggregate is not the entrywise maximum");
      check_spectrum(c, s, p.at("spectrum"));
      if (p.contains("bounds")) {
        const Json& b = p.at("bounds");
        const double mu = p.at("spectrum").at("mu").get<double>();
        const double lower = b.at("lower").get<double>();
        const double upper = b.at("upper").get<double>();
        const auto m = b.at("m").get<unsigned>();
        c.require(c.tol.less_equal(lower, mu) && c.tol.less_equal(mu, upper), "bounds do not bracket mu");
        std::vector<std::size_t> word;
        for (const auto& name : b.at("lower_word")) {
          const std::string nm = name.get<std::string>();
          const auto& members = psi.members();
          const auto it = std::find_if(members.begin(), members.end(),
                                       [&](const NamedMatrix& x) { return x.name == nm; });
          c.require(it != members.end(), "unknown member in lower_word");
          if (it != members.end()) word.push_back(static_cast<std::size_t>(it - members.begin()));
        }
        c.require(word.size() == m, "lower_word has the wrong length");
        if (c.failure.empty()) {
          const MaxMatrix prod = word_product(psi, word);
          const auto cycle = indices_from_json(b.at("lower_cycle"), psi.dim());
          const double attained = cycle.empty() ? 0.0 : cycle_geometric_mean(prod, cycle);
          c.require(c.tol.equal(attained, std::pow(lower, static_cast<double>(m))),
                    "lower bound product does not attain lower^m");
        }
      }
      return finish(c, "jsr certificate verified");
    }
    if (kind == "barabanov") {
      const MatrixSet psi = set_from_json(p.at("set"));
      const MaxMatrix s = recompute_aggregate(psi);
      const auto v = p.at("weights").get<std::vector<double>>();
      const double mu = p.at("spectrum").at("mu").get<double>();
      check_spectrum(c, s, p.at("spectrum"));
      c.require(v.size() == s.dim() && std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; }),
                "weights must be strictly positive");
      // max_i v_i s_ij = mu v_j for all j forces mu = mu(Psi) and makes nu Barabanov.
      for (std::size_t j = 0; j < s.dim() && c.failure.empty(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i) col = std::max(col, v[i] * s(i, j));
        c.require(c.tol.equal(col, mu * v[j]), "v^T S = mu v^T fails at column " + std::to_string(j + 1));
      }
      return finish(c, "Barabanov certificate verified");
    }
    if (kind == "finiteness") {
      const MatrixSet psi = set_from_json(p.at("set"));
      const MaxMatrix s = recompute_aggregate(psi);
      const auto k = p.at("k").get<std::size_t>();
      const double mu = p.at("mu").get<double>();
      const auto regions = indices_from_json(p.at("region_cycle"), psi.dim());
      const auto names = p.at("matrix_names").get<std::vector<std::string>>();
      c.require(k >= 1 && k <= psi.dim() && regions.size() == k && names.size() == k,
                "cycle length must satisfy 1 <= k <= n");
      std::vector<std::size_t> word;
      for (auto it = names.rbegin(); it != names.rend(); ++it) {
        const auto& members = psi.members();
        const auto m = std::find_if(members.begin(), members.end(),
                                    [&](const NamedMatrix& x) { return x.name == *it; });
        c.require(m != members.end(), "unknown member " + *it);
        if (m != members.end()) word.push_back(static_cast<std::size_t>(m - members.begin()));
      }
      if (!c.failure.empty()) return finish(c, "");
      const MaxMatrix prod = word_product(psi, word);
      const MaxMatrix claimed = matrix_from_json(p.at("product"));
      bool same = claimed.dim() == prod.dim();
      for (std::size_t t = 0; same && t < prod.values().size(); ++t)
        same = c.tol.equal(prod.values()[t], claimed.values()[t]);
      c.require(same, "product does not match A_k ... A_1");
      const double target = std::pow(mu, static_cast<double>(k));
      c.require(c.tol.less_equal(target, prod(regions.front(), regions.front())),
                "product diagonal at the start region is below mu^k");
      const auto x = p.at("subeigenvector").get<std::vector<double>>();
      c.require(x.size() == s.dim() && std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; }),
                "subeigenvector must be strictly positive");
      for (std::size_t i = 0; i < s.dim() && c.failure.empty(); ++i) {
        double sx = 0.0;
        for (std::size_t j = 0; j < s.dim(); ++j) sx = std::max(sx, s(i, j) * x[j]);
        c.require(c.tol.less_equal(sx, mu * x[i]), "S x <= mu x fails: mu(Psi) exceeds the claim");
      }
      return finish(c, "finiteness certificate verified");
    }
    if (kind == "hausdorff") {
      const MatrixSet a = set_from_json(p.at("first"));
      const MatrixSet b = set_from_json(p.at("second"));
      const HausdorffReport r = hausdorff(a, b);
      c.require(c.tol.equal(r.distance, p.at("distance").get<double>()), "distance does not match");
      return finish(c, "Hausdorff certificate verified");
    }
    if (kind == "nonexistence") {
      const MatrixSet psi = set_from_json(p.at("set"));
      const MaxMatrix s = recompute_aggregate(psi);
      check_spectrum(c, s, p.at("spectrum"));
      check_frobenius(c, s, p.at("frobenius"));
      if (p.at("no_barabanov_norm").get<bool>()) {
        const double lambda = p.at("eigenvalue").get<double>();
        const auto x = p.at("witness").get<std::vector<double>>();
        const double mu = p.at("spectrum").at("mu").get<double>();
        c.require(x.size() == s.dim() && std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; }) &&
                      std::any_of(x.begin(), x.end(), [](double v) { return v > 0.0; }),
                  "witness must be nonnegative and nonzero");
        for (std::size_t i = 0; i < s.dim() && c.failure.empty(); ++i) {
          double sx = 0.0;
          for (std::size_t j = 0; j < s.dim(); ++j) sx = std::max(sx, s(i, j) * x[j]);
          c.require(c.tol.equal(sx, lambda * x[i]), "S x = lambda x fails at row " + std::to_string(i + 1));
        }
        c.require(lambda < mu && !c.tol.equal(lambda, mu), "witness eigenvalue is not below mu(S)");
      }
      return finish(c, "nonexistence certificate verified");
    }
    if (kind == "probe") {
      const double radius = p.at("radius").get<double>();
      const double alpha = p.at("alpha").get<double>();
      const double max_ratio = p.at("max_ratio").get<double>();
      c.require(std::isfinite(max_ratio) && max_ratio >= 0.0, "max_ratio must be finite and >= 0");
      if (p.contains("witness")) {
        const Json& w = p.at("witness");
        const MatrixSet center = set_from_json(p.at("center"));
        const MatrixSet x = set_from_json(w.at("first"));
        const MatrixSet y = set_from_json(w.at("second"));
        const bool set_probe = p.at("target").get<std::string>() == "set";
        const double d = set_probe ? hausdorff(x, y).distance : distance_inf(x[0], y[0]);
        c.require(c.tol.equal(d, w.at("distance").get<double>()), "witness distance does not match");
        // Clamping at 0 only moves samples closer to the center.
        for (std::size_t m = 0; m < center.size() && m < x.size(); ++m)
          c.require(c.tol.less_equal(distance_inf(center[m], x[m]), radius) &&
                        c.tol.less_equal(distance_inf(center[m], y[m]), radius),
                    "witness lies outside the sampling ball");
        const double ratio = std::abs(w.at("value_first").get<double>() - w.at("value_second").get<double>()) /
                             std::pow(d, alpha);
        c.require(c.tol.equal(ratio, max_ratio), "witness does not reproduce max_ratio");
      }
      return finish(c, "probe certificate verified");
    }
    return {false, "unknown certificate kind \"" + kind + "\""};
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

}  // namespace maxjsr
