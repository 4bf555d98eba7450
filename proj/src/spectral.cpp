#include "maxjsr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace maxjsr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Karp's maximum cycle mean on log-transformed weights; zero entries are
// missing edges.  Returns the log of mu (or -inf when D(A) is acyclic) and a
// cycle read off the optimal n-edge walk.
struct KarpResult {
  double log_mu = kNegInf;
  std::vector<std::vector<std::size_t>> walk_cycles;
};

KarpResult karp(const MaxMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> logw(n * n, kNegInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > 0.0) logw[i * n + j] = std::log(a(i, j));

  // best[k][v]: heaviest walk of exactly k edges ending at v, starting
  // anywhere (virtual source with zero-weight edges to every node).
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(n, kNegInf));
  std::vector<std::vector<std::size_t>> pred(n + 1, std::vector<std::size_t>(n, 0));
  std::fill(best[0].begin(), best[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      if (best[k - 1][u] == kNegInf) continue;
      for (std::size_t v = 0; v < n; ++v) {
        const double w = logw[u * n + v];
        if (w == kNegInf) continue;
        const double cand = best[k - 1][u] + w;
        if (cand > best[k][v]) {
          best[k][v] = cand;
          pred[k][v] = u;
        }
      }
    }
  }

  KarpResult result;
  std::size_t argmax = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (best[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (best[k][v] == kNegInf) continue;
      worst = std::min(worst, (best[n][v] - best[k][v]) / static_cast<double>(n - k));
    }
    if (worst > result.log_mu) {
      result.log_mu = worst;
      argmax = v;
    }
  }
  if (argmax == n) return result;

  std::vector<std::size_t> walk(n + 1);
  walk[n] = argmax;
  for (std::size_t k = n; k >= 1; --k) walk[k - 1] = pred[k][walk[k]];

  // Peel elementary cycles off the walk with a stack.
  std::vector<std::size_t> stack;
  std::vector<std::ptrdiff_t> position(n, -1);
  for (std::size_t node : walk) {
    if (position[node] >= 0) {
      const auto start = static_cast<std::size_t>(position[node]);
      result.walk_cycles.emplace_back(stack.begin() + static_cast<std::ptrdiff_t>(start),
                                      stack.end());
      for (std::size_t p = start + 1; p < stack.size(); ++p) position[stack[p]] = -1;
      stack.resize(start + 1);
    } else {
      position[node] = static_cast<std::ptrdiff_t>(stack.size());
      stack.push_back(node);
    }
  }
  return result;
}

std::vector<std::size_t> canonical_rotation(std::vector<std::size_t> cycle) {
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  return cycle;
}

// Critical structure relative to a trial value of mu.  Edge (i, j) is
// critical when b_ij * closure(B)_ji reaches 1, B = A / mu, i.e. it lies on a
// cycle of normalized weight 1.  Cycles within tau of mu pass the threshold.
struct CriticalGraph {
  MaxMatrix closure{1};
  std::vector<std::vector<std::size_t>> out;  // critical successors, ascending
};

CriticalGraph critical_graph(const MaxMatrix& a, double mu, Tolerance tol) {
  const std::size_t n = a.dim();
  const MaxMatrix b = a.scaled(1.0 / mu);
  CriticalGraph g{detail::closure(b), std::vector<std::vector<std::size_t>>(n)};
  const double threshold = std::max(0.0, 1.0 - tol.tau * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b(i, j) > 0.0 && b(i, j) * g.closure(j, i) >= threshold) g.out[i].push_back(j);
  return g;
}

// Follows smallest critical successors from the smallest critical node.
std::vector<std::size_t> critical_walk_cycle(const CriticalGraph& g) {
  const std::size_t n = g.out.size();
  std::size_t node = n;
  for (std::size_t i = 0; i < n && node == n; ++i)
    if (!g.out[i].empty()) node = i;
  if (node == n) return {};
  std::vector<std::ptrdiff_t> position(n, -1);
  std::vector<std::size_t> path;
  while (position[node] < 0) {
    if (g.out[node].empty()) return {};
    position[node] = static_cast<std::ptrdiff_t>(path.size());
    path.push_back(node);
    node = g.out[node].front();
  }
  return {path.begin() + position[node], path.end()};
}

// The critical graph is a single elementary cycle.  Every cycle of the
// critical graph is critical, so this is equivalent to uniqueness.
bool single_cycle(const CriticalGraph& g) {
  const std::size_t n = g.out.size();
  std::size_t nodes = 0;
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.out[i].empty()) continue;
    if (g.out[i].size() != 1) return false;
    ++nodes;
    if (first == n) first = i;
  }
  if (nodes == 0) return false;
  std::size_t node = first;
  for (std::size_t step = 1; step <= nodes; ++step) {
    node = g.out[node].front();
    if (node == first) return step == nodes;
  }
  return false;
}

struct Analysis {
  CycleMeanResult result;
  CriticalGraph graph;
};

Analysis analyze(const MaxMatrix& a, Tolerance tol) {
  Analysis out;
  const KarpResult k = karp(a);
  if (k.log_mu == kNegInf) return out;

  std::vector<std::vector<std::size_t>> candidates = k.walk_cycles;
  double trial = std::exp(k.log_mu);
  for (const auto& c : candidates) trial = std::max(trial, cycle_geometric_mean(a, c));
  out.graph = critical_graph(a, trial, tol);
  if (auto c = critical_walk_cycle(out.graph); !c.empty())
    candidates.insert(candidates.begin(), std::move(c));

  double best = 0.0;
  for (const auto& c : candidates) {
    const double m = cycle_geometric_mean(a, c);
    if (m > best) {
      best = m;
      out.result.witness_cycle = canonical_rotation(c);
    }
  }
  out.result.mu = best;
  out.result.unique_critical = single_cycle(out.graph);
  return out;
}

}  // namespace

double cycle_geometric_mean(const MaxMatrix& a, const std::vector<std::size_t>& cycle) {
  if (cycle.empty()) return 0.0;
  const std::size_t k = cycle.size();
  double product = 1.0;
  for (std::size_t t = 0; t < k; ++t) product *= a(cycle[t], cycle[(t + 1) % k]);
  if (k == 1) return product;
  if (product > 0.0 && std::isfinite(product) && product > std::numeric_limits<double>::min())
    return std::pow(product, 1.0 / static_cast<double>(k));
  double logsum = 0.0;
  for (std::size_t t = 0; t < k; ++t) logsum += std::log(a(cycle[t], cycle[(t + 1) % k]));
  return std::exp(logsum / static_cast<double>(k));
}

CycleMeanResult cycle_mean(const MaxMatrix& a, Tolerance tol) {
  return analyze(a, tol).result;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const MaxMatrix& a) {
  // Iterative Tarjan; neighbours visited in ascending order.
  const std::size_t n = a.dim();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const std::size_t v = f.node;
      if (f.next < n) {
        const std::size_t w = f.next++;
        if (a(v, w) <= 0.0) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

bool is_irreducible(const MaxMatrix& a) {
  if (a.dim() == 1) return true;
  return strongly_connected_components(a).size() == 1;
}

std::size_t FrobeniusForm::class_of(std::size_t node) const {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::find(classes[c].begin(), classes[c].end(), node) != classes[c].end()) return c;
  return classes.size();
}

std::string FrobeniusForm::describe() const {
  std::ostringstream os;
  os << "Frobenius classes:";
  for (std::size_t c = 0; c < classes.size(); ++c) {
    os << " {";
    for (std::size_t t = 0; t < classes[c].size(); ++t)
      os << (t ? "," : "") << classes[c][t] + 1;
    os << "} mu=" << block_mus[c];
  }
  return os.str();
}

FrobeniusForm frobenius_form(const MaxMatrix& a, Tolerance tol) {
  FrobeniusForm form;
  form.classes = strongly_connected_components(a);
  const std::size_t p = form.classes.size();
  for (const auto& cls : form.classes) {
    form.permutation.insert(form.permutation.end(), cls.begin(), cls.end());
    form.block_mus.push_back(cycle_mean(a.principal(cls), tol).mu);
  }

  std::vector<std::size_t> owner(a.dim());
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t node : form.classes[c]) owner[node] = c;
  form.access.assign(p, std::vector<bool>(p, false));
  for (std::size_t c = 0; c < p; ++c) form.access[c][c] = true;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (a(i, j) > 0.0) form.access[owner[i]][owner[j]] = true;
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t i = 0; i < p; ++i)
      if (form.access[i][k])
        for (std::size_t j = 0; j < p; ++j)
          if (form.access[k][j]) form.access[i][j] = true;
  return form;
}

std::vector<std::size_t> critical_nodes(const MaxMatrix& a, Tolerance tol) {
  const Analysis an = analyze(a, tol);
  std::vector<std::size_t> nodes;
  if (an.result.mu == 0.0) return nodes;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!an.graph.out[i].empty()) nodes.push_back(i);
  return nodes;
}

EigenPair principal_eigenpair(const MaxMatrix& a, Side side, Tolerance tol) {
  if (!is_irreducible(a))
    throw ReducibleError("principal eigenpair needs an irreducible matrix", frobenius_form(a, tol));
  const MaxMatrix m = side == Side::left ? a.transpose() : a;
  const Analysis an = analyze(m, tol);
  const double mu = an.result.mu;
  if (mu == 0.0) throw DegenerateSpectrumError("maximal cycle mean is 0; no max eigenvector");

  std::size_t critical = m.dim();
  for (std::size_t i = 0; i < m.dim() && critical == m.dim(); ++i)
    if (!an.graph.out[i].empty()) critical = i;
  if (critical == m.dim()) throw ToleranceError("no critical node found; try a smaller tolerance");

  std::vector<double> v(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) v[i] = an.graph.closure(i, critical);
  const double top = *std::max_element(v.begin(), v.end());
  for (double& x : v) x /= top;
  return EigenPair{mu, MaxVector(std::move(v)), side};
}

std::vector<double> mu_gradient(const MaxMatrix& a, Tolerance tol) {
  const CycleMeanResult r = cycle_mean(a, tol);
  if (r.mu == 0.0) throw DegenerateSpectrumError("mu(A) = 0; gradient undefined");
  if (!r.unique_critical)
    throw NondifferentiableError("critical cycle is not unique; mu is not differentiable here");
  const std::size_t n = a.dim();
  const std::size_t k = r.witness_cycle.size();
  std::vector<double> grad(n * n, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t p = r.witness_cycle[t];
    const std::size_t q = r.witness_cycle[(t + 1) % k];
    grad[p * n + q] = r.mu / (static_cast<double>(k) * a(p, q));
  }
  return grad;
}

}  // namespace maxjsr
