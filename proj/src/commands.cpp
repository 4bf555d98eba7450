#include "maxjsr/commands.hpp"

#include <charconv>
#include <deque>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxjsr/certificate.hpp"
#include "maxjsr/error.hpp"
#include "maxjsr/invariants.hpp"
#include "maxjsr/oracles.hpp"
#include "maxjsr/setfile.hpp"

namespace maxjsr {

namespace {

constexpr std::size_t kDefaultCheckSeeds = 4;

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fmt(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

std::string cycle_text(const Json& one_based) {
  if (one_based.empty()) return "(none)";
  std::string s;
  for (const auto& i : one_based) s += std::to_string(i.get<std::size_t>()) + " -> ";
  return s + std::to_string(one_based.front().get<std::size_t>());
}

struct Common {
  double tol = Tolerance{}.tau;
  std::uint64_t seed = kDefaultSeed;
  bool json = false;
  std::string cert_path;
};

void add_common(CLI::App* sub, Common& c, bool randomized) {
  sub->add_option("--tol", c.tol, "relative tolerance")->check(CLI::Range(1e-300, 0.5));
  if (randomized) sub->add_option("--seed", c.seed, "random seed");
  sub->add_flag("--json", c.json, "print the certificate instead of a summary");
  sub->add_option("--cert", c.cert_path, "also write the certificate to this file");
}

class Session {
 public:
  Session(const Common& common, std::ostream& out) : common_(common), out_(out) {}

  Tolerance tol() const { return Tolerance{common_.tol}; }
  bool summary() const { return !common_.json; }
  std::ostream& out() { return out_; }

  const MatrixSet& load(const std::string& path) {
    loaded_.push_back(load_set_file(path));
    return loaded_.back();
  }
  const MatrixSet* first_loaded() const { return loaded_.empty() ? nullptr : &loaded_.front(); }

  void emit(const Json& cert) {
    if (common_.json) out_ << cert.dump(2) << "\n";
    if (!common_.cert_path.empty()) {
      std::ofstream f(common_.cert_path);
      if (!f) throw InvalidValueError("cannot write \"" + common_.cert_path + "\"");
      f << cert.dump(2) << "\n";
    }
  }

 private:
  const Common& common_;
  std::ostream& out_;
  std::deque<MatrixSet> loaded_;  // stable references
};

// Member by name; "S" names the aggregate unless a member is called that.
std::pair<MaxMatrix, std::string> resolve_matrix(const MatrixSet& psi, const std::string& name) {
  if (name.empty()) return {psi[0], psi.members().front().name};
  if (const NamedMatrix* m = psi.find(name)) return {m->matrix, m->name};
  if (name == "S") return {aggregate(psi), "S"};
  throw InvalidValueError("no matrix named \"" + name + "\"");
}

int cmd_mu(Session& s, const std::string& file, const std::string& name, bool witness) {
  const MatrixSet& psi = s.load(file);
  const auto [a, resolved] = resolve_matrix(psi, name);
  const Json cert = mu_certificate(a, resolved, s.tol());
  const Json& sp = cert["payload"]["spectrum"];
  if (s.summary()) {
    s.out() << "mu(" << resolved << ") = " << fmt(sp["mu"].get<double>()) << "\n";
    if (witness) {
      s.out() << "witness cycle: " << cycle_text(sp["witness_cycle"]) << "\n";
      s.out() << "unique critical cycle: " << (sp["unique_critical"].get<bool>() ? "yes" : "no") << "\n";
    }
  }
  s.emit(cert);
  return 0;
}

int cmd_jsr(Session& s, const std::string& file, std::optional<unsigned> bounds) {
  const MatrixSet& psi = s.load(file);
  const Json cert = jsr_certificate(psi, bounds, s.tol());
  const Json& p = cert["payload"];
  if (s.summary()) {
    s.out() << "mu(Psi) = " << fmt(p["spectrum"]["mu"].get<double>()) << "\n";
    s.out() << "critical cycle of S: " << cycle_text(p["spectrum"]["witness_cycle"]) << "\n";
    if (p.contains("bounds")) {
      const Json& b = p["bounds"];
      s.out() << "depth " << b["m"].get<unsigned>() << ": " << fmt(b["lower"].get<double>())
              << " <= mu(Psi) <= " << fmt(b["upper"].get<double>()) << "\n";
      s.out() << "lower bound product:";
      for (const auto& w : b["lower_word"]) s.out() << " " << w.get<std::string>();
      s.out() << "\n";
    }
  }
  s.emit(cert);
  return 0;
}

int cmd_barabanov(Session& s, const std::string& file, std::size_t samples, std::uint64_t seed) {
  const MatrixSet& psi = s.load(file);
  const Json cert = barabanov_certificate(psi, samples, seed, s.tol());
  const Json& p = cert["payload"];
  const Json& v = p["verification"];
  const bool ok = v["extremal"].get<bool>() && v["barabanov"].get<bool>();
  if (s.summary()) {
    s.out() << "mu(Psi) = " << fmt(p["spectrum"]["mu"].get<double>()) << "\n";
    s.out() << "v = " << fmt(p["weights"].get<std::vector<double>>()) << "\n";
    s.out() << "eccentricity = " << fmt(p["eccentricity"].get<double>()) << "\n";
    s.out() << "verification (" << samples << " samples): " << (ok ? "verified" : "FAILED") << "\n";
    if (!ok) s.out() << "  " << v["reason"].get<std::string>() << "\n";
  }
  s.emit(cert);
  return ok ? 0 : 1;
}

int cmd_finiteness(Session& s, const std::string& file) {
  const MatrixSet& psi = s.load(file);
  const Json cert = finiteness_certificate(psi, s.tol());
  const Json& p = cert["payload"];
  if (s.summary()) {
    s.out() << "mu(Psi) = " << fmt(p["mu"].get<double>()) << "\n";
    s.out() << "k = " << p["k"].get<std::size_t>() << "\n";
    s.out() << "matrices (in application order):";
    for (const auto& nm : p["matrix_names"]) s.out() << " " << nm.get<std::string>();
    s.out() << "\nregions: " << cycle_text(p["region_cycle"]) << "\n";
  }
  s.emit(cert);
  return 0;
}

int cmd_hausdorff(Session& s, const std::string& a, const std::string& b) {
  const MatrixSet& psi = s.load(a);
  const MatrixSet& phi = s.load(b);
  const Json cert = hausdorff_certificate(psi, phi, s.tol());
  if (s.summary()) s.out() << "hausdorff distance = " << fmt(cert["payload"]["distance"].get<double>()) << "\n";
  s.emit(cert);
  return 0;
}

int cmd_nonexistence(Session& s, const std::string& file) {
  const MatrixSet& psi = s.load(file);
  const Json cert = nonexistence_certificate(psi, s.tol());
  const Json& p = cert["payload"];
  if (s.summary()) {
    const auto classes = p["frobenius"]["classes"].size();
    s.out() << "classes of S: " << classes << "\n";
    if (p["no_barabanov_norm"].get<bool>()) {
      s.out() << "no Barabanov norm exists\n";
      s.out() << "witness class " << p["witness_class"].get<std::size_t>() << ", eigenvalue "
              << fmt(p["eigenvalue"].get<double>()) << " < mu(Psi) = " << fmt(p["spectrum"]["mu"].get<double>())
              << "\n";
      s.out() << "x = " << fmt(p["witness"].get<std::vector<double>>()) << "\n";
    } else {
      s.out() << "no obstruction to a Barabanov norm detected\n";
    }
  }
  s.emit(cert);
  return 0;
}

int cmd_probe(Session& s, const std::string& file, const std::string& name, double radius,
              std::size_t pairs, double alpha, std::uint64_t seed) {
  const MatrixSet& psi = s.load(file);
  const bool set_probe = name.empty();
  const RegularityProbe probe =
      set_probe ? probe_set_regularity(psi, radius, pairs, alpha, seed)
                : probe_matrix_regularity(resolve_matrix(psi, name).first, radius, pairs, alpha, seed);
  const Json cert = probe_certificate(probe, set_probe, s.tol());
  if (s.summary()) {
    s.out() << "max |f(X) - f(Y)| / d(X, Y)^" << fmt(alpha) << " = " << fmt(probe.max_ratio) << "\n";
    s.out() << "pairs: " << probe.evaluated << " evaluated, " << probe.skipped << " skipped, "
            << probe.clamped << " samples clamped at 0\n";
  }
  s.emit(cert);
  return 0;
}

int cmd_check(Session& s, const std::string& file, std::size_t seeds, std::uint64_t seed) {
  const MatrixSet& psi = s.load(file);
  std::vector<std::pair<std::string, MatrixSet>> cases{{file, psi}};
  for (std::size_t k = 0; k < seeds; ++k) {
    oracles::InstanceSpec spec;
    spec.n = psi.dim();
    spec.set_size = psi.size();
    spec.density = k % 2 == 0 ? 1.0 : 0.5;
    spec.require_irreducible = k % 2 == 0;
    spec.seed = derive_seed(seed, k);
    cases.emplace_back("random #" + std::to_string(k + 1), oracles::generate(spec));
  }
  std::size_t passed = 0, total = 0;
  Json report = Json::array();
  for (const auto& [label, set] : cases) {
    const auto outcomes = run_invariant_suite(set, seed, s.tol());
    std::size_t ok = 0;
    Json props = Json::array();
    for (const auto& o : outcomes) {
      ok += o.passed;
      props.push_back({{"name", o.name}, {"passed", o.passed}, {"detail", o.detail}});
    }
    passed += ok;
    total += outcomes.size();
    report.push_back({{"instance", label}, {"properties", props}});
    if (s.summary()) {
      s.out() << label << ": " << ok << "/" << outcomes.size() << " passed\n";
      for (const auto& o : outcomes)
        if (!o.passed) s.out() << "  FAIL " << o.name << (o.detail.empty() ? "" : ": " + o.detail) << "\n";
    }
  }
  if (s.summary()) s.out() << "total: " << passed << "/" << total << " properties passed\n";
  s.emit({{"kind", "check"}, {"tool_version", kToolVersion}, {"tolerance_used", s.tol().tau},
          {"passed", passed}, {"total", total}, {"instances", report}});
  return passed == total ? 0 : 1;
}

int cmd_verify_cert(std::ostream& out, const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + file + "\"", 0, 0);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  Json cert;
  try {
    cert = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file + ": malformed JSON: " + e.what(), 0, 0);
  }
  const CertificateCheck check = verify_certificate(cert);
  out << (check.ok ? "ok: " : "FAILED: ") << check.message << "\n";
  return check.ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Max-algebraic spectral radius and joint spectral radius toolkit", "maxjsr"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kToolVersion);

  Common common;
  std::string file, file2, name;
  bool witness = false, set_flag = false;
  unsigned bounds = 0;
  std::size_t verify = kDefaultVerifySamples, seeds = kDefaultCheckSeeds, pairs = kDefaultProbePairs;
  double radius = 0.0, alpha = 1.0;

  auto* mu = app.add_subcommand("mu", "maximal cycle geometric mean of one matrix");
  mu->add_option("file", file, "matrix-set file")->required();
  mu->add_option("--matrix", name, "member name (default: first; S: the aggregate)");
  mu->add_flag("--witness", witness, "print the critical cycle");
  add_common(mu, common, false);

  auto* jsr_cmd = app.add_subcommand("jsr", "joint spectral radius of the set");
  jsr_cmd->add_option("file", file)->required();
  auto* bounds_opt = jsr_cmd->add_option("--bounds", bounds, "bracket from all products of length M")
                         ->check(CLI::Range(1u, 64u));
  add_common(jsr_cmd, common, false);

  auto* bar = app.add_subcommand("barabanov", "construct and verify a Barabanov norm");
  bar->add_option("file", file)->required();
  bar->add_option("--verify", verify, "random vectors for the sampled check");
  add_common(bar, common, true);

  auto* fin = app.add_subcommand("finiteness", "product of length k <= n attaining the radius");
  fin->add_option("file", file)->required();
  add_common(fin, common, false);

  auto* hd = app.add_subcommand("hausdorff", "Hausdorff distance between two sets");
  hd->add_option("fileA", file)->required();
  hd->add_option("fileB", file2)->required();
  add_common(hd, common, false);

  auto* ne = app.add_subcommand("nonexistence", "detect reducible sets without a Barabanov norm");
  ne->add_option("file", file)->required();
  add_common(ne, common, false);

  auto* chk = app.add_subcommand("check", "run the property suite on the file and random sets");
  chk->add_option("file", file)->required();
  chk->add_option("--seeds", seeds, "number of additional random instances");
  add_common(chk, common, true);

  auto* pr = app.add_subcommand("probe", "sample the local regularity of mu or of the radius");
  pr->add_option("file", file)->required();
  auto* matrix_opt = pr->add_option("--matrix", name, "probe mu of this member (S: the aggregate)");
  pr->add_flag("--set", set_flag, "probe the joint spectral radius (default)")->excludes(matrix_opt);
  pr->add_option("--radius", radius, "ball radius")->required()->check(CLI::NonNegativeNumber);
  pr->add_option("--pairs", pairs, "sample pairs")->check(CLI::PositiveNumber);
  pr->add_option("--alpha", alpha, "Hoelder exponent")->check(CLI::Range(1e-6, 10.0));
  add_common(pr, common, true);

  auto* vc = app.add_subcommand("verify-cert", "re-check a certificate");
  vc->add_option("certificate", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Session session(common, out);
  try {
    if (mu->parsed()) return cmd_mu(session, file, name, witness);
    if (jsr_cmd->parsed())
      return cmd_jsr(session, file, bounds_opt->count() ? std::optional<unsigned>(bounds) : std::nullopt);
    if (bar->parsed()) return cmd_barabanov(session, file, verify, common.seed);
    if (fin->parsed()) return cmd_finiteness(session, file);
    if (hd->parsed()) return cmd_hausdorff(session, file, file2);
    if (ne->parsed()) return cmd_nonexistence(session, file);
    if (chk->parsed()) return cmd_check(session, file, seeds, common.seed);
    if (pr->parsed()) return cmd_probe(session, file, name, radius, pairs, alpha, common.seed);
    if (vc->parsed()) return cmd_verify_cert(out, file);
  } catch (const ReducibleError& e) {
    std::string kind = app.get_subcommands().front()->get_name();
    if (const MatrixSet* psi = session.first_loaded()) {
      try {
        session.emit(reducible_certificate(kind, e, *psi, session.tol()));
      } catch (const Error&) {
      }
    }
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return static_cast<int>(ErrorCategory::guard);
  }
  return 2;
}

}  // namespace maxjsr
