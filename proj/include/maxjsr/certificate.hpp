#pragma once

// Self-verifying JSON certificates.  Each carries enough data (vectors,
// products, witnesses) for verify_certificate to re-check the claim with
// direct max-times arithmetic, without running the algorithm again.

#include <optional>
#include <string>

#include <json.hpp>

#include "maxjsr/geometry.hpp"
#include "maxjsr/jsr.hpp"
#include "maxjsr/regularity.hpp"
#include "maxjsr/spectral.hpp"

namespace maxjsr {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

Json matrix_to_json(const MaxMatrix& a);
MaxMatrix matrix_from_json(const Json& rows);
Json set_to_json(const MatrixSet& psi);
MatrixSet set_from_json(const Json& members);
Json frobenius_to_json(const FrobeniusForm& form);

/// {kind, tool_version, tolerance_used, payload}
Json make_certificate(const std::string& kind, const Json& payload, Tolerance tol);

Json mu_certificate(const MaxMatrix& a, const std::string& name, Tolerance tol);
Json jsr_certificate(const MatrixSet& psi, std::optional<unsigned> bounds_depth, Tolerance tol);
Json barabanov_certificate(const MatrixSet& psi, std::size_t samples, std::uint64_t seed,
                           Tolerance tol);
Json finiteness_certificate(const MatrixSet& psi, Tolerance tol);
Json hausdorff_certificate(const MatrixSet& psi, const MatrixSet& phi, Tolerance tol);
Json nonexistence_certificate(const MatrixSet& psi, Tolerance tol);
Json probe_certificate(const RegularityProbe& probe, bool set_probe, Tolerance tol);
/// Certificate of a hypothesis failure; embeds the Frobenius form.
Json reducible_certificate(const std::string& kind, const ReducibleError& error, const MatrixSet& psi,
                           Tolerance tol);

struct CertificateCheck {
  bool ok = false;
  std::string message;
};

CertificateCheck verify_certificate(const Json& certificate);

}  // namespace maxjsr
