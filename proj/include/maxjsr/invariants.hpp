#pragma once

// Property suite behind `maxjsr check`: the algebraic identities and
// theorems the library relies on, evaluated on one concrete set.

#include <cstdint>
#include <string>
#include <vector>

#include "maxjsr/jsr.hpp"

namespace maxjsr {

struct PropertyOutcome {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Runs every applicable property on psi; randomized properties draw from
/// `seed`.  Properties whose hypotheses fail (e.g. irreducibility) are
/// skipped rather than reported.
std::vector<PropertyOutcome> run_invariant_suite(const MatrixSet& psi, std::uint64_t seed,
                                                 Tolerance tol = {});

}  // namespace maxjsr
