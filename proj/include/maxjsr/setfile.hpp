#pragma once

// Matrix-set files: UTF-8 JSON with exactly
//   {"n": 3, "matrices": [{"name": "A1", "rows": [[...], ...]}, ...]}
// Entries are JSON numbers or strings holding a decimal or a quotient of
// decimals ("10/3").  Negative, non-finite and ragged data are rejected
// with a line/column diagnostic.

#include <string>
#include <string_view>

#include "maxjsr/jsr.hpp"

namespace maxjsr {

MatrixSet parse_set_file(std::string_view text);
MatrixSet load_set_file(const std::string& path);

/// Shortest round-trip decimal for every entry; parse(serialize(s)) == s.
std::string serialize_set_file(const MatrixSet& psi);

/// Parses "1.5", "10/3", "2e-3/7"; throws InvalidValueError.
double parse_entry_literal(std::string_view literal);

}  // namespace maxjsr
