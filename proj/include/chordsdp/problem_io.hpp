#pragma once

#include <filesystem>
#include <string>

#include "chordsdp/sdp_problem.hpp"

namespace chordsdp {

// Problem files are JSON:
//   {"n": 3, "m": 1, "b": [1.0],
//    "C": [[1, 1, 3.0], [2, 2, 1.0]],
//    "A": [[[1, 1, 1.0], [2, 2, 1.0], [3, 3, 1.0]]]}
// Triplets are (row, col, value), 1-based, upper triangle (row <= col),
// sorted by (row, col). Only nonzero entries are written. Doubles are printed
// in shortest round-trip form, so save followed by load is bit-exact.

std::string problem_to_json(const SdpProblem& p);

/// Throws FormatError on malformed text, out-of-range indices, duplicate
/// entries or inconsistent m.
SdpProblem problem_from_json(const std::string& text);

/// Throws FormatError when the file cannot be written.
void save_problem(const SdpProblem& p, const std::filesystem::path& path);

/// Throws FormatError when the file cannot be read or parsed.
SdpProblem load_problem(const std::filesystem::path& path);

}  // namespace chordsdp
