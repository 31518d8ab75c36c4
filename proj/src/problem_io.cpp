#include "chordsdp/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chordsdp/errors.hpp"

namespace chordsdp {

using nlohmann::json;

namespace {

json triplets(const SymMatrix& x) {
  json out = json::array();
  for (std::size_t r = 0; r < x.dim(); ++r)
    for (std::size_t c = r; c < x.dim(); ++c)
      if (x(r, c) != 0.0) out.push_back(json::array({r + 1, c + 1, x(r, c)}));
  return out;
}

std::size_t index_field(const json& v, std::size_t n, const char* what) {
  if (!v.is_number_integer()) throw FormatError(std::string("problem file: ") + what + " index is not an integer");
  const auto i = v.get<long long>();
  if (i < 1 || static_cast<std::size_t>(i) > n)
    throw FormatError(std::string("problem file: ") + what + " index " + std::to_string(i) + " outside 1.." +
                      std::to_string(n));
  return static_cast<std::size_t>(i - 1);
}

SymMatrix read_matrix(const json& entries, std::size_t n, const std::string& name) {
  if (!entries.is_array()) throw FormatError("problem file: " + name + " must be an array of triplets");
  SymMatrix out(n);
  std::vector<bool> seen(n * n, false);
  for (const auto& t : entries) {
    if (!t.is_array() || t.size() != 3 || !t[2].is_number())
      throw FormatError("problem file: " + name + " has an entry that is not a (row, col, value) triplet");
    std::size_t r = index_field(t[0], n, "row");
    std::size_t c = index_field(t[1], n, "column");
    if (r > c) std::swap(r, c);
    if (seen[c * n + r]) throw FormatError("problem file: " + name + " repeats entry (" + std::to_string(r + 1) + ", " +
                                           std::to_string(c + 1) + ")");
    seen[c * n + r] = true;
    out.set(r, c, t[2].get<double>());
  }
  return out;
}

}  // namespace

std::string problem_to_json(const SdpProblem& p) {
  json doc;
  doc["n"] = p.dim();
  doc["m"] = p.constraint_count();
  doc["b"] = p.rhs;
  doc["C"] = triplets(p.cost);
  json a = json::array();
  for (const auto& ak : p.constraints) a.push_back(triplets(ak));
  doc["A"] = std::move(a);
  return doc.dump() + "\n";
}

SdpProblem problem_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("problem file: top level must be an object");
  for (const char* key : {"n", "m", "b", "C", "A"})
    if (!doc.contains(key)) throw FormatError(std::string("problem file: missing field '") + key + "'");
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1)
    throw FormatError("problem file: n must be a positive integer");
  if (!doc["m"].is_number_integer() || doc["m"].get<long long>() < 0)
    throw FormatError("problem file: m must be a nonnegative integer");
  const auto n = doc["n"].get<std::size_t>();
  const auto m = doc["m"].get<std::size_t>();
  const json& b = doc["b"];
  const json& a = doc["A"];
  if (!b.is_array() || b.size() != m) throw FormatError("problem file: b must hold m numbers");
  if (!a.is_array() || a.size() != m) throw FormatError("problem file: A must hold m matrices");

  std::vector<double> rhs;
  for (const auto& v : b) {
    if (!v.is_number()) throw FormatError("problem file: b must hold numbers");
    rhs.push_back(v.get<double>());
  }
  std::vector<SymMatrix> constraints;
  for (std::size_t k = 0; k < m; ++k) constraints.push_back(read_matrix(a[k], n, "A[" + std::to_string(k + 1) + "]"));
  return SdpProblem(read_matrix(doc["C"], n, "C"), std::move(constraints), std::move(rhs));
}

void save_problem(const SdpProblem& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << problem_to_json(p);
  if (!out) throw FormatError("failed writing " + path.string());
}

SdpProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return problem_from_json(text.str());
}

}  // namespace chordsdp
