#pragma once

#include <string>

#include <json.hpp>

#include "ellipticity/cases.hpp"
#include "ellipticity/decomposition.hpp"
#include "ellipticity/oracle.hpp"
#include "ellipticity/pocs.hpp"
#include "ellipticity/tensor.hpp"

namespace ellipticity {

using json = nlohmann::json;

inline constexpr const char* kElast4Format = "elast4-v1";
inline constexpr const char* kPair4Format = "pair4-v1";
inline constexpr const char* kDecompFormat = "decomp-v1";

// Sparse tensor container:
//   {"format": "elast4-v1", "name": ..., "entries": [{"i":1,"j":1,"k":1,"l":1,"v":2.0}, ...]}
// 1-based indices, unlisted entries zero. Writers list nonzero entries in
// lexicographic (i,j,k,l) order.
json to_json(const Elast4& a, const std::string& name = "");
json to_json(const Pair4& t, const std::string& name = "");

// Raw entries of an elast4-v1 / pair4-v1 document (before symmetrization).
// Throws ParseError.
RawTensor raw_entries_from_json(const json& doc, const char* expected_format);
std::string tensor_name(const json& doc);

// Parse and canonicalize; symmetry violations beyond tol throw SymmetryViolation.
Elast4 elast4_from_json(const json& doc, double tol = 1e-9);
Pair4 pair4_from_json(const json& doc, double tol = 1e-9);

// {"format": "decomp-v1", "terms": [{"alpha": a, "U": [9 numbers, row-major]}, ...]}
json to_json(const StructuredDecomposition& dec);
StructuredDecomposition decomp_from_json(const json& doc);

json to_json(const PocsReport& rep, std::size_t max_trace_points = 1000);
json to_json(const Certificate& c);
json to_json(const CaseReport& rep);
json to_json(const OracleReport& rep);
json to_json(const OracleVerdict& v);
json to_json(const SupEtaResult& r);

json vec_to_json(const Vec3& v);
json mat_to_json(const Mat3& m);  // row-major, 9 numbers

// Throws ParseError on unreadable files or invalid JSON.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

}  // namespace ellipticity
