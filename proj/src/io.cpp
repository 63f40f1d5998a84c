#include "ellipticity/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ellipticity/errors.hpp"

namespace ellipticity {

namespace {

json entries_json(const RawTensor& raw) {
  json entries = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double v = raw[flat_index(i, j, k, l)];
          if (v != 0.0) entries.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"l", l + 1}, {"v", v}});
        }
  return entries;
}

json tensor_doc(const char* format, const RawTensor& raw, const std::string& name) {
  json doc;
  doc["format"] = format;
  if (!name.empty()) doc["name"] = name;
  doc["entries"] = entries_json(raw);
  return doc;
}

int index_field(const json& e, const char* key, std::size_t n) {
  if (!e.contains(key) || !e[key].is_number_integer())
    throw ParseError("entry " + std::to_string(n) + ": field '" + key + "' must be an integer");
  const int v = e[key].get<int>();
  if (v < 1 || v > 3)
    throw ParseError("entry " + std::to_string(n) + ": index '" + key + "' out of range 1..3");
  return v - 1;
}

double number_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": field '" + key + "' must be finite");
  return v;
}

}  // namespace

json vec_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

json mat_to_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

json to_json(const Elast4& a, const std::string& name) { return tensor_doc(kElast4Format, a.entries(), name); }

json to_json(const Pair4& t, const std::string& name) { return tensor_doc(kPair4Format, t.entries(), name); }

RawTensor raw_entries_from_json(const json& doc, const char* expected_format) {
  if (!doc.is_object()) throw ParseError("tensor document must be a JSON object");
  if (!doc.contains("format") || !doc["format"].is_string())
    throw ParseError("tensor document lacks a string 'format'");
  const std::string fmt = doc["format"].get<std::string>();
  if (fmt != expected_format)
    throw ParseError("expected format '" + std::string(expected_format) + "', got '" + fmt + "'");
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw ParseError("'entries' must be an array");
  RawTensor raw{};
  std::array<bool, 81> seen{};
  std::size_t n = 0;
  for (const auto& e : doc["entries"]) {
    if (!e.is_object()) throw ParseError("entry " + std::to_string(n) + " is not an object");
    const int i = index_field(e, "i", n), j = index_field(e, "j", n), k = index_field(e, "k", n),
              l = index_field(e, "l", n);
    const std::size_t at = flat_index(i, j, k, l);
    if (seen[at]) throw ParseError("entry " + std::to_string(n) + " duplicates an earlier index");
    seen[at] = true;
    raw[at] = number_field(e, "v", "entry " + std::to_string(n));
    ++n;
  }
  return raw;
}

std::string tensor_name(const json& doc) {
  if (doc.is_object() && doc.contains("name") && doc["name"].is_string()) return doc["name"].get<std::string>();
  return "";
}

Elast4 elast4_from_json(const json& doc, double tol) {
  return Elast4::from_raw(raw_entries_from_json(doc, kElast4Format), tol);
}

Pair4 pair4_from_json(const json& doc, double tol) {
  return Pair4::from_raw(raw_entries_from_json(doc, kPair4Format), tol);
}

json to_json(const StructuredDecomposition& dec) {
  json terms = json::array();
  for (const auto& t : dec.terms) terms.push_back({{"alpha", t.alpha}, {"U", mat_to_json(t.u)}});
  return {{"format", kDecompFormat}, {"terms", terms}};
}

StructuredDecomposition decomp_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("decomposition document must be a JSON object");
  if (!doc.contains("format") || doc["format"] != kDecompFormat)
    throw ParseError(std::string("expected format '") + kDecompFormat + "'");
  if (!doc.contains("terms") || !doc["terms"].is_array()) throw ParseError("'terms' must be an array");
  StructuredDecomposition dec;
  std::size_t n = 0;
  for (const auto& t : doc["terms"]) {
    const std::string where = "term " + std::to_string(n++);
    if (!t.is_object()) throw ParseError(where + " is not an object");
    DecompTerm term;
    term.alpha = number_field(t, "alpha", where);
    if (term.alpha == 0.0) throw ParseError(where + ": alpha must be nonzero");
    if (!t.contains("U") || !t["U"].is_array() || t["U"].size() != 9)
      throw ParseError(where + ": 'U' must be an array of 9 numbers (row-major)");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const auto& v = t["U"][static_cast<std::size_t>(3 * r + c)];
        if (!v.is_number() || !std::isfinite(v.get<double>())) throw ParseError(where + ": 'U' entries must be finite numbers");
        term.u(r, c) = v.get<double>();
      }
    dec.terms.push_back(term);
  }
  return dec;
}

json to_json(const PocsReport& rep, std::size_t max_trace_points) {
  json trace = json::array(), at = json::array();
  const std::size_t n = rep.gap_trace.size();
  if (n <= max_trace_points) {
    for (std::size_t t = 0; t < n; ++t) {
      at.push_back(t + 1);
      trace.push_back(rep.gap_trace[t]);
    }
  } else {
    for (std::size_t k = 0; k < max_trace_points; ++k) {
      const std::size_t t = (k * (n - 1)) / (max_trace_points - 1);
      at.push_back(t + 1);
      trace.push_back(rep.gap_trace[t]);
    }
  }
  return {{"verdict", to_string(rep.verdict)},
          {"iterations", rep.iterations},
          {"final_gap", rep.final_gap},
          {"gap_threshold", rep.gap_threshold},
          {"epsilon_shift", rep.epsilon_shift},
          {"gap_trace", trace},
          {"gap_trace_iterations", at},
          {"limit_A", to_json(rep.limit_A)},
          {"limit_B", to_json(rep.limit_B)}};
}

json to_json(const Certificate& c) {
  return {{"certificate", to_string(c.kind)},
          {"epsilon", c.epsilon},
          {"tried_epsilons", c.tried_epsilons},
          {"note", c.note},
          {"pocs", to_json(c.report)}};
}

json to_json(const SupEtaResult& r) {
  json probes = json::array();
  for (const auto& p : r.probes)
    probes.push_back({{"line", vec_to_json(p.line)},
                      {"angles", p.angles},
                      {"values", p.values},
                      {"limit", std::isfinite(p.limit) ? json(p.limit) : json(nullptr)}});
  return {{"value", r.value},
          {"argmax", vec_to_json(r.argmax)},
          {"converged", r.converged},
          {"ascents", r.ascents},
          {"ascents_at_singular", r.ascents_at_singular},
          {"evaluated", r.evaluated},
          {"excluded", r.excluded},
          {"singular_probes", probes}};
}

json to_json(const CaseReport& rep) {
  json conds = json::array();
  for (const auto& c : rep.conditions)
    conds.push_back({{"name", c.name}, {"ok", c.ok}, {"value", std::isfinite(c.value) ? json(c.value) : json("inf")},
                     {"detail", c.detail}});
  json doc = {{"case", rep.case_id},
              {"verdict", to_string(rep.verdict)},
              {"structure_ok", rep.structure_ok},
              {"regrouped", rep.regrouped},
              {"boundary", rep.boundary},
              {"conditions", conds},
              {"note", rep.note}};
  if (rep.structure) {
    const CaseStructure& cs = *rep.structure;
    json frames = json::array();
    for (const auto& f : cs.frames) frames.push_back(mat_to_json(f));
    json sigmas = json::array();
    for (const auto& s : cs.sigmas) sigmas.push_back(std::vector<double>(s.data(), s.data() + s.size()));
    doc["structure"] = {{"V", mat_to_json(cs.V)},
                        {"frames", frames},
                        {"alphas", cs.alphas},
                        {"negative_alphas", cs.negative_alphas},
                        {"sigmas", sigmas},
                        {"cond_V", cs.cond_V},
                        {"cond_frames", cs.cond_frames}};
  }
  if (rep.c_matrix) {
    doc["C"] = mat_to_json(*rep.c_matrix);
    doc["C_min_eigenvalue"] = rep.c_min_eigenvalue;
  }
  if (rep.sup) {
    doc["threshold"] = rep.threshold;
    doc["eta_sup"] = rep.eta_sup;
    doc["eta_argmax"] = vec_to_json(rep.eta_argmax);
    doc["sup_search"] = to_json(*rep.sup);
  }
  return doc;
}

json to_json(const OracleReport& rep) {
  json mins = json::array();
  for (const auto& m : rep.minimizers)
    mins.push_back({{"x", vec_to_json(m.x)}, {"y", vec_to_json(m.y)}, {"value", m.value}});
  return {{"min_value", rep.min_value},
          {"argmin_x", vec_to_json(rep.argmin_x)},
          {"argmin_y", vec_to_json(rep.argmin_y)},
          {"grid_n", rep.grid_n},
          {"refined", rep.refined},
          {"minimizers", mins}};
}

json to_json(const OracleVerdict& v) {
  json doc = {{"verdict", to_string(v.kind)},
              {"min_value", v.min_value},
              {"scale", v.scale},
              {"search", to_json(v.report)}};
  if (v.witness)
    doc["witness"] = {{"x", vec_to_json(v.witness->x)}, {"y", vec_to_json(v.witness->y)}, {"value", v.witness->value}};
  return doc;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace ellipticity
