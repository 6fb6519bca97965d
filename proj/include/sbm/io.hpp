#pragma once

// JSON and CSV serialization of the toolkit's data objects. Doubles are written
// with 17 significant digits (CSV) or the shortest round-trip form (JSON), so
// every file reads back bit-exactly. Files are written to a temporary sibling
// and renamed into place.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbm/core.hpp"
#include "sbm/forward.hpp"
#include "sbm/inversion.hpp"
#include "sbm/krein.hpp"

namespace sbm::io {

using nlohmann::json;

inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    require(static_cast<bool>(out), ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, what + ": " + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) { return parse_json(read_text(path), path.string()); }

inline void write_json(const std::filesystem::path& path, const json& j) { write_atomic(path, j.dump(1) + "\n"); }

namespace detail {
// Wraps nlohmann type errors as parse errors.
template <class Fn>
auto parsing(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, what + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) fail(ErrorKind::ParseError, what + ": " + e.what());
    throw;
  }
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  require(j.is_object() && j.contains(key), ErrorKind::ParseError, what + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::vector<double> numbers(const json& j, const std::string& what) {
  require(j.is_array(), ErrorKind::ParseError, what + ": expected an array");
  std::vector<double> v;
  for (const auto& e : j) {
    require(e.is_number(), ErrorKind::ParseError, what + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

inline std::optional<double> optional_number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  require(j.at(key).is_number(), ErrorKind::ParseError, what + ": '" + key + "' must be a number or null");
  return j.at(key).get<double>();
}
}  // namespace detail

// ---------------------------------------------------------------------------
// BoundaryFunction: {"k":[...], "re":[...], "im":[...], "parity":"conjugate"|"anti-conjugate"}

inline json to_json(const BoundaryFunction& f) {
  std::vector<double> re, im;
  for (cplx v : f.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  const auto k = f.grid().points();
  return json{{"k", std::vector<double>(k.begin(), k.end())},
              {"re", re},
              {"im", im},
              {"parity", f.parity() == Parity::Conjugate ? "conjugate" : "anti-conjugate"}};
}

inline BoundaryFunction boundary_function_from_json(const json& j) {
  const std::string what = "BoundaryFunction";
  return detail::parsing(what, [&] {
    const auto k = detail::numbers(detail::field(j, "k", what), what + ".k");
    const auto re = detail::numbers(detail::field(j, "re", what), what + ".re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = detail::numbers(j.at("im"), what + ".im");
    require(re.size() == k.size() && im.size() == k.size(), ErrorKind::ParseError, what + ": length mismatch");
    Parity parity = Parity::Conjugate;
    if (j.contains("parity")) {
      const std::string p = j.at("parity").get<std::string>();
      require(p == "conjugate" || p == "anti-conjugate", ErrorKind::ParseError, what + ": unknown parity " + p);
      parity = p == "conjugate" ? Parity::Conjugate : Parity::AntiConjugate;
    }
    std::vector<cplx> v(k.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(re[i], im[i]);
    return BoundaryFunction(KGrid(k), std::move(v), parity);
  });
}

// ---------------------------------------------------------------------------
// Potential CSV: header "x,V", rows with 17 significant digits

inline std::string potential_csv(const Potential& v) {
  std::string out = "x,V\n";
  char buf[96];
  for (std::size_t i = 0; i < v.grid().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.grid()[i], v.values()[i]);
    out += buf;
  }
  return out;
}

inline void write_potential_csv(const std::filesystem::path& path, const Potential& v) {
  write_atomic(path, potential_csv(v));
}

inline Potential parse_potential_csv(const std::string& text, const std::string& what = "potential CSV") {
  std::istringstream in(text);
  std::string line;
  std::vector<double> x, v;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::ParseError, what + ": line " + std::to_string(lineno) + " has no comma");
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    char* end = nullptr;
    const double xv = std::strtod(a.c_str(), &end);
    if (end == a.c_str()) {
      // header row
      require(x.empty(), ErrorKind::ParseError, what + ": non-numeric row " + std::to_string(lineno));
      continue;
    }
    char* end2 = nullptr;
    const double vv = std::strtod(b.c_str(), &end2);
    require(end2 != b.c_str() && std::isfinite(xv) && std::isfinite(vv), ErrorKind::ParseError,
            what + ": bad number on line " + std::to_string(lineno));
    x.push_back(xv);
    v.push_back(vv);
  }
  require(x.size() >= 2, ErrorKind::ParseError, what + ": need at least two rows");
  return detail::parsing(what, [&] { return Potential(XGrid(x), v); });
}

inline Potential read_potential_csv(const std::filesystem::path& path) {
  return parse_potential_csv(read_text(path), path.string());
}

// ---------------------------------------------------------------------------
// Boundary parameters

inline json to_json(const BoundaryParam& bc) {
  if (bc.is_dirichlet()) return json{{"dirichlet", true}, {"cot", nullptr}};
  return json{{"dirichlet", false}, {"cot", bc.cot}};
}

// ---------------------------------------------------------------------------
// Forward outputs

inline json to_json(const ForwardSummary& s) {
  const auto eigs = s.eigs.kappas();
  return json{{"bc", to_json(s.bc)},
              {"F", to_json(s.F)},
              {"eigs", std::vector<double>(eigs.begin(), eigs.end())},
              {"g", s.g},
              {"m", s.m},
              {"d_flag", s.d_flag},
              {"phase", s.phase}};
}

inline json to_json(const SpectralMeasure& m) {
  json masses = json::array();
  for (const auto& [l, w] : m.masses) masses.push_back({l, w});
  return json{{"lambda", m.lambda}, {"density", m.density}, {"masses", masses}};
}

// ---------------------------------------------------------------------------
// SpectralDataSet:
// {"tag":"D3","h":5.0,"beta":null,"modulus":{...},"eig_alpha":[2.0],"eig_beta_partial":[4.0]}
// "beta" carries cot(beta).

inline DataTag parse_tag(const std::string& s) {
  require(s.size() == 2 && s[0] == 'D' && s[1] >= '1' && s[1] <= '8', ErrorKind::ParseError,
          "unknown data-set tag '" + s + "'");
  return static_cast<DataTag>(s[1] - '0');
}

inline std::string tag_name(DataTag t) { return "D" + std::to_string(tag_index(t)); }

inline json to_json(const SpectralDataSet& d) {
  const auto a = d.eig_alpha.kappas();
  const auto b = d.eig_beta.kappas();
  json j{{"tag", tag_name(d.tag)},
         {"h", d.h ? json(*d.h) : json(nullptr)},
         {"beta", d.cot_beta ? json(*d.cot_beta) : json(nullptr)},
         {"modulus", to_json(d.modulus)},
         {"eig_alpha", std::vector<double>(a.begin(), a.end())}};
  j[tag_partial_beta(d.tag) ? "eig_beta_partial" : "eig_beta"] = std::vector<double>(b.begin(), b.end());
  return j;
}

inline SpectralDataSet dataset_from_json(const json& j) {
  const std::string what = "data set";
  return detail::parsing(what, [&] {
    SpectralDataSet d;
    const json& tag = detail::field(j, "tag", what);
    require(tag.is_string(), ErrorKind::ParseError, what + ": tag must be a string");
    d.tag = parse_tag(tag.get<std::string>());
    d.h = detail::optional_number(j, "h", what);
    d.cot_beta = detail::optional_number(j, "beta", what);
    d.modulus = boundary_function_from_json(detail::field(j, "modulus", what));
    d.eig_alpha = EigenSet(detail::numbers(detail::field(j, "eig_alpha", what), what + ".eig_alpha"));
    const char* bkey = j.contains("eig_beta_partial") ? "eig_beta_partial" : "eig_beta";
    d.eig_beta = EigenSet(detail::numbers(detail::field(j, bkey, what), what + "." + bkey));
    return d;
  });
}

// ---------------------------------------------------------------------------
// KreinShift: {"k":[...], "xi":[...], "jumps":[[1.0,1],[2.0,0]], "xi_at_infinity":0.5}
// The value near 0 on I+ is implied by the first jump, or by the normalization without jumps.

inline json to_json(const KreinShift& xi) {
  json jumps = json::array();
  for (const auto& [at, after] : xi.jumps) jumps.push_back({at, after});
  const auto k = xi.grid.points();
  json j{{"k", std::vector<double>(k.begin(), k.end())},
         {"xi", xi.real_axis},
         {"jumps", jumps},
         {"xi_at_infinity", xi.normalization}};
  if (xi.jumps.empty()) j["xi_near_zero"] = xi.value_near_zero;
  return j;
}

inline KreinShift krein_shift_from_json(const json& j) {
  const std::string what = "KreinShift";
  return detail::parsing(what, [&] {
    KreinShift xi;
    xi.grid = KGrid(detail::numbers(detail::field(j, "k", what), what + ".k"));
    xi.real_axis = detail::numbers(detail::field(j, "xi", what), what + ".xi");
    const json& jumps = detail::field(j, "jumps", what);
    require(jumps.is_array(), ErrorKind::ParseError, what + ": jumps must be an array");
    for (const auto& e : jumps) {
      require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number_integer(), ErrorKind::ParseError,
              what + ": each jump is [location, value-after]");
      xi.jumps.emplace_back(e[0].get<double>(), e[1].get<int>());
    }
    const json& norm = detail::field(j, "xi_at_infinity", what);
    require(norm.is_number(), ErrorKind::ParseError, what + ": xi_at_infinity must be a number");
    xi.normalization = norm.get<double>();
    if (!xi.jumps.empty()) {
      xi.value_near_zero = 1 - xi.jumps.front().second;
    } else if (j.contains("xi_near_zero")) {
      xi.value_near_zero = j.at("xi_near_zero").get<int>();
    } else {
      // without bound states the I+ value is 0 (Robin) or 1 (alpha = pi)
      xi.value_near_zero = xi.normalization > 0.25 ? 1 : 0;
    }
    return xi;
  });
}

// ---------------------------------------------------------------------------
// Inversion data. "bc" is "robin" or "dirichlet".

inline std::string bc_name(BoundaryKind k) { return k == BoundaryKind::Robin ? "robin" : "dirichlet"; }

inline BoundaryKind parse_bc(const json& j, const std::string& what) {
  const std::string s = detail::field(j, "bc", what).get<std::string>();
  require(s == "robin" || s == "dirichlet", ErrorKind::ParseError, what + ": bc must be robin or dirichlet");
  return s == "robin" ? BoundaryKind::Robin : BoundaryKind::Dirichlet;
}

inline json to_json(const GLData& d, BoundaryKind bc) {
  const auto e = d.eigs.kappas();
  return json{{"bc", bc_name(bc)},
              {"modulus", to_json(d.modulus)},
              {"eigs", std::vector<double>(e.begin(), e.end())},
              {"g", d.g}};
}

inline json to_json(const MarchenkoData& d, BoundaryKind bc) {
  const auto e = d.eigs.kappas();
  return json{
      {"bc", bc_name(bc)}, {"S", to_json(d.S)}, {"eigs", std::vector<double>(e.begin(), e.end())}, {"m", d.m}};
}

inline json to_json(const FMData& d) {
  const auto t = d.taus.kappas();
  return json{{"L", to_json(d.L)}, {"taus", std::vector<double>(t.begin(), t.end())}, {"c", d.c}};
}

inline std::pair<GLData, BoundaryKind> gl_data_from_json(const json& j) {
  const std::string what = "GLData";
  return detail::parsing(what, [&] {
    GLData d{boundary_function_from_json(detail::field(j, "modulus", what)),
             EigenSet(detail::numbers(detail::field(j, "eigs", what), what + ".eigs")),
             detail::numbers(detail::field(j, "g", what), what + ".g")};
    return std::make_pair(d, parse_bc(j, what));
  });
}

inline std::pair<MarchenkoData, BoundaryKind> marchenko_data_from_json(const json& j) {
  const std::string what = "MarchenkoData";
  return detail::parsing(what, [&] {
    MarchenkoData d{boundary_function_from_json(detail::field(j, "S", what)),
                    EigenSet(detail::numbers(detail::field(j, "eigs", what), what + ".eigs")),
                    detail::numbers(detail::field(j, "m", what), what + ".m")};
    return std::make_pair(d, parse_bc(j, what));
  });
}

inline FMData fm_data_from_json(const json& j) {
  const std::string what = "FMData";
  return detail::parsing(what, [&] {
    return FMData{boundary_function_from_json(detail::field(j, "L", what)),
                  EigenSet(detail::numbers(detail::field(j, "taus", what), what + ".taus")),
                  detail::numbers(detail::field(j, "c", what), what + ".c")};
  });
}

}  // namespace sbm::io
