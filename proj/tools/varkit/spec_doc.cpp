#include "spec_doc.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "varkit/errors.hpp"
#include "varkit/piecewise.hpp"
#include "varkit/rational.hpp"
#include "varkit/zoo.hpp"

namespace varkit::cli {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::SpecParseError, what); }

std::string rational_text(const Json& v, const std::string& where) {
  if (v.is_string()) return to_string(parse_rational(v.get<std::string>()));
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return to_string(rational_from_double(v.get<double>()));
  fail(where + ": expected a number or a rational string");
}

void flatten(const Json& v, const std::string& where, Json& out) {
  if (v.is_array()) {
    for (const auto& e : v) flatten(e, where, out);
    return;
  }
  out.push_back(rational_text(v, where));
}

Json normalize_zoo_params(const Json& p) {
  if (!p.is_object()) fail("params must be an object");
  std::map<std::string, Json> sorted;
  for (auto it = p.begin(); it != p.end(); ++it) {
    Json arr = Json::array();
    flatten(it.value(), "params." + it.key(), arr);
    sorted[it.key()] = std::move(arr);
  }
  Json out = Json::object();
  for (auto& [k, v] : sorted) out[k] = std::move(v);
  return out;
}

Json normalize_piecewise(const Json& p) {
  if (!p.is_object()) fail("piecewise1d params must be an object");
  for (auto it = p.begin(); it != p.end(); ++it)
    if (it.key() != "breakpoints" && it.key() != "pieces" && it.key() != "domain")
      fail("piecewise1d: unknown parameter '" + it.key() + "'");
  Json out = Json::object();
  Json bp = Json::array();
  if (p.contains("breakpoints")) {
    if (!p["breakpoints"].is_array()) fail("piecewise1d.breakpoints must be an array");
    for (const auto& b : p["breakpoints"]) bp.push_back(rational_text(b, "piecewise1d.breakpoints"));
  }
  out["breakpoints"] = bp;
  if (!p.contains("pieces") || !p["pieces"].is_array()) fail("piecewise1d.pieces must be an array");
  Json pieces = Json::array();
  for (const auto& piece : p["pieces"]) {
    if (!piece.is_array() || piece.size() != 3) fail("piecewise1d: each piece is [a, b, c] for a*x^2 + b*x + c");
    Json q = Json::array();
    for (const auto& c : piece) q.push_back(rational_text(c, "piecewise1d.pieces"));
    pieces.push_back(q);
  }
  out["pieces"] = pieces;
  Json dom = {{"lo", nullptr}, {"hi", nullptr}};
  if (p.contains("domain")) {
    const Json& d = p["domain"];
    if (!d.is_object()) fail("piecewise1d.domain must be an object");
    for (const char* k : {"lo", "hi"})
      if (d.contains(k) && !d[k].is_null()) dom[k] = rational_text(d[k], std::string("piecewise1d.domain.") + k);
  }
  out["domain"] = dom;
  return out;
}

Json normalize_params(const std::string& kind, const Json& p);

Json normalize_nested(const Json& j) { return spec_to_json(spec_from_json(j)); }

Json normalize_params(const std::string& kind, const Json& p) {
  if (kind == "piecewise1d") return normalize_piecewise(p);
  if (kind == "sum") {
    if (!p.is_object() || !p.contains("terms") || !p["terms"].is_array() || p["terms"].size() < 2)
      fail("sum needs params.terms with at least two function specs");
    Json terms = Json::array();
    for (const auto& t : p["terms"]) terms.push_back(normalize_nested(t));
    return Json{{"terms", terms}};
  }
  if (kind == "tilt" || kind == "shift") {
    if (!p.is_object() || !p.contains("kappa") || !p.contains("base"))
      fail(kind + " needs params.kappa and params.base");
    return Json{{"kappa", rational_text(p["kappa"], kind + ".kappa")}, {"base", normalize_nested(p["base"])}};
  }
  zoo_description(kind);
  return normalize_zoo_params(p);
}

Point read_vector(const Json& v, const std::string& where) {
  if (v.is_number()) return scalar_point(v.get<double>());
  if (!v.is_array() || v.empty()) fail(where + " must be a number or a nonempty array");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(where + " must hold numbers");
    p[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return p;
}

Json write_vector(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

Rational rat(const Json& v) { return parse_rational(v.get<std::string>()); }

Box piecewise_box(const PiecewiseQuad1D& f) {
  const auto& d = f.domain();
  double lo = -2.0, hi = 2.0;
  if (!f.breakpoints().empty()) {
    lo = std::min(lo, to_double(f.breakpoints().front()) - 2.0);
    hi = std::max(hi, to_double(f.breakpoints().back()) + 2.0);
  }
  if (d.lo) lo = to_double(*d.lo) - 1.0;
  if (d.hi) hi = to_double(*d.hi) + 1.0;
  return Box::cube(1, lo, hi);
}

}  // namespace

FunctionSpecDoc spec_from_json(const Json& j) {
  if (!j.is_object()) fail("function spec must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind" && it.key() != "params" && it.key() != "box" && it.key() != "dimension")
      fail("unknown field '" + it.key() + "'");
  if (!j.contains("kind") || !j["kind"].is_string()) fail("field 'kind' must be a string");
  FunctionSpecDoc d;
  d.kind = j["kind"].get<std::string>();
  if (j.contains("dimension")) {
    if (!j["dimension"].is_number_integer() || j["dimension"].get<int>() < 0)
      fail("field 'dimension' must be a nonnegative integer");
    d.dimension = j["dimension"].get<int>();
  }
  d.params = normalize_params(d.kind, j.contains("params") ? j["params"] : Json::object());
  if (j.contains("box") && !j["box"].is_null()) {
    const Json& b = j["box"];
    if (!b.is_object() || !b.contains("lo") || !b.contains("hi")) fail("box needs 'lo' and 'hi'");
    Point lo = read_vector(b["lo"], "box.lo");
    Point hi = read_vector(b["hi"], "box.hi");
    if (lo.size() != hi.size()) fail("box.lo and box.hi differ in length");
    d.box = Box(lo, hi);
  }
  return d;
}

FunctionSpecDoc parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  try {
    return spec_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

FunctionSpecDoc load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

Json spec_to_json(const FunctionSpecDoc& d) {
  Json j = Json::object();
  j["kind"] = d.kind;
  j["dimension"] = d.dimension;
  j["params"] = d.params;
  if (d.box)
    j["box"] = Json{{"lo", write_vector(d.box->lo)}, {"hi", write_vector(d.box->hi)}};
  else
    j["box"] = nullptr;
  return j;
}

std::string serialize_spec(const FunctionSpecDoc& d) { return spec_to_json(d).dump(2) + "\n"; }

BuiltFunction build_function(const FunctionSpecDoc& d) {
  const Json& p = d.params;
  std::optional<BuiltFunction> built;
  if (d.kind == "piecewise1d") {
    std::vector<Rational> bp;
    for (const auto& b : p["breakpoints"]) bp.push_back(rat(b));
    std::vector<QuadPiece> pieces;
    for (const auto& q : p["pieces"]) pieces.push_back({rat(q[0]), rat(q[1]), rat(q[2])});
    Domain1D dom;
    if (!p["domain"]["lo"].is_null()) dom.lo = rat(p["domain"]["lo"]);
    if (!p["domain"]["hi"].is_null()) dom.hi = rat(p["domain"]["hi"]);
    PiecewiseQuad1D f(bp, pieces, dom);
    built = BuiltFunction{oracle_from_piecewise("piecewise1d", f), piecewise_box(f)};
  } else if (d.kind == "sum") {
    std::optional<BuiltFunction> acc;
    for (const auto& t : p["terms"]) {
      BuiltFunction b = build_function(spec_from_json(t));
      if (!acc) {
        acc = std::move(b);
        continue;
      }
      if (b.oracle.dimension() != acc->oracle.dimension()) fail("sum terms differ in dimension");
      acc->oracle = sum_oracle(acc->oracle, b.oracle, acc->oracle.name() + "+" + b.oracle.name());
    }
    built = std::move(acc);
  } else if (d.kind == "tilt" || d.kind == "shift") {
    BuiltFunction b = build_function(spec_from_json(p["base"]));
    const double kappa = to_double(rat(p["kappa"]));
    const double sigma = d.kind == "tilt" ? -kappa : kappa;
    b.oracle = add_quadratic(b.oracle, sigma, b.oracle.name() + "_" + d.kind);
    built = std::move(b);
  } else {
    ZooParams zp;
    for (auto it = p.begin(); it != p.end(); ++it)
      for (const auto& v : it.value()) zp[it.key()].push_back(v.get<std::string>());
    ZooEntry e = zoo_get(d.kind, zp, d.dimension);
    built = BuiltFunction{std::move(e.oracle), std::move(e.default_box)};
  }
  if (d.dimension && built->oracle.dimension() != d.dimension)
    fail("dimension " + std::to_string(d.dimension) + " does not match the function's dimension " +
         std::to_string(built->oracle.dimension()));
  if (d.box) {
    if (d.box->dim() != built->oracle.dimension()) fail("box dimension does not match the function");
    built->box = *d.box;
  }
  return std::move(*built);
}

}  // namespace varkit::cli
