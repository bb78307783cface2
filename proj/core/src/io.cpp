#include "conjbound/io.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "conjbound/errors.hpp"

namespace conjbound::io {

using nlohmann::json;

namespace {

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    // err.byte is 1-based and points just past the offending character.
    const std::size_t pos = err.byte == 0 ? 0 : std::min(err.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = err.what();
    if (const auto cut = msg.find("parse error"); cut != std::string::npos) msg = msg.substr(cut);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

[[noreturn]] void schema(const std::string& what) { throw ParseError("schema: " + what); }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(where + " must be finite");
  return v;
}

std::pair<double, double> pair_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema(where + " must be a two-element array");
  return {number(j[0], where), number(j[1], where)};
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    schema(where + ": bad number '" + s + "'");
  }
  return v;
}

BoundarySet boundary_from(const json& j) {
  if (!j.is_object() || !j.contains("arcs")) schema("boundary set needs an \"arcs\" array");
  const json& arcs = j["arcs"];
  if (!arcs.is_array()) schema("\"arcs\" must be an array");
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto p = pair_of(arcs[i], "arcs[" + std::to_string(i) + "]");
    if (p.second < p.first) schema("arcs[" + std::to_string(i) + "] needs beta >= alpha");
    iv.push_back(p);
  }
  try {
    return BoundarySet::from_intervals(iv);
  } catch (const DomainError& err) {
    schema(err.what());
  }
}

DensityPiece piece_from(const json& j, std::size_t i) {
  const std::string where = "density.pieces[" + std::to_string(i) + "]";
  if (!j.is_array() || j.size() != 3 || !j[2].is_string()) {
    schema(where + " must be [a, b, \"const:c\" | \"lip:slope,offset\"]");
  }
  const double a = number(j[0], where), b = number(j[1], where);
  const std::string rule = j[2].get<std::string>();
  if (rule.rfind("const:", 0) == 0) {
    return DensityPiece::constant(a, b, parse_double(rule.substr(6), where));
  }
  if (rule.rfind("lip:", 0) == 0) {
    const std::string body = rule.substr(4);
    const auto comma = body.find(',');
    if (comma == std::string::npos) schema(where + ": lip needs slope,offset");
    return DensityPiece::linear(a, b, parse_double(body.substr(0, comma), where),
                                parse_double(body.substr(comma + 1), where));
  }
  schema(where + ": unknown density rule '" + rule + "'");
}

CircleMeasure measure_from(const json& j) {
  if (!j.is_object()) schema("measure must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "atoms" && it.key() != "density" && it.key() != "cantor") {
      schema("unknown measure field \"" + it.key() + "\"");
    }
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const json& a = j["atoms"];
    if (!a.is_array()) schema("\"atoms\" must be an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto p = pair_of(a[i], "atoms[" + std::to_string(i) + "]");
      atoms.push_back({p.first, p.second});
    }
  }
  std::vector<DensityPiece> pieces;
  if (j.contains("density")) {
    const json& d = j["density"];
    if (!d.is_object() || !d.contains("pieces") || !d["pieces"].is_array()) {
      schema("\"density\" needs a \"pieces\" array");
    }
    for (std::size_t i = 0; i < d["pieces"].size(); ++i) pieces.push_back(piece_from(d["pieces"][i], i));
  }
  std::optional<CantorGenerator> cantor;
  if (j.contains("cantor")) {
    const json& c = j["cantor"];
    if (!c.is_object() || !c.contains("base")) schema("\"cantor\" needs a \"base\"");
    CantorGenerator g;
    std::tie(g.a, g.b) = pair_of(c["base"], "cantor.base");
    if (c.contains("depth")) {
      if (!c["depth"].is_number_integer()) schema("cantor.depth must be an integer");
      g.depth = c["depth"].get<int>();
    }
    if (c.contains("mass")) g.mass = number(c["mass"], "cantor.mass");
    cantor = g;
  }
  try {
    return CircleMeasure(std::move(atoms), std::move(pieces), cantor);
  } catch (const DomainError& err) {
    schema(err.what());
  }
}

}  // namespace

BoundarySet parse_boundary_set(const std::string& text) { return boundary_from(parse_document(text)); }

CircleMeasure parse_measure(const std::string& text) { return measure_from(parse_document(text)); }

HarmonicSpec parse_spec(const std::string& text) {
  const json j = parse_document(text);
  if (!j.is_object() || !j.contains("measure")) schema("spec needs a \"measure\" object");
  double alpha = 0.0;
  if (j.contains("alpha")) alpha = number(j["alpha"], "alpha");
  try {
    return HarmonicSpec{measure_from(j["measure"]), KernelOrder(alpha)};
  } catch (const DomainError& err) {
    schema(err.what());
  }
}

std::string to_json(const BoundarySet& e) {
  json arcs = json::array();
  for (const auto& a : e.arcs()) arcs.push_back({a.start, a.end()});
  return json{{"arcs", arcs}}.dump();
}

std::string to_json(const CircleMeasure& mu) {
  json j = json::object();
  if (!mu.atoms().empty()) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) atoms.push_back({a.theta, a.mass});
    j["atoms"] = atoms;
  }
  if (!mu.pieces().empty()) {
    json pieces = json::array();
    for (const auto& p : mu.pieces()) {
      std::ostringstream rule;
      rule.precision(17);
      if (p.kind == DensityPiece::Kind::Constant) {
        rule << "const:" << p.offset;
      } else {
        rule << "lip:" << p.slope << ',' << p.offset;
      }
      pieces.push_back({p.a, p.b, rule.str()});
    }
    j["density"] = {{"pieces", pieces}};
  }
  if (const auto& c = mu.cantor()) {
    j["cantor"] = {{"base", {c->a, c->b}}, {"depth", c->depth}, {"mass", c->mass}};
  }
  return j.dump();
}

std::string to_json(const VerificationReport& rep) {
  json layers = json::array();
  for (const auto& l : rep.layers) {
    layers.push_back({{"k", l.k},
                      {"radius", l.radius},
                      {"sup", l.sup},
                      {"argmax", {l.argmax_r, l.argmax_theta}},
                      {"rho", l.argmax_rho},
                      {"points", l.points},
                      {"skipped", l.skipped}});
  }
  json j{{"layers", layers},
         {"constant", rep.constant},
         {"last_ratio", rep.last_ratio},
         {"trend", rep.trend},
         {"verdict", to_string(rep.verdict)},
         {"evaluated", rep.evaluated},
         {"skipped", rep.skipped}};
  return j.dump(2);
}

}  // namespace conjbound::io
