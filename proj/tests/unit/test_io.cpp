#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>

#include "conjbound/errors.hpp"
#include "conjbound/io.hpp"

using namespace conjbound;
using nlohmann::json;

TEST_CASE("syntax errors carry a position") {
  const std::string msg = [] {
    try {
      io::parse_spec("{\"alpha\": 0,\n \"measure\": {\"atoms\": [[0, 1]],,}}");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  }();
  CHECK(msg.rfind("line 2, column ", 0) == 0);
  CHECK(msg.find("parse error") != std::string::npos);
  CHECK_THROWS_WITH_AS(io::parse_boundary_set("[1, 2"), doctest::Contains("line 1, column"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure(""), doctest::Contains("line 1, column 1"), ParseError);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_WITH_AS(io::parse_boundary_set("{}"), doctest::Contains("arcs"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_boundary_set("{\"arcs\": [[2, 1]]}"), doctest::Contains("beta >= alpha"),
                       ParseError);
  CHECK_THROWS_WITH_AS(io::parse_boundary_set("{\"arcs\": [[1]]}"), doctest::Contains("two-element"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_boundary_set("{\"arcs\": [[\"a\", 1]]}"), doctest::Contains("number"),
                       ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure("{\"atom\": []}"), doctest::Contains("unknown measure field"),
                       ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure("{\"density\": {\"pieces\": [[0, 1, \"quad:1\"]]}}"),
                       doctest::Contains("unknown density rule"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure("{\"density\": {\"pieces\": [[0, 1, \"lip:1\"]]}}"),
                       doctest::Contains("slope,offset"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure("{\"density\": {\"pieces\": [[0, 1, \"const:x\"]]}}"),
                       doctest::Contains("bad number"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_measure("{\"cantor\": {\"base\": [0, 1], \"depth\": 1.5}}"),
                       doctest::Contains("integer"), ParseError);
  CHECK_THROWS_WITH_AS(io::parse_spec("{\"alpha\": 0}"), doctest::Contains("measure"), ParseError);
  // Domain violations surface as schema errors.
  CHECK_THROWS_WITH_AS(io::parse_spec("{\"alpha\": -2, \"measure\": {}}"), doctest::Contains("schema"),
                       ParseError);
  CHECK_THROWS_AS(io::parse_measure("{\"density\": {\"pieces\": [[2, 1, \"const:1\"]]}}"), ParseError);
}

TEST_CASE("boundary set round trip") {
  const BoundarySet e = io::parse_boundary_set("{\"arcs\": [[0.5, 1.0], [0.9, 1.5], [3, 3], [6, 7]]}");
  const BoundarySet back = io::parse_boundary_set(io::to_json(e));
  REQUIRE(back.arcs().size() == e.arcs().size());
  for (std::size_t i = 0; i < e.arcs().size(); ++i) {
    CHECK(back.arcs()[i].start == doctest::Approx(e.arcs()[i].start).epsilon(1e-15));
    CHECK(back.arcs()[i].length == doctest::Approx(e.arcs()[i].length).epsilon(1e-15));
  }
  // [6, 7] wraps past 2 pi and merges with [0.5, 1.5].
  CHECK(e.arcs().size() == 2);
  CHECK(e.total_length() == doctest::Approx(1.5 + 2.0 * std::acos(-1.0) - 6.0));
}

TEST_CASE("measure round trip") {
  const std::string text =
      "{\"atoms\": [[0.5, 1.25], [4, -0.5]],"
      " \"density\": {\"pieces\": [[1, 2, \"const:0.75\"], [2.5, 3, \"lip:0.5,0.25\"]]},"
      " \"cantor\": {\"base\": [4.5, 6], \"depth\": 9, \"mass\": 2}}";
  const CircleMeasure mu = io::parse_measure(text);
  const CircleMeasure back = io::parse_measure(io::to_json(mu));
  CHECK(back.total_mass() == doctest::Approx(mu.total_mass()).epsilon(1e-15));
  CHECK(back.atoms().size() == 2);
  CHECK(back.pieces().size() == 2);
  REQUIRE(back.cantor().has_value());
  CHECK(back.cantor()->depth == 9);
  for (double t : {0.3, 0.6, 1.7, 2.8, 4.2, 5.0, 6.2}) {
    CHECK(back.primitive(t) == doctest::Approx(mu.primitive(t)).epsilon(1e-14));
  }
  CHECK(io::to_json(back) == io::to_json(mu));
}

TEST_CASE("spec defaults and report json") {
  const HarmonicSpec s = io::parse_spec("{\"measure\": {\"atoms\": [[0, 1]]}}");
  CHECK(s.order.alpha() == 0.0);
  CHECK(io::parse_spec("{\"alpha\": 1.5, \"measure\": {}}").order.alpha() == 1.5);

  VerificationReport rep;
  rep.layers.push_back({1, 0.5, 2.0, 0.5, 0.25, 0.5, 10, 0});
  rep.constant = 2.0;
  rep.verdict = Verdict::Bounded;
  const json j = json::parse(io::to_json(rep));
  CHECK(j["verdict"] == "bounded");
  CHECK(j["constant"] == 2.0);
  REQUIRE(j["layers"].size() == 1);
  CHECK(j["layers"][0]["k"] == 1);
  CHECK(j["layers"][0]["argmax"][1] == 0.25);
  CHECK(io::to_json(rep).find("\n  \"") != std::string::npos);
}
