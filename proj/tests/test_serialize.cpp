#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "twist/errors.hpp"
#include "twist/factory.hpp"
#include "twist/serialize.hpp"

#include <numbers>

using namespace tw;

namespace {

std::vector<TwistedTuple> corpus() {
  FockParams p;
  p.k = 3;
  p.A = {0, 2};
  p.seed = 14;
  p.diagonal_algebra = true;
  return {make_c3_permutation(),
          make_m2_hardy(std::polar(1.0, std::numbers::pi / 3)),
          make_fock_model(p).tuple,
          make_polydisc(2),
          make_bilateral_counterexample(),
          make_unilateral_bilateral(),
          make_doubly_noncommuting(cplx(0, 1))};
}

// Expects a schema error whose message mentions `needle`.
void expect_schema(const std::string& text, const std::string& needle) {
  try {
    parse_spec(text);
    FAIL("accepted: " << needle);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

json polydisc_json() { return to_json(make_polydisc(1)); }

}  // namespace

TEST_CASE("complex numbers serialize as [re, im]") {
  const json j = cplx_json(cplx(1.5, -2.0));
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0].get<double>() == 1.5);
  CHECK(j[1].get<double>() == -2.0);
  CHECK(cplx_from_json(j, "/x") == cplx(1.5, -2.0));
  CHECK_THROWS_AS(cplx_from_json(json::array({1.0}), "/x"), Error);
  CHECK_THROWS_AS(cplx_from_json(json("1+2i"), "/x"), Error);
}

TEST_CASE("matrices round trip exactly") {
  std::mt19937_64 rng(3);
  const Mat m = oracle::random_matrix(3, 2, rng);
  CHECK(oracle::max_abs(mat_from_json(mat_json(m), "/m") - m) == 0.0);
  CHECK_THROWS_AS(mat_from_json(json::parse("[[[1,0]],[[1,0],[0,0]]]"), "/m"), Error);
}

TEST_CASE("canonical form is a fixed point of parse then serialize") {
  for (const TwistedTuple& t : corpus()) {
    const std::string once = canonical(to_json(t));
    const SpecFile back = parse_spec(once);
    CHECK_MESSAGE(canonical(to_json(back.tuple)) == once, t.label);
    CHECK(back.tuple.rank() == t.rank());
    CHECK(back.tuple.label == t.label);
    const long N = t.space().rank == 0 ? 0 : 3;
    for (std::size_t i = 0; i < t.rank(); ++i)
      CHECK(equal_on_window(back.tuple.S(i, 0), t.S(i, 0), N, 0.0).pass);
    for (std::size_t i = 0; i < t.rank(); ++i)
      for (std::size_t j = i + 1; j < t.rank(); ++j)
        if (t.has_twist(i, j)) CHECK(equal_on_window(back.tuple.twist(i, j), t.twist(i, j), N, 0.0).pass);
  }
}

TEST_CASE("subset and window survive the round trip") {
  SpecFile spec{make_polydisc(2), IndexSet{1}, 5};
  const SpecFile back = parse_spec(canonical(to_json(spec)));
  REQUIRE(back.subset.has_value());
  CHECK(*back.subset == IndexSet{1});
  CHECK(back.window == 5);
  const SpecFile bare = parse_spec(canonical(polydisc_json()));
  CHECK_FALSE(bare.subset.has_value());
  CHECK_FALSE(bare.window.has_value());
}

TEST_CASE("schema errors name the offending path") {
  expect_schema("{", "");
  expect_schema("[]", "");

  json j = polydisc_json();
  j.erase("format");
  expect_schema(j.dump(), "format");

  j = polydisc_json();
  j["version"] = kSpecVersion + 1;
  expect_schema(j.dump(), "version");

  j = polydisc_json();
  j["backend"] = "sparse";
  expect_schema(j.dump(), "backend");

  j = polydisc_json();
  j["operators"]["S0_0"]["terms"][0]["factors"] = json::array({{{"name", "nowhere"}, {"exponent", {{"coeffs", {0}}, {"const", 1}}}}});
  expect_schema(j.dump(), "/operators/S0_0/terms/0/factors/0/name");
}

TEST_CASE("reports carry pass and the failing location") {
  CheckReport r{"twisted"};
  r.record(0.5, 1e-10, "i=0 j=1");
  const json j = report_json(r);
  CHECK(j.at("pass") == false);
  CHECK(j.at("name") == "twisted");
  CHECK(j.at("where") == "i=0 j=1");
  CHECK(j.at("worst").get<double>() == 0.5);

  const json ok = report_json(check_existence(make_polydisc(2), 3, 1e-10));
  CHECK(ok.dump().find("true") != std::string::npos);
}
