#include <doctest.h>

#include "coxwalk/config.hpp"

#include <sstream>

using namespace coxwalk;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("exact rationals only") {
  CHECK(parse_rational("1/3") == Rat(1, 3));
  CHECK(parse_rational(" 2/4 ") == Rat(1, 2));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("0.5"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1e-3"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational(""), ValidationError);
}

TEST_CASE("defaults and overrides") {
  auto c = parse("triangle = 4 3 3\n");
  CHECK(c.system->rank() == 3);
  CHECK(c.nearest_neighbour);
  CHECK(c.horizon == 2000);
  CHECK(c.trajectories == 1000);
  CHECK(!c.cone_type);
  CHECK(!c.L1);
  CHECK(c.mode == RenewalMode::EnterAndStay);
  CHECK(c.effective_tail_buffer() == 400);
  CHECK(c.building().q == std::vector<int>{2, 2, 2});

  c = parse(
      "# comment\n"
      "triangle = 4 3 3   # trailing comment\n"
      "q = 3\n"
      "horizon = 500\n"
      "seed = 77\n"
      "cone_type = 13\n"
      "L1 = 4\n"
      "mode = paper_prefix\n"
      "tail_buffer = 50\n"
      "sources = e; 1; 12\n"
      "words = yes\n");
  CHECK(c.building().q == std::vector<int>{3, 3, 3});
  CHECK(c.horizon == 500);
  CHECK(c.seed == 77);
  CHECK(*c.cone_type == 13);
  CHECK(*c.L1 == 4);
  CHECK(c.mode == RenewalMode::PaperPrefix);
  CHECK(c.effective_tail_buffer() == 50);
  CHECK(c.sources == std::vector<Word>{{}, {0}, {0, 1}});
  CHECK(c.words);
  CHECK(c.raw.at("q") == "3");
}

TEST_CASE("infinite labels and matrices") {
  auto c = parse("triangle = inf inf inf\n");
  CHECK(c.system->m(0, 1) == kInf);
  c = parse("matrix = 1 4 2; 4 1 3; 2 3 1\n");
  CHECK(c.system->m(0, 1) == 4);
  CHECK(c.system->m(1, 2) == 3);
  CHECK(c.system->m(0, 2) == 2);
  CHECK_THROWS_AS(parse("matrix = 1 4 2; 3 1 3; 2 3 1\n"), ValidationError);  // not symmetric
  CHECK_THROWS_AS(parse("matrix = 1 4; 4 1 3\n"), ValidationError);
  CHECK_THROWS_AS(parse("matrix = 2 4; 4 1\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 1 3\n"), ValidationError);
}

TEST_CASE("step lines give an exact walk") {
  auto c = parse(
      "polygon = 2 2 2 2 2\n"
      "step = 1 : 1/4\n"
      "step = 3 : 1/4\n"
      "step = 5 : 1/2\n");
  CHECK(!c.nearest_neighbour);
  REQUIRE(c.steps.size() == 3);
  CHECK(c.steps[2].second == Rat(1, 2));
  CHECK_NOTHROW(c.walk());
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nstep = 1 : 0.25\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nwalk = nn\nstep = 1 : 1\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nwalk = steps\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nstep = 1 4 : 1\n"), ValidationError);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse(""), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\npolygon = 2 2 2 2 2\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nhorizon = 10\nhorizon = 20\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nhorizn = 10\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nhorizon = -5\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nmode = sometimes\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("triangle = 4 3\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle 4 3 3\n"), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nq = 2 2\n").building(), ValidationError);
  CHECK_THROWS_AS(parse("triangle = 4 3 3\nsources = 7\n"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/coxwalk.cfg"), ValidationError);
}
