#include <doctest.h>

#include <random>
#include <sstream>

#include "agti/error.hpp"
#include "agti/io.hpp"
#include "support/oracles.hpp"

using namespace agti;
using agti::io::json;

namespace {

std::size_t error_line(const std::string &text, const io::LabelTokens &tokens = {}) {
  std::istringstream in(text);
  try {
    (void)io::read_decisions(in, tokens);
  } catch (const MalformedInput &e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("decision files round trip") {
  std::mt19937_64 rng(51);
  for (bool labeled : {false, true}) {
    auto s = testing::random_agreeing_stream(rng, 4, 257);
    if (!labeled) {
      const std::array<int, 4> all{0, 1, 2, 3};
      s = s.project(all);
    }
    std::ostringstream out;
    io::write_decisions(out, s);
    std::istringstream in(out.str());
    const auto back = io::read_decisions(in);
    CHECK(back.labeled() == s.labeled());
    CHECK(tally(back) == tally(s));
    std::ostringstream again;
    io::write_decisions(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("decision files with custom tokens and delimiter") {
  std::istringstream in("c1;c2;c3;truth\nY;N;Y;Y\n\nN;N;N;N\n");
  const auto s = io::read_decisions(in, io::LabelTokens::parse("Y,N"), ';');
  CHECK(s.rows() == 2);
  CHECK(s.labeled());
  CHECK(s.row(0) == Pattern{Label::alpha, Label::beta, Label::alpha});
  CHECK(*s.truth(1) == Label::beta);
  CHECK_THROWS_AS(io::LabelTokens::parse("Y"), std::invalid_argument);
  CHECK_THROWS_AS(io::LabelTokens::parse("Y,Y"), std::invalid_argument);
}

TEST_CASE("decision file errors name the line") {
  CHECK(error_line("c1,c2,c3\nalpha,alpha,alpha\nalpha,beta,alpha,beta\n") == 3);
  CHECK(error_line("c1,c2\nalpha,beta\n\nalpha,gamma\n") == 4);
  CHECK(error_line("c1,truth\nalpha,alpha\nbeta,\n") == 3);
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(io::read_decisions(empty), MalformedInput);
  std::istringstream bad("c1,c2\nalpha,beta,\n");
  try {
    (void)io::read_decisions(bad);
    FAIL("expected MalformedInput");
  } catch (const MalformedInput &e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("sketch documents round trip bit-exactly") {
  std::mt19937_64 rng(52);
  for (int n = 1; n <= 6; ++n) {
    const auto s = tally(testing::random_agreeing_stream(rng, n, 1000));
    std::ostringstream out;
    io::write_sketch(out, s);
    std::istringstream in(out.str());
    const auto back = io::read_sketch(in);
    CHECK(back == s);
    std::ostringstream again;
    io::write_sketch(again, back);
    CHECK(again.str() == out.str());
  }
  const PatternSketch big(1, {std::uint64_t{1} << 62, 7}, (std::uint64_t{1} << 62) + 7);
  std::istringstream in(io::dump(io::sketch_to_json(big)));
  CHECK(io::read_sketch(in) == big);
}

TEST_CASE("sketch document fields") {
  const auto j = io::sketch_to_json(PatternSketch(3, {1, 0, 0, 0, 0, 0, 0, 1}, 2));
  CHECK(j["version"] == 1);
  CHECK(j["n"] == 3);
  CHECK(j["labels"] == json::array({"alpha", "beta"}));
  CHECK(j["order"] == "lexicographic");
  CHECK(j["counts"].size() == 8);
  CHECK(j["total"] == 2);

  auto broken = j;
  broken["total"] = 3;
  CHECK_THROWS_AS(io::sketch_from_json(broken), MalformedInput);
  broken = j;
  broken["version"] = 2;
  CHECK_THROWS_AS(io::sketch_from_json(broken), MalformedInput);
  broken = j;
  broken["counts"].erase(0);
  CHECK_THROWS_AS(io::sketch_from_json(broken), MalformedInput);
  broken = j;
  broken.erase("order");
  CHECK_THROWS_AS(io::sketch_from_json(broken), MalformedInput);
  std::istringstream garbage("{ not json");
  CHECK_THROWS_AS(io::read_sketch(garbage), MalformedInput);
}

TEST_CASE("ID files") {
  const IdStream ids({{"u1", "u2", "u1"}, {"x", "x", "y"}});
  std::ostringstream out;
  io::write_ids(out, ids);
  CHECK(out.str() == "id1,id2\nu1,x\nu2,x\nu1,y\n");
  std::istringstream in(out.str());
  const auto back = io::read_ids(in);
  CHECK(back.system(0) == ids.system(0));
  CHECK(back.system(1) == ids.system(1));
  std::istringstream ragged("a,b\n1,2\n3\n");
  try {
    (void)io::read_ids(ragged);
    FAIL("expected MalformedInput");
  } catch (const MalformedInput &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("generator specs") {
  GeneratorSpec spec;
  spec.prevalence = 0.3;
  spec.acc_alpha = {0.8, 0.7, 0.9};
  spec.acc_beta = {0.75, 0.85, 0.65};
  spec.pair_flip = PairFlip{0, 2, 0.5};
  spec.sample_size = 1234;
  spec.seed = 99;
  const auto j = io::spec_to_json(spec);
  CHECK(j["pair_flip"]["source"] == 1);
  CHECK(j["pair_flip"]["target"] == 3);
  std::istringstream in(io::dump(j));
  const auto back = io::read_spec(in);
  CHECK(back.parameters() == spec.parameters());
  CHECK(back.pair_flip->target == 2);
  CHECK(back.sample_size == 1234);
  CHECK(back.seed == 99);
  CHECK(generate(back) == generate(spec));

  auto bad = j;
  bad["prevalence"] = 2;
  CHECK_THROWS_AS(io::spec_from_json(bad), SpecError);
  bad = j;
  bad.erase("sample_size");
  CHECK_THROWS_AS(io::spec_from_json(bad), SpecError);
  std::istringstream garbage("[1,");
  CHECK_THROWS_AS(io::read_spec(garbage), SpecError);
}

TEST_CASE("solve report carries the whole solve") {
  const GroundTruthStats<double> truth{0.3, {0.8, 0.7, 0.9}, {0.75, 0.85, 0.65}};
  const auto f = forward_three_indep(truth);
  const PatternSketch sketch(3, {12831, 2709, 9349, 8311, 5229, 4431, 13791, 23349}, 80000);
  const SolveTolerances tol;
  const auto outcome = solve_and_select(frequencies_real(sketch), BetterThanRandomMajority{}, tol);
  const auto j = io::solve_report(sketch, outcome, BetterThanRandomMajority{}, tol);
  for (const char *key : {"counts", "frequencies", "moments", "policy", "tolerances", "r", "roots",
                          "selected", "alarms"})
    CHECK(j.contains(key));
  CHECK(j["policy"] == "majority");
  CHECK(j["selected"] == "a");
  CHECK(j["alarms"].empty());
  CHECK(j["roots"]["a"]["physical"] == true);
  CHECK(j["roots"]["a"]["prevalence"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(j["frequencies"][0].get<double>() == doctest::Approx(f[0]));
  const std::string table = io::format_solve_table(outcome, tol);
  CHECK(table.find("0.300000") != std::string::npos);
}

TEST_CASE("unphysical roots are listed in the report") {
  SolverRoot root;
  root.stats = {0.6, {0.948, 0.877, 0.732}, {1.001, 0.848, 0.868}};
  root.physical = false;
  const auto j = io::root_to_json(root, 1e-4);
  REQUIRE(j["unphysical"].size() == 1);
  CHECK(j["unphysical"][0]["parameter"] == "acc_beta_1");
}
