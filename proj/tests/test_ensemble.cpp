#include <doctest.h>

#include <algorithm>
#include <random>

#include "agti/ensemble.hpp"
#include "agti/error.hpp"
#include "agti/synth.hpp"
#include "support/oracles.hpp"

using namespace agti;
constexpr Label A = Label::alpha;
constexpr Label B = Label::beta;

namespace {

GeneratorSpec four_classifiers(std::uint64_t seed, std::uint64_t size, double rho = 0.0) {
  GeneratorSpec spec;
  spec.n = 4;
  spec.prevalence = 0.3;
  spec.acc_alpha = {0.85, 0.8, 0.9, 0.85};
  spec.acc_beta = {0.8, 0.85, 0.75, 0.9};
  spec.sample_size = size;
  spec.seed = seed;
  if (rho > 0) spec.pair_flip = PairFlip{0, 1, rho};
  return spec;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Report assembled from table rows: prevalence then the accuracy
// of each member (NaN marks a non-member).
TripletReport report_from_rows(const std::vector<std::vector<double>> &rows, int n) {
  TripletReport report;
  report.ensemble_size = n;
  report.per_classifier.resize(static_cast<std::size_t>(n));
  for (const auto &row : rows) {
    TripletEntry entry;
    int slot = 0;
    SolverRoot root;
    root.stats.prevalence_alpha = row[0];
    for (int c = 0; c < n; ++c)
      if (!std::isnan(row[1 + c])) {
        entry.classifiers[slot++] = c;
        root.stats.acc_alpha.push_back(row[1 + c]);
        root.stats.acc_beta.push_back(row[1 + c]);
      }
    RootPair pair;
    pair.root_a = root;
    pair.root_b = root;
    entry.outcome.roots = pair;
    entry.outcome.selected = RootChoice::a;
    const std::size_t t = report.triplets.size();
    for (int m = 0; m < 3; ++m)
      report.per_classifier[entry.classifiers[m]].push_back(
          {t, root.stats.acc_alpha[m], root.stats.acc_beta[m]});
    report.triplets.push_back(entry);
    report.prevalence_estimates.emplace_back(row[0]);
  }
  report.spread = compute_spread(report);
  return report;
}

const double kNA = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::vector<double>> kIdTable = {
    {0.797443, 0.985041, 0.999959, 0.607004, kNA},
    {0.799948, 0.982922, 0.999951, kNA, 0.995661},
    {0.795855, 0.985627, kNA, 0.607688, 0.996777},
    {0.799688, kNA, 0.999984, 0.605286, 0.995952},
};

}  // namespace

TEST_CASE("sweep enumerates every triplet once") {
  std::mt19937_64 rng(41);
  for (int n = 3; n <= 7; ++n) {
    const auto stream = testing::random_agreeing_stream(rng, n, 3000);
    const auto report = triplet_sweep(stream, BetterThanRandomMajority{});
    const std::size_t c3 = static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6);
    CHECK(report.triplets.size() == c3);
    CHECK(report.prevalence_estimates.size() == c3);
    for (int c = 0; c < n; ++c) {
      const auto appearances = std::count_if(
          report.triplets.begin(), report.triplets.end(), [&](const TripletEntry &e) {
            return std::find(e.classifiers.begin(), e.classifiers.end(), c) != e.classifiers.end();
          });
      CHECK(appearances == (n - 1) * (n - 2) / 2);
    }
  }
}

TEST_CASE("a three-classifier sweep is a single solve") {
  GeneratorSpec spec = four_classifiers(3, 20000);
  spec.n = 3;
  spec.acc_alpha.pop_back();
  spec.acc_beta.pop_back();
  const auto sketch = tally(generate(spec));
  const auto report = triplet_sweep(sketch, BetterThanRandomMajority{});
  REQUIRE(report.triplets.size() == 1);
  const auto direct = solve_and_select(frequencies_real(sketch), BetterThanRandomMajority{},
                                       SolveTolerances::for_sample(sketch.total()));
  REQUIRE(report.triplets[0].outcome.selected_root() != nullptr);
  CHECK(report.triplets[0].outcome.selected_root()->stats == direct.selected_root()->stats);
  CHECK(*report.prevalence_estimates[0] == direct.selected_root()->stats.prevalence_alpha);
  CHECK_THROWS_AS(consistency_score(report), UndefinedScore);
}

TEST_CASE("sweep preconditions") {
  CHECK_THROWS_AS(triplet_sweep(PatternSketch(2, {1, 1, 1, 1}, 4), Manual{}), InsufficientEnsemble);
  CHECK_THROWS_AS(triplet_sweep(DecisionStream(2), Manual{}), InsufficientEnsemble);
  CHECK_THROWS_AS(triplet_sweep(PatternSketch(4), Manual{}), EmptySketch);
}

TEST_CASE("triplet marginals match projected tallies") {
  std::mt19937_64 rng(42);
  const auto stream = testing::random_agreeing_stream(rng, 5, 4000);
  const auto full = tally(stream);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k) {
        const std::array<int, 3> members{i, j, k};
        CHECK(marginalize(full, members) == tally(stream.project(members)));
      }
}

TEST_CASE("independent four-classifier ensemble is self-consistent") {
  const auto spec = four_classifiers(7, 100000);
  const auto report = triplet_sweep(generate(spec), BetterThanRandomMajority{});
  CHECK(report.solved_count() == 4);
  for (int c = 0; c < 4; ++c) {
    REQUIRE(report.per_classifier[c].size() == 3);
    CHECK(report.spread.acc_alpha[c] <= 0.03);
    CHECK(report.spread.acc_beta[c] <= 0.03);
  }
  CHECK(report.spread.prevalence <= 0.01);
  CHECK(consistency_score(report) <= 0.03);
  CHECK(report.consensus_prevalence() == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("correlated ensemble spreads far wider") {
  std::vector<double> indep, corr;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    indep.push_back(consistency_score(
        triplet_sweep(generate(four_classifiers(seed, 100000)), BetterThanRandomMajority{})));
    const auto r = triplet_sweep(generate(four_classifiers(seed, 100000, 0.9)),
                                 BetterThanRandomMajority{});
    corr.push_back(r.solved_count() >= 2 ? consistency_score(r) : 1.0);
  }
  CHECK(median(corr) >= 10 * median(indep));
}

TEST_CASE("consistency improves with sample size") {
  std::vector<double> medians;
  for (std::uint64_t size : {1000u, 10000u, 100000u}) {
    std::vector<double> scores;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
      const auto r = triplet_sweep(generate(four_classifiers(seed, size)), BetterThanRandomMajority{});
      scores.push_back(r.solved_count() >= 2 ? consistency_score(r) : 1.0);
    }
    medians.push_back(median(scores));
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
}

TEST_CASE("four-system ID table arithmetic") {
  const auto report = report_from_rows(kIdTable, 4);
  CHECK(report.spread.prevalence == doctest::Approx(0.004093).epsilon(1e-9));
  CHECK(consistency_score(report) == doctest::Approx(0.004093).epsilon(1e-9));
  CHECK(report.spread.acc_alpha[2] == doctest::Approx(0.002402).epsilon(1e-9));
  CHECK(report.consensus_prevalence() == doctest::Approx(0.7982335).epsilon(1e-12));
  CHECK(unique_count_estimate(report, 1000000) == doctest::Approx(798233.5).epsilon(1e-12));

  const std::string table = format_triplet_table(report);
  CHECK(table.find("(1,2,3)") != std::string::npos);
  CHECK(table.find("0.607688") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  const auto na = [&] {
    std::size_t k = 0;
    for (std::size_t pos = table.find("N/A"); pos != std::string::npos; pos = table.find("N/A", pos + 1)) ++k;
    return k;
  }();
  CHECK(na == 4);
}

TEST_CASE("identical triplet roots score zero") {
  const auto report = report_from_rows({{0.4, 0.9, 0.8, 0.7, kNA},
                                        {0.4, 0.9, 0.8, kNA, 0.6},
                                        {0.4, 0.9, kNA, 0.7, 0.6},
                                        {0.4, kNA, 0.8, 0.7, 0.6}},
                                       4);
  CHECK(consistency_score(report) == 0.0);
  const auto single = report_from_rows({{1.0, 0.9, 0.8, 0.7}}, 3);
  CHECK(unique_count_estimate(single, 100) == 100.0);
}

TEST_CASE("binarizer") {
  SUBCASE("first occurrence is new") {
    const auto out = binarize_ids(IdStream({{"A", "B", "A"}}));
    CHECK(out.row(0) == Pattern{A});
    CHECK(out.row(1) == Pattern{A});
    CHECK(out.row(2) == Pattern{B});
  }
  SUBCASE("distinct tokens are all new") {
    const auto out = binarize_ids(IdStream({{"x", "y", "z", "w"}, {"1", "2", "3", "4"}}));
    CHECK(tally(out).count(0) == 4);
  }
  SUBCASE("a merging system hides a new user") {
    // System 2 conflates u3 with u1.
    const IdStream ids({{"u1", "u2", "u1", "u3", "u2", "u4"}, {"u1", "u2", "u1", "u1", "u2", "u4"}});
    const auto out = binarize_ids(ids);
    const std::vector<Label> s1 = {A, A, B, A, B, A};
    const std::vector<Label> s2 = {A, A, B, B, B, A};
    for (std::size_t r = 0; r < 6; ++r) {
      CHECK(out.decision(r, 0) == s1[r]);
      CHECK(out.decision(r, 1) == s2[r]);
    }
  }
  SUBCASE("permuting systems permutes columns") {
    const IdStream ids({{"a", "b", "a", "c"}, {"p", "p", "q", "r"}, {"x", "y", "z", "x"}});
    const IdStream swapped({ids.system(2), ids.system(0), ids.system(1)});
    const auto out = binarize_ids(ids);
    const std::array<int, 3> order{2, 0, 1};
    CHECK(binarize_ids(swapped) == out.project(order));
  }
  SUBCASE("ragged systems are rejected") {
    CHECK_THROWS_AS(IdStream({{"a", "b"}, {"a"}}), MalformedInput);
  }
}

TEST_CASE("unique count from synthetic identity systems") {
  IdGeneratorSpec spec;
  spec.new_rate = 0.45;
  spec.systems = {{0.03, 0.03}, {0.05, 0.02}, {0.02, 0.05}, {0.04, 0.04}};
  spec.items = 20000;
  spec.seed = 5;
  const auto gen = generate_ids(spec);
  CHECK(gen.ids.system_count() == 4);
  CHECK(gen.ids.items() == 20000);
  const auto stream = binarize_ids(gen.ids);
  const auto report = triplet_sweep(stream, BetterThanRandomMajority{});
  const double estimate = unique_count_estimate(report, stream.rows());
  CHECK(std::abs(estimate - static_cast<double>(gen.unique_count)) / gen.unique_count <= 0.03);
}
