#include <doctest.h>

#include <algorithm>
#include <random>

#include "agti/error.hpp"
#include "agti/sketch.hpp"
#include "support/oracles.hpp"

using namespace agti;
constexpr Label A = Label::alpha;
constexpr Label B = Label::beta;

TEST_CASE("pattern order is lexicographic with classifier 1 most significant") {
  const char *names[] = {"aaa", "aab", "aba", "abb", "baa", "bab", "bba", "bbb"};
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(pattern_name(k, 3) == names[k]);
    CHECK(pattern_index(pattern_at(k, 3)) == k);
  }
}

TEST_CASE("tally counts joint patterns") {
  SUBCASE("two extreme rows") {
    const std::vector<Pattern> rows = {{A, A, A}, {B, B, B}};
    const auto s = tally(DecisionStream::from_rows(3, rows));
    CHECK(std::vector<std::uint64_t>(s.counts().begin(), s.counts().end()) ==
          std::vector<std::uint64_t>{1, 0, 0, 0, 0, 0, 0, 1});
    CHECK(s.total() == 2);
  }
  SUBCASE("empty stream") {
    const auto s = tally(DecisionStream(3));
    CHECK(s.total() == 0);
    CHECK(std::all_of(s.counts().begin(), s.counts().end(), [](auto c) { return c == 0; }));
  }
  SUBCASE("single pattern stream") {
    const std::vector<Pattern> rows(100, Pattern{A, B});
    const auto s = tally(DecisionStream::from_rows(2, rows));
    CHECK(std::vector<std::uint64_t>(s.counts().begin(), s.counts().end()) ==
          std::vector<std::uint64_t>{0, 100, 0, 0});
    CHECK(s.total() == 100);
  }
}

TEST_CASE("ragged rows are rejected with their index") {
  const std::vector<Pattern> rows = {{A, A, A}, {A, B, A}, {A, B}};
  try {
    (void)DecisionStream::from_rows(3, rows);
    FAIL("expected MalformedInput");
  } catch (const MalformedInput &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  DecisionStream labeled(2, true);
  CHECK_THROWS_AS(labeled.add_row(Pattern{A, B}), MalformedInput);
}

TEST_CASE("merge is an identity-preserving commutative monoid") {
  std::mt19937_64 rng(11);
  const auto x = tally(testing::random_labeled_stream(rng, 3, 40));
  const auto y = tally(testing::random_labeled_stream(rng, 3, 17));
  const auto z = tally(testing::random_labeled_stream(rng, 3, 23));
  CHECK(merge(x, PatternSketch(3)) == x);
  CHECK(merge(x, y) == merge(y, x));
  CHECK(merge(merge(x, y), z) == merge(x, merge(y, z)));
  CHECK_THROWS_AS(merge(x, PatternSketch(4)), IncompatibleSketch);
}

TEST_CASE("tally is a homomorphism from concatenation to merge") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    auto s1 = testing::random_agreeing_stream(rng, n, rng() % 300);
    const auto s2 = testing::random_agreeing_stream(rng, n, rng() % 300);
    const auto expected = merge(tally(s1), tally(s2));
    s1.append(s2);
    CHECK(tally(s1) == expected);
    // Brute-force single pass over rows.
    PatternSketch brute(n);
    for (std::size_t r = 0; r < s1.rows(); ++r) brute.add(pattern_index(s1.row(r)));
    CHECK(tally(s1) == brute);
  }
}

TEST_CASE("tally ignores row order") {
  std::mt19937_64 rng(13);
  const auto s = testing::random_agreeing_stream(rng, 4, 500);
  std::vector<Pattern> rows;
  for (std::size_t r = 0; r < s.rows(); ++r) rows.push_back(s.row(r));
  std::shuffle(rows.begin(), rows.end(), rng);
  CHECK(tally(DecisionStream::from_rows(4, rows)) == tally(s));
}

TEST_CASE("frequencies are exact integer ratios") {
  const PatternSketch s(3, {1, 0, 0, 0, 0, 0, 0, 1}, 2);
  const auto f = frequencies(s);
  CHECK(f[0] == Rational(1, 2));
  CHECK(f[7] == Rational(1, 2));
  CHECK(f[3] == 0);

  const auto g = frequencies(PatternSketch(1, {3, 1}, 4));
  CHECK(g[0] == Rational(3, 4));
  CHECK(g[1] == Rational(1, 4));

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sk = tally(testing::random_agreeing_stream(rng, 3, 1 + rng() % 999));
    Rational sum(0);
    for (const auto &v : frequencies(sk)) sum += v;
    CHECK(sum == 1);
  }
  CHECK_THROWS_AS(frequencies(PatternSketch(3)), EmptySketch);
  CHECK_THROWS_AS(frequencies_real(PatternSketch(2)), EmptySketch);
}

TEST_CASE("sketch state is exactly 2^n counters plus a total") {
  std::mt19937_64 rng(15);
  for (int n = 1; n <= 10; ++n) {
    for (std::size_t rows : {std::size_t{0}, std::size_t{10}, std::size_t{5000}}) {
      const auto s = tally(testing::random_labeled_stream(rng, n, rows));
      CHECK(s.counts().size() == pattern_count(n));
      CHECK(s.total() == rows);
    }
  }
}

TEST_CASE("sketch construction validates the total") {
  CHECK_THROWS_AS(PatternSketch(2, {1, 2, 3, 4}, 11), MalformedInput);
  CHECK_THROWS_AS(PatternSketch(2, {1, 2, 3}, 6), MalformedInput);
  CHECK_THROWS_AS(PatternSketch(0), DomainError);
}

TEST_CASE("marginalizing a sketch equals tallying the projected stream") {
  std::mt19937_64 rng(16);
  const auto s = testing::random_agreeing_stream(rng, 5, 2000);
  const auto full = tally(s);
  const std::vector<std::vector<int>> subsets = {{0, 1, 2}, {1, 3, 4}, {0, 4}, {2}, {4, 0, 2}};
  for (const auto &sub : subsets) CHECK(marginalize(full, sub) == tally(s.project(sub)));
}
