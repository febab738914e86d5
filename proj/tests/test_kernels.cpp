#include <doctest.h>

#include <random>

#include "agti/kernels.hpp"
#include "support/oracles.hpp"

using namespace agti;
using namespace agti::kernels;

namespace {

std::vector<std::vector<std::uint8_t>> random_columns(std::mt19937_64 &rng, int n, std::size_t rows,
                                                      double beta_rate) {
  std::bernoulli_distribution coin(beta_rate);
  std::vector<std::vector<std::uint8_t>> cols(static_cast<std::size_t>(n));
  for (auto &c : cols) {
    c.resize(rows);
    for (auto &v : c) v = coin(rng);
  }
  return cols;
}

std::vector<std::uint64_t> run_tally(void (*fn)(Columns, std::span<std::uint64_t>),
                                     const std::vector<std::vector<std::uint8_t>> &cols) {
  std::vector<std::span<const std::uint8_t>> spans(cols.begin(), cols.end());
  std::vector<std::uint64_t> counts(std::size_t{1} << cols.size(), 0);
  fn(spans, counts);
  return counts;
}

}  // namespace

TEST_CASE("scalar tally matches a per-row count") {
  std::mt19937_64 rng(1);
  const auto cols = random_columns(rng, 3, 777, 0.4);
  std::vector<std::uint64_t> expected(8, 0);
  for (std::size_t r = 0; r < 777; ++r) ++expected[cols[0][r] * 4 + cols[1][r] * 2 + cols[2][r]];
  CHECK(run_tally(&scalar::tally_columns, cols) == expected);
}

#if defined(AGTI_HAVE_AVX2)
TEST_CASE("avx2 tally is equivalent to the scalar reference") {
  if (!isa_available(Isa::avx2)) return;
  std::mt19937_64 rng(2);
  // Row counts straddle the 32-lane block and the 255-block flush boundary.
  const std::size_t sizes[] = {0, 1, 31, 32, 33, 255 * 32 - 1, 255 * 32, 255 * 32 + 7, 100003};
  for (int n = 1; n <= 11; ++n)
    for (std::size_t rows : sizes)
      for (double rate : {0.0, 0.3, 1.0}) {
        const auto cols = random_columns(rng, n, rows, rate);
        CAPTURE(n);
        CAPTURE(rows);
        CHECK(run_tally(&avx2::tally_columns, cols) == run_tally(&scalar::tally_columns, cols));
      }
}

TEST_CASE("avx2 forward residual batch is equivalent to the scalar reference") {
  if (!isa_available(Isa::avx2)) return;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t size : {0u, 1u, 3u, 4u, 5u, 8u, 9u, 1001u}) {
    std::array<std::vector<double>, 7> soa;
    for (auto &v : soa) {
      v.resize(size);
      for (double &x : v) x = unit(rng);
    }
    std::array<double, 8> f{};
    double sum = 0;
    for (double &x : f) sum += (x = unit(rng));
    for (double &x : f) x /= sum;
    ThreeClassifierBatch batch{soa[0], {soa[1], soa[2], soa[3]}, {soa[4], soa[5], soa[6]}};
    std::vector<double> ref(size), simd(size);
    scalar::forward3_sse(batch, f, ref);
    avx2::forward3_sse(batch, f, simd);
    for (std::size_t k = 0; k < size; ++k) CHECK(simd[k] == ref[k]);
  }
}
#endif

TEST_CASE("forward residual kernel matches the enumerated model") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 8> f{};
  double sum = 0;
  for (double &x : f) sum += (x = unit(rng));
  for (double &x : f) x /= sum;
  std::array<std::vector<double>, 7> soa;
  std::vector<testing::Point7> points(37);
  for (auto &p : points)
    for (int d = 0; d < 7; ++d) soa[d].push_back(p[d] = unit(rng));
  ThreeClassifierBatch batch{soa[0], {soa[1], soa[2], soa[3]}, {soa[4], soa[5], soa[6]}};
  std::vector<double> out(points.size());
  forward3_sse(batch, f, out);
  for (std::size_t k = 0; k < points.size(); ++k)
    CHECK(out[k] == doctest::Approx(testing::point_sse(points[k], f)).epsilon(1e-12));
}

TEST_CASE("isa selection can be pinned and restored") {
  const Isa detected = active_isa();
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  force_isa(std::nullopt);
  CHECK(active_isa() == detected);
  CHECK(isa_available(Isa::scalar));
  CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
}
