// Built with -mavx2 and only entered after a cpuid check.

#include <immintrin.h>

#include <algorithm>
#include <cassert>

#include "agti/kernels.hpp"

namespace agti::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 32;
// Byte accumulators overflow after 255 increments.
constexpr std::size_t kFlushEvery = 255;

inline __m256i pattern_bytes(Columns columns, std::size_t r) {
  __m256i idx = _mm256_setzero_si256();
  for (const auto &col : columns) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i *>(col.data() + r));
    idx = _mm256_or_si256(_mm256_add_epi8(idx, idx), v);
  }
  return idx;
}

inline std::uint64_t horizontal_sum_bytes(__m256i acc) {
  const __m256i sums = _mm256_sad_epu8(acc, _mm256_setzero_si256());
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), sums);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

// Up to 16 buckets: compare-and-count entirely in registers.
void tally_small(Columns columns, std::span<std::uint64_t> counts,
                 std::size_t full_rows) {
  const std::size_t buckets = counts.size();
  __m256i acc[16];
  std::size_t pending = 0;
  for (std::size_t b = 0; b < buckets; ++b) acc[b] = _mm256_setzero_si256();
  for (std::size_t r = 0; r < full_rows; r += kLanes) {
    const __m256i idx = pattern_bytes(columns, r);
    for (std::size_t b = 0; b < buckets; ++b) {
      const __m256i hit =
          _mm256_cmpeq_epi8(idx, _mm256_set1_epi8(static_cast<char>(b)));
      acc[b] = _mm256_sub_epi8(acc[b], hit);
    }
    if (++pending == kFlushEvery) {
      for (std::size_t b = 0; b < buckets; ++b) {
        counts[b] += horizontal_sum_bytes(acc[b]);
        acc[b] = _mm256_setzero_si256();
      }
      pending = 0;
    }
  }
  for (std::size_t b = 0; b < buckets; ++b) counts[b] += horizontal_sum_bytes(acc[b]);
}

// 5..8 classifiers: vector index build, scalar scatter.
void tally_bytes(Columns columns, std::span<std::uint64_t> counts,
                 std::size_t full_rows) {
  alignas(32) std::uint8_t idx[kLanes];
  for (std::size_t r = 0; r < full_rows; r += kLanes) {
    _mm256_store_si256(reinterpret_cast<__m256i *>(idx), pattern_bytes(columns, r));
    for (std::uint8_t i : idx) ++counts[i];
  }
}

}  // namespace

void tally_columns(Columns columns, std::span<std::uint64_t> counts) {
  const std::size_t n = columns.size();
  assert(counts.size() == (std::size_t{1} << n));
  if (n == 0) return;
  if (n > 8) {
    scalar::tally_columns(columns, counts);
    return;
  }
  const std::size_t rows = columns[0].size();
  const std::size_t full_rows = rows - rows % kLanes;
  if (n <= 4)
    tally_small(columns, counts, full_rows);
  else
    tally_bytes(columns, counts, full_rows);
  for (std::size_t r = full_rows; r < rows; ++r) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = (idx << 1) | columns[i][r];
    ++counts[idx];
  }
}

void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out) {
  assert(out.size() == batch.size());
  const std::size_t size = batch.size();
  const std::size_t full = size - size % 4;
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t k = 0; k < full; k += 4) {
    const __m256d p = _mm256_loadu_pd(batch.prevalence.data() + k);
    const __m256d q = _mm256_sub_pd(one, p);
    __m256d given_alpha[3][2];  // [classifier][vote alpha, vote beta]
    __m256d given_beta[3][2];
    for (int i = 0; i < 3; ++i) {
      const __m256d a = _mm256_loadu_pd(batch.acc_alpha[i].data() + k);
      const __m256d y = _mm256_sub_pd(one, _mm256_loadu_pd(batch.acc_beta[i].data() + k));
      given_alpha[i][0] = a;
      given_alpha[i][1] = _mm256_sub_pd(one, a);
      given_beta[i][0] = y;
      given_beta[i][1] = _mm256_sub_pd(one, y);
    }
    __m256d sse = _mm256_setzero_pd();
    for (int pat = 0; pat < 8; ++pat) {
      __m256d ta = p;
      __m256d tb = q;
      for (int i = 0; i < 3; ++i) {
        const int beta_vote = (pat >> (2 - i)) & 1;
        ta = _mm256_mul_pd(ta, given_alpha[i][beta_vote]);
        tb = _mm256_mul_pd(tb, given_beta[i][beta_vote]);
      }
      const __m256d d = _mm256_sub_pd(_mm256_add_pd(ta, tb), _mm256_set1_pd(observed[pat]));
      sse = _mm256_add_pd(sse, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(out.data() + k, sse);
  }
  if (full < size) {
    ThreeClassifierBatch tail{batch.prevalence.subspan(full),
                              {batch.acc_alpha[0].subspan(full), batch.acc_alpha[1].subspan(full),
                               batch.acc_alpha[2].subspan(full)},
                              {batch.acc_beta[0].subspan(full), batch.acc_beta[1].subspan(full),
                               batch.acc_beta[2].subspan(full)}};
    scalar::forward3_sse(tail, observed, out.subspan(full));
  }
}

}  // namespace agti::kernels::avx2
