#include <cassert>

#include "agti/kernels.hpp"

namespace agti::kernels::scalar {

void tally_columns(Columns columns, std::span<std::uint64_t> counts) {
  const std::size_t n = columns.size();
  assert(counts.size() == (std::size_t{1} << n));
  if (n == 0) return;
  const std::size_t rows = columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = (idx << 1) | columns[i][r];
    ++counts[idx];
  }
}

void forward3_sse(const ThreeClassifierBatch &batch,
                  std::span<const double, 8> observed, std::span<double> out) {
  assert(out.size() == batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const double p = batch.prevalence[k];
    const double q = 1.0 - p;
    double alpha_vote_given_alpha[3];
    double alpha_vote_given_beta[3];
    for (int i = 0; i < 3; ++i) {
      alpha_vote_given_alpha[i] = batch.acc_alpha[i][k];
      alpha_vote_given_beta[i] = 1.0 - batch.acc_beta[i][k];
    }
    double sse = 0.0;
    for (int pat = 0; pat < 8; ++pat) {
      double ta = p;
      double tb = q;
      for (int i = 0; i < 3; ++i) {
        const bool beta_vote = (pat >> (2 - i)) & 1;
        ta = ta * (beta_vote ? 1.0 - alpha_vote_given_alpha[i] : alpha_vote_given_alpha[i]);
        tb = tb * (beta_vote ? 1.0 - alpha_vote_given_beta[i] : alpha_vote_given_beta[i]);
      }
      const double d = (ta + tb) - observed[pat];
      sse = sse + d * d;
    }
    out[k] = sse;
  }
}

}  // namespace agti::kernels::scalar
