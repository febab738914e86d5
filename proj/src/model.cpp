#include "agti/model.hpp"

namespace agti {

std::uint64_t dimension(int n) {
  if (n < 1 || n > 62) throw DomainError("dimension defined for 1 <= n <= 62");
  return (std::uint64_t{1} << (n + 1)) - 1;
}

namespace {

// Correctness of classifier i on row r: its decision equals the truth.
inline bool correct(const DecisionStream &s, std::size_t r, int i) {
  return s.column(i)[r] == s.truth_column()[r];
}

void require_labeled(const DecisionStream &s) {
  if (!s.labeled()) throw MalformedInput("stream carries no truth labels");
}

}  // namespace

Rational gamma(const DecisionStream &stream, int i, int j, Label label) {
  require_labeled(stream);
  const int n = stream.ensemble_size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("classifier index out of range");
  const auto truth = stream.truth_column();
  const auto want = static_cast<std::uint8_t>(label);
  std::uint64_t rows = 0, hits_i = 0, hits_j = 0, hits_both = 0;
  for (std::size_t r = 0; r < stream.rows(); ++r) {
    if (truth[r] != want) continue;
    ++rows;
    const bool ci = correct(stream, r, i);
    const bool cj = correct(stream, r, j);
    hits_i += ci;
    hits_j += cj;
    hits_both += ci && cj;
  }
  if (rows == 0)
    throw UndefinedCorrelation(std::string("no rows with truth ") + to_string(label));
  const Rational s(rows);
  return Rational(hits_both) / s - (Rational(hits_i) / s) * (Rational(hits_j) / s);
}

LabeledStats gt_from_labeled(const DecisionStream &stream) {
  require_labeled(stream);
  if (stream.rows() == 0) throw EmptyStream("ground-truth statistics of an empty stream");
  const int n = stream.ensemble_size();
  const auto truth = stream.truth_column();

  std::uint64_t rows_alpha = 0;
  for (std::uint8_t t : truth) rows_alpha += (t == 0);
  const std::uint64_t rows_beta = stream.rows() - rows_alpha;

  LabeledStats out{Rational(rows_alpha) / Rational(stream.rows()),
                   std::vector<std::optional<Rational>>(static_cast<std::size_t>(n)),
                   std::vector<std::optional<Rational>>(static_cast<std::size_t>(n)),
                   PairCorrelations<Rational>(n)};
  for (int i = 0; i < n; ++i) {
    const auto col = stream.column(i);
    std::uint64_t right_alpha = 0, right_beta = 0;
    for (std::size_t r = 0; r < stream.rows(); ++r) {
      if (col[r] != truth[r]) continue;
      (truth[r] == 0 ? right_alpha : right_beta) += 1;
    }
    if (rows_alpha) out.acc_alpha[i] = Rational(right_alpha) / Rational(rows_alpha);
    if (rows_beta) out.acc_beta[i] = Rational(right_beta) / Rational(rows_beta);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rows_alpha) out.correlations.set(i, j, Label::alpha, gamma(stream, i, j, Label::alpha));
      if (rows_beta) out.correlations.set(i, j, Label::beta, gamma(stream, i, j, Label::beta));
    }
  return out;
}

std::optional<GroundTruthStats<Rational>> LabeledStats::complete() const {
  GroundTruthStats<Rational> gt{prevalence_alpha, {}, {}};
  for (const auto &a : acc_alpha) {
    if (!a) return std::nullopt;
    gt.acc_alpha.push_back(*a);
  }
  for (const auto &b : acc_beta) {
    if (!b) return std::nullopt;
    gt.acc_beta.push_back(*b);
  }
  return gt;
}

GroundTruthStats<Rational> LabeledStats::completed_with(const Rational &fill) const {
  GroundTruthStats<Rational> gt{prevalence_alpha, {}, {}};
  for (const auto &a : acc_alpha) gt.acc_alpha.push_back(a.value_or(fill));
  for (const auto &b : acc_beta) gt.acc_beta.push_back(b.value_or(fill));
  return gt;
}

PairCorrelations<Rational> LabeledStats::correlations_with_zero() const {
  const int n = correlations.ensemble_size();
  PairCorrelations<Rational> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Label l : {Label::alpha, Label::beta})
        out.set(i, j, l, correlations.at(i, j, l).value_or(Rational(0)));
  return out;
}

}  // namespace agti
