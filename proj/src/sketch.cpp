#include "agti/sketch.hpp"

#include <numeric>
#include <string>

#include "agti/error.hpp"
#include "agti/kernels.hpp"

namespace agti {

std::string pattern_name(std::size_t index, int n) {
  std::string s(static_cast<std::size_t>(n), 'a');
  for (int i = 0; i < n; ++i)
    if (pattern_label(index, n, i) == Label::beta) s[i] = 'b';
  return s;
}

namespace {

void check_ensemble_size(int n) {
  if (n < 1 || n > kMaxEnsemble)
    throw DomainError("ensemble size must be in [1, " + std::to_string(kMaxEnsemble) +
                      "], got " + std::to_string(n));
}

}  // namespace

DecisionStream::DecisionStream(int n, bool labeled) : n_(n), labeled_(labeled) {
  check_ensemble_size(n);
  columns_.resize(static_cast<std::size_t>(n));
}

DecisionStream DecisionStream::from_rows(int n, std::span<const Pattern> rows,
                                         std::span<const Label> truth) {
  const bool labeled = !truth.empty();
  if (labeled && truth.size() != rows.size())
    throw MalformedInput("truth column has " + std::to_string(truth.size()) +
                         " entries for " + std::to_string(rows.size()) + " rows");
  DecisionStream s(n, labeled);
  s.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != static_cast<std::size_t>(n))
      throw MalformedInput("row " + std::to_string(r) + " has " +
                               std::to_string(rows[r].size()) + " decisions, expected " +
                               std::to_string(n),
                           r);
    s.add_row(rows[r], labeled ? std::optional<Label>(truth[r]) : std::nullopt);
  }
  return s;
}

void DecisionStream::add_row(std::span<const Label> decisions, std::optional<Label> truth) {
  if (decisions.size() != static_cast<std::size_t>(n_))
    throw MalformedInput("row " + std::to_string(rows_) + " has " +
                             std::to_string(decisions.size()) + " decisions, expected " +
                             std::to_string(n_),
                         rows_);
  if (truth.has_value() != labeled_)
    throw MalformedInput("row " + std::to_string(rows_) +
                             (labeled_ ? " is missing its truth label"
                                       : " carries a truth label in an unlabeled stream"),
                         rows_);
  for (int i = 0; i < n_; ++i)
    columns_[i].push_back(static_cast<std::uint8_t>(decisions[i]));
  if (truth) truth_.push_back(static_cast<std::uint8_t>(*truth));
  ++rows_;
}

void DecisionStream::reserve(std::size_t rows) {
  for (auto &c : columns_) c.reserve(rows);
  if (labeled_) truth_.reserve(rows);
}

Pattern DecisionStream::row(std::size_t r) const {
  Pattern p(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) p[i] = decision(r, i);
  return p;
}

DecisionStream DecisionStream::project(std::span<const int> classifiers) const {
  DecisionStream out(static_cast<int>(classifiers.size()), labeled_);
  for (std::size_t k = 0; k < classifiers.size(); ++k) {
    const int c = classifiers[k];
    if (c < 0 || c >= n_) throw DomainError("classifier index out of range");
    out.columns_[k] = columns_[c];
  }
  out.truth_ = truth_;
  out.rows_ = rows_;
  return out;
}

void DecisionStream::append(const DecisionStream &other) {
  if (other.n_ != n_ || other.labeled_ != labeled_)
    throw MalformedInput("cannot append streams of different shape");
  for (int i = 0; i < n_; ++i)
    columns_[i].insert(columns_[i].end(), other.columns_[i].begin(), other.columns_[i].end());
  truth_.insert(truth_.end(), other.truth_.begin(), other.truth_.end());
  rows_ += other.rows_;
}

PatternSketch::PatternSketch(int n) : n_(n) {
  check_ensemble_size(n);
  counts_.assign(pattern_count(n), 0);
}

PatternSketch::PatternSketch(int n, std::vector<std::uint64_t> counts, std::uint64_t total)
    : n_(n), counts_(std::move(counts)), total_(total) {
  check_ensemble_size(n);
  if (counts_.size() != pattern_count(n))
    throw MalformedInput("sketch for n=" + std::to_string(n) + " needs " +
                         std::to_string(pattern_count(n)) + " counters, got " +
                         std::to_string(counts_.size()));
  const std::uint64_t sum = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (sum != total_)
    throw MalformedInput("sketch counters sum to " + std::to_string(sum) + " but total is " +
                         std::to_string(total_));
}

void PatternSketch::add(std::size_t pattern, std::uint64_t k) {
  counts_.at(pattern) += k;
  total_ += k;
}

void PatternSketch::add_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() != counts_.size()) throw IncompatibleSketch("counter arrays differ in size");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts_[i] += counts[i];
    total_ += counts[i];
  }
}

PatternSketch tally(const DecisionStream &stream) {
  const int n = stream.ensemble_size();
  std::vector<std::span<const std::uint8_t>> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cols.push_back(stream.column(i));
  std::vector<std::uint64_t> counts(pattern_count(n), 0);
  kernels::tally_columns(cols, counts);
  return PatternSketch(n, std::move(counts), stream.rows());
}

PatternSketch merge(const PatternSketch &a, const PatternSketch &b) {
  if (a.ensemble_size() != b.ensemble_size())
    throw IncompatibleSketch("cannot merge sketches for n=" + std::to_string(a.ensemble_size()) +
                             " and n=" + std::to_string(b.ensemble_size()));
  PatternSketch out = a;
  out.add_counts(b.counts());
  return out;
}

std::vector<Rational> frequencies(const PatternSketch &s) {
  if (s.total() == 0) throw EmptySketch("frequencies of an empty sketch are undefined");
  std::vector<Rational> f;
  f.reserve(s.counts().size());
  const Rational total(s.total());
  for (std::uint64_t c : s.counts()) f.emplace_back(Rational(c) / total);
  return f;
}

std::vector<double> frequencies_real(const PatternSketch &s) {
  if (s.total() == 0) throw EmptySketch("frequencies of an empty sketch are undefined");
  std::vector<double> f;
  f.reserve(s.counts().size());
  const double total = static_cast<double>(s.total());
  for (std::uint64_t c : s.counts()) f.push_back(static_cast<double>(c) / total);
  return f;
}

PatternSketch marginalize(const PatternSketch &s, std::span<const int> classifiers) {
  const int n = s.ensemble_size();
  const int k = static_cast<int>(classifiers.size());
  for (int c : classifiers)
    if (c < 0 || c >= n) throw DomainError("classifier index out of range");
  PatternSketch out(k);
  std::vector<std::uint64_t> counts(pattern_count(k), 0);
  for (std::size_t idx = 0; idx < s.counts().size(); ++idx) {
    std::size_t sub = 0;
    for (int c : classifiers) sub = (sub << 1) | static_cast<std::size_t>(pattern_label(idx, n, c));
    counts[sub] += s.counts()[idx];
  }
  out.add_counts(counts);
  return out;
}

}  // namespace agti
