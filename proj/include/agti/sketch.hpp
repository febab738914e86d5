#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "agti/label.hpp"
#include "agti/rational.hpp"

namespace agti {

// Aligned per-item decisions of n classifiers, optionally with the true
// label. Stored column-major (one byte per decision, 0 = alpha) so the tally
// kernels can sweep a classifier at a time.
class DecisionStream {
 public:
  explicit DecisionStream(int n, bool labeled = false);

  // Throws MalformedInput naming the row index on a ragged row or on truth
  // presence that does not match the stream.
  static DecisionStream from_rows(int n, std::span<const Pattern> rows,
                                  std::span<const Label> truth = {});

  void add_row(std::span<const Label> decisions,
               std::optional<Label> truth = std::nullopt);
  void reserve(std::size_t rows);

  int ensemble_size() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_; }
  bool labeled() const noexcept { return labeled_; }

  Label decision(std::size_t row, int classifier) const {
    return static_cast<Label>(columns_[classifier][row]);
  }
  std::optional<Label> truth(std::size_t row) const {
    if (!labeled_) return std::nullopt;
    return static_cast<Label>(truth_[row]);
  }
  Pattern row(std::size_t r) const;

  std::span<const std::uint8_t> column(int classifier) const noexcept {
    return columns_[classifier];
  }
  std::span<const std::uint8_t> truth_column() const noexcept { return truth_; }

  // Stream restricted to the given classifiers, in the given order.
  DecisionStream project(std::span<const int> classifiers) const;
  // Rows of `other` appended after ours; ensemble sizes and labeling must match.
  void append(const DecisionStream &other);

  friend bool operator==(const DecisionStream &, const DecisionStream &) = default;

 private:
  int n_;
  bool labeled_;
  std::size_t rows_ = 0;
  std::vector<std::vector<std::uint8_t>> columns_;
  std::vector<std::uint8_t> truth_;
};

// The entire observable state of an ensemble: one counter per joint decision
// pattern, in lexicographic order, plus the item total.
class PatternSketch {
 public:
  explicit PatternSketch(int n);
  // Validates sum(counts) == total.
  PatternSketch(int n, std::vector<std::uint64_t> counts, std::uint64_t total);

  int ensemble_size() const noexcept { return n_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t count(std::size_t pattern) const { return counts_.at(pattern); }
  std::uint64_t total() const noexcept { return total_; }

  void add(std::size_t pattern, std::uint64_t k = 1);
  // Bulk add from a kernel histogram of the same size.
  void add_counts(std::span<const std::uint64_t> counts);

  friend bool operator==(const PatternSketch &, const PatternSketch &) = default;

 private:
  int n_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

PatternSketch tally(const DecisionStream &stream);

// Elementwise sum. Throws IncompatibleSketch on mismatched ensemble sizes.
PatternSketch merge(const PatternSketch &a, const PatternSketch &b);

// counts[p] / total as exact rationals. Throws EmptySketch when total == 0.
std::vector<Rational> frequencies(const PatternSketch &s);
std::vector<double> frequencies_real(const PatternSketch &s);

// Sketch of the sub-ensemble formed by `classifiers` (zero-based, in order),
// obtained by summing out the other classifiers.
PatternSketch marginalize(const PatternSketch &s, std::span<const int> classifiers);

}  // namespace agti
