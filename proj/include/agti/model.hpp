#pragma once

// Forward models: ground-truth statistics -> observable pattern frequencies.
//
// Every model is a template over the scalar so the same code runs on exact
// rationals (exactness checks) and on doubles (solver paths). Accuracies are
// per label: acc_alpha[i] is the fraction of truly-alpha items classifier i
// calls alpha, acc_beta[i] likewise for beta. Misclassification rates are
// their complements and are never stored.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "agti/error.hpp"
#include "agti/label.hpp"
#include "agti/rational.hpp"
#include "agti/sketch.hpp"

namespace agti {

template <class T>
struct GroundTruthStats {
  T prevalence_alpha{};
  std::vector<T> acc_alpha;
  std::vector<T> acc_beta;

  int ensemble_size() const noexcept { return static_cast<int>(acc_alpha.size()); }
  T prevalence_beta() const { return T(1) - prevalence_alpha; }

  friend bool operator==(const GroundTruthStats &, const GroundTruthStats &) = default;
};

// Per-label covariance of correctness indicators for each classifier pair.
// Entries are absent when the label never occurs in the truth column.
template <class T>
class PairCorrelations {
 public:
  explicit PairCorrelations(int n = 0)
      : n_(n), alpha_(pairs(n)), beta_(pairs(n)) {}

  int ensemble_size() const noexcept { return n_; }

  const std::optional<T> &at(int i, int j, Label label) const {
    return (label == Label::alpha ? alpha_ : beta_)[slot(i, j)];
  }
  void set(int i, int j, Label label, T value) {
    (label == Label::alpha ? alpha_ : beta_)[slot(i, j)] = std::move(value);
  }

 private:
  static std::size_t pairs(int n) {
    return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  }
  std::size_t slot(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
      throw DomainError("correlations are defined for distinct classifier pairs");
    if (i > j) std::swap(i, j);
    // Row-major upper triangle.
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * n_ - i - 1) / 2 +
           static_cast<std::size_t>(j - i - 1);
  }

  int n_;
  std::vector<std::optional<T>> alpha_;
  std::vector<std::optional<T>> beta_;
};

namespace detail {

template <class T>
void check_unit(const T &v, const char *what) {
  if (v < T(0) || v > T(1))
    throw DomainError(std::string(what) + " must lie in [0, 1], got " +
                      std::to_string(to_double(v)));
}

template <class T>
void check_stats(const GroundTruthStats<T> &gt, int expected_n) {
  if (gt.acc_alpha.size() != gt.acc_beta.size())
    throw DomainError("acc_alpha and acc_beta differ in length");
  if (expected_n > 0 && gt.ensemble_size() != expected_n)
    throw DomainError("expected " + std::to_string(expected_n) + " classifiers, got " +
                      std::to_string(gt.ensemble_size()));
  if (gt.ensemble_size() < 1) throw DomainError("ensemble must have at least one classifier");
  check_unit(gt.prevalence_alpha, "prevalence");
  for (const T &a : gt.acc_alpha) check_unit(a, "alpha accuracy");
  for (const T &b : gt.acc_beta) check_unit(b, "beta accuracy");
}

// General independent model with no range checks; the solver uses it to score
// roots that may lie outside the unit cube.
template <class T>
std::vector<T> forward_independent(const GroundTruthStats<T> &gt) {
  const int n = gt.ensemble_size();
  std::vector<T> f(pattern_count(n));
  const T p = gt.prevalence_alpha;
  const T q = T(1) - p;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    T given_alpha = p;
    T given_beta = q;
    for (int i = 0; i < n; ++i) {
      if (pattern_label(idx, n, i) == Label::alpha) {
        given_alpha *= gt.acc_alpha[i];
        given_beta *= T(1) - gt.acc_beta[i];
      } else {
        given_alpha *= T(1) - gt.acc_alpha[i];
        given_beta *= gt.acc_beta[i];
      }
    }
    f[idx] = given_alpha + given_beta;
  }
  return f;
}

}  // namespace detail

// Single classifier: (f_alpha, f_beta).
template <class T>
std::vector<T> forward_one(const GroundTruthStats<T> &gt) {
  detail::check_stats(gt, 1);
  const T &p = gt.prevalence_alpha;
  const T &a = gt.acc_alpha[0];
  const T &b = gt.acc_beta[0];
  return {p * a + (T(1) - p) * (T(1) - b), p * (T(1) - a) + (T(1) - p) * b};
}

// Two classifiers with their per-label error correlations. This system is
// exact for any sample: plugging in the sample's ground-truth statistics
// reproduces its pattern frequencies.
template <class T>
std::vector<T> forward_two(const GroundTruthStats<T> &gt, const PairCorrelations<T> &corr) {
  detail::check_stats(gt, 2);
  if (corr.ensemble_size() != 2) throw DomainError("forward_two needs two-classifier correlations");
  const auto &ga = corr.at(0, 1, Label::alpha);
  const auto &gb = corr.at(0, 1, Label::beta);
  if (!ga || !gb) throw DomainError("forward_two needs both label correlations");
  const T quarter = T(1) / T(4);
  for (const T *g : {&*ga, &*gb})
    if (*g < -quarter || *g > quarter)
      throw DomainError("correlation must lie in [-1/4, 1/4], got " + std::to_string(to_double(*g)));

  const T &p = gt.prevalence_alpha;
  const T q = T(1) - p;
  const T &a1 = gt.acc_alpha[0];
  const T &a2 = gt.acc_alpha[1];
  const T &b1 = gt.acc_beta[0];
  const T &b2 = gt.acc_beta[1];
  return {
      p * (a1 * a2 + *ga) + q * ((T(1) - b1) * (T(1) - b2) + *gb),
      p * (a1 * (T(1) - a2) - *ga) + q * ((T(1) - b1) * b2 - *gb),
      p * ((T(1) - a1) * a2 - *ga) + q * (b1 * (T(1) - b2) - *gb),
      p * ((T(1) - a1) * (T(1) - a2) + *ga) + q * (b1 * b2 + *gb),
  };
}

// Three classifiers with independent errors given the true label, written
// out term by term in lexicographic pattern order.
template <class T>
std::vector<T> forward_three_indep(const GroundTruthStats<T> &gt) {
  detail::check_stats(gt, 3);
  const T &p = gt.prevalence_alpha;
  const T q = T(1) - p;
  const T &a1 = gt.acc_alpha[0], &a2 = gt.acc_alpha[1], &a3 = gt.acc_alpha[2];
  const T &b1 = gt.acc_beta[0], &b2 = gt.acc_beta[1], &b3 = gt.acc_beta[2];
  const T na1 = T(1) - a1, na2 = T(1) - a2, na3 = T(1) - a3;
  const T nb1 = T(1) - b1, nb2 = T(1) - b2, nb3 = T(1) - b3;
  return {
      p * a1 * a2 * a3 + q * nb1 * nb2 * nb3,     // aaa
      p * a1 * a2 * na3 + q * nb1 * nb2 * b3,     // aab
      p * a1 * na2 * a3 + q * nb1 * b2 * nb3,     // aba
      p * a1 * na2 * na3 + q * nb1 * b2 * b3,     // abb
      p * na1 * a2 * a3 + q * b1 * nb2 * nb3,     // baa
      p * na1 * a2 * na3 + q * b1 * nb2 * b3,     // bab
      p * na1 * na2 * a3 + q * b1 * b2 * nb3,     // bba
      p * na1 * na2 * na3 + q * b1 * b2 * b3,     // bbb
  };
}

template <class T>
std::vector<T> forward_n_indep(const GroundTruthStats<T> &gt) {
  detail::check_stats(gt, 0);
  return detail::forward_independent(gt);
}

// The same sample described with alpha and beta exchanged.
template <class T>
GroundTruthStats<T> swap_labels(const GroundTruthStats<T> &gt) {
  return {T(1) - gt.prevalence_alpha, gt.acc_beta, gt.acc_alpha};
}

// Frequencies re-indexed for exchanged labels (pattern bits complemented).
template <class T>
std::vector<T> swap_labels(const std::vector<T> &f) {
  std::vector<T> out(f.size());
  const std::size_t mask = f.size() - 1;
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[~i & mask];
  return out;
}

template <class To, class From>
GroundTruthStats<To> convert(const GroundTruthStats<From> &gt) {
  GroundTruthStats<To> out;
  auto cv = [](const From &v) {
    if constexpr (std::is_same_v<To, double>) return to_double(v);
    else return To(v);
  };
  out.prevalence_alpha = cv(gt.prevalence_alpha);
  for (const From &a : gt.acc_alpha) out.acc_alpha.push_back(cv(a));
  for (const From &b : gt.acc_beta) out.acc_beta.push_back(cv(b));
  return out;
}

// Number of sample statistics (prevalence, per-label accuracies and every
// correlation order) that describe an n-classifier ensemble: 2^(n+1) - 1.
std::uint64_t dimension(int n);

// Covariance of the correctness indicators of classifiers i and j over the
// rows whose truth is `label`, normalized by that row count.
// Throws UndefinedCorrelation when no row carries that truth label.
Rational gamma(const DecisionStream &stream, int i, int j, Label label);

// Ground-truth statistics of a labeled stream, measured directly.
struct LabeledStats {
  Rational prevalence_alpha;
  // Absent when the label never occurs in the truth column.
  std::vector<std::optional<Rational>> acc_alpha;
  std::vector<std::optional<Rational>> acc_beta;
  PairCorrelations<Rational> correlations;

  // All accuracies defined -> plain stats; nullopt otherwise.
  std::optional<GroundTruthStats<Rational>> complete() const;
  // Undefined accuracies replaced by `fill` (they carry zero weight in every
  // forward model because the corresponding prevalence is zero).
  GroundTruthStats<Rational> completed_with(const Rational &fill) const;
  // Same, with undefined correlations replaced by zero.
  PairCorrelations<Rational> correlations_with_zero() const;
};

// Throws EmptyStream for a stream without rows and MalformedInput for an
// unlabeled stream.
LabeledStats gt_from_labeled(const DecisionStream &stream);

}  // namespace agti
