#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agti/sketch.hpp"
#include "agti/solver.hpp"

namespace agti {

struct TripletEntry {
  std::array<int, 3> classifiers{};  // zero-based, ascending
  SolveOutcome outcome;
};

struct ClassifierEstimate {
  std::size_t triplet = 0;  // index into TripletReport::triplets
  double acc_alpha = 0;
  double acc_beta = 0;
};

struct TripletSpread {
  double prevalence = 0;
  std::vector<double> acc_alpha;  // per classifier
  std::vector<double> acc_beta;
};

// Every 3-subset of an ensemble solved on its own, aggregated per
// classifier. Only selected roots under the one shared policy feed the
// aggregates; triplets that raised a solver error or a selection tie keep
// their alarms and contribute nothing.
struct TripletReport {
  int ensemble_size = 0;
  std::uint64_t total_items = 0;
  SelectionPolicy policy;
  std::vector<TripletEntry> triplets;
  std::vector<std::optional<double>> prevalence_estimates;  // aligned with triplets
  std::vector<std::vector<ClassifierEstimate>> per_classifier;
  TripletSpread spread;

  std::size_t solved_count() const;
  // Unweighted mean of the selected prevalences. Throws UndefinedScore when
  // no triplet produced one.
  double consensus_prevalence() const;
};

// Throws InsufficientEnsemble for fewer than three classifiers. Without an
// explicit tolerance the residual bound follows the sketch total.
TripletReport triplet_sweep(const PatternSketch &sketch, const SelectionPolicy &policy,
                            std::optional<SolveTolerances> tol = std::nullopt);
TripletReport triplet_sweep(const DecisionStream &stream, const SelectionPolicy &policy,
                            std::optional<SolveTolerances> tol = std::nullopt);

// Ranges (max - min) of the selected prevalences and of each classifier's
// accuracy estimates, recomputed from the per-triplet data.
TripletSpread compute_spread(const TripletReport &report);

// Largest cross-triplet spread over the prevalence and every accuracy.
// Throws UndefinedScore with fewer than two solved triplets.
double consistency_score(const TripletReport &report);

// Aligned identity tokens, one sequence per system.
class IdStream {
 public:
  IdStream() = default;
  // Throws MalformedInput if the systems differ in length.
  explicit IdStream(std::vector<std::vector<std::string>> systems);

  int system_count() const noexcept { return static_cast<int>(systems_.size()); }
  std::size_t items() const noexcept { return systems_.empty() ? 0 : systems_[0].size(); }
  const std::vector<std::string> &system(int i) const { return systems_.at(i); }

 private:
  std::vector<std::vector<std::string>> systems_;
};

// First appearance of a token in a system's stream -> alpha ("new"), every
// later appearance -> beta ("old"). Each system keeps its own seen-set.
DecisionStream binarize_ids(const IdStream &ids);

double unique_count_estimate(const TripletReport &report, std::uint64_t total_items);

// Aligned text table: one row per triplet, prevalence then the alpha
// accuracy of each member system ("N/A" for non-members).
std::string format_triplet_table(const TripletReport &report);

}  // namespace agti
