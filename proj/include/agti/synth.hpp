#pragma once

// Synthetic labeled decision streams and the estimate-vs-truth harness.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "agti/ensemble.hpp"
#include "agti/model.hpp"
#include "agti/solver.hpp"

namespace agti {

// Classifier `target` copies classifier `source`'s correctness indicator with
// probability rho on each item. Zero-based indices.
struct PairFlip {
  int source = 0;
  int target = 1;
  double rho = 0;
};

struct GeneratorSpec {
  int n = 3;
  double prevalence = 0.5;
  std::vector<double> acc_alpha;
  std::vector<double> acc_beta;
  std::optional<PairFlip> pair_flip;
  std::uint64_t sample_size = 1000;
  std::uint64_t seed = 0;

  // Throws SpecError naming the first invalid field.
  void validate() const;
  GroundTruthStats<double> parameters() const { return {prevalence, acc_alpha, acc_beta}; }
};

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Per item: truth, then one correctness draw per classifier in order, then
// the copy draw when a pair flip is set. Deterministic given the seed.
DecisionStream generate(const GeneratorSpec &spec);

struct EvalReport {
  // Realized sample statistics; NaN where a label is absent from the sample.
  GroundTruthStats<double> true_stats;
  PairCorrelations<double> realized_gamma;
  PatternSketch sketch{3};
  SolveTolerances tolerances;
  SolveOutcome outcome;
  // |estimate - truth| per parameter, present when a root was selected.
  std::optional<GroundTruthStats<double>> errors;

  const SolverRoot *estimated() const { return outcome.selected_root(); }
  double max_error() const;
};

// Sample, measure the realized statistics, tally, solve, select, compare.
// Solver alarms land in the report; only spec validation throws.
EvalReport evaluate(const GeneratorSpec &spec, const SelectionPolicy &policy,
                    std::optional<SolveTolerances> tol = std::nullopt);

// Same comparison on the exact forward-model frequencies of the spec's
// parameters (no sampling); truth is the parameter set itself.
EvalReport evaluate_exact(const GeneratorSpec &spec, const SelectionPolicy &policy,
                          const SolveTolerances &tol = {});

// "estimate(true)" table: prevalence and the per-classifier accuracies.
std::string format_eval_table(const EvalReport &report);

// Noisy identity systems over a stream of entity visits.
struct IdSystemNoise {
  double fresh = 0;    // emit a never-seen junk token
  double collide = 0;  // emit the token of a random earlier entity
};

struct IdGeneratorSpec {
  double new_rate = 0.5;  // probability an item is a first visit
  std::vector<IdSystemNoise> systems;
  std::uint64_t items = 1000;
  std::uint64_t seed = 0;
};

struct GeneratedIds {
  IdStream ids;
  std::vector<Label> truth;  // alpha on first visits
  std::uint64_t unique_count = 0;
};

GeneratedIds generate_ids(const IdGeneratorSpec &spec);

}  // namespace agti
