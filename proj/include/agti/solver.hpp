#pragma once

// Closed-form inversion of the three-independent-classifier system.
//
// Writing x_i = P(i votes alpha | alpha), y_i = P(i votes alpha | beta),
// p = prevalence, q = p(1-p) and d_i = x_i - y_i, the centered moments of the
// alpha-vote indicators factor as
//
//   c_ij = q d_i d_j,        t = q (1 - 2p) d_1 d_2 d_3.
//
// Eliminating the d_i leaves (1 - 2p)^2 = r q with r = t^2 / (c12 c13 c23),
// a quadratic in p whose roots are symmetric about 1/2. Each prevalence root
// fixes |d_i| = sqrt(c_ij c_ik / (q c_jk)); the pair signs follow the
// covariances and the global sign follows t. The two roots are alpha/beta
// relabelings of each other. Every root is re-checked against the forward
// model and carries its residual.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "agti/error.hpp"
#include "agti/model.hpp"

namespace agti {

struct SolveTolerances {
  double degenerate = 1e-6;  // minimum |c_jk|
  double residual = 1e-6;    // max-norm forward-model mismatch for acceptance
  double phys = 1e-4;        // slack outside [0, 1] before a value is unphysical

  // Residual tolerance widened to the O(1/sqrt(S)) noise of a sampled tally.
  static SolveTolerances for_sample(std::uint64_t total);
};

// Linear images of the eight pattern frequencies.
struct Moments {
  std::array<double, 3> m{};  // P(classifier i votes alpha)
  double m12 = 0, m13 = 0, m23 = 0;
  double m123 = 0;
  double c12 = 0, c13 = 0, c23 = 0;
  double t = 0;  // centered triple moment

  double pair(int i, int j) const;  // m_ij, zero-based
  double cov(int i, int j) const;   // c_ij, zero-based
};

// Throws NormalizationError unless f has 8 entries summing to 1 within 1e-12.
Moments moments(std::span<const double> f);

struct SolverRoot {
  GroundTruthStats<double> stats;
  double residual = 0;    // max-norm of forward(stats) - observed
  bool physical = true;   // all 7 values within [-phys, 1 + phys]
  bool clamped = false;   // small excursions were pulled into [0, 1]
  bool accepted = false;  // residual <= tolerance
  // Residual after pulling every value into [0, 1]: how far the nearest
  // physical parameter set is from explaining the data. Equals `residual` up
  // to rounding for physical roots.
  double projected_residual = 0;
};

enum class RootChoice { a, b };

inline const char *to_string(RootChoice c) noexcept { return c == RootChoice::a ? "a" : "b"; }

struct RootPair {
  SolverRoot root_a;  // prevalence <= 1/2 branch (t == 0: classifier 1 better than random)
  SolverRoot root_b;  // alpha/beta relabeling of root_a
  double r = 0;       // t^2 / (c12 c13 c23)

  const SolverRoot &operator[](RootChoice c) const { return c == RootChoice::a ? root_a : root_b; }
};

RootPair solve_three(std::span<const double> f, const SolveTolerances &tol = {});

struct BetterThanRandomMajority {};
struct PrevalencePrior {
  double target = 0.5;
};
struct Manual {
  RootChoice choice = RootChoice::a;
};
using SelectionPolicy = std::variant<BetterThanRandomMajority, PrevalencePrior, Manual>;

// "majority", "prior=<p>", "manual=<a|b>". Throws std::invalid_argument.
SelectionPolicy parse_policy(const std::string &text);
std::string describe(const SelectionPolicy &policy);

class AmbiguousSelection : public Error {
 public:
  AmbiguousSelection(const std::string &what, RootPair pair)
      : Error(what), pair_(std::move(pair)) {}
  const RootPair &pair() const noexcept { return pair_; }

 private:
  RootPair pair_;
};

// Which root the policy picks. Throws AmbiguousSelection on a tie.
RootChoice choose_root(const RootPair &pair, const SelectionPolicy &policy);
SolverRoot select_root(const RootPair &pair, const SelectionPolicy &policy);

struct ParameterValue {
  std::string parameter;  // "prevalence", "acc_alpha_2", ...
  double value = 0;
};

// Parameters outside [-tol_phys, 1 + tol_phys].
std::vector<ParameterValue> unphysical_report(const SolverRoot &root, double tol_phys);

enum class Alarm { degenerate, independence_violation, unphysical, residual, ambiguous_selection };

const char *to_string(Alarm a) noexcept;

// Non-throwing solve + select for pipelines that carry alarms instead of
// failing: a solver error leaves `roots` empty, a selection tie leaves
// `selected` empty.
struct SolveOutcome {
  std::optional<RootPair> roots;
  std::optional<RootChoice> selected;
  std::vector<Alarm> alarms;
  std::string message;

  const SolverRoot *selected_root() const {
    return roots && selected ? &(*roots)[*selected] : nullptr;
  }
  bool has_alarm(Alarm a) const;
};

SolveOutcome solve_and_select(std::span<const double> f, const SelectionPolicy &policy,
                              const SolveTolerances &tol);

}  // namespace agti
