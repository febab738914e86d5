#include "agti/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agti {

SolveTolerances SolveTolerances::for_sample(std::uint64_t total) {
  SolveTolerances tol;
  if (total > 0) tol.residual = 5.0 / std::sqrt(static_cast<double>(total));
  return tol;
}

double Moments::pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return m12;
  if (i == 0 && j == 2) return m13;
  if (i == 1 && j == 2) return m23;
  throw DomainError("pair index out of range");
}

double Moments::cov(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return c12;
  if (i == 0 && j == 2) return c13;
  if (i == 1 && j == 2) return c23;
  throw DomainError("pair index out of range");
}

Moments moments(std::span<const double> f) {
  if (f.size() != 8)
    throw NormalizationError("three-classifier solve needs 8 frequencies, got " +
                             std::to_string(f.size()));
  double sum = 0;
  for (double v : f) sum += v;
  if (!(std::abs(sum - 1.0) <= 1e-12))
    throw NormalizationError("frequencies sum to " + std::to_string(sum) + ", not 1");

  // Pattern bit (2 - i) is 0 when classifier i voted alpha.
  auto votes_alpha = [](std::size_t idx, int i) { return ((idx >> (2 - i)) & 1u) == 0; };
  Moments mo;
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const bool v1 = votes_alpha(idx, 0), v2 = votes_alpha(idx, 1), v3 = votes_alpha(idx, 2);
    if (v1) mo.m[0] += f[idx];
    if (v2) mo.m[1] += f[idx];
    if (v3) mo.m[2] += f[idx];
    if (v1 && v2) mo.m12 += f[idx];
    if (v1 && v3) mo.m13 += f[idx];
    if (v2 && v3) mo.m23 += f[idx];
  }
  mo.m123 = f[0];
  const auto &m = mo.m;
  mo.c12 = mo.m12 - m[0] * m[1];
  mo.c13 = mo.m13 - m[0] * m[2];
  mo.c23 = mo.m23 - m[1] * m[2];
  mo.t = mo.m123 - m[0] * mo.m23 - m[1] * mo.m13 - m[2] * mo.m12 + 2.0 * m[0] * m[1] * m[2];
  return mo;
}

namespace {

constexpr double kZeroTripleMoment = 1e-12;

std::string parameter_name(int slot) {
  if (slot == 0) return "prevalence";
  if (slot <= 3) return "acc_alpha_" + std::to_string(slot);
  return "acc_beta_" + std::to_string(slot - 3);
}

double &parameter(GroundTruthStats<double> &s, int slot) {
  if (slot == 0) return s.prevalence_alpha;
  if (slot <= 3) return s.acc_alpha[slot - 1];
  return s.acc_beta[slot - 4];
}

double parameter(const GroundTruthStats<double> &s, int slot) {
  return parameter(const_cast<GroundTruthStats<double> &>(s), slot);
}

double max_residual(const GroundTruthStats<double> &stats, std::span<const double> f) {
  const auto model = detail::forward_independent(stats);
  double worst = 0;
  for (std::size_t k = 0; k < 8; ++k) worst = std::max(worst, std::abs(model[k] - f[k]));
  return worst;
}

SolverRoot make_root(const Moments &mo, double p, const std::array<double, 3> &d,
                     std::span<const double> f, const SolveTolerances &tol) {
  SolverRoot root;
  root.stats.prevalence_alpha = p;
  for (int i = 0; i < 3; ++i) {
    const double x = mo.m[i] + (1.0 - p) * d[i];
    const double y = mo.m[i] - p * d[i];
    root.stats.acc_alpha.push_back(x);
    root.stats.acc_beta.push_back(1.0 - y);
  }
  for (int k = 0; k < 7; ++k) {
    const double v = parameter(root.stats, k);
    if (!std::isfinite(v)) throw InternalError("non-finite value in solver root");
    if (v < -tol.phys || v > 1.0 + tol.phys) root.physical = false;
  }
  if (root.physical) {
    for (int k = 0; k < 7; ++k) {
      double &v = parameter(root.stats, k);
      if (v < 0.0 || v > 1.0) {
        v = std::clamp(v, 0.0, 1.0);
        root.clamped = true;
      }
    }
  }
  root.residual = max_residual(root.stats, f);
  root.accepted = root.residual <= tol.residual;
  GroundTruthStats<double> projected = root.stats;
  for (int k = 0; k < 7; ++k) {
    double &v = parameter(projected, k);
    v = std::clamp(v, 0.0, 1.0);
  }
  root.projected_residual = max_residual(projected, f);
  return root;
}

}  // namespace

RootPair solve_three(std::span<const double> f, const SolveTolerances &tol) {
  const Moments mo = moments(f);
  const double c12 = mo.c12, c13 = mo.c13, c23 = mo.c23;
  for (double c : {c12, c13, c23})
    if (std::abs(c) < tol.degenerate)
      throw DegenerateEnsemble("a classifier pair is uncorrelated; system unidentifiable");

  const double product = c12 * c13 * c23;
  if (!(product > 0.0))
    throw IndependenceViolation("covariance sign pattern inconsistent with the independent model");
  const std::array<double, 3> ratio = {c12 * c13 / c23, c12 * c23 / c13, c13 * c23 / c12};
  for (double v : ratio)
    if (v < 0.0)
      throw IndependenceViolation("covariance sign pattern inconsistent with the independent model");

  const double t = std::abs(mo.t) <= kZeroTripleMoment ? 0.0 : mo.t;
  const double r = t * t / product;
  const double p = 0.5 * (1.0 - std::sqrt(r / (4.0 + r)));
  const double q = p * (1.0 - p);

  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i) d[i] = std::sqrt(ratio[i] / q);
  // Pair signs: d_1 d_j has the sign of c_1j.
  if (c12 < 0) d[1] = -d[1];
  if (c13 < 0) d[2] = -d[2];
  // Global sign: on the p <= 1/2 branch d_1 d_2 d_3 carries the sign of t.
  if (t != 0.0 && (d[0] * d[1] * d[2] > 0.0) != (t > 0.0))
    for (double &v : d) v = -v;

  RootPair pair;
  pair.r = r;
  pair.root_a = make_root(mo, p, d, f, tol);
  pair.root_b = make_root(mo, 1.0 - p, {-d[0], -d[1], -d[2]}, f, tol);
  if (!std::isfinite(r)) throw InternalError("non-finite r in solver");
  return pair;
}

SelectionPolicy parse_policy(const std::string &text) {
  if (text == "majority") return BetterThanRandomMajority{};
  if (text.rfind("prior=", 0) == 0) {
    std::size_t used = 0;
    const std::string value = text.substr(6);
    double target = 0;
    try {
      target = std::stod(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !(target >= 0.0 && target <= 1.0))
      throw std::invalid_argument("prior target must be a number in [0, 1]: " + text);
    return PrevalencePrior{target};
  }
  if (text == "manual=a") return Manual{RootChoice::a};
  if (text == "manual=b") return Manual{RootChoice::b};
  throw std::invalid_argument("unknown policy '" + text +
                              "' (expected majority, prior=<p> or manual=<a|b>)");
}

std::string describe(const SelectionPolicy &policy) {
  struct {
    std::string operator()(const BetterThanRandomMajority &) const { return "majority"; }
    std::string operator()(const PrevalencePrior &p) const {
      std::ostringstream os;
      os << "prior=" << p.target;
      return os.str();
    }
    std::string operator()(const Manual &m) const {
      return std::string("manual=") + to_string(m.choice);
    }
  } visitor;
  return std::visit(visitor, policy);
}

namespace {

int better_than_random(const SolverRoot &root) {
  int k = 0;
  for (double a : root.stats.acc_alpha) k += a > 0.5;
  for (double b : root.stats.acc_beta) k += b > 0.5;
  return k;
}

}  // namespace

RootChoice choose_root(const RootPair &pair, const SelectionPolicy &policy) {
  if (std::holds_alternative<Manual>(policy)) return std::get<Manual>(policy).choice;
  if (const auto *prior = std::get_if<PrevalencePrior>(&policy)) {
    const double da = std::abs(pair.root_a.stats.prevalence_alpha - prior->target);
    const double db = std::abs(pair.root_b.stats.prevalence_alpha - prior->target);
    if (std::abs(da - db) <= 1e-12)
      throw AmbiguousSelection("both prevalence roots are equally near the prior", pair);
    return da < db ? RootChoice::a : RootChoice::b;
  }
  const int ka = better_than_random(pair.root_a);
  const int kb = better_than_random(pair.root_b);
  if (ka >= 4 && ka > kb) return RootChoice::a;
  if (kb >= 4 && kb > ka) return RootChoice::b;
  throw AmbiguousSelection("no root has a majority of better-than-random accuracies", pair);
}

SolverRoot select_root(const RootPair &pair, const SelectionPolicy &policy) {
  return pair[choose_root(pair, policy)];
}

std::vector<ParameterValue> unphysical_report(const SolverRoot &root, double tol_phys) {
  std::vector<ParameterValue> out;
  if (root.stats.acc_alpha.size() != 3 || root.stats.acc_beta.size() != 3) return out;
  for (int k = 0; k < 7; ++k) {
    const double v = parameter(root.stats, k);
    if (v < -tol_phys || v > 1.0 + tol_phys) out.push_back({parameter_name(k), v});
  }
  return out;
}

const char *to_string(Alarm a) noexcept {
  switch (a) {
    case Alarm::degenerate:
      return "degenerate";
    case Alarm::independence_violation:
      return "independence_violation";
    case Alarm::unphysical:
      return "unphysical";
    case Alarm::residual:
      return "residual";
    case Alarm::ambiguous_selection:
      return "ambiguous_selection";
  }
  return "unknown";
}

bool SolveOutcome::has_alarm(Alarm a) const {
  return std::find(alarms.begin(), alarms.end(), a) != alarms.end();
}

SolveOutcome solve_and_select(std::span<const double> f, const SelectionPolicy &policy,
                              const SolveTolerances &tol) {
  SolveOutcome out;
  try {
    out.roots = solve_three(f, tol);
  } catch (const DegenerateEnsemble &e) {
    out.alarms.push_back(Alarm::degenerate);
    out.message = e.what();
    return out;
  } catch (const IndependenceViolation &e) {
    out.alarms.push_back(Alarm::independence_violation);
    out.message = e.what();
    return out;
  }
  const RootPair &pair = *out.roots;
  if (!pair.root_a.physical || !pair.root_b.physical) out.alarms.push_back(Alarm::unphysical);
  if (!pair.root_a.accepted && !pair.root_b.accepted) out.alarms.push_back(Alarm::residual);
  try {
    out.selected = choose_root(pair, policy);
  } catch (const AmbiguousSelection &e) {
    out.alarms.push_back(Alarm::ambiguous_selection);
    out.message = e.what();
  }
  return out;
}

}  // namespace agti
