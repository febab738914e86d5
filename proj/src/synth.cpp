#include "agti/synth.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace agti {

namespace {

void check_unit(double v, const std::string &field) {
  if (!(v >= 0.0 && v <= 1.0))
    throw SpecError(field + " must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

void GeneratorSpec::validate() const {
  if (n < 1 || n > kMaxEnsemble) throw SpecError("n must be in [1, 24], got " + std::to_string(n));
  if (acc_alpha.size() != static_cast<std::size_t>(n) ||
      acc_beta.size() != static_cast<std::size_t>(n))
    throw SpecError("accuracies must list exactly n = " + std::to_string(n) + " classifiers");
  check_unit(prevalence, "prevalence");
  for (int i = 0; i < n; ++i) {
    check_unit(acc_alpha[i], "accuracies[" + std::to_string(i + 1) + "].alpha");
    check_unit(acc_beta[i], "accuracies[" + std::to_string(i + 1) + "].beta");
  }
  if (pair_flip) {
    const auto &pf = *pair_flip;
    if (pf.source < 0 || pf.source >= n || pf.target < 0 || pf.target >= n ||
        pf.source == pf.target)
      throw SpecError("pair_flip must name two distinct classifiers in 1..n");
    check_unit(pf.rho, "pair_flip.rho");
  }
  if (sample_size < 1) throw SpecError("sample_size must be at least 1");
}

DecisionStream generate(const GeneratorSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int n = spec.n;
  DecisionStream out(n, true);
  out.reserve(spec.sample_size);
  std::vector<bool> correct(static_cast<std::size_t>(n));
  Pattern row(static_cast<std::size_t>(n));
  for (std::uint64_t item = 0; item < spec.sample_size; ++item) {
    const Label truth = uniform01(rng) < spec.prevalence ? Label::alpha : Label::beta;
    for (int i = 0; i < n; ++i) {
      const double acc = truth == Label::alpha ? spec.acc_alpha[i] : spec.acc_beta[i];
      correct[i] = uniform01(rng) < acc;
    }
    if (spec.pair_flip && uniform01(rng) < spec.pair_flip->rho)
      correct[spec.pair_flip->target] = correct[spec.pair_flip->source];
    for (int i = 0; i < n; ++i) row[i] = correct[i] ? truth : other(truth);
    out.add_row(row, truth);
  }
  return out;
}

double EvalReport::max_error() const {
  if (!errors) return std::numeric_limits<double>::infinity();
  double m = errors->prevalence_alpha;
  for (double e : errors->acc_alpha) m = std::max(m, e);
  for (double e : errors->acc_beta) m = std::max(m, e);
  return m;
}

namespace {

void fill_errors(EvalReport &report) {
  const SolverRoot *root = report.outcome.selected_root();
  if (!root) return;
  GroundTruthStats<double> err;
  err.prevalence_alpha = std::abs(root->stats.prevalence_alpha - report.true_stats.prevalence_alpha);
  for (int i = 0; i < 3; ++i) {
    err.acc_alpha.push_back(std::abs(root->stats.acc_alpha[i] - report.true_stats.acc_alpha[i]));
    err.acc_beta.push_back(std::abs(root->stats.acc_beta[i] - report.true_stats.acc_beta[i]));
  }
  report.errors = std::move(err);
}

void require_three(const GeneratorSpec &spec) {
  spec.validate();
  if (spec.n != 3) throw SpecError("evaluation solves three-classifier ensembles; n = " +
                                   std::to_string(spec.n));
}

}  // namespace

EvalReport evaluate(const GeneratorSpec &spec, const SelectionPolicy &policy,
                    std::optional<SolveTolerances> tol) {
  require_three(spec);
  const DecisionStream stream = generate(spec);
  const LabeledStats realized = gt_from_labeled(stream);

  EvalReport report;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  report.true_stats.prevalence_alpha = to_double(realized.prevalence_alpha);
  for (int i = 0; i < 3; ++i) {
    report.true_stats.acc_alpha.push_back(realized.acc_alpha[i] ? to_double(*realized.acc_alpha[i]) : nan);
    report.true_stats.acc_beta.push_back(realized.acc_beta[i] ? to_double(*realized.acc_beta[i]) : nan);
  }
  report.realized_gamma = PairCorrelations<double>(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (Label l : {Label::alpha, Label::beta})
        if (const auto &g = realized.correlations.at(i, j, l)) report.realized_gamma.set(i, j, l, to_double(*g));

  report.sketch = tally(stream);
  report.tolerances = tol.value_or(SolveTolerances::for_sample(report.sketch.total()));
  report.outcome = solve_and_select(frequencies_real(report.sketch), policy, report.tolerances);
  fill_errors(report);
  return report;
}

EvalReport evaluate_exact(const GeneratorSpec &spec, const SelectionPolicy &policy,
                          const SolveTolerances &tol) {
  require_three(spec);
  EvalReport report;
  report.true_stats = spec.parameters();
  report.realized_gamma = PairCorrelations<double>(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (Label l : {Label::alpha, Label::beta}) report.realized_gamma.set(i, j, l, 0.0);
  report.tolerances = tol;
  report.outcome = solve_and_select(forward_three_indep(report.true_stats), policy, tol);
  fill_errors(report);
  return report;
}

std::string format_eval_table(const EvalReport &report) {
  std::ostringstream os;
  char buf[64];
  auto cell = [&](double est, double truth) {
    char inner[40];
    std::snprintf(inner, sizeof inner, "%.3f(%.3f)", est, truth);
    std::snprintf(buf, sizeof buf, "  %-14s", inner);
    return std::string(buf);
  };
  const SolverRoot *root = report.estimated();
  os << "Label   Prevalence      C1              C2              C3\n";
  if (!root) {
    os << "(no root selected)";
    for (Alarm a : report.outcome.alarms) os << ' ' << to_string(a);
    os << '\n';
    return os.str();
  }
  std::string alpha = "alpha " + cell(root->stats.prevalence_alpha, report.true_stats.prevalence_alpha);
  std::string beta = "beta  " + cell(1.0 - root->stats.prevalence_alpha,
                                     1.0 - report.true_stats.prevalence_alpha);
  for (int i = 0; i < 3; ++i) {
    alpha += cell(root->stats.acc_alpha[i], report.true_stats.acc_alpha[i]);
    beta += cell(root->stats.acc_beta[i], report.true_stats.acc_beta[i]);
  }
  for (std::string *line : {&alpha, &beta}) {
    line->erase(line->find_last_not_of(' ') + 1);
    os << *line << '\n';
  }
  if (!report.outcome.alarms.empty()) {
    os << "alarms:";
    for (Alarm a : report.outcome.alarms) os << ' ' << to_string(a);
    os << '\n';
  }
  return os.str();
}

GeneratedIds generate_ids(const IdGeneratorSpec &spec) {
  check_unit(spec.new_rate, "new_rate");
  for (const auto &s : spec.systems) {
    check_unit(s.fresh, "fresh");
    check_unit(s.collide, "collide");
    if (s.fresh + s.collide > 1.0) throw SpecError("fresh + collide must not exceed 1");
  }
  std::mt19937_64 rng(spec.seed);
  const std::size_t systems = spec.systems.size();
  std::vector<std::vector<std::string>> tokens(systems);
  for (auto &t : tokens) t.reserve(spec.items);
  GeneratedIds out;
  out.truth.reserve(spec.items);
  std::uint64_t entities = 0;
  std::uint64_t junk = 0;
  auto pick_existing = [&](std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(bound));
  };
  for (std::uint64_t item = 0; item < spec.items; ++item) {
    std::uint64_t entity = 0;
    if (entities == 0 || uniform01(rng) < spec.new_rate) {
      entity = entities++;
      out.truth.push_back(Label::alpha);
    } else {
      entity = pick_existing(entities);
      out.truth.push_back(Label::beta);
    }
    const std::uint64_t earlier = out.truth.back() == Label::alpha ? entity : entities;
    for (std::size_t s = 0; s < systems; ++s) {
      const double u = uniform01(rng);
      const auto &noise = spec.systems[s];
      if (u < noise.fresh)
        tokens[s].push_back("j" + std::to_string(junk++));
      else if (u < noise.fresh + noise.collide && earlier > 0)
        tokens[s].push_back("e" + std::to_string(pick_existing(earlier)));
      else
        tokens[s].push_back("e" + std::to_string(entity));
    }
  }
  out.unique_count = entities;
  out.ids = IdStream(std::move(tokens));
  return out;
}

}  // namespace agti
