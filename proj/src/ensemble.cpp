#include "agti/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace agti {

std::size_t TripletReport::solved_count() const {
  return static_cast<std::size_t>(
      std::count_if(prevalence_estimates.begin(), prevalence_estimates.end(),
                    [](const auto &p) { return p.has_value(); }));
}

double TripletReport::consensus_prevalence() const {
  double sum = 0;
  std::size_t k = 0;
  for (const auto &p : prevalence_estimates)
    if (p) {
      sum += *p;
      ++k;
    }
  if (k == 0) throw UndefinedScore("no triplet produced a selected root");
  return sum / static_cast<double>(k);
}

namespace {

double range_of(const std::vector<double> &v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TripletReport triplet_sweep(const PatternSketch &sketch, const SelectionPolicy &policy,
                            std::optional<SolveTolerances> tol) {
  const int n = sketch.ensemble_size();
  if (n < 3)
    throw InsufficientEnsemble("triplet analysis needs at least 3 classifiers, got " +
                               std::to_string(n));
  if (sketch.total() == 0) throw EmptySketch("triplet analysis of an empty sketch");
  const SolveTolerances tolerances = tol.value_or(SolveTolerances::for_sample(sketch.total()));

  TripletReport report;
  report.ensemble_size = n;
  report.total_items = sketch.total();
  report.policy = policy;
  report.per_classifier.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const std::array<int, 3> members{i, j, k};
        const auto f = frequencies_real(marginalize(sketch, members));
        report.triplets.push_back({members, solve_and_select(f, policy, tolerances)});
      }

  for (std::size_t t = 0; t < report.triplets.size(); ++t) {
    const TripletEntry &entry = report.triplets[t];
    const SolverRoot *root = entry.outcome.selected_root();
    if (!root) {
      report.prevalence_estimates.emplace_back();
      continue;
    }
    report.prevalence_estimates.emplace_back(root->stats.prevalence_alpha);
    for (int m = 0; m < 3; ++m)
      report.per_classifier[entry.classifiers[m]].push_back(
          {t, root->stats.acc_alpha[m], root->stats.acc_beta[m]});
  }
  report.spread = compute_spread(report);
  return report;
}

TripletReport triplet_sweep(const DecisionStream &stream, const SelectionPolicy &policy,
                            std::optional<SolveTolerances> tol) {
  if (stream.ensemble_size() < 3)
    throw InsufficientEnsemble("triplet analysis needs at least 3 classifiers, got " +
                               std::to_string(stream.ensemble_size()));
  return triplet_sweep(tally(stream), policy, tol);
}

TripletSpread compute_spread(const TripletReport &report) {
  TripletSpread spread;
  std::vector<double> values;
  for (const auto &p : report.prevalence_estimates)
    if (p) values.push_back(*p);
  spread.prevalence = range_of(values);
  for (const auto &estimates : report.per_classifier) {
    values.clear();
    for (const auto &e : estimates) values.push_back(e.acc_alpha);
    spread.acc_alpha.push_back(range_of(values));
    values.clear();
    for (const auto &e : estimates) values.push_back(e.acc_beta);
    spread.acc_beta.push_back(range_of(values));
  }
  return spread;
}

double consistency_score(const TripletReport &report) {
  if (report.solved_count() < 2)
    throw UndefinedScore("consistency needs at least two solved triplets");
  const TripletSpread spread = compute_spread(report);
  double score = spread.prevalence;
  for (double s : spread.acc_alpha) score = std::max(score, s);
  for (double s : spread.acc_beta) score = std::max(score, s);
  return score;
}

IdStream::IdStream(std::vector<std::vector<std::string>> systems) : systems_(std::move(systems)) {
  for (std::size_t i = 1; i < systems_.size(); ++i)
    if (systems_[i].size() != systems_[0].size())
      throw MalformedInput("ID system " + std::to_string(i + 1) + " has " +
                           std::to_string(systems_[i].size()) + " items, expected " +
                           std::to_string(systems_[0].size()));
}

DecisionStream binarize_ids(const IdStream &ids) {
  const int n = ids.system_count();
  if (n < 1) throw MalformedInput("ID stream has no systems");
  std::vector<std::unordered_set<std::string>> seen(static_cast<std::size_t>(n));
  DecisionStream out(n);
  out.reserve(ids.items());
  Pattern row(static_cast<std::size_t>(n));
  for (std::size_t item = 0; item < ids.items(); ++item) {
    for (int s = 0; s < n; ++s)
      row[s] = seen[s].insert(ids.system(s)[item]).second ? Label::alpha : Label::beta;
    out.add_row(row);
  }
  return out;
}

double unique_count_estimate(const TripletReport &report, std::uint64_t total_items) {
  return report.consensus_prevalence() * static_cast<double>(total_items);
}

std::string format_triplet_table(const TripletReport &report) {
  std::ostringstream os;
  char buf[64];
  os << "Triplet     Prevalence";
  for (int c = 0; c < report.ensemble_size; ++c) {
    std::snprintf(buf, sizeof buf, "  %10s", ("C" + std::to_string(c + 1)).c_str());
    os << buf;
  }
  os << "  Alarms\n";
  for (std::size_t t = 0; t < report.triplets.size(); ++t) {
    const auto &entry = report.triplets[t];
    const auto &c = entry.classifiers;
    std::snprintf(buf, sizeof buf, "(%d,%d,%d)", c[0] + 1, c[1] + 1, c[2] + 1);
    os << buf << std::string(12 - std::min<std::size_t>(11, std::string(buf).size()), ' ');
    const SolverRoot *root = entry.outcome.selected_root();
    if (root)
      std::snprintf(buf, sizeof buf, "%10.6f", root->stats.prevalence_alpha);
    else
      std::snprintf(buf, sizeof buf, "%10s", "-");
    os << buf;
    for (int k = 0; k < report.ensemble_size; ++k) {
      const auto it = std::find(c.begin(), c.end(), k);
      if (it == c.end() || !root)
        std::snprintf(buf, sizeof buf, "  %10s", it == c.end() ? "N/A" : "-");
      else
        std::snprintf(buf, sizeof buf, "  %10.6f", root->stats.acc_alpha[it - c.begin()]);
      os << buf;
    }
    os << "  ";
    for (std::size_t a = 0; a < entry.outcome.alarms.size(); ++a)
      os << (a ? "," : "") << to_string(entry.outcome.alarms[a]);
    os << '\n';
  }
  return os.str();
}

}  // namespace agti
