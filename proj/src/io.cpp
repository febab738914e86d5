#include "agti/io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace agti::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void split(std::string_view line, char delimiter, std::vector<std::string_view> &fields) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void fail_line(std::size_t line, const std::string &what) {
  throw MalformedInput("line " + std::to_string(line) + ": " + what, line);
}

bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

LabelTokens LabelTokens::parse(const std::string &pair) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos || pair.find(',', comma + 1) != std::string::npos)
    throw std::invalid_argument("--labels expects two comma-separated tokens, got '" + pair + "'");
  LabelTokens t{std::string(trim(std::string_view(pair).substr(0, comma))),
                std::string(trim(std::string_view(pair).substr(comma + 1)))};
  if (t.alpha.empty() || t.beta.empty() || t.alpha == t.beta)
    throw std::invalid_argument("label tokens must be two distinct non-empty strings");
  return t;
}

DecisionStream read_decisions(std::istream &in, const LabelTokens &tokens, char delimiter) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (lineno == 0 || blank(line)) throw MalformedInput("decisions file is empty");
  split(line, delimiter, fields);
  const bool labeled = fields.back() == "truth";
  const int n = static_cast<int>(fields.size()) - (labeled ? 1 : 0);
  if (n < 1) fail_line(lineno, "header names no classifier columns");
  if (n > kMaxEnsemble) fail_line(lineno, "too many classifier columns");

  auto decode = [&](std::string_view v, std::size_t col) {
    if (v == tokens.alpha) return Label::alpha;
    if (v == tokens.beta) return Label::beta;
    fail_line(lineno, "column " + std::to_string(col + 1) + ": unknown label '" +
                          std::string(v) + "'");
  };

  DecisionStream stream(n, labeled);
  Pattern row(static_cast<std::size_t>(n));
  const std::size_t width = fields.size();
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    split(line, delimiter, fields);
    if (fields.size() != width)
      fail_line(lineno, "expected " + std::to_string(width) + " values, got " +
                            std::to_string(fields.size()));
    for (int i = 0; i < n; ++i) row[i] = decode(fields[i], static_cast<std::size_t>(i));
    if (labeled)
      stream.add_row(row, decode(fields.back(), width - 1));
    else
      stream.add_row(row);
  }
  return stream;
}

void write_decisions(std::ostream &out, const DecisionStream &stream, const LabelTokens &tokens,
                     char delimiter) {
  const int n = stream.ensemble_size();
  for (int i = 0; i < n; ++i) out << (i ? std::string(1, delimiter) : "") << 'c' << i + 1;
  if (stream.labeled()) out << delimiter << "truth";
  out << '\n';
  auto tok = [&](std::uint8_t v) -> const std::string & { return v ? tokens.beta : tokens.alpha; };
  for (std::size_t r = 0; r < stream.rows(); ++r) {
    for (int i = 0; i < n; ++i) {
      if (i) out << delimiter;
      out << tok(stream.column(i)[r]);
    }
    if (stream.labeled()) out << delimiter << tok(stream.truth_column()[r]);
    out << '\n';
  }
}

IdStream read_ids(std::istream &in, char delimiter) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (lineno == 0 || blank(line)) throw MalformedInput("ID file is empty");
  split(line, delimiter, fields);
  const std::size_t width = fields.size();
  std::vector<std::vector<std::string>> systems(width);
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    split(line, delimiter, fields);
    if (fields.size() != width)
      fail_line(lineno, "expected " + std::to_string(width) + " IDs, got " +
                            std::to_string(fields.size()));
    for (std::size_t s = 0; s < width; ++s) {
      if (fields[s].empty()) fail_line(lineno, "empty ID in column " + std::to_string(s + 1));
      systems[s].emplace_back(fields[s]);
    }
  }
  return IdStream(std::move(systems));
}

void write_ids(std::ostream &out, const IdStream &ids, char delimiter) {
  for (int s = 0; s < ids.system_count(); ++s)
    out << (s ? std::string(1, delimiter) : "") << "id" << s + 1;
  out << '\n';
  for (std::size_t item = 0; item < ids.items(); ++item) {
    for (int s = 0; s < ids.system_count(); ++s)
      out << (s ? std::string(1, delimiter) : "") << ids.system(s)[item];
    out << '\n';
  }
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

namespace {

json parse_document(std::istream &in, const char *what) {
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw MalformedInput(std::string(what) + ": " + e.what());
  }
}

template <class F>
auto field(const json &j, const char *name, F &&get) {
  if (!j.contains(name)) throw MalformedInput(std::string("missing field '") + name + "'");
  try {
    return get(j.at(name));
  } catch (const json::exception &e) {
    throw MalformedInput(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

json sketch_to_json(const PatternSketch &s) {
  json j;
  j["version"] = 1;
  j["n"] = s.ensemble_size();
  j["labels"] = {"alpha", "beta"};
  j["order"] = "lexicographic";
  j["counts"] = std::vector<std::uint64_t>(s.counts().begin(), s.counts().end());
  j["total"] = s.total();
  return j;
}

PatternSketch sketch_from_json(const json &j) {
  if (!j.is_object()) throw MalformedInput("sketch document must be an object");
  if (field(j, "version", [](const json &v) { return v.get<int>(); }) != 1)
    throw MalformedInput("unsupported sketch version");
  if (field(j, "labels", [](const json &v) { return v.get<std::vector<std::string>>(); }) !=
      std::vector<std::string>{"alpha", "beta"})
    throw MalformedInput("sketch labels must be [\"alpha\", \"beta\"]");
  if (field(j, "order", [](const json &v) { return v.get<std::string>(); }) != "lexicographic")
    throw MalformedInput("sketch order must be \"lexicographic\"");
  const int n = field(j, "n", [](const json &v) { return v.get<int>(); });
  if (n < 1 || n > kMaxEnsemble) throw MalformedInput("sketch n out of range");
  return PatternSketch(
      n, field(j, "counts", [](const json &v) { return v.get<std::vector<std::uint64_t>>(); }),
      field(j, "total", [](const json &v) { return v.get<std::uint64_t>(); }));
}

void write_sketch(std::ostream &out, const PatternSketch &s) { out << dump(sketch_to_json(s)); }

PatternSketch read_sketch(std::istream &in) { return sketch_from_json(parse_document(in, "sketch")); }

json spec_to_json(const GeneratorSpec &spec) {
  json j;
  j["n"] = spec.n;
  j["prevalence"] = spec.prevalence;
  j["accuracies"] = json::array();
  for (std::size_t i = 0; i < spec.acc_alpha.size(); ++i)
    j["accuracies"].push_back({{"alpha", spec.acc_alpha[i]}, {"beta", spec.acc_beta[i]}});
  if (spec.pair_flip)
    j["pair_flip"] = {{"source", spec.pair_flip->source + 1},
                      {"target", spec.pair_flip->target + 1},
                      {"rho", spec.pair_flip->rho}};
  j["sample_size"] = spec.sample_size;
  j["seed"] = spec.seed;
  return j;
}

GeneratorSpec spec_from_json(const json &j) {
  if (!j.is_object()) throw SpecError("generator spec must be a JSON object");
  GeneratorSpec spec;
  try {
    spec.n = j.at("n").get<int>();
    spec.prevalence = j.at("prevalence").get<double>();
    for (const auto &a : j.at("accuracies")) {
      spec.acc_alpha.push_back(a.at("alpha").get<double>());
      spec.acc_beta.push_back(a.at("beta").get<double>());
    }
    if (j.contains("pair_flip") && !j.at("pair_flip").is_null()) {
      const auto &pf = j.at("pair_flip");
      spec.pair_flip = PairFlip{pf.at("source").get<int>() - 1, pf.at("target").get<int>() - 1,
                                pf.at("rho").get<double>()};
    }
    spec.sample_size = j.at("sample_size").get<std::uint64_t>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception &e) {
    throw SpecError(std::string("generator spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

GeneratorSpec read_spec(std::istream &in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw SpecError(std::string("generator spec: ") + e.what());
  }
  return spec_from_json(j);
}

json stats_to_json(const GroundTruthStats<double> &s) {
  return {{"prevalence", s.prevalence_alpha}, {"acc_alpha", s.acc_alpha}, {"acc_beta", s.acc_beta}};
}

json root_to_json(const SolverRoot &root, double tol_phys) {
  json j = stats_to_json(root.stats);
  j["residual"] = root.residual;
  j["physical"] = root.physical;
  j["clamped"] = root.clamped;
  j["accepted"] = root.accepted;
  j["projected_residual"] = root.projected_residual;
  j["unphysical"] = json::array();
  for (const auto &pv : unphysical_report(root, tol_phys))
    j["unphysical"].push_back({{"parameter", pv.parameter}, {"value", pv.value}});
  return j;
}

json moments_to_json(const Moments &m) {
  return {{"m", m.m},     {"m12", m.m12}, {"m13", m.m13}, {"m23", m.m23}, {"m123", m.m123},
          {"c12", m.c12}, {"c13", m.c13}, {"c23", m.c23}, {"t", m.t}};
}

json outcome_to_json(const SolveOutcome &outcome, const SolveTolerances &tol) {
  json j;
  if (outcome.roots) {
    j["r"] = outcome.roots->r;
    j["roots"] = {{"a", root_to_json(outcome.roots->root_a, tol.phys)},
                  {"b", root_to_json(outcome.roots->root_b, tol.phys)}};
  } else {
    j["r"] = nullptr;
    j["roots"] = nullptr;
  }
  j["selected"] = outcome.selected ? json(to_string(*outcome.selected)) : json(nullptr);
  j["alarms"] = json::array();
  for (Alarm a : outcome.alarms) j["alarms"].push_back(to_string(a));
  j["message"] = outcome.message;
  return j;
}

namespace {

json tolerances_to_json(const SolveTolerances &tol) {
  return {{"degenerate", tol.degenerate}, {"residual", tol.residual}, {"phys", tol.phys}};
}

}  // namespace

json solve_report(const PatternSketch &sketch, const SolveOutcome &outcome,
                  const SelectionPolicy &policy, const SolveTolerances &tol) {
  json j;
  j["version"] = 1;
  j["n"] = sketch.ensemble_size();
  j["total"] = sketch.total();
  j["counts"] = std::vector<std::uint64_t>(sketch.counts().begin(), sketch.counts().end());
  const auto f = frequencies_real(sketch);
  j["frequencies"] = f;
  j["moments"] = moments_to_json(moments(f));
  j["policy"] = describe(policy);
  j["tolerances"] = tolerances_to_json(tol);
  j.update(outcome_to_json(outcome, tol));
  return j;
}

std::string format_solve_table(const SolveOutcome &outcome, const SolveTolerances &tol) {
  std::ostringstream os;
  char buf[160];
  if (!outcome.roots) {
    os << "no roots: " << outcome.message << '\n';
    return os.str();
  }
  std::snprintf(buf, sizeof buf, "r = %.9g\n", outcome.roots->r);
  os << buf;
  os << "Root   Prevalence  C1.alpha  C2.alpha  C3.alpha  C1.beta   C2.beta   C3.beta   "
        "Residual    Physical\n";
  for (RootChoice c : {RootChoice::a, RootChoice::b}) {
    const SolverRoot &r = (*outcome.roots)[c];
    const bool sel = outcome.selected && *outcome.selected == c;
    std::snprintf(buf, sizeof buf, "%s%s     %-10.6f  %-8.6f  %-8.6f  %-8.6f  %-8.6f  %-8.6f  %-8.6f  %-10.3e  %s\n",
                  to_string(c), sel ? "*" : " ", r.stats.prevalence_alpha, r.stats.acc_alpha[0],
                  r.stats.acc_alpha[1], r.stats.acc_alpha[2], r.stats.acc_beta[0],
                  r.stats.acc_beta[1], r.stats.acc_beta[2], r.residual,
                  r.physical ? (r.clamped ? "yes (clamped)" : "yes") : "NO");
    os << buf;
    for (const auto &pv : unphysical_report(r, tol.phys)) {
      std::snprintf(buf, sizeof buf, "      unphysical %s = %.6f\n", pv.parameter.c_str(), pv.value);
      os << buf;
    }
  }
  if (!outcome.alarms.empty()) {
    os << "alarms:";
    for (Alarm a : outcome.alarms) os << ' ' << to_string(a);
    os << '\n';
  }
  return os.str();
}

json triplet_report_to_json(const TripletReport &report) {
  json j;
  j["version"] = 1;
  j["n"] = report.ensemble_size;
  j["total"] = report.total_items;
  j["policy"] = describe(report.policy);
  j["triplets"] = json::array();
  for (std::size_t t = 0; t < report.triplets.size(); ++t) {
    const auto &entry = report.triplets[t];
    const SolverRoot *root = entry.outcome.selected_root();
    json row;
    row["classifiers"] = {entry.classifiers[0] + 1, entry.classifiers[1] + 1,
                          entry.classifiers[2] + 1};
    row["prevalence"] = report.prevalence_estimates[t] ? json(*report.prevalence_estimates[t])
                                                       : json(nullptr);
    json acc_a = json::array(), acc_b = json::array();
    for (int c = 0; c < report.ensemble_size; ++c) {
      const auto &m = entry.classifiers;
      const auto it = std::find(m.begin(), m.end(), c);
      if (it == m.end() || !root) {
        acc_a.push_back(nullptr);
        acc_b.push_back(nullptr);
      } else {
        acc_a.push_back(root->stats.acc_alpha[it - m.begin()]);
        acc_b.push_back(root->stats.acc_beta[it - m.begin()]);
      }
    }
    row["acc_alpha"] = acc_a;
    row["acc_beta"] = acc_b;
    row["outcome"] = outcome_to_json(entry.outcome, SolveTolerances::for_sample(report.total_items));
    j["triplets"].push_back(row);
  }
  j["spread"] = {{"prevalence", report.spread.prevalence},
                 {"acc_alpha", report.spread.acc_alpha},
                 {"acc_beta", report.spread.acc_beta}};
  j["consensus_prevalence"] =
      report.solved_count() ? json(report.consensus_prevalence()) : json(nullptr);
  j["consistency_score"] =
      report.solved_count() >= 2 ? json(consistency_score(report)) : json(nullptr);
  return j;
}

json eval_report_to_json(const EvalReport &report, const SelectionPolicy &policy) {
  json j;
  j["version"] = 1;
  j["policy"] = describe(policy);
  j["true"] = stats_to_json(report.true_stats);
  j["realized_gamma"] = json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = i + 1; k < 3; ++k) {
      json g{{"pair", {i + 1, k + 1}}};
      for (Label l : {Label::alpha, Label::beta}) {
        const auto &v = report.realized_gamma.at(i, k, l);
        g[to_string(l)] = v ? json(*v) : json(nullptr);
      }
      j["realized_gamma"].push_back(g);
    }
  j["sketch"] = sketch_to_json(report.sketch);
  j["tolerances"] = tolerances_to_json(report.tolerances);
  j.update(outcome_to_json(report.outcome, report.tolerances));
  const SolverRoot *root = report.estimated();
  j["estimated"] = root ? stats_to_json(root->stats) : json(nullptr);
  j["errors"] = report.errors ? stats_to_json(*report.errors) : json(nullptr);
  return j;
}

}  // namespace agti::io
