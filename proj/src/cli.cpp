#include "agti/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "agti/ensemble.hpp"
#include "agti/io.hpp"
#include "agti/solver.hpp"
#include "agti/synth.hpp"

namespace agti::cli {

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string labels;
  std::string policy = "majority";
  std::string format = "json";
  std::string delimiter = ",";
  std::optional<double> tol_residual;
  std::optional<double> tol_degenerate;
  std::optional<double> tol_phys;
  std::optional<std::uint64_t> seed;
  bool binarize = false;
  bool exact = false;
};

class Session {
 public:
  Session(const Options &opt, std::istream &in, std::ostream &out)
      : opt_(opt), stdin_(in), stdout_(out) {}

  std::istream &input() {
    if (opt_.input == "-") return stdin_;
    file_in_ = std::make_unique<std::ifstream>(opt_.input);
    if (!*file_in_) throw IoError("cannot open '" + opt_.input + "' for reading");
    return *file_in_;
  }

  void emit(const std::string &text) {
    if (opt_.out.empty() || opt_.out == "-") {
      stdout_ << text;
      return;
    }
    std::ofstream f(opt_.out);
    if (!f) throw IoError("cannot open '" + opt_.out + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + opt_.out + "' failed");
  }

 private:
  const Options &opt_;
  std::istream &stdin_;
  std::ostream &stdout_;
  std::unique_ptr<std::ifstream> file_in_;
};

io::LabelTokens tokens(const Options &opt) {
  return opt.labels.empty() ? io::LabelTokens{} : io::LabelTokens::parse(opt.labels);
}

char delimiter(const Options &opt) {
  if (opt.delimiter == "\\t" || opt.delimiter == "tab") return '\t';
  if (opt.delimiter.size() != 1) throw std::invalid_argument("--delimiter must be one character");
  return opt.delimiter[0];
}

SolveTolerances tolerances(const Options &opt, SolveTolerances base) {
  if (opt.tol_residual) base.residual = *opt.tol_residual;
  if (opt.tol_degenerate) base.degenerate = *opt.tol_degenerate;
  if (opt.tol_phys) base.phys = *opt.tol_phys;
  return base;
}

int status_for(const SolveOutcome &outcome) {
  if (outcome.has_alarm(Alarm::degenerate)) return kDegenerate;
  if (outcome.has_alarm(Alarm::independence_violation)) return kIndependenceViolation;
  if (outcome.has_alarm(Alarm::unphysical) || outcome.has_alarm(Alarm::residual)) return kUnphysical;
  if (outcome.has_alarm(Alarm::ambiguous_selection)) return kAmbiguous;
  return kOk;
}

int cmd_tally(const Options &opt, Session &s) {
  const DecisionStream stream = io::read_decisions(s.input(), tokens(opt), delimiter(opt));
  s.emit(io::dump(io::sketch_to_json(tally(stream))));
  return kOk;
}

int cmd_solve(const Options &opt, Session &s) {
  const PatternSketch sketch = io::read_sketch(s.input());
  if (sketch.ensemble_size() != 3)
    throw InsufficientEnsemble("solve needs a three-classifier sketch; use triplets for n = " +
                               std::to_string(sketch.ensemble_size()));
  if (sketch.total() == 0) throw EmptySketch("cannot solve an empty sketch");
  const SelectionPolicy policy = parse_policy(opt.policy);
  const SolveTolerances tol = tolerances(opt, SolveTolerances::for_sample(sketch.total()));
  const SolveOutcome outcome = solve_and_select(frequencies_real(sketch), policy, tol);
  if (opt.format == "table")
    s.emit(io::format_solve_table(outcome, tol));
  else
    s.emit(io::dump(io::solve_report(sketch, outcome, policy, tol)));
  return status_for(outcome);
}

int cmd_triplets(const Options &opt, Session &s) {
  const DecisionStream stream =
      opt.binarize ? binarize_ids(io::read_ids(s.input(), delimiter(opt)))
                   : io::read_decisions(s.input(), tokens(opt), delimiter(opt));
  const PatternSketch sketch = tally(stream);
  const SelectionPolicy policy = parse_policy(opt.policy);
  std::optional<SolveTolerances> tol;
  if (opt.tol_residual || opt.tol_degenerate || opt.tol_phys)
    tol = tolerances(opt, SolveTolerances::for_sample(sketch.total()));
  const TripletReport report = triplet_sweep(sketch, policy, tol);
  if (opt.format == "table") {
    std::ostringstream os;
    os << format_triplet_table(report);
    if (report.solved_count() >= 2) os << "consistency score: " << consistency_score(report) << '\n';
    if (report.solved_count() >= 1)
      os << "consensus prevalence: " << report.consensus_prevalence() << " (unique count estimate "
         << unique_count_estimate(report, report.total_items) << ")\n";
    s.emit(os.str());
  } else {
    s.emit(io::dump(io::triplet_report_to_json(report)));
  }
  return kOk;
}

int cmd_binarize(const Options &opt, Session &s) {
  const DecisionStream stream = binarize_ids(io::read_ids(s.input(), delimiter(opt)));
  std::ostringstream os;
  io::write_decisions(os, stream, tokens(opt), delimiter(opt));
  s.emit(os.str());
  return kOk;
}

GeneratorSpec load_spec(const Options &opt, Session &s) {
  GeneratorSpec spec = io::read_spec(s.input());
  if (opt.seed) spec.seed = *opt.seed;
  return spec;
}

int cmd_simulate(const Options &opt, Session &s) {
  const GeneratorSpec spec = load_spec(opt, s);
  std::ostringstream os;
  io::write_decisions(os, generate(spec), tokens(opt), delimiter(opt));
  s.emit(os.str());
  return kOk;
}

int cmd_evaluate(const Options &opt, Session &s) {
  const GeneratorSpec spec = load_spec(opt, s);
  const SelectionPolicy policy = parse_policy(opt.policy);
  const EvalReport report =
      opt.exact ? evaluate_exact(spec, policy, tolerances(opt, SolveTolerances{}))
                : evaluate(spec, policy,
                           (opt.tol_residual || opt.tol_degenerate || opt.tol_phys)
                               ? std::optional(tolerances(opt, SolveTolerances::for_sample(spec.sample_size)))
                               : std::nullopt);
  if (opt.format == "table")
    s.emit(format_eval_table(report));
  else
    s.emit(io::dump(io::eval_report_to_json(report, policy)));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
        std::ostream &err) {
  Options opt;
  CLI::App app{"Ground-truth-free accuracy estimation for binary classifier ensembles", "agti"};
  app.require_subcommand(1);

  auto add_io = [&](CLI::App *sub, const std::string &what) {
    sub->add_option("input", opt.input, what + " (\"-\" for stdin)")->required();
    sub->add_option("--out,-o", opt.out, "Output path (default stdout)");
    sub->add_option("--delimiter", opt.delimiter, "Field delimiter for delimited text");
  };
  auto add_labels = [&](CLI::App *sub) {
    sub->add_option("--labels", opt.labels, "Tokens for alpha and beta, e.g. yes,no");
  };
  auto add_solver = [&](CLI::App *sub) {
    sub->add_option("--policy", opt.policy, "Root selection: majority | prior=<p> | manual=<a|b>");
    sub->add_option("--tol-residual", opt.tol_residual, "Residual acceptance bound");
    sub->add_option("--tol-degenerate", opt.tol_degenerate, "Minimum |pair covariance|");
    sub->add_option("--tol-phys", opt.tol_phys, "Slack outside [0,1] before a value is unphysical");
    sub->add_option("--format", opt.format, "json | table")->check(CLI::IsMember({"json", "table"}));
  };

  auto *tally_cmd = app.add_subcommand("tally", "Tally a decisions file into a pattern sketch");
  add_io(tally_cmd, "Decisions file");
  add_labels(tally_cmd);

  auto *solve_cmd = app.add_subcommand("solve", "Solve a three-classifier sketch");
  add_io(solve_cmd, "Sketch file");
  add_solver(solve_cmd);

  auto *triplets_cmd = app.add_subcommand("triplets", "Solve every classifier triplet");
  add_io(triplets_cmd, "Decisions file, or ID file with --binarize");
  add_labels(triplets_cmd);
  add_solver(triplets_cmd);
  triplets_cmd->add_flag("--binarize", opt.binarize, "Input is an ID file; map to new/old first");

  auto *binarize_cmd = app.add_subcommand("binarize", "Map an ID file to new/old decisions");
  add_io(binarize_cmd, "ID file");
  add_labels(binarize_cmd);

  auto *simulate_cmd = app.add_subcommand("simulate", "Generate a labeled decisions file");
  add_io(simulate_cmd, "Generator spec");
  add_labels(simulate_cmd);
  simulate_cmd->add_option("--seed", opt.seed, "Override the spec seed");

  auto *evaluate_cmd = app.add_subcommand("evaluate", "Simulate, solve and score against truth");
  add_io(evaluate_cmd, "Generator spec");
  add_solver(evaluate_cmd);
  evaluate_cmd->add_option("--seed", opt.seed, "Override the spec seed");
  evaluate_cmd->add_flag("--exact", opt.exact, "Solve the exact model frequencies, no sampling");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "agti: " << e.what() << '\n';
    return kUsage;
  }

  Session session(opt, in, out);
  try {
    if (*tally_cmd) return cmd_tally(opt, session);
    if (*solve_cmd) return cmd_solve(opt, session);
    if (*triplets_cmd) return cmd_triplets(opt, session);
    if (*binarize_cmd) return cmd_binarize(opt, session);
    if (*simulate_cmd) return cmd_simulate(opt, session);
    if (*evaluate_cmd) return cmd_evaluate(opt, session);
  } catch (const IoError &e) {
    err << "agti: " << e.what() << '\n';
    return kIoError;
  } catch (const MalformedInput &e) {
    err << "agti: " << e.what() << '\n';
    return kParseError;
  } catch (const SpecError &e) {
    err << "agti: " << e.what() << '\n';
    return kParseError;
  } catch (const NormalizationError &e) {
    err << "agti: " << e.what() << '\n';
    return kParseError;
  } catch (const std::invalid_argument &e) {
    err << "agti: " << e.what() << '\n';
    return kUsage;
  } catch (const InsufficientEnsemble &e) {
    err << "agti: " << e.what() << '\n';
    return kInsufficient;
  } catch (const EmptySketch &e) {
    err << "agti: " << e.what() << '\n';
    return kInsufficient;
  } catch (const std::exception &e) {
    err << "agti: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace agti::cli
