#pragma once

// File formats. Decision and ID streams are delimited text with a header
// line; sketches, specs and reports are JSON documents.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "agti/ensemble.hpp"
#include "agti/sketch.hpp"
#include "agti/solver.hpp"
#include "agti/synth.hpp"

namespace agti::io {

using nlohmann::json;

struct LabelTokens {
  std::string alpha = "alpha";
  std::string beta = "beta";

  // "a,b" -> {a, b}. Throws std::invalid_argument.
  static LabelTokens parse(const std::string &pair);
};

// Header "c1,...,cn[,truth]"; a last column named "truth" makes the stream
// labeled. Errors are MalformedInput carrying the 1-based file line.
DecisionStream read_decisions(std::istream &in, const LabelTokens &tokens = {},
                              char delimiter = ',');
void write_decisions(std::ostream &out, const DecisionStream &stream,
                     const LabelTokens &tokens = {}, char delimiter = ',');

// Header names the systems; one opaque token per system per line.
IdStream read_ids(std::istream &in, char delimiter = ',');
void write_ids(std::ostream &out, const IdStream &ids, char delimiter = ',');

json sketch_to_json(const PatternSketch &s);
PatternSketch sketch_from_json(const json &j);
void write_sketch(std::ostream &out, const PatternSketch &s);
PatternSketch read_sketch(std::istream &in);

// Classifier numbers in the document are 1-based.
json spec_to_json(const GeneratorSpec &spec);
GeneratorSpec spec_from_json(const json &j);
GeneratorSpec read_spec(std::istream &in);

json stats_to_json(const GroundTruthStats<double> &s);
json root_to_json(const SolverRoot &root, double tol_phys);
json moments_to_json(const Moments &m);
json outcome_to_json(const SolveOutcome &outcome, const SolveTolerances &tol);

json solve_report(const PatternSketch &sketch, const SolveOutcome &outcome,
                  const SelectionPolicy &policy, const SolveTolerances &tol);
std::string format_solve_table(const SolveOutcome &outcome, const SolveTolerances &tol);

json triplet_report_to_json(const TripletReport &report);
json eval_report_to_json(const EvalReport &report, const SelectionPolicy &policy);

// Pretty-printed JSON plus trailing newline; the canonical byte form.
std::string dump(const json &j);

}  // namespace agti::io
