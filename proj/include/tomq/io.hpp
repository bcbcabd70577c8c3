#pragma once

#include <string>

#include "tomq/dl.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col);
  int line = 0;
  int col = 0;
};

Ontology parse_ontology(const std::string& text);
std::string print_ontology(const Ontology& o);

Eliq parse_eliq(const std::string& text);
std::string print_eliq(const Eliq& q);

TFormula parse_formula(const std::string& text);
// Rejects branching formulas; with allow_leq=false also rejects Fr.
PathQuery parse_pathquery(const std::string& text, bool allow_leq = true);
std::string print_pathquery(const PathQuery& q);
PathQuery formula_to_path(const TFormula& f);

UntilQuery parse_untilquery(const std::string& text);
std::string print_untilquery(const UntilQuery& q);

TemporalInstance parse_tinstance(const std::string& text);
std::string print_tinstance(const TemporalInstance& d);
// One-line rendering used in transcripts.
std::string inline_tinstance(const TemporalInstance& d);

ExampleSet parse_exampleset(const std::string& text);
std::string print_exampleset(const ExampleSet& e);

PointedInstance parse_pointed(const std::string& text);
std::string print_pointed(const PointedInstance& p);

// Comma separated names; names used as roles by `known` are filed as roles.
Signature parse_sigma(const std::string& text, const Signature& known);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace tomq
