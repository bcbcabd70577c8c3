// Command-line front end: reasoning, characterisation, learning and verification.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "tomq/characterise.hpp"
#include "tomq/domain.hpp"
#include "tomq/io.hpp"
#include "tomq/learner.hpp"
#include "tomq/verifier.hpp"

using namespace tomq;

namespace {

enum Exit { Ok = 0, Negative = 1, Usage = 2, Unsupported = 3 };

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string ontology, query, sigma, cls, mode = "safe", target, data, examples, out, transcript;
  int bound = -1;
  int body = 2;
  size_t budget = 100000;
  unsigned seed = 0;
  bool json = false;
};

std::string load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot read " + path);
  return read_file(path);
}

Ontology load_ontology(const Options& op) {
  if (op.ontology.empty()) return Ontology{};
  return parse_ontology(load(op.ontology));
}

std::string need(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError(flag + " is required");
  return load(value);
}

Signature sigma_for(const Options& op, Signature known) {
  if (op.sigma.empty()) return known;
  return parse_sigma(op.sigma, known);
}

DomainClass domain_class(const std::string& c, const Signature& s) {
  if (c == "p") return DomainClass::P;
  if (c == "elq") return DomainClass::ELQ;
  if (c == "eliq") return DomainClass::ELIQ;
  if (c.empty()) return s.roles.empty() ? DomainClass::P : DomainClass::ELIQ;
  throw UsageError("--class must be p, elq or eliq here");
}

bool is_temporal_class(const std::string& c) { return c == "dia" || c == "nextdia" || c == "until"; }

std::vector<Eliq> eliq_lines(const std::string& text) {
  std::vector<Eliq> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_eliq(line));
  return out;
}

void emit(const Options& op, const std::string& text) {
  if (op.out.empty())
    std::cout << text;
  else
    write_file(op.out, text);
}

// Parses --mode into a characterisation config.
DiaConfig dia_config(const Options& op) {
  DiaConfig cfg;
  if (op.mode == "safe") {
    cfg.mode = DiaMode::SafeOnly;
  } else if (op.mode == "nextdiamond") {
    cfg.mode = DiaMode::NextDiamondOnly;
  } else if (op.mode.rfind("depth=", 0) == 0) {
    cfg.mode = DiaMode::BoundedDepth;
    cfg.depth = std::stoi(op.mode.substr(6));
  } else {
    throw UsageError("--mode must be safe, depth=N or nextdiamond");
  }
  if (op.bound > 0) cfg.negatives.frontier_bound = op.bound;
  return cfg;
}

int cmd_entail(const Options& op) {
  Ontology o = load_ontology(op);
  TemporalInstance d = parse_tinstance(need(op.data, "--data"));
  std::string qt = need(op.query, "--query");
  bool yes = op.cls == "until" ? tentail(o, d, 0, parse_untilquery(qt)) : tentail(o, d, 0, parse_pathquery(qt));
  std::cout << (yes ? "entailed" : "not entailed") << "\n";
  return yes ? Ok : Negative;
}

int cmd_normalform(const Options& op) {
  Ontology o = load_ontology(op);
  emit(op, print_pathquery(normalize(o, parse_pathquery(need(op.query, "--query")))) + "\n");
  return Ok;
}

int cmd_safe(const Options& op) {
  Ontology o = load_ontology(op);
  Tri t = is_safe(o, parse_pathquery(need(op.query, "--query")), op.bound > 0 ? op.bound : 6);
  std::cout << (t == Tri::True ? "safe" : t == Tri::False ? "unsafe" : "unknown within bound") << "\n";
  return t == Tri::True ? Ok : t == Tri::False ? Negative : Unsupported;
}

int cmd_frontier(const Options& op) {
  Ontology o = load_ontology(op);
  Eliq q = parse_eliq(need(op.query, "--query"));
  Signature s = sigma_for(op, working_signature(o, q));
  auto f = frontier(o, q, domain_class(op.cls, s), op.bound > 0 ? op.bound : 4, s);
  if (!f) {
    std::cerr << "no verified frontier within the bound\n";
    return Unsupported;
  }
  std::string text;
  for (const auto& m : minimal_frontier(o, *f).members) text += print_eliq(m) + "\n";
  emit(op, text);
  return Ok;
}

int cmd_split_partner(const Options& op) {
  Ontology o = load_ontology(op);
  std::vector<Eliq> qs = eliq_lines(need(op.query, "--query"));
  Signature known = o.signature;
  for (const auto& q : qs) known.merge(working_signature(o, q));
  SplitPartner s = split_partner(o, sigma_for(op, known), qs);
  std::string text;
  for (const auto& m : s.members) text += print_pointed(m) + "\n";
  emit(op, text);
  return Ok;
}

int cmd_characterise(const Options& op) {
  Ontology o = load_ontology(op);
  std::string qt = need(op.query, "--query");
  ExampleSet ex;
  if (op.cls == "until") {
    UntilQuery q = parse_untilquery(qt);
    Signature known = o.signature;
    known.merge(q.signature());
    ex = characterise_until(o, q, sigma_for(op, known));
  } else {
    PathQuery q = parse_pathquery(qt, op.cls != "nextdia");
    Signature known = o.signature;
    known.merge(q.signature());
    DiaConfig cfg = dia_config(op);
    if (op.cls == "nextdia") cfg.mode = DiaMode::NextDiamondOnly;
    ex = characterise_dia(o, q, sigma_for(op, known), cfg);
  }
  emit(op, print_exampleset(ex));
  return Ok;
}

// Random extra concept atoms on the point, kept only while the instance stays consistent.
TemporalInstance add_noise(const Ontology& o, TemporalInstance d, const Signature& s, unsigned seed) {
  if (seed == 0 || s.concepts.empty()) return d;
  std::mt19937 rng(seed);
  std::vector<std::string> names(s.concepts.begin(), s.concepts.end());
  for (int i = 0; i < 3; ++i) {
    TemporalInstance c = d;
    c.slices[rng() % c.slices.size()].add_concept(names[rng() % names.size()], d.point);
    if (TContext(o, c).consistent()) d = std::move(c);
  }
  return d;
}

int cmd_learn(const Options& op) {
  Ontology o = load_ontology(op);
  PathQuery target = parse_pathquery(need(op.target, "--target"));
  LearnerConfig cfg;
  if (op.mode == "safe") {
    cfg.variant = LearnerVariant::SafeOnly;
  } else if (op.mode == "nextdiamond") {
    cfg.variant = LearnerVariant::NextDiamondOnly;
  } else if (op.mode.rfind("depth=", 0) == 0) {
    cfg.variant = LearnerVariant::KnownDepth;
    cfg.depth = std::stoi(op.mode.substr(6));
  } else {
    throw UsageError("--mode must be safe, depth=N or nextdiamond");
  }
  if (op.bound > 0) cfg.frontier_bound = op.bound;
  cfg.budget = op.budget;
  if (cfg.budget == 0) throw UsageError("--budget must be positive");

  TemporalInstance initial;
  if (!op.data.empty()) {
    initial = parse_tinstance(load(op.data));
  } else {
    PathQuery n = normalize(o, target);
    int b = n.count(Rel::Suc) + n.count(Rel::Less) + 1;
    Signature s = o.signature;
    s.merge(target.signature());
    initial = add_noise(o, tagged_from_query(o, n, b).instance(), sigma_for(op, s), op.seed);
  }
  Teacher teacher(o, target);
  teacher.record_transcript(!op.transcript.empty());
  int code = Ok;
  std::optional<LearnResult> r;
  try {
    r = learn(o, teacher, initial, cfg);
  } catch (const NotPositiveInitialExample& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = Negative;
  }
  if (!op.transcript.empty()) {
    std::string text;
    for (const auto& l : teacher.transcript()) text += l + "\n";
    write_file(op.transcript, text);
  }
  if (!r) return code;
  emit(op, print_pathquery(r->query) + "\n");
  if (op.json) {
    nlohmann::json j{{"query", print_pathquery(r->query)},
                     {"membership_queries", r->stats.membership_queries},
                     {"max_query_size", r->stats.max_query_size},
                     {"b", r->stats.b},
                     {"minimise", r->stats.minimise},
                     {"unwind", r->stats.unwind},
                     {"dropped", r->stats.dropped},
                     {"rules", {{"a", r->stats.rule_a}, {"b", r->stats.rule_b}, {"c", r->stats.rule_c},
                                {"d", r->stats.rule_d}, {"e", r->stats.rule_e}}},
                     {"star", r->stats.star}};
    std::cerr << j.dump() << "\n";
  }
  return Ok;
}

EnumSpec enum_spec(const Options& op, const Signature& s) {
  EnumSpec e;
  e.sigma = s;
  e.body_class = s.roles.empty() ? DomainClass::P : DomainClass::ELIQ;
  e.body_size = op.body;
  e.depth = op.bound > 0 ? op.bound : 2;
  if (op.cls == "until") {
    e.kind = EnumSpec::Until;
  } else if (op.cls == "dia" || op.cls == "nextdia" || op.cls.empty()) {
    e.kind = EnumSpec::Path;
    e.allow_leq = op.cls != "nextdia";
  } else {
    e.kind = EnumSpec::Domain;
    e.body_class = domain_class(op.cls, s);
    e.body_size = op.bound > 0 ? op.bound : 2;
  }
  return e;
}

int report(const Options& op, const Verdict& v) {
  if (op.json) {
    std::cout << nlohmann::json{{"pass", v.pass}, {"witnesses", v.witnesses}, {"note", v.note}}.dump() << "\n";
  } else {
    std::cout << (v.pass ? "pass" : "fail") << (v.note.empty() ? "" : " (" + v.note + ")") << "\n";
    for (const auto& w : v.witnesses) std::cout << "witness: " << w << "\n";
  }
  return v.pass ? Ok : Negative;
}

int cmd_verify(const Options& op) {
  Ontology o = load_ontology(op);
  std::string qt = need(op.query, "--query");
  ExampleSet ex = parse_exampleset(need(op.examples, "--examples"));
  if (op.cls == "until") {
    UntilQuery q = parse_untilquery(qt);
    Signature s = o.signature;
    s.merge(q.signature());
    return report(op, check_unique_characterisation(o, q, ex, enum_spec(op, sigma_for(op, s))));
  }
  PathQuery q = parse_pathquery(qt);
  Signature s = o.signature;
  s.merge(q.signature());
  if (!op.cls.empty() && !is_temporal_class(op.cls)) throw UsageError("--class must be dia, nextdia or until");
  return report(op, check_unique_characterisation(o, q, ex, enum_spec(op, sigma_for(op, s))));
}

int cmd_enumerate(const Options& op) {
  if (op.sigma.empty()) throw UsageError("--sigma is required");
  Signature s = parse_sigma(op.sigma, load_ontology(op).signature);
  EnumSpec e = enum_spec(op, s);
  std::string text;
  if (e.kind == EnumSpec::Domain) {
    for (const auto& q : enum_eliqs(s, e.body_class, e.body_size)) text += print_eliq(q) + "\n";
  } else if (e.kind == EnumSpec::Until) {
    for (const auto& q : enum_untilqueries(e)) text += print_untilquery(q) + "\n";
  } else {
    for (const auto& q : enum_pathqueries(e)) text += print_pathquery(q) + "\n";
  }
  emit(op, text);
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal ontology-mediated query characterisation and learning"};
  app.require_subcommand(1);
  Options op;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("--ontology", op.ontology, "ontology file (empty ontology when omitted)");
    c->add_option("--query", op.query, "query file");
    c->add_option("--sigma", op.sigma, "signature, comma separated");
    c->add_option("--class", op.cls, "p|elq|eliq|dia|nextdia|until");
    c->add_option("--mode", op.mode, "safe|depth=N|nextdiamond");
    c->add_option("--bound", op.bound, "size or depth bound");
    c->add_option("--body", op.body, "body size bound for enumeration");
    c->add_option("--target", op.target, "hidden target query of the teacher");
    c->add_option("--data", op.data, "temporal data instance file");
    c->add_option("--examples", op.examples, "example set file");
    c->add_option("--budget", op.budget, "membership query budget");
    c->add_option("--seed", op.seed, "seed for the random initial example");
    c->add_option("--out", op.out, "output file");
    c->add_option("--transcript", op.transcript, "membership query transcript file");
    c->add_flag("--json", op.json, "JSON summary");
    return c;
  };
  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> cmds{
      {add("entail", "does the instance entail the query at its point"), cmd_entail},
      {add("normalform", "normal form of a path query"), cmd_normalform},
      {add("safe", "safety of a path query"), cmd_safe},
      {add("frontier", "bounded verified frontier of an ELIQ"), cmd_frontier},
      {add("split-partner", "split partner of ELIQs, one per line"), cmd_split_partner},
      {add("characterise", "example set characterising a query"), cmd_characterise},
      {add("learn", "learn the target with membership queries"), cmd_learn},
      {add("verify", "check that an example set characterises a query"), cmd_verify},
      {add("enumerate", "enumerate queries of a class"), cmd_enumerate},
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }
  try {
    for (const auto& [c, run] : cmds)
      if (c->parsed()) return run(op);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return Usage;
  } catch (const UnsafeQuery& e) {
    std::cerr << "unsafe: " << e.what() << "\n";
    return Negative;
  } catch (const UnsatisfiableQuery& e) {
    std::cerr << "unsatisfiable: " << e.what() << "\n";
    return Negative;
  } catch (const Error& e) {
    // Dialect violations, missing frontiers, exhausted bounds and budgets.
    std::cerr << "unsupported: " << e.what() << "\n";
    return Unsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}
