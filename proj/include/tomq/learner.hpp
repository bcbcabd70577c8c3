#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tomq/characterise.hpp"
#include "tomq/domain.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

struct BudgetExceeded : Error {
  using Error::Error;
};
struct NotPositiveInitialExample : Error {
  using Error::Error;
};

// Simulated oracle answering membership queries for a hidden target.
class Teacher {
 public:
  Teacher(Ontology o, PathQuery target);

  // Truthful answer for the instance pointed at d.point; unsatisfiable instances answer yes.
  bool membership(const TemporalInstance& d);
  size_t membership_count() const { return count_; }
  size_t max_query_size() const { return max_size_; }
  // Queries beyond this many in total throw BudgetExceeded.
  void set_budget(size_t total) { budget_ = total; }
  void record_transcript(bool on) { recording_ = on; }
  // One line per query: inline instance, answer, running count.
  const std::vector<std::string>& transcript() const { return transcript_; }
  const Ontology& ontology() const { return o_; }

 private:
  Ontology o_;
  PathQuery target_;
  size_t count_ = 0;
  size_t max_size_ = 0;
  size_t budget_ = static_cast<size_t>(-1);
  bool recording_ = false;
  std::vector<std::string> transcript_;
};

enum class LearnerVariant { SafeOnly, KnownDepth, NextDiamondOnly };

struct LearnerConfig {
  LearnerVariant variant = LearnerVariant::SafeOnly;
  int depth = 0;            // KnownDepth: temporal depth of the target
  int frontier_bound = 5;   // size bound of the verified frontier search
  size_t budget = 100000;   // membership queries for one run
  int exponent_cap = 64;    // largest exponent tried by the (*) search
  int star_limit = 64;      // successful (*) or (*') applications per run
  // Called after every accepted change with the new instance and the step name.
  std::function<void(const TemporalInstance&, const std::string&)> on_change;
};

struct LearnStats {
  size_t membership_queries = 0;
  size_t max_query_size = 0;
  int b = 0;
  int minimise = 0;
  int unwind = 0;
  int dropped = 0;
  int rule_a = 0;
  int rule_b = 0;
  int rule_c = 0;
  int rule_d = 0;
  int rule_e = 0;
  int star = 0;
};

struct LearnResult {
  PathQuery query;
  LearnStats stats;
  std::vector<std::string> log;  // one line per accepted change
};

// Outcome of one sub-operation: whether the instance changed and the queries it used.
struct StepOutcome {
  bool changed = false;
  size_t queries = 0;
};

// Learner state with the individual steps exposed for step-level testing.
class Learner {
 public:
  Learner(const Ontology& o, Teacher& teacher, LearnerConfig cfg, Signature sigma);

  // Starts from a positive example; the point is renamed to "a".
  void reset(const TemporalInstance& initial);
  const TaggedBNormal& state() const { return t_; }
  void set_state(TaggedBNormal t) { t_ = std::move(t); }
  TemporalInstance instance() const { return t_.instance(); }
  const LearnStats& stats() const { return stats_; }
  const std::vector<std::string>& log() const { return log_; }

  // Step 1
  StepOutcome minimise_step();
  StepOutcome minimise_all();
  StepOutcome unwind_step();
  StepOutcome treeify();
  // Step 2
  StepOutcome drop_timepoint_step();
  StepOutcome drop_timepoints();
  // Step 3: first successful application of the rule, followed by exhaustive Minimise.
  StepOutcome apply_rule3(Rule r);
  StepOutcome close_rules();
  // Step 4: one application of (*), or of (*') with the given exponent.
  StepOutcome star_step();
  StepOutcome star_prime_step(int exponent);
  StepOutcome lone_conjuncts();
  // Step 5
  std::vector<std::vector<Rel>> infer_connectors(size_t* queries = nullptr);
  PathQuery result(const std::vector<std::vector<Rel>>& connectors) const;

 private:
  bool ask(const TemporalInstance& d);
  bool ask(const TaggedBNormal& t) { return ask(t.instance()); }
  void accept(TaggedBNormal t, const std::string& step);
  TaggedSlice retag(DataInstance d) const;
  std::optional<std::vector<Eliq>> minimal_frontier_of(const Eliq& s);
  void shorten_gaps();
  // Strips trivial border slices into the gaps, drops trivial blocks and resets every gap to b.
  TaggedBNormal renormalize(TaggedBNormal t) const;

  const Ontology& o_;
  Teacher& teacher_;
  LearnerConfig cfg_;
  Signature sigma_;
  DomainClass cls_;
  NegativeSupplier neg_;
  TaggedBNormal t_;
  LearnStats stats_;
  std::vector<std::string> log_;
  std::map<Eliq, std::optional<std::vector<Eliq>>> frontiers_;
  bool normal_ = false;  // set once b is fixed
};

// Runs Steps 1 to 5 and returns a query equivalent to the target.
LearnResult learn(const Ontology& o, Teacher& teacher, const TemporalInstance& initial, const LearnerConfig& cfg);

// Tree-unfolding of one slice along a role atom lying on a cycle.
DataInstance unwind_slice(const DataInstance& d, const std::tuple<std::string, std::string, std::string>& atom);
// First role atom, in atom order, that lies on a cycle.
std::optional<std::tuple<std::string, std::string, std::string>> cycle_atom(const DataInstance& d);

}  // namespace tomq
