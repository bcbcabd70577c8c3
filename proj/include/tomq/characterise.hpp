#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tomq/domain.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

struct UnsafeQuery : Error {
  using Error::Error;
};
struct NoNegativesAvailable : Error {
  using Error::Error;
};
struct NotPeerless : Error {
  using Error::Error;
};
struct NotPropositional : Error {
  using Error::Error;
};
struct TrailingTopTarget : Error {
  using Error::Error;
};
struct RuleNotApplicable : Error {
  using Error::Error;
};

// One non-gap slice pointed at "a": the hat of `source`, or an untagged
// instance (a negative that is not tree-shaped).
struct TaggedSlice {
  DataInstance data;
  std::optional<Eliq> source;
};

// b-normal instance kept as blocks of tagged slices with the gap lengths between them.
struct TaggedBNormal {
  std::vector<std::vector<TaggedSlice>> blocks;
  std::vector<int> gaps;  // gaps[i] empty slices between block i and block i+1
  int b = 1;

  TemporalInstance instance() const;
  // Block and offset of every timestamp that carries a slice.
  std::vector<std::pair<int, int>> positions() const;
};

// Singular+ negatives N_s for domain queries, computed once per query.
class NegativeSupplier {
 public:
  NegativeSupplier(const Ontology& o, const Signature& sigma, NegativesConfig cfg = {}, int reducibility_bound = 6);
  const std::vector<PointedInstance>& operator()(const Eliq& s);
  bool meet_reducible(const Eliq& s);
  // Provenance of every query supplied so far.
  const std::map<Eliq, Provenance>& provenance() const { return prov_; }

 private:
  const Ontology& o_;
  Signature sigma_;
  NegativesConfig cfg_;
  int bound_;
  std::map<Eliq, std::vector<PointedInstance>> cache_;
  std::map<Eliq, bool> reducible_;
  std::map<Eliq, Provenance> prov_;
};

TaggedSlice tagged_slice(const Ontology& o, const Eliq& s);
TaggedBNormal tagged_from_query(const Ontology& o, const PathQuery& q, int b);

enum class Rule { A, B, C, D, E, F };
std::string rule_name(Rule r);

struct RuleSite {
  int block = 0;
  int offset = 0;
  int choice = 0;  // N-member for (a), (d), (e); (d) uses the last-slice form when offset > 0
};

// Applies one rule at one site; throws RuleNotApplicable when the side conditions fail.
// For (f_n) the repetition count is `reps`.
TaggedBNormal apply_rule(const Ontology& o, const TaggedBNormal& t, Rule rule, const RuleSite& site,
                         NegativeSupplier& neg, int reps = 1);
// Every site at which the rule applies, in block, offset, choice order.
std::vector<RuleSite> rule_sites(const Ontology& o, const TaggedBNormal& t, Rule rule, NegativeSupplier& neg);

enum class DiaMode { SafeOnly, BoundedDepth, NextDiamondOnly };

struct DiaConfig {
  DiaMode mode = DiaMode::SafeOnly;
  int depth = 0;          // BoundedDepth: temporal depth bound of the class
  int safety_bound = 6;   // size bound for meet-reducibility tests
  NegativesConfig negatives;
};

struct CharacteriseInfo {
  int b = 0;
  int dropped_negatives = 0;  // negatives equal to a positive
  std::vector<std::string> notes;
};

ExampleSet characterise_dia(const Ontology& o, const PathQuery& q, const Signature& sigma, const DiaConfig& cfg,
                            CharacteriseInfo* info = nullptr);

ExampleSet characterise_prop_until(const UntilQuery& q, const Signature& sigma, CharacteriseInfo* info = nullptr);

struct UntilConfig {
  size_t tuple_cap = 64;  // S_bot tuples tried per negative form
  size_t atom_budget = 1000000;
};

ExampleSet characterise_until(const Ontology& o, const UntilQuery& q, const Signature& sigma,
                              const UntilConfig& cfg = {}, CharacteriseInfo* info = nullptr);

}  // namespace tomq
