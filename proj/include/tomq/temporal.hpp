#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tomq/dl.hpp"

namespace tomq {

struct NotBNormal : Error {
  using Error::Error;
};

enum class Rel { Suc, Less, Leq };

// Sequence form: body i holds at t_i, rels[i] relates t_i and t_{i+1}.
struct PathQuery {
  std::vector<Eliq> bodies{Eliq::top()};
  std::vector<Rel> rels;

  static PathQuery single(Eliq q);
  int tdp() const { return static_cast<int>(rels.size()); }
  int count(Rel r) const;
  size_t size() const;
  bool only_propositional() const;
  Signature signature() const;
  std::string str() const;
  void canonicalize();
  auto operator<=>(const PathQuery&) const = default;
};

// Block form: suc-chains separated by connectors of < and <=.
struct BlockView {
  std::vector<std::vector<Eliq>> blocks;
  std::vector<std::vector<Rel>> connectors;  // connectors[i] sits between block i and block i+1
};

BlockView blocks_of(const PathQuery& q);
PathQuery from_blocks(const BlockView& v);
// Number of < in a connector, or 0 when it is a single <=.
int less_count(const std::vector<Rel>& c);

struct UntilStep {
  std::optional<Eliq> filler;  // nullopt is the bot filler
  Eliq target;
  auto operator<=>(const UntilStep&) const = default;
};

struct UntilQuery {
  Eliq head;
  std::vector<UntilStep> steps;

  int depth() const { return static_cast<int>(steps.size()); }
  size_t size() const;
  Signature signature() const;
  std::string str() const;
  auto operator<=>(const UntilQuery&) const = default;
};

// General formula tree for conjunctions of temporal operators.
struct TFormula {
  enum Op { Atom, And, Next, Dia, DiaR, Until } op = Atom;
  Eliq atom;
  std::vector<TFormula> kids;  // Until: kids[0] filler, kids[1] target

  static TFormula of(const Eliq& q) { return {Atom, q, {}}; }
  static TFormula unary(Op op, TFormula f) { return {op, {}, {std::move(f)}}; }
  static TFormula conj(std::vector<TFormula> fs) { return {And, {}, std::move(fs)}; }
  static TFormula until(TFormula l, TFormula r) { return {Until, {}, {std::move(l), std::move(r)}}; }
  int tdp() const;
  std::string str() const;
};

TFormula to_formula(const PathQuery& q);
TFormula to_formula(const UntilQuery& q);

struct TemporalInstance {
  std::vector<DataInstance> slices{DataInstance{}};
  std::string point = "a";

  int max() const { return static_cast<int>(slices.size()) - 1; }
  size_t size() const;
  std::set<std::string> individuals() const;
  // Slice t with every individual of the instance present.
  DataInstance slice(int t) const;
  Signature signature() const;
  // Keeps in each slice only the individuals that occur in an atom.
  void canonicalize();
  auto operator<=>(const TemporalInstance&) const = default;
};

TemporalInstance concat(const std::vector<TemporalInstance>& parts);
TemporalInstance empties(int n, const std::string& point = "a");
TemporalInstance single_slice(const PointedInstance& p, const std::string& point = "a");
// Renames the point of p to `point` and other individuals apart from it.
DataInstance align_point(const PointedInstance& p, const std::string& point);

// Per-instance evaluation context that caches slice reasoners and answers.
class TContext {
 public:
  TContext(const Ontology& o, const TemporalInstance& d);
  ~TContext();
  TContext(TContext&&) noexcept;
  bool consistent() const;
  // Entailment of q at slice t; t > max() reads the empty slice.
  bool holds(int t, const Eliq& q) const;
  // Truth values at positions 0..max()+1, the last standing for every later time.
  std::vector<char> eval(const TFormula& f) const;
  bool entails(const TFormula& f, int t = 0) const;
  const TemporalInstance& instance() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool tentail(const Ontology& o, const TemporalInstance& d, int t, const PathQuery& q);
bool tentail(const Ontology& o, const TemporalInstance& d, int t, const UntilQuery& q);
bool tentail(const Ontology& o, const TemporalInstance& d, int t, const TFormula& q);

using RootHom = std::vector<int>;
std::vector<RootHom> root_homs(const Ontology& o, const PathQuery& q, const TemporalInstance& d);

PathQuery normalize(const Ontology& o, const PathQuery& q);

enum class DomainClass { P, ELQ, ELIQ };
enum class Tri { False, True, Unknown };

DomainClass infer_class(const PathQuery& q);
Tri is_safe(const Ontology& o, const PathQuery& q, int bound, std::optional<DomainClass> cls = std::nullopt);
// Interior primitive block bodies of a query in normal form (candidates for lone conjuncts).
std::vector<size_t> interior_primitive_blocks(const BlockView& v);

bool is_peerless(const Ontology& o, const UntilQuery& q);
UntilQuery until_truncate(const UntilQuery& q, int i);

struct BlockDecomposition {
  std::vector<TemporalInstance> blocks;  // each block as its own instance
  std::vector<int> starts;               // starting timestamp of each block
  int b = 1;
};

// Empty slice test used by the b-normal form: no atoms beyond facts that follow from O alone.
bool slice_is_empty(const Ontology& o, const TemporalInstance& d, int t);
BlockDecomposition decompose_blocks(const Ontology& o, const TemporalInstance& d, int b);

struct ExampleSet {
  std::vector<TemporalInstance> positives;
  std::vector<TemporalInstance> negatives;
};

}  // namespace tomq
