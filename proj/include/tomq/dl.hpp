#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace tomq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedAxiom : Error {
  using Error::Error;
};
struct NotTreeShaped : Error {
  using Error::Error;
};

struct Role {
  std::string name;
  bool inverse = false;

  Role inv() const { return Role{name, !inverse}; }
  std::string str() const { return inverse ? name + "-" : name; }
  auto operator<=>(const Role&) const = default;
};

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;

  bool empty() const { return concepts.empty() && roles.empty(); }
  void merge(const Signature& o);
  auto operator<=>(const Signature&) const = default;
};

// Basic concept: Top, a concept name, or an unqualified existential.
struct Basic {
  enum Kind { Top, Name, Exists } kind = Top;
  std::string name;
  Role role;

  static Basic top() { return {}; }
  static Basic named(std::string n) { return {Name, std::move(n), {}}; }
  static Basic exists(Role r) { return {Exists, "", std::move(r)}; }
  auto operator<=>(const Basic&) const = default;
};

// Concept-name slots below use the empty string for Top.
struct SubBasic {
  Basic lhs, rhs;
  auto operator<=>(const SubBasic&) const = default;
};
struct Disjoint {
  Basic lhs, rhs;
  auto operator<=>(const Disjoint&) const = default;
};
struct Func {
  Role role;
  auto operator<=>(const Func&) const = default;
};
struct RoleSub {
  Role sub, sup;
  auto operator<=>(const RoleSub&) const = default;
};
struct ExistsRHS {  // A [= ex R . B
  std::string lhs;
  Role role;
  std::string filler;
  auto operator<=>(const ExistsRHS&) const = default;
};
struct ExistsLHS {  // ex R . A [= B
  Role role;
  std::string filler;
  std::string rhs;
  auto operator<=>(const ExistsLHS&) const = default;
};
struct ConjLHS {  // A & B [= C, or bot when bottom is set
  std::string a, b;
  std::string rhs;
  bool bottom = false;
  auto operator<=>(const ConjLHS&) const = default;
};

using Axiom = std::variant<SubBasic, Disjoint, Func, RoleSub, ExistsRHS, ExistsLHS, ConjLHS>;

enum class Dialect { DLLiteH, DLLiteF, DLLiteFminus, ELHIFbotNF };

std::string dialect_name(Dialect d);

struct Ontology {
  Signature signature;
  std::vector<Axiom> axioms;
  Dialect dialect = Dialect::ELHIFbotNF;

  // Throws UnsupportedAxiom naming the first axiom the dialect excludes.
  void validate() const;
  bool has_func() const;
  bool empty() const { return axioms.empty(); }
  // Adds the names used by the axioms to the signature.
  void close_signature();
};

struct DataInstance {
  std::set<std::string> individuals;
  std::set<std::pair<std::string, std::string>> concept_atoms;              // (A, a)
  std::set<std::tuple<std::string, std::string, std::string>> role_atoms;  // (P, a, b)

  void add_individual(const std::string& a) { individuals.insert(a); }
  void add_concept(const std::string& c, const std::string& a);
  // Inverse roles are stored flipped.
  void add_role(const Role& r, const std::string& a, const std::string& b);
  void merge(const DataInstance& o);
  size_t atom_count() const { return concept_atoms.size() + role_atoms.size(); }
  bool trivial() const { return atom_count() == 0; }
  Signature signature() const;
  DataInstance rename(const std::map<std::string, std::string>& m) const;
  DataInstance restrict_to(const std::set<std::string>& keep) const;
  std::set<std::string> concepts_of(const std::string& a) const;
  auto operator<=>(const DataInstance&) const = default;
};

struct PointedInstance {
  DataInstance instance;
  std::string point;
  auto operator<=>(const PointedInstance&) const = default;
};

struct EliqEdge;

// Tree-shaped query. Top is the empty conjunction; bottom is the inconsistency query.
struct Eliq {
  bool bottom = false;
  std::vector<std::string> concepts;
  std::vector<EliqEdge> edges;

  static Eliq top() { return {}; }
  static Eliq bot() {
    Eliq q;
    q.bottom = true;
    return q;
  }
  static Eliq atom(const std::string& a) {
    Eliq q;
    q.concepts.push_back(a);
    return q;
  }
  static Eliq exists(const Role& r, Eliq child);

  bool is_top() const;
  size_t size() const;
  int role_depth() const;
  bool is_propositional() const { return !bottom && edges.empty(); }
  bool is_elq() const;
  void canonicalize();
  Signature signature() const;
  std::string str() const;
};

struct EliqEdge {
  Role role;
  Eliq child;
};

std::strong_ordering operator<=>(const Eliq& a, const Eliq& b);
bool operator==(const Eliq& a, const Eliq& b);
std::strong_ordering operator<=>(const EliqEdge& a, const EliqEdge& b);
bool operator==(const EliqEdge& a, const EliqEdge& b);

// Model-building reasoner for the supported Horn dialects. With unique_names the
// individuals of the instance are distinct constants; otherwise functional
// clashes between them are resolved by identification (used to build hats).
class Entailer {
 public:
  Entailer(const Ontology& o, const DataInstance& a, bool unique_names = true);
  ~Entailer();
  Entailer(Entailer&&) noexcept;
  Entailer& operator=(Entailer&&) noexcept;

  bool consistent() const;
  bool entails(const std::string& ind, const Eliq& q) const;
  // Named part with every derived concept and role atom.
  DataInstance saturated() const;
  // Bounded unravelling of the model up to the given distance from named individuals.
  DataInstance chase(int depth) const;
  // Representative of each named individual after identifications.
  std::map<std::string, std::string> representatives() const;
  size_t node_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::optional<DataInstance> saturate(const Ontology& o, const DataInstance& a);
DataInstance chase(const Ontology& o, const DataInstance& a, int depth);
bool certain_answer(const Ontology& o, const DataInstance& a, const std::string& ind, const Eliq& q);
bool consistent(const Ontology& o, const DataInstance& a);

// Induced instance of q: root becomes "a", other variables x1, x2, ... in preorder.
PointedInstance induced_instance(const Eliq& q);
PointedInstance hat(const Ontology& o, const Eliq& q);
// Variable map of the induced instance onto hat(o, q).
std::map<std::string, std::string> hat_projection(const Ontology& o, const Eliq& q);

bool satisfiable(const Ontology& o, const Eliq& q);
bool contains(const Ontology& o, const Eliq& q1, const Eliq& q2);
bool equivalent(const Ontology& o, const Eliq& q1, const Eliq& q2);
Eliq conjoin(const Eliq& q1, const Eliq& q2);
Eliq conjoin_all(const std::vector<Eliq>& qs);
bool compatible(const Ontology& o, const Eliq& q1, const Eliq& q2);
bool hom_exists(const Eliq& q, const DataInstance& a, const std::string& ind);
Eliq instance_to_eliq(const DataInstance& a, const std::string& ind);
bool is_tree_shaped(const DataInstance& a, const std::string& ind);

// Pointed instance homomorphism check (instance read as a conjunctive query).
bool instance_hom(const PointedInstance& from, const PointedInstance& to);

}  // namespace tomq
