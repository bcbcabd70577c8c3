#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomq/dl.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

struct UnsatisfiableQuery : Error {
  using Error::Error;
};
struct UnsupportedDialect : Error {
  using Error::Error;
};
struct SizeGuardExceeded : Error {
  using Error::Error;
};
struct NoCharacterisationFound : Error {
  using Error::Error;
};

struct Frontier {
  std::vector<Eliq> members;
};

// Candidate sets tried by the bounded frontier search, each with the first
// query that refuted it (empty witness when the set passed).
struct FrontierTrace {
  struct Attempt {
    std::vector<Eliq> candidates;
    std::optional<Eliq> witness;
  };
  std::vector<Attempt> attempts;
};

// Signature used when none is given: names of O and q.
Signature working_signature(const Ontology& o, const Eliq& q);

std::optional<Frontier> frontier(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound,
                                 const Signature& sigma, FrontierTrace* trace = nullptr);
std::optional<Frontier> frontier(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound);

Frontier minimal_frontier(const Ontology& o, const Frontier& f);

Tri is_meet_reducible(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound);

struct TypeAtlas {
  std::vector<Eliq> closure;
  std::vector<std::vector<char>> types;  // membership of each closure element
  DataInstance type_instance;            // individuals t0, t1, ...
};

struct SplitPartner {
  std::vector<PointedInstance> members;
  std::vector<std::string> origins;  // product element each member is pointed at, components joined by '_'
};

TypeAtlas type_atlas(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs);
SplitPartner split_partner(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs,
                           size_t atom_budget = 1000000);

enum class Provenance { FromFrontier, FromSplit };
enum class NegativesPolicy { PreferFrontier, SplitOnly, FrontierOnly };

struct SingularPlus {
  PointedInstance positive;
  std::vector<PointedInstance> negatives;
  Provenance provenance = Provenance::FromFrontier;
};

SingularPlus singular_plus_from_frontier(const Ontology& o, const Eliq& q, const Frontier& f);
SingularPlus singular_plus_from_split(const Ontology& o, const Eliq& q, const SplitPartner& s);

struct NegativesConfig {
  NegativesPolicy policy = NegativesPolicy::PreferFrontier;
  int frontier_bound = 4;
  std::optional<DomainClass> cls;
};

SingularPlus negatives_for(const Ontology& o, const Eliq& q, const Signature& sigma,
                           const NegativesConfig& cfg = {});

}  // namespace tomq
