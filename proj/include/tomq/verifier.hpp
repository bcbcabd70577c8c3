#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomq/dl.hpp"
#include "tomq/domain.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

struct EnumSpec {
  enum Kind { Domain, Path, Until } kind = Domain;
  Signature sigma;
  DomainClass body_class = DomainClass::P;
  int body_size = 2;  // size bound for domain queries
  int depth = 1;      // temporal depth bound (path and until kinds)
  bool allow_suc = true;
  bool allow_less = true;
  bool allow_leq = true;
  bool allow_bot_filler = true;
};

// Every canonical ELIQ of the class with size <= bound, ordered by size then structure.
std::vector<Eliq> enum_eliqs(const Signature& sigma, DomainClass cls, int size_bound);
// Same, restricted to queries q' with q |=_O q' (maps into the chase of hat(q)).
std::vector<Eliq> enum_entailed_eliqs(const Ontology& o, const Eliq& q, const Signature& sigma, DomainClass cls,
                                      int size_bound);
// Queries true at `point` of a finite structure (no ontology).
std::vector<Eliq> enum_eliqs_at(const DataInstance& a, const std::string& point, const Signature& sigma,
                                 DomainClass cls, int size_bound);

std::vector<PathQuery> enum_pathqueries(const EnumSpec& spec);
std::vector<UntilQuery> enum_untilqueries(const EnumSpec& spec);

struct Verdict {
  bool pass = true;
  std::vector<std::string> witnesses;
  std::string note;  // bound the verdict was obtained at
};

bool fits(const Ontology& o, const ExampleSet& e, const PathQuery& q);
bool fits(const Ontology& o, const ExampleSet& e, const UntilQuery& q);

// Instances on which q1 and q2 disagree, searched over minimal models of
// each query with gaps up to what the other query can measure.
std::optional<TemporalInstance> tdistinguish(const Ontology& o, const PathQuery& q1, const PathQuery& q2,
                                             int length_bound);
std::optional<TemporalInstance> tdistinguish(const Ontology& o, const UntilQuery& q1, const UntilQuery& q2,
                                             int length_bound);
bool tequiv_bounded(const Ontology& o, const PathQuery& q1, const PathQuery& q2, int length_bound);
bool tequiv_bounded(const Ontology& o, const UntilQuery& q1, const UntilQuery& q2, int length_bound);

Verdict check_unique_characterisation(const Ontology& o, const PathQuery& q, const ExampleSet& e,
                                      const EnumSpec& spec);
Verdict check_unique_characterisation(const Ontology& o, const UntilQuery& q, const ExampleSet& e,
                                      const EnumSpec& spec);
Verdict check_frontier(const Ontology& o, const Eliq& q, const std::vector<Eliq>& f, const EnumSpec& spec);
Verdict check_split_partner(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs,
                            const std::vector<PointedInstance>& s, const EnumSpec& spec);

}  // namespace tomq
