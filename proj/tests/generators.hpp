#pragma once

#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "tomq/characterise.hpp"

namespace tomq::test {

// Random Horn ontology over {A,B,C} and {R,S} with up to `max_axioms` axioms.
inline Ontology random_horn(std::mt19937& rng, bool elhif, int max_axioms = 4) {
  std::vector<std::string> cs{"A", "B", "C"}, rs{"R", "S"};
  auto name = [&]() { return cs[rng() % cs.size()]; };
  auto role = [&]() { return Role{rs[rng() % rs.size()], rng() % 2 == 0}; };
  std::vector<std::string> lines;
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_axioms));
  for (int i = 0; i < n; ++i) {
    int k = static_cast<int>(rng() % 5);
    if (elhif) {
      if (k == 0) lines.push_back(name() + " [= ex " + role().str() + " . " + name());
      if (k == 1) lines.push_back("ex " + role().str() + " . " + name() + " [= " + name());
      if (k == 2) lines.push_back(name() + " & " + name() + " [= " + name());
      if (k == 3) lines.push_back(name() + " [= " + name());
      if (k == 4) lines.push_back("role " + role().str() + " [= " + role().str());
    } else {
      auto basic = [&]() { return rng() % 2 ? name() : "ex " + role().str(); };
      if (k <= 2) lines.push_back(basic() + " [= " + basic());
      if (k == 3) lines.push_back(name() + " & " + name() + " [= bot");
      if (k == 4) lines.push_back("role " + role().str() + " [= " + role().str());
    }
  }
  return onto(elhif ? "elhif-nf" : "dl-lite-h", lines);
}

inline PathQuery random_path(std::mt19937& rng, const std::vector<std::string>& cs, const std::vector<std::string>& rs,
                      int depth) {
  PathQuery q;
  q.bodies.clear();
  int d = static_cast<int>(rng() % static_cast<unsigned>(depth + 1));
  for (int i = 0; i <= d; ++i) {
    int sz = static_cast<int>(rng() % 3);
    q.bodies.push_back(sz == 0 ? Eliq::top() : random_eliq(rng, cs, rs, sz));
    if (i < d) q.rels.push_back(static_cast<Rel>(rng() % 3));
  }
  return q;
}

inline TemporalInstance random_tinstance(std::mt19937& rng, const std::vector<std::string>& cs,
                                  const std::vector<std::string>& rs, int len) {
  TemporalInstance d;
  d.slices.clear();
  for (int t = 0; t < len; ++t) {
    DataInstance s;
    int k = static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) {
      if (rng() % 3 == 0 && !rs.empty())
        s.add_role(Role{rs[rng() % rs.size()], false}, rng() % 2 ? "a" : "b", rng() % 2 ? "a" : "b");
      else
        s.add_concept(cs[rng() % cs.size()], rng() % 4 ? "a" : "b");
    }
    d.slices.push_back(s);
  }
  return d;
}

// Positive example for q: the b-normal instance of its hats with random extra
// atoms and trailing slices, kept only while it stays consistent.
inline TemporalInstance noisy_positive(std::mt19937& rng, const Ontology& o, const PathQuery& q,
                                       const std::vector<std::string>& cs, const std::vector<std::string>& rs) {
  PathQuery n = normalize(o, q);
  int b = n.count(Rel::Suc) + n.count(Rel::Less) + 1;
  TemporalInstance d = tagged_from_query(o, n, b).instance();
  for (int extra = static_cast<int>(rng() % 2); extra > 0; --extra) d.slices.emplace_back();
  for (auto& s : d.slices) {
    DataInstance before = s;
    if (rng() % 3 == 0) s.add_concept(cs[rng() % cs.size()], "a");
    if (!rs.empty() && rng() % 4 == 0) {
      s.add_role(Role{rs[rng() % rs.size()], rng() % 2 == 0}, "a", "n1");
      if (rng() % 2) s.add_concept(cs[rng() % cs.size()], "n1");
    }
    if (!TContext(o, d).consistent()) s = before;
  }
  d.canonicalize();
  return d;
}

}  // namespace tomq::test
