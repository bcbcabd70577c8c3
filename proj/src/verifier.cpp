#include <algorithm>
#include <functional>

#include "tomq/verifier.hpp"

namespace tomq {

namespace {

constexpr size_t kMaxWitnesses = 50;

// Example instances with their evaluation contexts kept alive across many queries.
class FitChecker {
 public:
  FitChecker(const Ontology& o, const ExampleSet& e) {
    for (const auto& d : e.positives) pos_.emplace_back(o, d);
    for (const auto& d : e.negatives) neg_.emplace_back(o, d);
  }
  bool fits(const TFormula& f) const {
    for (const auto& c : pos_)
      if (!c.entails(f, 0)) return false;
    for (const auto& c : neg_)
      if (c.entails(f, 0)) return false;
    return true;
  }

 private:
  std::vector<TContext> pos_, neg_;
};

// Slice content for a set of bodies placed at one time point; nullopt if unsatisfiable.
std::optional<DataInstance> slice_for(const Ontology& o, const std::vector<Eliq>& bodies) {
  Eliq c = conjoin_all(bodies);
  if (c.bottom || !satisfiable(o, c)) return std::nullopt;
  return align_point(hat(o, c), "a");
}

std::optional<TemporalInstance> build(const Ontology& o, const std::vector<std::vector<Eliq>>& at) {
  TemporalInstance d;
  d.slices.clear();
  for (const auto& bs : at) {
    auto s = slice_for(o, bs);
    if (!s) return std::nullopt;
    d.slices.push_back(*s);
  }
  if (d.slices.empty()) d.slices.emplace_back();
  return d;
}

// Minimal models of q1 over gap choices; returns one refuting q2.
std::optional<TemporalInstance> path_witness(const Ontology& o, const PathQuery& q1, const PathQuery& q2,
                                             int length_bound) {
  int cap = q2.tdp() + 2;
  TFormula f1 = to_formula(q1), f2 = to_formula(q2);
  std::vector<int> gaps(q1.rels.size(), 0);
  std::optional<TemporalInstance> found;
  std::function<void(size_t, int)> go = [&](size_t i, int pos) {
    if (found) return;
    if (pos > length_bound) return;
    if (i == q1.rels.size()) {
      std::vector<std::vector<Eliq>> at(pos + 1);
      int t = 0;
      at[0].push_back(q1.bodies[0]);
      for (size_t k = 0; k < gaps.size(); ++k) {
        t += gaps[k];
        at[t].push_back(q1.bodies[k + 1]);
      }
      auto d = build(o, at);
      if (!d) return;
      TContext ctx(o, *d);
      if (!ctx.consistent() || !ctx.entails(f1, 0)) return;
      if (!ctx.entails(f2, 0)) found = *d;
      return;
    }
    int lo = q1.rels[i] == Rel::Leq ? 0 : 1;
    int hi = q1.rels[i] == Rel::Suc ? 1 : cap;
    for (int g = lo; g <= hi; ++g) {
      gaps[i] = g;
      go(i + 1, pos + g);
    }
  };
  go(0, 0);
  return found;
}

std::optional<TemporalInstance> until_witness(const Ontology& o, const UntilQuery& q1, const UntilQuery& q2,
                                              int length_bound) {
  int cap = q1.depth() + q2.depth() + 2;
  TFormula f1 = to_formula(q1), f2 = to_formula(q2);
  std::vector<int> gaps(q1.steps.size(), 1);
  std::optional<TemporalInstance> found;
  std::function<void(size_t, int)> go = [&](size_t i, int pos) {
    if (found || pos > length_bound) return;
    if (i == q1.steps.size()) {
      std::vector<std::vector<Eliq>> at(pos + 1);
      int t = 0;
      at[0].push_back(q1.head);
      for (size_t k = 0; k < gaps.size(); ++k) {
        const auto& st = q1.steps[k];
        for (int u = t + 1; u < t + gaps[k]; ++u) at[u].push_back(*st.filler);
        t += gaps[k];
        at[t].push_back(st.target);
      }
      auto d = build(o, at);
      if (!d) return;
      TContext ctx(o, *d);
      if (!ctx.consistent() || !ctx.entails(f1, 0)) return;
      if (!ctx.entails(f2, 0)) found = *d;
      return;
    }
    int hi = q1.steps[i].filler ? cap : 1;
    for (int g = 1; g <= hi; ++g) {
      gaps[i] = g;
      go(i + 1, pos + g);
    }
  };
  go(0, 0);
  return found;
}

int default_length_bound(int tdp) { return (tdp + 1) * (tdp + 3); }

}  // namespace

bool fits(const Ontology& o, const ExampleSet& e, const PathQuery& q) { return FitChecker(o, e).fits(to_formula(q)); }
bool fits(const Ontology& o, const ExampleSet& e, const UntilQuery& q) { return FitChecker(o, e).fits(to_formula(q)); }

std::optional<TemporalInstance> tdistinguish(const Ontology& o, const PathQuery& q1, const PathQuery& q2,
                                             int length_bound) {
  if (auto d = path_witness(o, q1, q2, length_bound)) return d;
  return path_witness(o, q2, q1, length_bound);
}

std::optional<TemporalInstance> tdistinguish(const Ontology& o, const UntilQuery& q1, const UntilQuery& q2,
                                             int length_bound) {
  if (auto d = until_witness(o, q1, q2, length_bound)) return d;
  return until_witness(o, q2, q1, length_bound);
}

bool tequiv_bounded(const Ontology& o, const PathQuery& q1, const PathQuery& q2, int length_bound) {
  return !tdistinguish(o, q1, q2, length_bound);
}

bool tequiv_bounded(const Ontology& o, const UntilQuery& q1, const UntilQuery& q2, int length_bound) {
  return !tdistinguish(o, q1, q2, length_bound);
}

Verdict check_unique_characterisation(const Ontology& o, const PathQuery& q, const ExampleSet& e,
                                      const EnumSpec& spec) {
  Verdict v;
  v.note = "path queries of depth <= " + std::to_string(spec.depth) + ", bodies of size <= " +
           std::to_string(spec.body_size);
  FitChecker fc(o, e);
  if (!fc.fits(to_formula(q))) {
    v.pass = false;
    v.witnesses.push_back("target does not fit: " + q.str());
    return v;
  }
  for (const auto& c : enum_pathqueries(spec)) {
    if (!fc.fits(to_formula(c))) continue;
    int tdp = std::max(c.tdp(), q.tdp());
    if (tdistinguish(o, c, q, default_length_bound(tdp))) {
      v.pass = false;
      v.witnesses.push_back(c.str());
      if (v.witnesses.size() >= kMaxWitnesses) break;
    }
  }
  return v;
}

Verdict check_unique_characterisation(const Ontology& o, const UntilQuery& q, const ExampleSet& e,
                                      const EnumSpec& spec) {
  Verdict v;
  v.note = "until queries of depth <= " + std::to_string(spec.depth) + ", bodies of size <= " +
           std::to_string(spec.body_size);
  FitChecker fc(o, e);
  if (!fc.fits(to_formula(q))) {
    v.pass = false;
    v.witnesses.push_back("target does not fit: " + q.str());
    return v;
  }
  for (const auto& c : enum_untilqueries(spec)) {
    if (!fc.fits(to_formula(c))) continue;
    int d = std::max(c.depth(), q.depth());
    if (tdistinguish(o, c, q, default_length_bound(d) * (d + 1))) {
      v.pass = false;
      v.witnesses.push_back(c.str());
      if (v.witnesses.size() >= kMaxWitnesses) break;
    }
  }
  return v;
}

Verdict check_frontier(const Ontology& o, const Eliq& q, const std::vector<Eliq>& f, const EnumSpec& spec) {
  Verdict v;
  v.note = "queries of size <= " + std::to_string(spec.body_size);
  for (const auto& m : f)
    if (!contains(o, q, m) || contains(o, m, q)) {
      v.pass = false;
      v.witnesses.push_back("not a strict weakening: " + m.str());
    }
  std::vector<std::pair<std::string, Entailer>> rs;
  for (const auto& m : f) {
    if (m.bottom) continue;
    PointedInstance h = hat(o, m);
    rs.emplace_back(h.point, Entailer(o, h.instance));
  }
  for (const auto& w : enum_entailed_eliqs(o, q, spec.sigma, spec.body_class, spec.body_size)) {
    if (contains(o, w, q)) continue;
    bool covered = false;
    for (const auto& [pt, e] : rs)
      if (!e.consistent() || e.entails(pt, w)) {
        covered = true;
        break;
      }
    if (!covered) {
      v.pass = false;
      v.witnesses.push_back(w.str());
      if (v.witnesses.size() >= kMaxWitnesses) break;
    }
  }
  return v;
}

Verdict check_split_partner(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs,
                            const std::vector<PointedInstance>& s, const EnumSpec& spec) {
  Verdict v;
  v.note = "queries of size <= " + std::to_string(spec.body_size);
  std::vector<std::pair<std::string, Entailer>> rs;
  for (const auto& m : s) rs.emplace_back(m.point, Entailer(o, m.instance));
  for (const auto& q : enum_eliqs(sigma, spec.body_class, spec.body_size)) {
    bool lhs = false;
    for (const auto& [pt, e] : rs)
      if (e.entails(pt, q)) {
        lhs = true;
        break;
      }
    bool rhs = true;
    for (const auto& qi : qs)
      if (contains(o, q, qi)) {
        rhs = false;
        break;
      }
    if (lhs != rhs) {
      v.pass = false;
      v.witnesses.push_back(q.str());
      if (v.witnesses.size() >= kMaxWitnesses) break;
    }
  }
  return v;
}

}  // namespace tomq
