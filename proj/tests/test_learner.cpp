#include <doctest.h>

#include <random>
#include <set>

#include "generators.hpp"
#include "support.hpp"
#include "tomq/characterise.hpp"
#include "tomq/learner.hpp"
#include "tomq/verifier.hpp"

using namespace tomq;
using namespace tomq::test;

namespace {

Signature sig(std::set<std::string> cs, std::set<std::string> rs = {}) { return Signature{cs, rs}; }

// Every entailed concept name over `names` is present in every consistent slice.
bool saturated(const Ontology& o, const TemporalInstance& d, const std::set<std::string>& names) {
  for (const auto& s : d.slices) {
    Entailer e(o, s);
    if (!e.consistent()) continue;
    for (const auto& x : s.individuals)
      for (const auto& c : names)
        if (!s.concept_atoms.count({c, x}) && e.entails(x, Eliq::atom(c))) return false;
  }
  return true;
}

bool connected_from_point(const DataInstance& s, const std::string& point) {
  std::set<std::string> seen{point};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [p, x, y] : s.role_atoms)
      if (seen.count(x) != seen.count(y)) {
        seen.insert(x);
        seen.insert(y);
        grew = true;
      }
  }
  for (const auto& x : s.individuals)
    if (!seen.count(x)) return false;
  return true;
}

// The teacher for the target accepts every positive and rejects every negative of E.
bool teacher_fits(const Ontology& o, const PathQuery& target, const ExampleSet& ex) {
  Teacher t(o, target);
  for (const auto& d : ex.positives)
    if (!t.membership(d)) return false;
  for (const auto& d : ex.negatives)
    if (t.membership(d)) return false;
  return true;
}

}  // namespace

TEST_CASE("teacher: membership answers and transcript") {
  Ontology e;
  Teacher t(e, pq("F A"));
  t.record_transcript(true);
  CHECK(t.membership(tinst({"-", "A(a)"})));
  CHECK_FALSE(t.membership(tinst({"-"})));
  Teacher u(onto("dl-lite-h", {"A & B [= bot"}), pq("F C"));
  CHECK(u.membership(tinst({"A(a), B(a)"})));
  CHECK(t.membership_count() == 2);
  CHECK(t.max_query_size() >= 1);
  REQUIRE(t.transcript().size() == 2);
  CHECK(t.transcript()[0].find(" | yes | 1") != std::string::npos);
  CHECK(t.transcript()[1].find(" | no | 2") != std::string::npos);
  t.set_budget(2);
  CHECK_THROWS_AS(t.membership(tinst({"-"})), BudgetExceeded);
}

TEST_CASE("learn: diamond A from a noisy positive") {
  Ontology e;
  Teacher t(e, pq("F A"));
  LearnResult r = learn(e, t, tinst({"B(a)", "A(a), B(a)", "A(a)"}), LearnerConfig{});
  CAPTURE(r.query.str());
  CHECK(tequiv_bounded(e, r.query, pq("F A"), 2 * (r.stats.b + 1)));
  CHECK(r.stats.membership_queries == t.membership_count());
  CHECK(r.stats.membership_queries > 0);
  CHECK(r.stats.max_query_size >= 1);
  ExampleSet ex = characterise_dia(e, r.query, sig({"A", "B"}), DiaConfig{});
  CHECK(teacher_fits(e, pq("F A"), ex));
}

TEST_CASE("learn: next of an existential under a DL-Lite ontology") {
  Ontology o = onto("dl-lite-h", {"ex P- [= B"});
  PathQuery target = pq("X ex P.A");
  Teacher t(o, target);
  LearnResult r = learn(o, t, tinst({"-", "P(a,c), A(c), B(c)"}), LearnerConfig{});
  CAPTURE(r.query.str());
  CHECK(tequiv_bounded(o, r.query, target, 2 * (r.stats.b + 1)));
  ExampleSet ex = characterise_dia(o, r.query, sig({"A", "B"}, {"P"}), DiaConfig{});
  CHECK(teacher_fits(o, target, ex));
}

TEST_CASE("learn: initial instance must be a satisfiable positive") {
  Ontology e;
  Teacher t(e, pq("F A"));
  CHECK_THROWS_AS(learn(e, t, tinst({"A(a)"}), LearnerConfig{}), NotPositiveInitialExample);
  Ontology o = onto("dl-lite-h", {"A & B [= bot"});
  Teacher u(o, pq("F A"));
  CHECK_THROWS_AS(learn(o, u, tinst({"A(a), B(a)"}), LearnerConfig{}), NotPositiveInitialExample);
  LearnerConfig tight;
  tight.budget = 3;
  Teacher v(e, pq("F A"));
  CHECK_THROWS_AS(learn(e, v, tinst({"B(a)", "A(a), B(a)", "A(a)"}), tight), BudgetExceeded);
}

TEST_CASE("unwind: a two-cycle becomes a four-individual cover") {
  DataInstance d = inst("R(a,b), R(b,a)");
  auto atom = cycle_atom(d);
  REQUIRE(atom);
  DataInstance u = unwind_slice(d, *atom);
  CHECK(u.individuals.size() == 4);
  CHECK(u.role_atoms.size() == 4);
  CHECK(u.concept_atoms.empty());
  // The unfolding maps onto the original slice.
  CHECK(instance_hom({u, "a"}, {d, "a"}));
  CHECK_FALSE(cycle_atom(inst("R(a,b), S(b,c)")));
  CHECK(cycle_atom(inst("R(a,a)")));
}

TEST_CASE("steps: minimise, treeify and connectors") {
  Ontology e;
  SUBCASE("minimise drops a redundant individual") {
    Teacher t(e, pq("A"));
    Learner l(e, t, LearnerConfig{}, sig({"A", "B"}, {"R"}));
    l.reset(tinst({"A(a), R(a,b), B(b)"}));
    size_t before = l.instance().size();
    StepOutcome s = l.minimise_step();
    CHECK(s.changed);
    CHECK(s.queries >= 1);
    CHECK(l.instance().size() < before);
    CHECK(t.membership(l.instance()));
    l.minimise_all();
    CHECK(l.instance() == tinst({"A(a)"}));
  }
  SUBCASE("Step 1 leaves tree-shaped slices connected to the point") {
    Teacher t(e, pq("ex R.ex R.ex R.Top"));
    Learner l(e, t, LearnerConfig{}, sig({"A"}, {"R"}));
    l.reset(tinst({"R(a,b), R(b,a), A(c)"}));
    l.treeify();
    CHECK(l.stats().unwind >= 1);
    for (const auto& s : l.instance().slices) {
      CHECK(is_tree_shaped(s, "a"));
      CHECK(connected_from_point(s, "a"));
    }
    CHECK(t.membership(l.instance()));
  }
  SUBCASE("drop_timepoint_step needs a single block") {
    Teacher t(e, pq("F A"));
    Learner l(e, t, LearnerConfig{}, sig({"A"}));
    TaggedBNormal two;
    two.blocks = {{tagged_slice(e, q("Top"))}, {tagged_slice(e, q("A"))}};
    two.gaps = {1};
    l.set_state(two);
    CHECK_THROWS_AS(l.drop_timepoint_step(), RuleNotApplicable);
  }
  SUBCASE("connectors of the diamond skeleton") {
    Teacher t(e, pq("F A"));
    Learner l(e, t, LearnerConfig{}, sig({"A"}));
    TaggedBNormal sk;
    sk.b = 2;
    sk.blocks = {{tagged_slice(e, q("Top"))}, {tagged_slice(e, q("A"))}};
    sk.gaps = {2};
    l.set_state(sk);
    size_t used = 0;
    auto c = l.infer_connectors(&used);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == std::vector<Rel>{Rel::Less});
    CHECK(used >= 1);
    CHECK(l.result(c) == normalize(e, pq("F A")));
  }
}

TEST_CASE("property: learner runs keep positive saturated states and learn the target") {
  std::vector<std::string> cs{"A", "B", "C"}, rs{"R", "S"};
  int learned = 0, unsupported = 0;
  for (unsigned seed = 1; learned < 10 && seed < 60; ++seed) {
    std::mt19937 rng(seed);
    Ontology o = random_horn(rng, seed % 2 == 0, 4);
    PathQuery target = random_path(rng, cs, rs, 2);
    if (!satisfiable(o, conjoin_all(target.bodies))) continue;
    CAPTURE(print_ontology(o));
    CAPTURE(target.str());
    TemporalInstance d = noisy_positive(rng, o, target, cs, rs);
    std::set<std::string> names = o.signature.concepts;
    for (const auto& c : d.signature().concepts) names.insert(c);
    Teacher checker(o, target);
    bool ok = true;
    LearnerConfig cfg;
    cfg.variant = LearnerVariant::KnownDepth;
    cfg.depth = target.tdp();
    cfg.on_change = [&](const TemporalInstance& s, const std::string&) {
      ok = ok && checker.membership(s) && saturated(o, s, names);
    };
    Teacher t(o, target);
    try {
      LearnResult r = learn(o, t, d, cfg);
      ++learned;
      CHECK(ok);
      CHECK(tequiv_bounded(o, r.query, target, (target.tdp() + 1) * (r.stats.b + 1)));
    } catch (const UnsupportedDialect&) {
      ++unsupported;
    }
  }
  CHECK(learned == 10);
  MESSAGE("unsupported draws: " << unsupported);
}
