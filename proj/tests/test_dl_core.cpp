#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "tomq/dl.hpp"

using namespace tomq;
using namespace tomq::test;

namespace {

bool atoms_subset(const DataInstance& a, const DataInstance& b) {
  return std::includes(b.concept_atoms.begin(), b.concept_atoms.end(), a.concept_atoms.begin(),
                       a.concept_atoms.end()) &&
         std::includes(b.role_atoms.begin(), b.role_atoms.end(), a.role_atoms.begin(), a.role_atoms.end());
}

}  // namespace

TEST_CASE("saturate: examples") {
  auto s = saturate(onto("dl-lite-h", {"A [= B"}), inst("A(a)"));
  REQUIRE(s);
  CHECK(s->concept_atoms == std::set<std::pair<std::string, std::string>>{{"A", "a"}, {"B", "a"}});
  CHECK_FALSE(saturate(onto("elhif-nf", {"A & B [= bot"}), inst("A(a), B(a)")));
  CHECK_FALSE(saturate(onto("dl-lite-f", {"func P"}), inst("P(a,b), P(a,c)")));
}

TEST_CASE("saturate: role inclusions add role atoms") {
  auto s = saturate(onto("dl-lite-h", {"role R [= S-"}), inst("R(a,b)"));
  REQUIRE(s);
  CHECK(s->role_atoms.count({"S", "b", "a"}));
}

TEST_CASE("chase: examples") {
  Ontology o = onto("elhif-nf", {"A [= ex R . A"});
  DataInstance c = chase(o, inst("A(a)"), 2);
  CHECK(c.individuals.size() == 3);
  CHECK(c.role_atoms.size() == 2);
  CHECK(c.concept_atoms.size() == 3);
  // The chain a -> x -> y labelled A.
  std::string x, y;
  for (const auto& [p, u, v] : c.role_atoms)
    if (u == "a") x = v;
  for (const auto& [p, u, v] : c.role_atoms)
    if (u == x) y = v;
  CHECK(c.concept_atoms.count({"A", x}));
  CHECK(c.concept_atoms.count({"A", y}));

  DataInstance a = inst("A(a), R(a,b), B(b)");
  CHECK(chase(Ontology{}, a, 0) == a);

  Ontology f = onto("elhif-nf", {"A [= ex S", "func S"});
  DataInstance d = chase(f, inst("A(a), S(a,b)"), 3);
  CHECK(d.individuals == std::set<std::string>{"a", "b"});
}

TEST_CASE("chase: deterministic naming") {
  Ontology o = onto("elhif-nf", {"A [= ex R . B", "B [= ex S- . A"});
  CHECK(chase(o, inst("A(a)"), 3) == chase(o, inst("A(a)"), 3));
}

TEST_CASE("certain_answer: examples") {
  CHECK(certain_answer(Ontology{}, inst("A(a)"), "a", q("A")));
  CHECK(certain_answer(onto("elhif-nf", {"ex R . A [= A"}), inst("R(a,b), A(b)"), "a", q("A")));
  CHECK(certain_answer(Ontology{}, inst("R(a,b)"), "a", q("ex R.ex R-.ex R.Top")));
  CHECK_FALSE(certain_answer(Ontology{}, inst("R(a,b)"), "a", q("ex R-.Top")));
}

TEST_CASE("certain_answer: inconsistency") {
  Ontology o = onto("elhif-nf", {"A & B [= bot"});
  CHECK(certain_answer(o, inst("A(a), B(a)"), "a", q("C")));
  CHECK(certain_answer(o, inst("A(a), B(a)"), "a", Eliq::bot()));
  CHECK_FALSE(certain_answer(o, inst("A(a)"), "a", Eliq::bot()));
}

TEST_CASE("hat: examples") {
  PointedInstance h = hat(Ontology{}, q("ex R.A"));
  CHECK(h.point == "a");
  CHECK(h.instance.role_atoms == std::set<std::tuple<std::string, std::string, std::string>>{{"R", "a", "x1"}});
  CHECK(h.instance.concept_atoms.count({"A", "x1"}));

  PointedInstance g = hat(onto("dl-lite-f", {"func S"}), q("ex S.A & ex S.B"));
  CHECK(g.instance.individuals.size() == 2);
  CHECK(g.instance.role_atoms.size() == 1);
  std::string b = std::get<2>(*g.instance.role_atoms.begin());
  CHECK(g.instance.concept_atoms.count({"A", b}));
  CHECK(g.instance.concept_atoms.count({"B", b}));

  PointedInstance p = hat(Ontology{}, q("A & B"));
  CHECK(p.instance.concept_atoms == std::set<std::pair<std::string, std::string>>{{"A", "a"}, {"B", "a"}});
}

TEST_CASE("hat: functional chains merge transitively") {
  Ontology o = onto("dl-lite-f", {"func S"});
  PointedInstance h = hat(o, q("ex S.(ex S.A) & ex S.(ex S.B)"));
  CHECK(h.instance.individuals.size() == 3);
  CHECK(contains(o, q("ex S.(ex S.A) & ex S.(ex S.B)"), q("ex S.ex S.(A & B)")));
}

TEST_CASE("contains: examples") {
  CHECK(contains(Ontology{}, q("A & B"), q("A")));
  CHECK_FALSE(contains(Ontology{}, q("A"), q("A & B")));
  CHECK(contains(onto("dl-lite-f", {"func S"}), q("ex S.A & ex S.B"), q("ex S.(A & B)")));
  Ontology el = onto("elhif-nf", {"A [= ex R . A", "ex R . A [= A"});
  CHECK(contains(el, q("B & ex R.A"), q("A & B")));
  CHECK(contains(Ontology{}, Eliq::bot(), q("A")));
  CHECK(contains(Ontology{}, q("A"), Eliq::top()));
  CHECK_FALSE(contains(Ontology{}, q("A"), Eliq::bot()));
  CHECK(contains(onto("elhif-nf", {"A & B [= bot"}), q("A & B"), q("C")));
}

TEST_CASE("equivalent, conjoin, compatible, instance_to_eliq") {
  Ontology o = onto("elhif-nf", {"A [= B", "A [= C", "B & C [= A"});
  CHECK(equivalent(o, q("A"), q("B & C")));
  CHECK_FALSE(compatible(onto("elhif-nf", {"A & B [= bot"}), q("A"), q("B")));
  CHECK(compatible(Ontology{}, q("A"), q("B")));
  CHECK(conjoin(q("A"), q("ex R.B")) == q("A & ex R.B"));
  CHECK(conjoin(q("A"), Eliq::bot()).bottom);
  CHECK(instance_to_eliq(inst("R(b,a), A(b)"), "a") == q("ex R-.A"));
  CHECK_THROWS_AS(instance_to_eliq(inst("R(a,b), R(b,a)"), "a"), NotTreeShaped);
  CHECK_THROWS_AS(instance_to_eliq(inst("R(a,b), S(c,d)"), "a"), NotTreeShaped);
}

TEST_CASE("hom_exists uses only the data") {
  CHECK(hom_exists(q("ex R.ex R.ex R.A"), inst("R(a,a), A(a)"), "a"));
  CHECK_FALSE(hom_exists(q("ex R.B"), inst("R(a,b), A(b)"), "a"));
}

TEST_CASE("dialect validation table") {
  auto mk = [](Dialect d, Axiom ax) {
    Ontology o;
    o.dialect = d;
    o.axioms = {ax};
    o.close_signature();
    return o;
  };
  Axiom sub = SubBasic{Basic::named("A"), Basic::exists(Role{"R"})};
  Axiom dis = Disjoint{Basic::named("A"), Basic::named("B")};
  Axiom fun = Func{Role{"R"}};
  Axiom ri = RoleSub{Role{"R"}, Role{"S"}};
  Axiom erhs = ExistsRHS{"A", Role{"R"}, "B"};
  Axiom elhs = ExistsLHS{Role{"R"}, "B", "A"};
  Axiom conj = ConjLHS{"A", "B", "C", false};
  struct Row {
    Dialect d;
    std::vector<bool> ok;  // sub dis fun ri erhs elhs conj
  };
  std::vector<Axiom> axs{sub, dis, fun, ri, erhs, elhs, conj};
  std::vector<Row> rows{
      {Dialect::DLLiteH, {true, true, false, true, false, false, false}},
      {Dialect::DLLiteF, {true, true, true, false, false, false, false}},
      {Dialect::DLLiteFminus, {true, true, true, false, false, false, false}},
      {Dialect::ELHIFbotNF, {false, false, true, true, true, true, true}},
  };
  for (const auto& row : rows)
    for (size_t i = 0; i < axs.size(); ++i) {
      CAPTURE(dialect_name(row.d));
      CAPTURE(i);
      if (row.ok[i])
        CHECK_NOTHROW(mk(row.d, axs[i]).validate());
      else
        CHECK_THROWS_AS(mk(row.d, axs[i]).validate(), UnsupportedAxiom);
    }
  Ontology fm;
  fm.dialect = Dialect::DLLiteFminus;
  fm.axioms = {SubBasic{Basic::named("A"), Basic::exists(Role{"R"})}, Func{Role{"R", true}}};
  CHECK_THROWS_AS(fm.validate(), UnsupportedAxiom);
  fm.axioms = {SubBasic{Basic::named("A"), Basic::exists(Role{"R"})}, Func{Role{"R"}}};
  CHECK_NOTHROW(fm.validate());
}

TEST_CASE("property: contains agrees with a naive chase oracle on random Horn cases") {
  std::mt19937 rng(7);
  std::vector<std::string> cs{"A", "B", "C"}, rs{"R", "S"};
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    Ontology o = random_horn(rng, i % 2 == 1);
    Eliq q1 = random_eliq(rng, cs, rs, 1 + static_cast<int>(rng() % 4));
    Eliq q2 = random_eliq(rng, cs, rs, 1 + static_cast<int>(rng() % 3));
    if (i % 5 == 0) q2 = q1.edges.empty() ? q2 : q1.edges[0].child;
    CAPTURE(q1.str());
    CAPTURE(q2.str());
    bool lib = contains(o, q1, q2);
    CHECK(lib == oracle_contains(o, q1, q2));
    PointedInstance h = hat(o, q1);
    bool via_chase = true;
    if (consistent(o, h.instance))
      via_chase = hom_exists(q2, chase(o, h.instance, q2.role_depth()), h.point);
    CHECK(lib == via_chase);
    agree += lib;
  }
  MESSAGE("positive containments: " << agree);
}

TEST_CASE("property: hat admits a surjective homomorphism from the induced instance") {
  std::mt19937 rng(11);
  std::vector<std::string> cs{"A", "B"}, rs{"R", "S"};
  Ontology o = onto("dl-lite-f", {"func S", "func R-", "A [= B"});
  for (int i = 0; i < 100; ++i) {
    Eliq e = random_eliq(rng, cs, rs, 1 + static_cast<int>(rng() % 6));
    PointedInstance ind = induced_instance(e);
    if (!satisfiable(o, e)) continue;
    PointedInstance h = hat(o, e);
    auto m = hat_projection(o, e);
    CHECK(m.at(ind.point) == h.point);
    std::set<std::string> image;
    for (const auto& x : ind.instance.individuals) image.insert(m.at(x));
    CHECK(image == h.instance.individuals);
    for (const auto& [c, x] : ind.instance.concept_atoms) CHECK(h.instance.concept_atoms.count({c, m.at(x)}));
    for (const auto& [p, x, y] : ind.instance.role_atoms) CHECK(h.instance.role_atoms.count({p, m.at(x), m.at(y)}));
  }
}

TEST_CASE("property: saturate is idempotent and monotone; chase grows with depth") {
  std::mt19937 rng(5);
  std::vector<std::string> cs{"A", "B", "C"}, rs{"R", "S"};
  for (int i = 0; i < 60; ++i) {
    Ontology o = random_horn(rng, i % 2 == 0);
    DataInstance a = induced_instance(random_eliq(rng, cs, rs, 4)).instance;
    DataInstance b = a;
    b.add_concept(cs[rng() % 3], "a");
    auto sa = saturate(o, a);
    auto sb = saturate(o, b);
    if (!sa) continue;
    CHECK(saturate(o, *sa) == sa);
    if (sb) CHECK(atoms_subset(*sa, *sb));
    for (int d = 0; d < 3; ++d) CHECK(atoms_subset(chase(o, a, d), chase(o, a, d + 1)));
  }
}

TEST_CASE("property: certain answers transfer along homomorphisms") {
  std::mt19937 rng(3);
  std::vector<std::string> cs{"A", "B", "C"}, rs{"R", "S"};
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Ontology o = random_horn(rng, i % 2 == 0);
    DataInstance a = induced_instance(random_eliq(rng, cs, rs, 5)).instance;
    std::map<std::string, std::string> h;
    std::vector<std::string> inds(a.individuals.begin(), a.individuals.end());
    for (const auto& x : inds) h[x] = rng() % 3 == 0 ? inds[rng() % inds.size()] : x;
    h["a"] = "a";
    DataInstance b = a.rename(h);
    b.add_concept(cs[rng() % 3], inds[rng() % inds.size()]);
    if (!consistent(o, b)) continue;
    Eliq e = random_eliq(rng, cs, rs, 3);
    if (certain_answer(o, a, "a", e)) {
      CHECK(certain_answer(o, b, "a", e));
      ++checked;
    }
  }
  MESSAGE("transferred answers: " << checked);
}
