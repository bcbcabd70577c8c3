#include "tomq/characterise.hpp"

#include <algorithm>
#include <functional>

#include "tomq/verifier.hpp"

namespace tomq {

namespace {

bool top_equivalent(const Ontology& o, const Eliq& s) { return !s.bottom && contains(o, Eliq::top(), s); }

bool nontrivial(const Ontology& o, const TaggedSlice& s) { return s.source && !top_equivalent(o, *s.source); }

TaggedSlice untagged(const PointedInstance& p) {
  TaggedSlice out;
  out.data = align_point(p, "a");
  out.data.add_individual("a");
  if (is_tree_shaped(out.data, "a")) out.source = instance_to_eliq(out.data, "a");
  return out;
}

void split_block(TaggedBNormal& t, int i, std::vector<TaggedSlice> left, std::vector<TaggedSlice> right) {
  t.blocks[i] = std::move(left);
  t.blocks.insert(t.blocks.begin() + i + 1, std::move(right));
  t.gaps.insert(t.gaps.begin() + i, t.b);
}

const TaggedSlice& at(const TaggedBNormal& t, const RuleSite& s) {
  if (s.block < 0 || s.block >= static_cast<int>(t.blocks.size()) || s.offset < 0 ||
      s.offset >= static_cast<int>(t.blocks[s.block].size()))
    throw RuleNotApplicable("no slice at the given position");
  return t.blocks[s.block][s.offset];
}

const PointedInstance& negative(NegativeSupplier& neg, const TaggedSlice& s, int choice) {
  if (!s.source) throw RuleNotApplicable("slice has no source query");
  const auto& n = neg(*s.source);
  if (choice < 0 || choice >= static_cast<int>(n.size())) throw RuleNotApplicable("no such negative");
  return n[choice];
}

// Pairwise distinct negatives of a lone conjunct, or empty when (f_n) does not apply.
std::vector<PointedInstance> lone_negatives(const TaggedBNormal& t, int i, NegativeSupplier& neg) {
  if (i == 0 || t.blocks[i].size() != 1) return {};
  const auto& s = t.blocks[i][0];
  if (!s.source || !neg.meet_reducible(*s.source)) return {};
  std::vector<PointedInstance> out;
  for (const auto& p : neg(*s.source))
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  if (out.size() < 2) return {};
  return out;
}

template <class T>
void push_unique(std::vector<T>& v, T x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(std::move(x));
}

void finish(ExampleSet& e, CharacteriseInfo* info) {
  std::vector<TemporalInstance> pos, neg;
  for (auto& d : e.positives) d.canonicalize();
  for (auto& d : e.negatives) d.canonicalize();
  for (auto& d : e.positives) push_unique(pos, d);
  int dropped = 0;
  for (auto& d : e.negatives) {
    if (std::find(pos.begin(), pos.end(), d) != pos.end()) {
      ++dropped;
      continue;
    }
    push_unique(neg, d);
  }
  e.positives = std::move(pos);
  e.negatives = std::move(neg);
  if (info) {
    info->dropped_negatives = dropped;
    if (dropped) info->notes.push_back("dropped " + std::to_string(dropped) + " negatives equal to a positive");
  }
}

DomainClass class_of(const Eliq& s) { return s.is_propositional() ? DomainClass::P : DomainClass::ELIQ; }

}  // namespace

NegativeSupplier::NegativeSupplier(const Ontology& o, const Signature& sigma, NegativesConfig cfg,
                                   int reducibility_bound)
    : o_(o), sigma_(sigma), cfg_(cfg), bound_(reducibility_bound) {}

const std::vector<PointedInstance>& NegativeSupplier::operator()(const Eliq& s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  SingularPlus sp;
  try {
    sp = negatives_for(o_, s, sigma_, cfg_);
  } catch (const NoCharacterisationFound& e) {
    throw NoNegativesAvailable(std::string("no negatives for ") + s.str() + ": " + e.what());
  }
  prov_[s] = sp.provenance;
  return cache_.emplace(s, std::move(sp.negatives)).first->second;
}

bool NegativeSupplier::meet_reducible(const Eliq& s) {
  auto it = reducible_.find(s);
  if (it != reducible_.end()) return it->second;
  bool r = is_meet_reducible(o_, s, cfg_.cls.value_or(class_of(s)), bound_) == Tri::True;
  reducible_.emplace(s, r);
  return r;
}

TemporalInstance TaggedBNormal::instance() const {
  TemporalInstance d;
  d.slices.clear();
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) d.slices.insert(d.slices.end(), gaps[i - 1], DataInstance{});
    for (const auto& s : blocks[i]) d.slices.push_back(s.data);
  }
  if (d.slices.empty()) d.slices.emplace_back();
  d.canonicalize();
  return d;
}

std::vector<std::pair<int, int>> TaggedBNormal::positions() const {
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) out.insert(out.end(), gaps[i - 1], {-1, -1});
    for (size_t j = 0; j < blocks[i].size(); ++j) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  return out;
}

TaggedSlice tagged_slice(const Ontology& o, const Eliq& s) {
  TaggedSlice out;
  out.data = align_point(hat(o, s), "a");
  out.data.add_individual("a");
  out.source = s;
  return out;
}

TaggedBNormal tagged_from_query(const Ontology& o, const PathQuery& q, int b) {
  TaggedBNormal t;
  t.b = b;
  BlockView v = blocks_of(q);
  for (const auto& blk : v.blocks) {
    std::vector<TaggedSlice> row;
    for (const auto& s : blk) row.push_back(tagged_slice(o, s));
    t.blocks.push_back(std::move(row));
  }
  t.gaps.assign(t.blocks.size() - 1, b);
  return t;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::A: return "a";
    case Rule::B: return "b";
    case Rule::C: return "c";
    case Rule::D: return "d";
    case Rule::E: return "e";
    case Rule::F: return "f";
  }
  return "?";
}

TaggedBNormal apply_rule(const Ontology& o, const TaggedBNormal& t, Rule rule, const RuleSite& site,
                         NegativeSupplier& neg, int reps) {
  TaggedBNormal out = t;
  const int i = site.block, j = site.offset;
  const TaggedSlice& s = at(t, site);
  const auto& blk = t.blocks[i];
  const int k = static_cast<int>(blk.size()) - 1;
  switch (rule) {
    case Rule::A: {
      if (!nontrivial(o, s)) throw RuleNotApplicable("(a) needs a query not equivalent to Top");
      out.blocks[i][j] = untagged(negative(neg, s, site.choice));
      return out;
    }
    case Rule::B: {
      if (j >= k) throw RuleNotApplicable("(b) needs a successor in the block");
      split_block(out, i, {blk.begin(), blk.begin() + j + 1}, {blk.begin() + j + 1, blk.end()});
      return out;
    }
    case Rule::C: {
      if (!(j > 0 && j < k)) throw RuleNotApplicable("(c) does not apply on a block border");
      if (!nontrivial(o, s)) throw RuleNotApplicable("(c) needs a query not equivalent to Top");
      split_block(out, i, {blk.begin(), blk.begin() + j + 1}, {blk.begin() + j, blk.end()});
      return out;
    }
    case Rule::D: {
      if (k == 0 || (j != 0 && j != k)) throw RuleNotApplicable("(d) needs a border of a non-primitive block");
      TaggedSlice n = untagged(negative(neg, s, site.choice));
      if (j == k) {
        std::vector<TaggedSlice> left(blk.begin(), blk.begin() + k);
        left.push_back(n);
        split_block(out, i, left, {blk[k]});
      } else {
        std::vector<TaggedSlice> right{n};
        right.insert(right.end(), blk.begin() + 1, blk.end());
        split_block(out, i, {blk[0]}, right);
      }
      return out;
    }
    case Rule::E: {
      if (i != 0 || j != 0) throw RuleNotApplicable("(e) applies to the first slice only");
      if (!nontrivial(o, s)) throw RuleNotApplicable("(e) needs a query not equivalent to Top");
      if (k == 0)
        split_block(out, 0, {untagged(negative(neg, s, site.choice))}, {blk[0]});
      else
        split_block(out, 0, {blk[0]}, blk);
      return out;
    }
    case Rule::F: {
      auto ns = lone_negatives(t, i, neg);
      if (ns.empty()) throw RuleNotApplicable("(f) needs a lone conjunct");
      std::vector<std::vector<TaggedSlice>> parts;
      for (int r = 0; r < reps; ++r)
        for (const auto& p : ns) parts.push_back({untagged(p)});
      out.blocks.erase(out.blocks.begin() + i);
      out.blocks.insert(out.blocks.begin() + i, parts.begin(), parts.end());
      out.gaps.insert(out.gaps.begin() + i, parts.size() - 1, t.b);
      return out;
    }
  }
  return out;
}

std::vector<RuleSite> rule_sites(const Ontology& o, const TaggedBNormal& t, Rule rule, NegativeSupplier& neg) {
  std::vector<RuleSite> out;
  for (int i = 0; i < static_cast<int>(t.blocks.size()); ++i) {
    const int k = static_cast<int>(t.blocks[i].size()) - 1;
    if (rule == Rule::F) {
      if (!lone_negatives(t, i, neg).empty()) out.push_back({i, 0, 0});
      continue;
    }
    for (int j = 0; j <= k; ++j) {
      const auto& s = t.blocks[i][j];
      auto choices = [&]() {
        int n = s.source ? static_cast<int>(neg(*s.source).size()) : 0;
        for (int c = 0; c < n; ++c) out.push_back({i, j, c});
      };
      switch (rule) {
        case Rule::A:
          if (nontrivial(o, s)) choices();
          break;
        case Rule::B:
          if (j < k) out.push_back({i, j, 0});
          break;
        case Rule::C:
          if (j > 0 && j < k && nontrivial(o, s)) out.push_back({i, j, 0});
          break;
        case Rule::D:
          if (k > 0 && (j == 0 || j == k)) choices();
          break;
        case Rule::E:
          if (i == 0 && j == 0 && nontrivial(o, s)) {
            if (k == 0)
              choices();
            else
              out.push_back({0, 0, 0});
          }
          break;
        case Rule::F:
          break;
      }
    }
  }
  return out;
}

ExampleSet characterise_dia(const Ontology& o, const PathQuery& q, const Signature& sigma, const DiaConfig& cfg,
                            CharacteriseInfo* info) {
  PathQuery n = normalize(o, q);
  ExampleSet e;
  if (n.tdp() == 0 && top_equivalent(o, n.bodies[0])) {
    e.positives.push_back(empties(1));
    if (info) info->notes.push_back("query is equivalent to Top");
    return e;
  }
  if (cfg.mode == DiaMode::NextDiamondOnly && n.count(Rel::Leq) > 0)
    throw UnsafeQuery("query uses Fr, outside the next/diamond class: " + n.str());
  if (cfg.mode == DiaMode::SafeOnly) {
    Tri safe = is_safe(o, n, cfg.safety_bound, cfg.negatives.cls);
    if (safe == Tri::False) throw UnsafeQuery("query is not safe: " + n.str());
    if (safe == Tri::Unknown) throw UnsafeQuery("safety undetermined within bound: " + n.str());
  }

  const int b = n.count(Rel::Suc) + n.count(Rel::Less) + 1;
  if (info) info->b = b;
  NegativeSupplier neg(o, sigma, cfg.negatives, cfg.safety_bound);
  BlockView v = blocks_of(n);
  TaggedBNormal db = tagged_from_query(o, n, b);
  e.positives.push_back(db.instance());

  auto joined = [&](int i) {
    TaggedBNormal t = db;
    auto& left = t.blocks[i];
    const auto& right = t.blocks[i + 1];
    left.back() = tagged_slice(o, conjoin(*left.back().source, *right.front().source));
    left.insert(left.end(), right.begin() + 1, right.end());
    t.blocks.erase(t.blocks.begin() + i + 1);
    t.gaps.erase(t.gaps.begin() + i);
    return t.instance();
  };
  auto gapped = [&](int i, int g) {
    TaggedBNormal t = db;
    t.gaps[i] = g;
    return t.instance();
  };
  for (int i = 0; i + 1 < static_cast<int>(v.blocks.size()); ++i) {
    int m = less_count(v.connectors[i]);
    if (m == 0) {
      e.positives.push_back(joined(i));
      continue;
    }
    e.positives.push_back(gapped(i, m - 1));
    if (m > 1) e.negatives.push_back(gapped(i, m - 2));
    if (m == 1 && compatible(o, v.blocks[i].back(), v.blocks[i + 1].front())) e.negatives.push_back(joined(i));
  }

  std::vector<Rule> rules{Rule::A, Rule::B};
  if (cfg.mode != DiaMode::NextDiamondOnly) rules.insert(rules.end(), {Rule::C, Rule::D, Rule::E});
  for (Rule r : rules)
    for (const auto& site : rule_sites(o, db, r, neg)) e.negatives.push_back(apply_rule(o, db, r, site, neg).instance());
  if (cfg.mode == DiaMode::BoundedDepth) {
    int reps = std::max(cfg.depth, n.tdp()) + 1;
    for (const auto& site : rule_sites(o, db, Rule::F, neg))
      e.negatives.push_back(apply_rule(o, db, Rule::F, site, neg, reps).instance());
  }

  finish(e, info);
  if (info) {
    int frontier = 0, split = 0;
    for (const auto& [s, p] : neg.provenance()) (p == Provenance::FromFrontier ? frontier : split)++;
    info->notes.push_back("negatives: " + std::to_string(frontier) + " from frontiers, " + std::to_string(split) +
                          " from split-partners");
  }
  if (!fits(o, e, q)) throw Error("constructed example set does not fit " + q.str());
  return e;
}

namespace {

// Shared shape of the Until constructions; slices are produced by the caller.
struct UntilBuilder {
  const Ontology& o;
  const UntilQuery& q;
  std::vector<DataInstance> r;                 // r[0..n]
  std::vector<std::optional<DataInstance>> l;  // l[1..n], nullopt for bot
  int n = 0;

  UntilBuilder(const Ontology& onto, const UntilQuery& query, std::function<DataInstance(const Eliq&)> slice)
      : o(onto), q(query), n(query.depth()) {
    r.push_back(slice(q.head));
    l.emplace_back();
    for (const auto& st : q.steps) {
      r.push_back(slice(st.target));
      l.push_back(st.filler ? std::optional<DataInstance>(slice(*st.filler)) : std::nullopt);
    }
  }

  // r_0 .. r_{i-1} mid r_i (l_{i+1}^k r_{i+1}) ... ; kcount[j] repeats l_j before r_j for j > i.
  TemporalInstance make(int i, const std::vector<DataInstance>& mid, const std::vector<int>& kcount) const {
    TemporalInstance d;
    d.slices.clear();
    for (int j = 0; j <= n; ++j) {
      if (j == i) d.slices.insert(d.slices.end(), mid.begin(), mid.end());
      if (j > 0 && l[j] && kcount[j] > 0) d.slices.insert(d.slices.end(), kcount[j], *l[j]);
      d.slices.push_back(r[j]);
    }
    return d;
  }

  std::vector<TemporalInstance> positives() const {
    std::vector<TemporalInstance> out;
    std::vector<int> none(n + 1, 0);
    out.push_back(make(-1, {}, none));
    for (int i = 1; i <= n; ++i) {
      auto k = none;
      k[i] = 1;
      out.push_back(make(-1, {}, k));
    }
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int kk = 1; kk <= 2; ++kk) {
          auto k = none;
          k[i] = kk;
          k[j] = 1;
          out.push_back(make(-1, {}, k));
        }
    return out;
  }

  // First exponent vector in lexicographic order with max(D) <= (n+1)^2 and D not entailing q-dagger.
  std::optional<TemporalInstance> exponent_search(int i, const DataInstance& mid) const {
    UntilQuery dag = until_truncate(q, i);
    TFormula f = to_formula(dag);
    int budget = (n + 1) * (n + 1) - (n + 1);
    std::vector<int> k(n + 1, 0);
    std::optional<TemporalInstance> found;
    std::function<void(int, int)> go = [&](int j, int left) {
      if (found) return;
      if (j > n) {
        TemporalInstance d = make(i, {mid}, k);
        if (!TContext(o, d).entails(f, 0)) found = d;
        return;
      }
      int hi = (j > i && l[j]) ? left : 0;
      for (int c = 0; c <= hi && !found; ++c) {
        k[j] = c;
        go(j + 1, left - c);
      }
      k[j] = 0;
    };
    go(0, budget);
    return found;
  }

  void keep_negatives(ExampleSet& e, const std::vector<TemporalInstance>& cands) const {
    TFormula f = to_formula(q);
    for (const auto& d : cands)
      if (!TContext(o, d).entails(f, 0)) e.negatives.push_back(d);
  }
};

std::vector<std::string> conjuncts(const std::optional<Eliq>& s, const Signature& sigma) {
  if (!s || s->bottom) return {sigma.concepts.begin(), sigma.concepts.end()};
  return s->concepts;
}

DataInstance prop_slice(const std::set<std::string>& names) {
  DataInstance d;
  d.add_individual("a");
  for (const auto& c : names) d.add_concept(c, "a");
  return d;
}

}  // namespace

ExampleSet characterise_prop_until(const UntilQuery& q, const Signature& sigma, CharacteriseInfo* info) {
  if (!q.head.is_propositional()) throw NotPropositional("head is not propositional: " + q.head.str());
  for (const auto& st : q.steps) {
    if (!st.target.is_propositional()) throw NotPropositional("target is not propositional: " + st.target.str());
    if (st.filler && !st.filler->is_propositional())
      throw NotPropositional("filler is not propositional: " + st.filler->str());
  }
  Ontology empty;
  if (!is_peerless(empty, q)) throw NotPeerless("query is not peerless: " + q.str());
  Signature s = sigma;
  s.merge(q.signature());
  ExampleSet e;
  if (q.depth() == 0 && q.head.is_top()) {
    e.positives.push_back(empties(1));
    return e;
  }
  const int n = q.depth();
  UntilBuilder ub(empty, q, [](const Eliq& x) {
    return prop_slice({x.concepts.begin(), x.concepts.end()});
  });
  e.positives = ub.positives();

  std::set<std::string> all = s.concepts;
  auto without = [&](std::set<std::string> drop) {
    std::set<std::string> out;
    for (const auto& c : all)
      if (!drop.count(c)) out.insert(c);
    return prop_slice(out);
  };
  auto target = [&](int p) -> const Eliq& { return p == 0 ? q.head : q.steps[p - 1].target; };
  std::vector<TemporalInstance> cands;
  if (n > 0) {
    TemporalInstance full;
    full.slices.assign(n, prop_slice(all));
    cands.push_back(full);
  }
  for (int p = 0; p <= n; ++p)
    for (const auto& a : target(p).concepts) {
      TemporalInstance d;
      d.slices.assign(n + 1, prop_slice(all));
      d.slices[p] = without({a});
      cands.push_back(d);
    }
  std::vector<int> none(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    const auto& st = q.steps[i - 1];
    auto ls = conjuncts(st.filler, s);
    for (const auto& a : ls)
      for (const auto& bb : st.target.concepts) cands.push_back(ub.make(i, {without({a, bb})}, none));
    cands.push_back(ub.make(i, {without({})}, none));
    for (const auto& a : ls) cands.push_back(ub.make(i, {without({a})}, none));
  }
  ub.keep_negatives(e, cands);
  for (int i = 1; i <= n; ++i) {
    auto ls = conjuncts(q.steps[i - 1].filler, s);
    std::vector<DataInstance> mids;
    for (const auto& a : ls) mids.push_back(without({a}));
    mids.push_back(without({}));
    for (const auto& m : mids)
      if (auto d = ub.exponent_search(i, m)) ub.keep_negatives(e, {*d});
  }
  finish(e, info);
  if (!fits(empty, e, q)) throw Error("constructed example set does not fit " + q.str());
  return e;
}

ExampleSet characterise_until(const Ontology& o, const UntilQuery& q, const Signature& sigma,
                              const UntilConfig& cfg, CharacteriseInfo* info) {
  if (o.has_func()) throw UnsupportedDialect("split-partners are not available with functional roles");
  if (!is_peerless(o, q)) throw NotPeerless("query is not peerless: " + q.str());
  Signature s = sigma;
  s.merge(q.signature());
  s.merge(o.signature);
  ExampleSet e;
  const int n = q.depth();
  const Eliq& last = n == 0 ? q.head : q.steps.back().target;
  if (top_equivalent(o, last)) {
    if (n > 0) throw TrailingTopTarget("last target is equivalent to Top: " + last.str());
    e.positives.push_back(empties(1));
    return e;
  }
  UntilBuilder ub(o, q, [&](const Eliq& x) {
    DataInstance d = align_point(hat(o, x), "a");
    d.add_individual("a");
    return d;
  });
  e.positives = ub.positives();

  auto members = [&](std::vector<Eliq> qs) {
    std::vector<DataInstance> out;
    for (const auto& m : split_partner(o, s, qs, cfg.atom_budget).members) {
      DataInstance d = align_point(m, "a");
      d.add_individual("a");
      out.push_back(d);
    }
    return out;
  };
  auto filler = [&](int i) { return q.steps[i - 1].filler.value_or(Eliq::bot()); };
  auto target = [&](int p) { return p == 0 ? q.head : q.steps[p - 1].target; };
  std::vector<DataInstance> sbot = members({Eliq::bot()});

  // Tuples of S_bot members of length n in lexicographic order, capped.
  std::vector<std::vector<DataInstance>> tuples;
  if (!sbot.empty()) {
    std::vector<size_t> idx(n, 0);
    while (tuples.size() < cfg.tuple_cap) {
      std::vector<DataInstance> t;
      for (size_t x : idx) t.push_back(sbot[x]);
      tuples.push_back(t);
      int p = n - 1;
      while (p >= 0 && ++idx[p] == sbot.size()) idx[p--] = 0;
      if (p < 0) break;
    }
    if (tuples.size() >= cfg.tuple_cap && info) info->notes.push_back("S_bot tuples capped");
  }
  std::vector<TemporalInstance> cands;
  for (const auto& t : tuples) {
    if (n > 0) {
      TemporalInstance d;
      d.slices = t;
      cands.push_back(d);
    }
  }
  for (int p = 0; p <= n; ++p)
    for (const auto& a : members({target(p)}))
      for (const auto& t : tuples) {
        TemporalInstance d;
        d.slices.assign(t.begin(), t.begin() + p);
        d.slices.push_back(a);
        d.slices.insert(d.slices.end(), t.begin() + p, t.end());
        cands.push_back(d);
      }
  std::vector<int> none(n + 1, 0);
  std::vector<std::vector<DataInstance>> mids(n + 1);
  for (int i = 1; i <= n; ++i) {
    for (const auto& m : members({filler(i), target(i)})) push_unique(mids[i], m);
    for (const auto& m : members({filler(i)})) push_unique(mids[i], m);
    for (const auto& m : sbot) push_unique(mids[i], m);
    for (const auto& m : mids[i]) cands.push_back(ub.make(i, {m}, none));
  }
  ub.keep_negatives(e, cands);
  for (int i = 1; i <= n; ++i)
    for (const auto& m : mids[i])
      if (auto d = ub.exponent_search(i, m)) ub.keep_negatives(e, {*d});
  finish(e, info);
  if (!fits(o, e, q)) throw Error("constructed example set does not fit " + q.str());
  return e;
}

}  // namespace tomq
