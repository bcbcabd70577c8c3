#include "tomq/learner.hpp"

#include <algorithm>

#include "tomq/io.hpp"

namespace tomq {

namespace {

using RoleAtom = std::tuple<std::string, std::string, std::string>;

DataInstance drop_individual(const DataInstance& d, const std::string& x) {
  DataInstance out;
  out.individuals = d.individuals;
  for (const auto& ca : d.concept_atoms)
    if (ca.second != x) out.concept_atoms.insert(ca);
  for (const auto& ra : d.role_atoms)
    if (std::get<1>(ra) != x && std::get<2>(ra) != x) out.role_atoms.insert(ra);
  return out;
}

std::set<std::string> reachable(const DataInstance& d, const std::string& from, const RoleAtom* skip = nullptr) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& ra : d.role_atoms) {
    if (skip && ra == *skip) continue;
    const auto& [p, x, y] = ra;
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  std::set<std::string> seen{from};
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (const auto& y : adj[x])
      if (seen.insert(y).second) stack.push_back(y);
  }
  return seen;
}

DataInstance point_component(const DataInstance& d) {
  DataInstance out = d.restrict_to(reachable(d, "a"));
  out.add_individual("a");
  return out;
}

bool top_slice(const Ontology& o, const TaggedSlice& s) { return s.source && contains(o, Eliq::top(), *s.source); }

std::string rel_str(const std::vector<Rel>& c) {
  if (c.size() == 1 && c[0] == Rel::Leq) return "<=";
  return std::to_string(c.size()) + " x <";
}

}  // namespace

std::optional<RoleAtom> cycle_atom(const DataInstance& d) {
  for (const auto& ra : d.role_atoms) {
    const auto& [p, x, y] = ra;
    if (x == y || reachable(d, x, &ra).count(y)) return ra;
  }
  return std::nullopt;
}

DataInstance unwind_slice(const DataInstance& d, const RoleAtom& atom) {
  std::map<std::string, std::string> copy;
  int next = 0;
  for (const auto& x : d.individuals) {
    std::string name;
    do name = "u" + std::to_string(++next);
    while (d.individuals.count(name));
    copy[x] = name;
  }
  DataInstance out = d;
  out.merge(d.rename(copy));
  const auto& [p, x, y] = atom;
  out.role_atoms.erase({p, x, y});
  out.role_atoms.erase({p, copy[x], copy[y]});
  out.role_atoms.insert({p, x, copy[y]});
  out.role_atoms.insert({p, copy[x], y});
  return out;
}

Teacher::Teacher(Ontology o, PathQuery target) : o_(std::move(o)), target_(std::move(target)) {}

bool Teacher::membership(const TemporalInstance& d) {
  if (count_ >= budget_) throw BudgetExceeded("membership budget of " + std::to_string(budget_) + " queries exhausted");
  ++count_;
  max_size_ = std::max(max_size_, d.size());
  TContext ctx(o_, d);
  bool yes = !ctx.consistent() || ctx.entails(to_formula(target_), 0);
  if (recording_) transcript_.push_back(inline_tinstance(d) + " | " + (yes ? "yes" : "no") + " | " + std::to_string(count_));
  return yes;
}

Learner::Learner(const Ontology& o, Teacher& teacher, LearnerConfig cfg, Signature sigma)
    : o_(o),
      teacher_(teacher),
      cfg_(std::move(cfg)),
      sigma_(std::move(sigma)),
      cls_(sigma_.roles.empty() ? DomainClass::P : DomainClass::ELIQ),
      neg_(o_, sigma_, NegativesConfig{NegativesPolicy::FrontierOnly, cfg_.frontier_bound, cls_}, cfg_.frontier_bound) {}

bool Learner::ask(const TemporalInstance& d) { return teacher_.membership(d); }

void Learner::accept(TaggedBNormal t, const std::string& step) {
  t_ = std::move(t);
  TemporalInstance d = t_.instance();
  log_.push_back(step + ": " + inline_tinstance(d));
  if (cfg_.on_change) cfg_.on_change(d, step);
}

TaggedSlice Learner::retag(DataInstance d) const {
  d.add_individual("a");
  Entailer e(o_, d);
  if (e.consistent()) {
    std::set<std::string> names = sigma_.concepts;
    names.insert(o_.signature.concepts.begin(), o_.signature.concepts.end());
    DataInstance sat = d;
    for (const auto& x : d.individuals)
      for (const auto& c : names)
        if (!d.concept_atoms.count({c, x}) && e.entails(x, Eliq::atom(c))) sat.add_concept(c, x);
    d = std::move(sat);
  }
  TaggedSlice s;
  s.data = d;
  if (is_tree_shaped(d, "a")) s.source = instance_to_eliq(d, "a");
  return s;
}

void Learner::reset(const TemporalInstance& initial) {
  t_ = TaggedBNormal{};
  std::vector<TaggedSlice> row;
  for (const auto& s : initial.slices) row.push_back(retag(align_point({s, initial.point}, "a")));
  t_.blocks = {row};
  t_.b = static_cast<int>(row.size());
  stats_ = LearnStats{};
  log_.clear();
  normal_ = false;
}

StepOutcome Learner::minimise_step() {
  size_t before = teacher_.membership_count();
  for (size_t i = 0; i < t_.blocks.size(); ++i)
    for (size_t j = 0; j < t_.blocks[i].size(); ++j) {
      const DataInstance& cur = t_.blocks[i][j].data;
      for (const auto& x : cur.individuals) {
        DataInstance d = drop_individual(cur, x);
        if (d.atom_count() == cur.atom_count()) continue;
        // Parts cut off from the point go first; the plain drop is the fallback.
        std::vector<DataInstance> tries{point_component(d)};
        if (tries[0] != d) tries.push_back(d);
        for (const auto& dd : tries) {
          TaggedSlice s = retag(dd);
          if (s.data == cur) continue;
          TaggedBNormal cand = t_;
          cand.blocks[i][j] = s;
          if (normal_) cand = renormalize(std::move(cand));
          if (ask(cand)) {
            ++stats_.minimise;
            accept(std::move(cand), "minimise");
            return {true, teacher_.membership_count() - before};
          }
        }
      }
    }
  return {false, teacher_.membership_count() - before};
}

StepOutcome Learner::minimise_all() {
  StepOutcome out;
  for (;;) {
    StepOutcome s = minimise_step();
    out.queries += s.queries;
    if (!s.changed) return out;
    out.changed = true;
  }
}

StepOutcome Learner::unwind_step() {
  for (size_t i = 0; i < t_.blocks.size(); ++i)
    for (size_t j = 0; j < t_.blocks[i].size(); ++j)
      if (auto atom = cycle_atom(t_.blocks[i][j].data)) {
        // The unfolding covers the slice, so tree-shaped queries still map and no query is needed.
        TaggedBNormal cand = t_;
        cand.blocks[i][j] = retag(unwind_slice(t_.blocks[i][j].data, *atom));
        ++stats_.unwind;
        accept(std::move(cand), "unwind");
        return {true, 0};
      }
  return {};
}

StepOutcome Learner::treeify() {
  StepOutcome out;
  for (;;) {
    out.queries += minimise_all().queries;
    TaggedBNormal cand = t_;
    bool strip = false;
    for (auto& blk : cand.blocks)
      for (auto& s : blk) {
        DataInstance d = point_component(s.data);
        if (d != s.data) {
          s = retag(d);
          strip = true;
        }
      }
    if (strip) {
      ++out.queries;
      if (!ask(cand)) throw UnsupportedDialect("a slice needs a component apart from the point");
      accept(std::move(cand), "component");
      out.changed = true;
    }
    if (!unwind_step().changed) return out;
    out.changed = true;
  }
}

StepOutcome Learner::drop_timepoint_step() {
  size_t before = teacher_.membership_count();
  if (t_.blocks.size() != 1) throw RuleNotApplicable("timepoints are dropped before the instance is split");
  const auto& row = t_.blocks[0];
  for (size_t j = 0; row.size() > 1 && j < row.size(); ++j) {
    TaggedBNormal cand = t_;
    cand.blocks[0].erase(cand.blocks[0].begin() + static_cast<long>(j));
    if (ask(cand)) {
      ++stats_.dropped;
      accept(std::move(cand), "drop");
      return {true, teacher_.membership_count() - before};
    }
  }
  return {false, teacher_.membership_count() - before};
}

StepOutcome Learner::drop_timepoints() {
  StepOutcome out;
  for (;;) {
    StepOutcome s = drop_timepoint_step();
    out.queries += s.queries;
    if (!s.changed) break;
    out.changed = true;
  }
  t_.b = static_cast<int>(t_.blocks[0].size());
  stats_.b = t_.b;
  normal_ = true;
  return out;
}

StepOutcome Learner::apply_rule3(Rule r) {
  size_t before = teacher_.membership_count();
  try {
    for (const auto& site : rule_sites(o_, t_, r, neg_)) {
      TaggedBNormal cand = apply_rule(o_, t_, r, site, neg_);
      for (auto& blk : cand.blocks)
        for (auto& s : blk) s = retag(s.data);
      cand = renormalize(std::move(cand));
      if (!ask(cand)) continue;
      switch (r) {
        case Rule::A: ++stats_.rule_a; break;
        case Rule::B: ++stats_.rule_b; break;
        case Rule::C: ++stats_.rule_c; break;
        case Rule::D: ++stats_.rule_d; break;
        case Rule::E: ++stats_.rule_e; break;
        case Rule::F: break;
      }
      accept(std::move(cand), "rule " + rule_name(r));
      minimise_all();
      return {true, teacher_.membership_count() - before};
    }
  } catch (const NoNegativesAvailable& e) {
    throw UnsupportedDialect(e.what());
  }
  return {false, teacher_.membership_count() - before};
}

StepOutcome Learner::close_rules() {
  StepOutcome out;
  auto run = [&](Rule r) {
    StepOutcome s = apply_rule3(r);
    out.queries += s.queries;
    out.changed = out.changed || s.changed;
    return s.changed;
  };
  while (run(Rule::B) || run(Rule::C)) {
  }
  while (run(Rule::A) || run(Rule::D) || run(Rule::E)) {
  }
  return out;
}

std::optional<std::vector<Eliq>> Learner::minimal_frontier_of(const Eliq& s) {
  auto it = frontiers_.find(s);
  if (it != frontiers_.end()) return it->second;
  std::optional<std::vector<Eliq>> out;
  if (auto f = frontier(o_, s, cls_, cfg_.frontier_bound, sigma_)) out = minimal_frontier(o_, *f).members;
  frontiers_.emplace(s, out);
  return out;
}

void Learner::shorten_gaps() { t_ = renormalize(t_); }

TaggedBNormal Learner::renormalize(TaggedBNormal t) const {
  auto trivial = [&](const TaggedSlice& s) { return s.data.trivial() || top_slice(o_, s); };
  std::vector<std::vector<TaggedSlice>> blocks;
  for (size_t i = 0; i < t.blocks.size(); ++i) {
    auto blk = t.blocks[i];
    while (blk.size() > 1 && trivial(blk.back())) blk.pop_back();
    if (i > 0) {
      while (!blk.empty() && trivial(blk.front())) blk.erase(blk.begin());
      if (blk.empty()) continue;
    }
    blocks.push_back(std::move(blk));
  }
  t.blocks = std::move(blocks);
  t.gaps.assign(t.blocks.size() - 1, t.b);
  return t;
}

namespace {

// Replaces primitive block i by w^k with w the hats of f separated by b empties.
TaggedBNormal with_power(const TaggedBNormal& t, int i, const std::vector<TaggedSlice>& w, int k) {
  TaggedBNormal out = t;
  std::vector<std::vector<TaggedSlice>> parts;
  for (int r = 0; r < k; ++r)
    for (const auto& s : w) parts.push_back({s});
  const bool has_next = i + 1 < static_cast<int>(t.blocks.size());
  const int after = has_next ? t.gaps[i] : 0;
  out.blocks.erase(out.blocks.begin() + i);
  out.blocks.insert(out.blocks.begin() + i, parts.begin(), parts.end());
  out.gaps.insert(out.gaps.begin() + i, parts.size() - 1, t.b);
  // w ends in b empties that join the gap after the replaced block.
  if (has_next) out.gaps[i + parts.size() - 1] = after + t.b;
  return out;
}

}  // namespace

StepOutcome Learner::star_step() {
  size_t before = teacher_.membership_count();
  for (int i = 1; i < static_cast<int>(t_.blocks.size()); ++i) {
    const auto& blk = t_.blocks[i];
    if (blk.size() != 1 || !blk[0].source || top_slice(o_, blk[0])) continue;
    auto f = minimal_frontier_of(*blk[0].source);
    if (!f) throw UnsupportedDialect("no verified frontier of " + blk[0].source->str());
    if (f->size() < 2) continue;
    std::vector<TaggedSlice> w;
    for (const auto& m : *f) w.push_back(retag(tagged_slice(o_, m).data));
    int lo = 0, hi = 1;
    while (!ask(with_power(t_, i, w, hi))) {
      lo = hi;
      if (hi >= cfg_.exponent_cap)
        throw UnsupportedDialect("no positive exponent up to " + std::to_string(cfg_.exponent_cap));
      hi = std::min(hi * 2, cfg_.exponent_cap);
    }
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (ask(with_power(t_, i, w, mid)))
        hi = mid;
      else
        lo = mid;
    }
    if (++stats_.star > cfg_.star_limit) throw UnsupportedDialect("lone conjunct replacement does not stabilise");
    accept(with_power(t_, i, w, hi), "star " + std::to_string(hi));
    while (apply_rule3(Rule::A).changed) {
    }
    shorten_gaps();
    accept(t_, "shorten");
    return {true, teacher_.membership_count() - before};
  }
  return {false, teacher_.membership_count() - before};
}

StepOutcome Learner::star_prime_step(int exponent) {
  size_t before = teacher_.membership_count();
  exponent = std::max(exponent, 1);
  for (int i = 1; i < static_cast<int>(t_.blocks.size()); ++i) {
    const auto& blk = t_.blocks[i];
    if (blk.size() != 1 || !blk[0].source || top_slice(o_, blk[0])) continue;
    auto f = minimal_frontier_of(*blk[0].source);
    if (!f) throw UnsupportedDialect("no verified frontier of " + blk[0].source->str());
    if (f->empty()) continue;
    std::vector<TaggedSlice> w;
    for (const auto& m : *f) w.push_back(retag(tagged_slice(o_, m).data));
    TaggedBNormal cand = with_power(t_, i, w, exponent);
    if (!ask(cand)) continue;
    if (++stats_.star > cfg_.star_limit) throw UnsupportedDialect("lone conjunct replacement does not stabilise");
    accept(std::move(cand), "star' " + std::to_string(exponent));
    while (apply_rule3(Rule::A).changed) {
    }
    shorten_gaps();
    accept(t_, "shorten");
    return {true, teacher_.membership_count() - before};
  }
  return {false, teacher_.membership_count() - before};
}

StepOutcome Learner::lone_conjuncts() {
  StepOutcome out;
  for (;;) {
    StepOutcome s;
    switch (cfg_.variant) {
      case LearnerVariant::SafeOnly: s = star_step(); break;
      case LearnerVariant::KnownDepth: s = star_prime_step(cfg_.depth); break;
      case LearnerVariant::NextDiamondOnly: s = star_prime_step(t_.b); break;
    }
    out.queries += s.queries;
    if (!s.changed) return out;
    out.changed = true;
  }
}

std::vector<std::vector<Rel>> Learner::infer_connectors(size_t* queries) {
  size_t before = teacher_.membership_count();
  std::vector<std::vector<Rel>> out;
  for (size_t i = 0; i + 1 < t_.blocks.size(); ++i) {
    const TaggedSlice& last = t_.blocks[i].back();
    const TaggedSlice& first = t_.blocks[i + 1].front();
    if (!last.source || !first.source) throw UnsupportedDialect("a block slice is not tree-shaped");
    if (compatible(o_, *last.source, *first.source)) {
      TaggedBNormal cand = t_;
      auto& left = cand.blocks[i];
      const auto& right = cand.blocks[i + 1];
      left.back() = retag(tagged_slice(o_, conjoin(*last.source, *first.source)).data);
      left.insert(left.end(), right.begin() + 1, right.end());
      cand.blocks.erase(cand.blocks.begin() + static_cast<long>(i) + 1);
      cand.gaps.erase(cand.gaps.begin() + static_cast<long>(i));
      if (ask(cand)) {
        out.push_back({Rel::Leq});
        log_.push_back("connector " + std::to_string(i) + ": <=");
        continue;
      }
    }
    int s = 0;
    for (; s < t_.gaps[i]; ++s) {
      TaggedBNormal cand = t_;
      cand.gaps[i] = s;
      if (ask(cand)) break;
    }
    out.push_back(std::vector<Rel>(static_cast<size_t>(s) + 1, Rel::Less));
    log_.push_back("connector " + std::to_string(i) + ": " + rel_str(out.back()));
  }
  if (queries) *queries = teacher_.membership_count() - before;
  return out;
}

PathQuery Learner::result(const std::vector<std::vector<Rel>>& connectors) const {
  BlockView v;
  for (const auto& blk : t_.blocks) {
    std::vector<Eliq> row;
    for (const auto& s : blk) {
      if (!s.source) throw UnsupportedDialect("a block slice is not tree-shaped");
      row.push_back(*s.source);
    }
    v.blocks.push_back(std::move(row));
  }
  v.connectors = connectors;
  return normalize(o_, from_blocks(v));
}

LearnResult learn(const Ontology& o, Teacher& teacher, const TemporalInstance& initial, const LearnerConfig& cfg) {
  if (!TContext(o, initial).consistent()) throw NotPositiveInitialExample("initial instance is unsatisfiable");
  Signature sigma = o.signature;
  sigma.merge(initial.signature());
  teacher.set_budget(teacher.membership_count() + cfg.budget);
  size_t start = teacher.membership_count();
  if (!teacher.membership(initial)) throw NotPositiveInitialExample("initial instance is not a positive example");

  Learner l(o, teacher, cfg, sigma);
  l.reset(initial);
  l.treeify();
  l.drop_timepoints();
  l.close_rules();
  l.lone_conjuncts();
  auto connectors = l.infer_connectors();

  LearnResult r;
  r.query = l.result(connectors);
  r.stats = l.stats();
  r.stats.membership_queries = teacher.membership_count() - start;
  r.stats.max_query_size = teacher.max_query_size();
  r.log = l.log();
  return r;
}

}  // namespace tomq
