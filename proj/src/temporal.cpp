#include <algorithm>

#include "tomq/temporal.hpp"

namespace tomq {

PathQuery PathQuery::single(Eliq q) {
  PathQuery p;
  p.bodies = {std::move(q)};
  return p;
}

int PathQuery::count(Rel r) const { return static_cast<int>(std::count(rels.begin(), rels.end(), r)); }

size_t PathQuery::size() const {
  size_t n = rels.size();
  for (const auto& b : bodies) n += std::max<size_t>(1, b.size());
  return n;
}

bool PathQuery::only_propositional() const {
  return std::all_of(bodies.begin(), bodies.end(), [](const Eliq& b) { return b.is_propositional(); });
}

Signature PathQuery::signature() const {
  Signature s;
  for (const auto& b : bodies) s.merge(b.signature());
  return s;
}

void PathQuery::canonicalize() {
  for (auto& b : bodies) b.canonicalize();
}

namespace {

size_t conj_count(const Eliq& b) { return b.bottom ? 1 : b.concepts.size() + b.edges.size(); }

const char* rel_op(Rel r) {
  switch (r) {
    case Rel::Suc: return "X";
    case Rel::Less: return "F";
    case Rel::Leq: return "Fr";
  }
  return "?";
}

std::string path_level(const PathQuery& q, size_t i) {
  std::string out;
  if (conj_count(q.bodies[i]) > 0) out = q.bodies[i].str();
  if (i < q.rels.size()) {
    std::string inner = path_level(q, i + 1);
    size_t n = conj_count(q.bodies[i + 1]) + (i + 1 < q.rels.size() ? 1 : 0);
    std::string part = std::string(rel_op(q.rels[i])) + (n > 1 ? "(" + inner + ")" : " " + inner);
    out = out.empty() ? part : out + " & " + part;
  }
  return out.empty() ? "Top" : out;
}

}  // namespace

std::string PathQuery::str() const { return path_level(*this, 0); }

BlockView blocks_of(const PathQuery& q) {
  BlockView v;
  std::vector<std::pair<size_t, size_t>> segs;
  size_t start = 0;
  for (size_t i = 0; i < q.rels.size(); ++i)
    if (q.rels[i] != Rel::Suc) {
      segs.emplace_back(start, i);
      start = i + 1;
    }
  segs.emplace_back(start, q.bodies.size() - 1);
  std::vector<Rel> pending;
  for (size_t s = 0; s < segs.size(); ++s) {
    auto [b, e] = segs[s];
    if (s > 0) pending.push_back(q.rels[b - 1]);
    bool top_prim = b == e && q.bodies[b].is_top();
    if (s > 0 && top_prim && s + 1 < segs.size()) continue;
    if (s > 0) v.connectors.push_back(std::move(pending));
    pending.clear();
    v.blocks.emplace_back(q.bodies.begin() + b, q.bodies.begin() + e + 1);
  }
  return v;
}

PathQuery from_blocks(const BlockView& v) {
  PathQuery q;
  q.bodies.clear();
  for (size_t i = 0; i < v.blocks.size(); ++i) {
    if (i > 0) {
      const auto& c = v.connectors[i - 1];
      for (size_t k = 0; k < c.size(); ++k) {
        if (k > 0) q.bodies.push_back(Eliq::top());
        q.rels.push_back(c[k]);
      }
    }
    for (size_t j = 0; j < v.blocks[i].size(); ++j) {
      if (j > 0) q.rels.push_back(Rel::Suc);
      q.bodies.push_back(v.blocks[i][j]);
    }
  }
  return q;
}

int less_count(const std::vector<Rel>& c) { return static_cast<int>(std::count(c.begin(), c.end(), Rel::Less)); }

size_t UntilQuery::size() const {
  size_t n = std::max<size_t>(1, head.size());
  for (const auto& s : steps) n += 1 + (s.filler ? std::max<size_t>(1, s.filler->size()) : 1) + std::max<size_t>(1, s.target.size());
  return n;
}

Signature UntilQuery::signature() const {
  Signature s = head.signature();
  for (const auto& st : steps) {
    if (st.filler) s.merge(st.filler->signature());
    s.merge(st.target.signature());
  }
  return s;
}

std::string UntilQuery::str() const {
  std::string out = head.str();
  for (const auto& s : steps) out += " ; U[" + (s.filler ? s.filler->str() : std::string("bot")) + "] " + s.target.str();
  return out;
}

int TFormula::tdp() const {
  int d = 0;
  for (const auto& k : kids) d = std::max(d, k.tdp());
  return op == Atom || op == And ? d : d + 1;
}

std::string TFormula::str() const {
  switch (op) {
    case Atom: return atom.str();
    case And: {
      std::string out;
      for (const auto& k : kids) out += (out.empty() ? "" : " & ") + (k.op == And ? "(" + k.str() + ")" : k.str());
      return out;
    }
    case Next: return "X(" + kids[0].str() + ")";
    case Dia: return "F(" + kids[0].str() + ")";
    case DiaR: return "Fr(" + kids[0].str() + ")";
    case Until: return "(" + kids[0].str() + ") U (" + kids[1].str() + ")";
  }
  return "";
}

TFormula to_formula(const PathQuery& q) {
  size_t n = q.rels.size();
  TFormula f = TFormula::of(q.bodies[n]);
  for (size_t i = n; i-- > 0;) {
    TFormula::Op op = q.rels[i] == Rel::Suc ? TFormula::Next : q.rels[i] == Rel::Less ? TFormula::Dia : TFormula::DiaR;
    f = TFormula::conj({TFormula::of(q.bodies[i]), TFormula::unary(op, std::move(f))});
  }
  return f;
}

TFormula to_formula(const UntilQuery& q) {
  size_t n = q.steps.size();
  if (n == 0) return TFormula::of(q.head);
  auto filler = [](const UntilStep& s) { return TFormula::of(s.filler ? *s.filler : Eliq::bot()); };
  TFormula g = TFormula::of(q.steps[n - 1].target);
  for (size_t i = n - 1; i-- > 0;)
    g = TFormula::conj({TFormula::of(q.steps[i].target), TFormula::until(filler(q.steps[i + 1]), std::move(g))});
  return TFormula::conj({TFormula::of(q.head), TFormula::until(filler(q.steps[0]), std::move(g))});
}

size_t TemporalInstance::size() const {
  size_t n = 0;
  for (const auto& s : slices) n += s.atom_count();
  return n;
}

std::set<std::string> TemporalInstance::individuals() const {
  std::set<std::string> out{point};
  for (const auto& s : slices) out.insert(s.individuals.begin(), s.individuals.end());
  return out;
}

DataInstance TemporalInstance::slice(int t) const {
  DataInstance d = t <= max() ? slices[t] : DataInstance{};
  for (const auto& a : individuals()) d.add_individual(a);
  return d;
}

Signature TemporalInstance::signature() const {
  Signature s;
  for (const auto& sl : slices) s.merge(sl.signature());
  return s;
}

void TemporalInstance::canonicalize() {
  for (auto& s : slices) {
    s.individuals.clear();
    for (const auto& [c, x] : s.concept_atoms) s.individuals.insert(x);
    for (const auto& [r, x, y] : s.role_atoms) {
      s.individuals.insert(x);
      s.individuals.insert(y);
    }
  }
}

TemporalInstance concat(const std::vector<TemporalInstance>& parts) {
  TemporalInstance out;
  out.slices.clear();
  if (!parts.empty()) out.point = parts[0].point;
  for (const auto& p : parts) out.slices.insert(out.slices.end(), p.slices.begin(), p.slices.end());
  if (out.slices.empty()) out.slices.emplace_back();
  return out;
}

TemporalInstance empties(int n, const std::string& point) {
  TemporalInstance d;
  d.point = point;
  d.slices.assign(std::max(n, 0), DataInstance{});
  return d;
}

DataInstance align_point(const PointedInstance& p, const std::string& point) {
  if (p.point == point) return p.instance;
  std::map<std::string, std::string> m{{p.point, point}};
  if (p.instance.individuals.count(point)) m[point] = point + "'";
  return p.instance.rename(m);
}

TemporalInstance single_slice(const PointedInstance& p, const std::string& point) {
  TemporalInstance d;
  d.point = point;
  d.slices = {align_point(p, point)};
  return d;
}

struct TContext::Impl {
  Ontology o;
  TemporalInstance d;
  mutable std::vector<std::unique_ptr<Entailer>> slices;
  mutable std::vector<std::map<Eliq, bool>> answers;
  bool ok = true;

  Impl(const Ontology& onto, const TemporalInstance& inst) : o(onto), d(inst) {
    slices.resize(d.max() + 2);
    answers.resize(d.max() + 2);
    for (int t = 0; t <= d.max() + 1 && ok; ++t) ok = reasoner(t).consistent();
  }

  Entailer& reasoner(int t) const {
    t = std::min(t, d.max() + 1);
    if (!slices[t]) {
      DataInstance s;
      if (t <= d.max()) s = d.slices[t];
      s.add_individual(d.point);
      slices[t] = std::make_unique<Entailer>(o, s);
    }
    return *slices[t];
  }
};

TContext::TContext(const Ontology& o, const TemporalInstance& d) : impl_(std::make_unique<Impl>(o, d)) {}
TContext::~TContext() = default;
TContext::TContext(TContext&&) noexcept = default;

bool TContext::consistent() const { return impl_->ok; }

const TemporalInstance& TContext::instance() const { return impl_->d; }

bool TContext::holds(int t, const Eliq& q) const {
  if (!impl_->ok) return true;
  t = std::min(t, impl_->d.max() + 1);
  auto& cache = impl_->answers[t];
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  bool r = impl_->reasoner(t).entails(impl_->d.point, q);
  cache.emplace(q, r);
  return r;
}

std::vector<char> TContext::eval(const TFormula& f) const {
  int n = impl_->d.max() + 2;
  if (!impl_->ok) return std::vector<char>(n, 1);
  std::vector<char> v(n, 0);
  switch (f.op) {
    case TFormula::Atom:
      for (int t = 0; t < n; ++t) v[t] = holds(t, f.atom);
      break;
    case TFormula::And:
      std::fill(v.begin(), v.end(), 1);
      for (const auto& k : f.kids) {
        auto kv = eval(k);
        for (int t = 0; t < n; ++t) v[t] = v[t] && kv[t];
      }
      break;
    case TFormula::Next: {
      auto k = eval(f.kids[0]);
      for (int t = 0; t + 1 < n; ++t) v[t] = k[t + 1];
      v[n - 1] = k[n - 1];
      break;
    }
    case TFormula::Dia:
    case TFormula::DiaR: {
      auto k = eval(f.kids[0]);
      v[n - 1] = k[n - 1];
      for (int t = n - 2; t >= 0; --t) v[t] = k[t + 1] || v[t + 1];
      if (f.op == TFormula::DiaR)
        for (int t = 0; t < n; ++t) v[t] = v[t] || k[t];
      break;
    }
    case TFormula::Until: {
      auto l = eval(f.kids[0]);
      auto r = eval(f.kids[1]);
      v[n - 1] = r[n - 1];
      for (int t = n - 2; t >= 0; --t) v[t] = r[t + 1] || (l[t + 1] && v[t + 1]);
      break;
    }
  }
  return v;
}

bool TContext::entails(const TFormula& f, int t) const {
  auto v = eval(f);
  return v[std::min<int>(t, static_cast<int>(v.size()) - 1)];
}

bool tentail(const Ontology& o, const TemporalInstance& d, int t, const TFormula& q) {
  return TContext(o, d).entails(q, t);
}
bool tentail(const Ontology& o, const TemporalInstance& d, int t, const PathQuery& q) {
  return tentail(o, d, t, to_formula(q));
}
bool tentail(const Ontology& o, const TemporalInstance& d, int t, const UntilQuery& q) {
  return tentail(o, d, t, to_formula(q));
}

std::vector<RootHom> root_homs(const Ontology& o, const PathQuery& q, const TemporalInstance& d) {
  TContext ctx(o, d);
  int horizon = d.max() + q.tdp() + 1;
  std::vector<RootHom> out;
  RootHom h(q.bodies.size(), 0);
  std::function<void(size_t)> go = [&](size_t i) {
    if (!ctx.holds(h[i], q.bodies[i])) return;
    if (i + 1 == q.bodies.size()) {
      out.push_back(h);
      return;
    }
    int lo = q.rels[i] == Rel::Leq ? h[i] : h[i] + 1;
    int hi = q.rels[i] == Rel::Suc ? h[i] + 1 : horizon;
    for (int t = lo; t <= std::min(hi, horizon); ++t) {
      h[i + 1] = t;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

bool slice_is_empty(const Ontology& o, const TemporalInstance& d, int t) {
  const DataInstance& s = d.slices[t];
  if (s.atom_count() == 0) return true;
  if (!s.role_atoms.empty()) return false;
  for (const auto& [c, a] : s.concept_atoms)
    if (a != d.point) return false;
  DataInstance base;
  base.add_individual(d.point);
  Entailer e(o, base);
  if (!e.consistent()) return false;
  for (const auto& [c, a] : s.concept_atoms)
    if (!e.entails(d.point, Eliq::atom(c))) return false;
  return true;
}

BlockDecomposition decompose_blocks(const Ontology& o, const TemporalInstance& d, int b) {
  if (b < 1) throw NotBNormal("gap parameter must be positive");
  std::vector<int> nonempty;
  for (int t = 0; t <= d.max(); ++t)
    if (!slice_is_empty(o, d, t)) nonempty.push_back(t);
  std::vector<std::pair<int, int>> spans{{0, 0}};
  for (int t : nonempty) {
    if (t == 0) continue;
    int gap = t - spans.back().second - 1;
    if (gap < b)
      spans.back().second = t;
    else if (gap == b)
      spans.emplace_back(t, t);
    else
      throw NotBNormal("gap of " + std::to_string(gap) + " empty slices exceeds " + std::to_string(b));
  }
  if (spans.back().second != d.max()) throw NotBNormal("trailing empty slices");
  BlockDecomposition out;
  out.b = b;
  for (auto [s, e] : spans) {
    if (e - s + 1 > b) throw NotBNormal("block at " + std::to_string(s) + " is longer than " + std::to_string(b));
    TemporalInstance blk;
    blk.point = d.point;
    blk.slices.assign(d.slices.begin() + s, d.slices.begin() + e + 1);
    out.blocks.push_back(std::move(blk));
    out.starts.push_back(s);
  }
  return out;
}

UntilQuery until_truncate(const UntilQuery& q, int i) {
  UntilQuery out = q;
  for (int j = 0; j < std::min<int>(i, out.depth()); ++j) out.steps[j].filler.reset();
  return out;
}

bool is_peerless(const Ontology& o, const UntilQuery& q) {
  for (const auto& s : q.steps) {
    if (!s.filler) continue;
    if (contains(o, s.target, *s.filler) || contains(o, *s.filler, s.target)) return false;
  }
  return true;
}

}  // namespace tomq
