#include <algorithm>
#include <functional>
#include <map>

#include "tomq/domain.hpp"
#include "tomq/verifier.hpp"

namespace tomq {

namespace {

// Entailer over hat(q), kept alive to answer many containment tests q |= x.
struct HatReasoner {
  HatReasoner(const Ontology& o, const Eliq& q) : bottom(q.bottom) {
    if (bottom) return;
    PointedInstance h = hat(o, q);
    point = h.point;
    e.emplace(o, h.instance);
    inconsistent = !e->consistent();
  }
  bool entails(const Eliq& x) const {
    if (bottom || inconsistent || x.is_top()) return true;
    if (x.bottom) return false;
    return e->entails(point, x);
  }
  bool bottom = false;
  bool inconsistent = false;
  std::string point;
  std::optional<Entailer> e;
};

// Keeps the strongest queries of a pool; among equivalent ones the earliest survives.
std::vector<Eliq> strongest(const Ontology& o, const std::vector<Eliq>& pool) {
  std::vector<Eliq> keep;
  std::vector<std::unique_ptr<HatReasoner>> rs;
  for (const auto& s : pool) {
    bool dominated = false;
    for (const auto& r : rs)
      if (r->entails(s)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    auto rs_new = std::make_unique<HatReasoner>(o, s);
    std::vector<Eliq> k2;
    std::vector<std::unique_ptr<HatReasoner>> r2;
    for (size_t i = 0; i < keep.size(); ++i) {
      if (rs_new->entails(keep[i])) continue;
      k2.push_back(std::move(keep[i]));
      r2.push_back(std::move(rs[i]));
    }
    k2.push_back(s);
    r2.push_back(std::move(rs_new));
    keep = std::move(k2);
    rs = std::move(r2);
  }
  return keep;
}

void for_each_node(Eliq& q, const std::function<void(Eliq&)>& f) {
  f(q);
  for (auto& e : q.edges) for_each_node(e.child, f);
}

std::vector<Eliq> one_step_weakenings(const Eliq& q) {
  std::vector<Eliq> out;
  // Address nodes by preorder index.
  size_t count = 0;
  Eliq probe = q;
  for_each_node(probe, [&](Eliq&) { ++count; });
  for (size_t target = 0; target < count; ++target) {
    Eliq base = q;
    size_t idx = 0;
    Eliq* node = nullptr;
    for_each_node(base, [&](Eliq& n) {
      if (idx++ == target) node = &n;
    });
    for (size_t i = 0; i < node->concepts.size(); ++i) {
      Eliq w = base;
      size_t j = 0;
      for_each_node(w, [&](Eliq& n) {
        if (j++ == target) n.concepts.erase(n.concepts.begin() + static_cast<long>(i));
      });
      out.push_back(w);
    }
    for (size_t i = 0; i < node->edges.size(); ++i) {
      Eliq w = base;
      size_t j = 0;
      for_each_node(w, [&](Eliq& n) {
        if (j++ == target) n.edges.erase(n.edges.begin() + static_cast<long>(i));
      });
      out.push_back(w);
      Eliq z = base;
      j = 0;
      for_each_node(z, [&](Eliq& n) {
        if (j++ != target) return;
        auto& e = n.edges[i];
        Eliq back = Eliq::exists(e.role.inv(), Eliq::exists(e.role, e.child));
        e.child = back;
      });
      out.push_back(z);
    }
  }
  for (auto& w : out) w.canonicalize();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool over_signature(const Eliq& q, const Signature& s) {
  Signature g = q.signature();
  return std::includes(s.concepts.begin(), s.concepts.end(), g.concepts.begin(), g.concepts.end()) &&
         std::includes(s.roles.begin(), s.roles.end(), g.roles.begin(), g.roles.end());
}

}  // namespace

Signature working_signature(const Ontology& o, const Eliq& q) {
  Signature s = o.signature;
  s.merge(q.signature());
  return s;
}

std::optional<Frontier> frontier(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound,
                                 const Signature& sigma, FrontierTrace* trace) {
  if (!satisfiable(o, q)) throw UnsatisfiableQuery("frontier of an unsatisfiable query");
  if (contains(o, Eliq::top(), q)) return Frontier{};
  HatReasoner hq(o, q);
  if (cls == DomainClass::P) {
    int n = static_cast<int>(sigma.concepts.size());
    std::vector<Eliq> pool;
    for (const auto& s : enum_eliqs(sigma, DomainClass::P, n))
      if (hq.entails(s) && !contains(o, s, q)) pool.push_back(s);
    return Frontier{strongest(o, pool)};
  }
  std::vector<Eliq> weaker;  // strict weakenings up to the verification bound
  for (auto& w : enum_entailed_eliqs(o, q, sigma, cls, size_bound))
    if (!contains(o, w, q)) weaker.push_back(std::move(w));
  std::vector<Eliq> extra;
  for (auto& w : one_step_weakenings(q)) {
    if (cls == DomainClass::ELQ && !w.is_elq()) continue;
    if (over_signature(w, sigma) && !contains(o, w, q)) extra.push_back(std::move(w));
  }
  int gen_bound = std::max(size_bound - 1, 0);
  std::vector<Eliq> last;
  for (int level = 0; level <= gen_bound; ++level) {
    std::vector<Eliq> pool;
    for (const auto& w : weaker)
      if (static_cast<int>(w.size()) <= level) pool.push_back(w);
    pool.insert(pool.end(), extra.begin(), extra.end());
    std::vector<Eliq> cand = strongest(o, pool);
    if (level > 0 && cand == last) continue;
    last = cand;
    std::vector<std::unique_ptr<HatReasoner>> rs;
    for (const auto& c : cand) rs.push_back(std::make_unique<HatReasoner>(o, c));
    std::optional<Eliq> witness;
    for (const auto& w : weaker) {
      bool covered = false;
      for (const auto& r : rs)
        if (r->entails(w)) {
          covered = true;
          break;
        }
      if (!covered) {
        witness = w;
        break;
      }
    }
    if (trace) trace->attempts.push_back({cand, witness});
    if (!witness) return Frontier{cand};
  }
  return std::nullopt;
}

std::optional<Frontier> frontier(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound) {
  return frontier(o, q, cls, size_bound, working_signature(o, q));
}

Frontier minimal_frontier(const Ontology& o, const Frontier& f) {
  std::vector<Eliq> m = f.members;
  for (size_t i = 0; i < m.size();) {
    bool drop = false;
    for (size_t j = 0; j < m.size() && !drop; ++j)
      if (j != i && contains(o, m[j], m[i])) drop = true;
    if (drop)
      m.erase(m.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return {m};
}

Tri is_meet_reducible(const Ontology& o, const Eliq& q, DomainClass cls, int size_bound) {
  if (!satisfiable(o, q) || contains(o, Eliq::top(), q)) return Tri::False;
  Signature sigma = working_signature(o, q);
  if (auto f = frontier(o, q, cls, size_bound, sigma)) return minimal_frontier(o, *f).members.size() >= 2 ? Tri::True : Tri::False;
  std::vector<Eliq> weaker;
  for (auto& w : enum_entailed_eliqs(o, q, sigma, cls, size_bound))
    if (!contains(o, w, q)) weaker.push_back(std::move(w));
  for (size_t i = 0; i < weaker.size(); ++i)
    for (size_t j = i + 1; j < weaker.size(); ++j)
      if (contains(o, conjoin(weaker[i], weaker[j]), q)) return Tri::True;
  return Tri::Unknown;
}

namespace {

void add_subconcepts(const Eliq& q, std::vector<Eliq>& out) {
  if (q.bottom || q.is_top()) return;
  out.push_back(q);
  for (const auto& c : q.concepts) out.push_back(Eliq::atom(c));
  for (const auto& e : q.edges) {
    out.push_back(Eliq::exists(e.role, e.child));
    add_subconcepts(e.child, out);
  }
}

Eliq basic_query(const Basic& b) {
  switch (b.kind) {
    case Basic::Top:
      return Eliq::top();
    case Basic::Name:
      return Eliq::atom(b.name);
    case Basic::Exists:
      return Eliq::exists(b.role, Eliq::top());
  }
  return Eliq::top();
}

Eliq name_or_top(const std::string& a) { return a.empty() ? Eliq::top() : Eliq::atom(a); }

std::vector<Eliq> ontology_subconcepts(const Ontology& o) {
  std::vector<Eliq> out;
  for (const auto& ax : o.axioms) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SubBasic> || std::is_same_v<T, Disjoint>) {
            out.push_back(basic_query(x.lhs));
            out.push_back(basic_query(x.rhs));
          } else if constexpr (std::is_same_v<T, Func>) {
            out.push_back(Eliq::exists(x.role, Eliq::top()));
          } else if constexpr (std::is_same_v<T, RoleSub>) {
            out.push_back(Eliq::exists(x.sub, Eliq::top()));
            out.push_back(Eliq::exists(x.sup, Eliq::top()));
          } else if constexpr (std::is_same_v<T, ExistsRHS>) {
            out.push_back(name_or_top(x.lhs));
            out.push_back(name_or_top(x.filler));
            out.push_back(Eliq::exists(x.role, name_or_top(x.filler)));
          } else if constexpr (std::is_same_v<T, ExistsLHS>) {
            out.push_back(name_or_top(x.filler));
            out.push_back(name_or_top(x.rhs));
            out.push_back(Eliq::exists(x.role, name_or_top(x.filler)));
          } else if constexpr (std::is_same_v<T, ConjLHS>) {
            out.push_back(name_or_top(x.a));
            out.push_back(name_or_top(x.b));
            if (!x.bottom) out.push_back(name_or_top(x.rhs));
          }
        },
        ax);
  }
  return out;
}

}  // namespace

TypeAtlas type_atlas(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs) {
  TypeAtlas at;
  std::vector<Eliq> cl;
  for (const auto& c : sigma.concepts) cl.push_back(Eliq::atom(c));
  for (const auto& q : qs) add_subconcepts(q, cl);
  for (auto& c : ontology_subconcepts(o)) cl.push_back(std::move(c));
  for (auto& c : cl) c.canonicalize();
  std::sort(cl.begin(), cl.end());
  cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
  cl.erase(std::remove_if(cl.begin(), cl.end(), [](const Eliq& c) { return c.is_top() || c.bottom; }), cl.end());
  at.closure = cl;
  size_t n = cl.size();

  auto conj_of = [&](const std::vector<char>& t) {
    std::vector<Eliq> parts;
    for (size_t i = 0; i < n; ++i)
      if (t[i]) parts.push_back(cl[i]);
    return conjoin_all(parts);
  };
  // Closure-consequences of a set of positives, or nullopt when unsatisfiable.
  auto close = [&](const std::vector<char>& t) -> std::optional<std::vector<char>> {
    HatReasoner r(o, conj_of(t));
    if (r.inconsistent) return std::nullopt;
    std::vector<char> out(n, 0);
    for (size_t i = 0; i < n; ++i) out[i] = t[i] || r.entails(cl[i]);
    return out;
  };
  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> queue;
  if (auto t0 = close(std::vector<char>(n, 0))) {
    seen.insert(*t0);
    queue.push_back(*t0);
  }
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto cur = queue[qi];
    for (size_t i = 0; i < n; ++i) {
      if (cur[i]) continue;
      auto t = cur;
      t[i] = 1;
      auto c = close(t);
      if (c && seen.insert(*c).second) queue.push_back(*c);
    }
  }
  at.types.assign(seen.begin(), seen.end());

  auto tname = [](size_t i) { return "t" + std::to_string(i); };
  for (size_t i = 0; i < at.types.size(); ++i) {
    at.type_instance.add_individual(tname(i));
    for (size_t k = 0; k < n; ++k)
      if (at.types[i][k] && cl[k].is_propositional() && cl[k].concepts.size() == 1 &&
          sigma.concepts.count(cl[k].concepts[0]))
        at.type_instance.add_concept(cl[k].concepts[0], tname(i));
  }
  std::vector<PointedInstance> hats;
  for (const auto& t : at.types) hats.push_back(hat(o, conj_of(t)));
  for (const auto& p : sigma.roles)
    for (size_t i = 0; i < at.types.size(); ++i)
      for (size_t j = 0; j < at.types.size(); ++j) {
        DataInstance pat;
        std::map<std::string, std::string> ren_i, ren_j;
        for (const auto& x : hats[i].instance.individuals) ren_i[x] = x == hats[i].point ? "u" : "u." + x;
        for (const auto& x : hats[j].instance.individuals) ren_j[x] = x == hats[j].point ? "v" : "v." + x;
        pat.merge(hats[i].instance.rename(ren_i));
        pat.merge(hats[j].instance.rename(ren_j));
        pat.add_individual("u");
        pat.add_individual("v");
        pat.add_role(Role{p, false}, "u", "v");
        Entailer e(o, pat, false);
        if (!e.consistent()) continue;
        auto reps = e.representatives();
        bool ok = true;
        for (size_t k = 0; k < n && ok; ++k) {
          if (!at.types[i][k] && e.entails(reps.at("u"), cl[k])) ok = false;
          if (!at.types[j][k] && e.entails(reps.at("v"), cl[k])) ok = false;
        }
        if (ok) at.type_instance.add_role(Role{p, false}, tname(i), tname(j));
      }
  return at;
}

SplitPartner split_partner(const Ontology& o, const Signature& sigma, const std::vector<Eliq>& qs0,
                           size_t atom_budget) {
  std::vector<Eliq> qs;
  for (const auto& q : qs0)
    if (!q.bottom) qs.push_back(q);
  TypeAtlas at = type_atlas(o, sigma, qs);
  size_t nt = at.types.size();
  size_t n = std::max<size_t>(qs.size(), 1);
  // Position of each query in the closure (npos when unconstrained).
  std::vector<size_t> qpos;
  for (auto q : qs) {
    q.canonicalize();
    auto it = std::find(at.closure.begin(), at.closure.end(), q);
    qpos.push_back(it == at.closure.end() ? SIZE_MAX : static_cast<size_t>(it - at.closure.begin()));
  }
  double tuples = 1;
  for (size_t i = 0; i < n; ++i) tuples *= static_cast<double>(nt);
  double edges_est = 1;
  for (size_t i = 0; i < n; ++i) edges_est *= static_cast<double>(std::max<size_t>(at.type_instance.role_atoms.size(), 1));
  if (tuples + edges_est > static_cast<double>(atom_budget))
    throw SizeGuardExceeded("product instance exceeds the atom budget");

  std::vector<std::string> tn(nt);
  std::map<std::string, size_t> tid;
  for (size_t i = 0; i < nt; ++i) tn[i] = "t" + std::to_string(i), tid[tn[i]] = i;
  std::vector<std::set<std::string>> lab(nt);
  for (const auto& [c, x] : at.type_instance.concept_atoms) lab[tid.at(x)].insert(c);
  std::map<std::string, std::vector<std::pair<size_t, size_t>>> rel;
  for (const auto& [p, x, y] : at.type_instance.role_atoms) rel[p].emplace_back(tid.at(x), tid.at(y));

  auto tuple_name = [&](const std::vector<size_t>& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) s += (i ? "_" : "") + tn[t[i]];
    return s;
  };
  // Product instance.
  DataInstance prod;
  std::vector<std::vector<size_t>> all;
  std::vector<size_t> cur(n, 0);
  std::function<void(size_t)> gen = [&](size_t i) {
    if (i == n) {
      all.push_back(cur);
      return;
    }
    for (size_t t = 0; t < nt; ++t) {
      cur[i] = t;
      gen(i + 1);
    }
  };
  if (nt > 0) gen(0);
  for (const auto& t : all) {
    std::string nm = tuple_name(t);
    prod.add_individual(nm);
    std::set<std::string> common = lab[t[0]];
    for (size_t i = 1; i < n; ++i) {
      std::set<std::string> nx;
      std::set_intersection(common.begin(), common.end(), lab[t[i]].begin(), lab[t[i]].end(),
                            std::inserter(nx, nx.begin()));
      common = nx;
    }
    for (const auto& c : common) prod.add_concept(c, nm);
  }
  for (const auto& [p, pairs] : rel) {
    std::vector<size_t> a(n), b(n);
    std::function<void(size_t)> go = [&](size_t i) {
      if (i == n) {
        prod.add_role(Role{p, false}, tuple_name(a), tuple_name(b));
        return;
      }
      for (const auto& [x, y] : pairs) {
        a[i] = x;
        b[i] = y;
        go(i + 1);
      }
    };
    go(0);
  }
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [p, x, y] : prod.role_atoms) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  SplitPartner out;
  for (const auto& t : all) {
    bool ok = true;
    for (size_t i = 0; i < qs.size() && ok; ++i)
      if (qpos[i] != SIZE_MAX && at.types[t[i]][qpos[i]]) ok = false;
    if (!ok) continue;
    std::string pt = tuple_name(t);
    std::set<std::string> comp{pt};
    std::vector<std::string> stack{pt};
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (const auto& y : adj[x])
        if (comp.insert(y).second) stack.push_back(y);
    }
    std::map<std::string, std::string> ren;
    for (const auto& x : comp) ren[x] = x == pt ? "a" : x;
    out.members.push_back({prod.restrict_to(comp).rename(ren), "a"});
    out.origins.push_back(pt);
  }
  return out;
}

SingularPlus singular_plus_from_frontier(const Ontology& o, const Eliq& q, const Frontier& f) {
  SingularPlus sp;
  sp.positive = hat(o, q);
  for (const auto& r : f.members) sp.negatives.push_back(hat(o, r));
  sp.provenance = Provenance::FromFrontier;
  return sp;
}

SingularPlus singular_plus_from_split(const Ontology& o, const Eliq& q, const SplitPartner& s) {
  SingularPlus sp;
  sp.positive = hat(o, q);
  sp.negatives = s.members;
  sp.provenance = Provenance::FromSplit;
  return sp;
}

SingularPlus negatives_for(const Ontology& o, const Eliq& q, const Signature& sigma, const NegativesConfig& cfg) {
  if (contains(o, Eliq::top(), q)) return singular_plus_from_frontier(o, q, Frontier{});
  DomainClass cls = cfg.cls ? *cfg.cls : (q.is_propositional() ? DomainClass::P : DomainClass::ELIQ);
  if (cfg.policy != NegativesPolicy::SplitOnly) {
    if (auto f = frontier(o, q, cls, cfg.frontier_bound, sigma)) return singular_plus_from_frontier(o, q, *f);
    if (cfg.policy == NegativesPolicy::FrontierOnly)
      throw NoCharacterisationFound("no verified frontier of " + q.str() + " within size " +
                                    std::to_string(cfg.frontier_bound));
  }
  try {
    return singular_plus_from_split(o, q, split_partner(o, sigma, {q}));
  } catch (const SizeGuardExceeded& e) {
    throw NoCharacterisationFound(std::string("no negatives: ") + e.what());
  }
}

}  // namespace tomq
