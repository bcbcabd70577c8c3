#include <algorithm>
#include <functional>

#include "tomq/dl.hpp"

namespace tomq {

std::optional<DataInstance> saturate(const Ontology& o, const DataInstance& a) {
  o.validate();
  Entailer e(o, a);
  if (!e.consistent()) return std::nullopt;
  return e.saturated();
}

DataInstance chase(const Ontology& o, const DataInstance& a, int depth) { return Entailer(o, a).chase(depth); }

bool consistent(const Ontology& o, const DataInstance& a) { return Entailer(o, a).consistent(); }

bool certain_answer(const Ontology& o, const DataInstance& a, const std::string& ind, const Eliq& q) {
  DataInstance b = a;
  b.add_individual(ind);
  return Entailer(o, b).entails(ind, q);
}

PointedInstance induced_instance(const Eliq& q) {
  PointedInstance out;
  out.point = "a";
  int counter = 0;
  std::function<void(const Eliq&, const std::string&)> rec = [&](const Eliq& n, const std::string& name) {
    out.instance.add_individual(name);
    for (const auto& c : n.concepts) out.instance.add_concept(c, name);
    for (const auto& e : n.edges) {
      std::string child = "x" + std::to_string(++counter);
      out.instance.add_role(e.role, name, child);
      rec(e.child, child);
    }
  };
  rec(q, "a");
  return out;
}

std::map<std::string, std::string> hat_projection(const Ontology& o, const Eliq& q) {
  PointedInstance ind = induced_instance(q);
  std::map<std::string, std::string> id;
  for (const auto& x : ind.instance.individuals) id[x] = x;
  if (!o.has_func()) return id;
  Entailer e(o, ind.instance, false);
  if (!e.consistent()) return id;
  return e.representatives();
}

PointedInstance hat(const Ontology& o, const Eliq& q) {
  if (q.bottom) throw Error("hat of the inconsistency query is undefined");
  PointedInstance ind = induced_instance(q);
  if (!o.has_func()) return ind;
  auto reps = hat_projection(o, q);
  return {ind.instance.rename(reps), reps.at("a")};
}

bool satisfiable(const Ontology& o, const Eliq& q) {
  if (q.bottom) return false;
  return Entailer(o, hat(o, q).instance).consistent();
}

bool contains(const Ontology& o, const Eliq& q1, const Eliq& q2) {
  if (q1.bottom) return true;
  if (q2.is_top()) return true;
  PointedInstance h = hat(o, q1);
  Entailer e(o, h.instance);
  if (!e.consistent()) return true;
  if (q2.bottom) return false;
  return e.entails(h.point, q2);
}

bool equivalent(const Ontology& o, const Eliq& q1, const Eliq& q2) {
  return contains(o, q1, q2) && contains(o, q2, q1);
}

Eliq conjoin(const Eliq& q1, const Eliq& q2) {
  if (q1.bottom || q2.bottom) return Eliq::bot();
  Eliq out = q1;
  out.concepts.insert(out.concepts.end(), q2.concepts.begin(), q2.concepts.end());
  out.edges.insert(out.edges.end(), q2.edges.begin(), q2.edges.end());
  out.canonicalize();
  return out;
}

Eliq conjoin_all(const std::vector<Eliq>& qs) {
  Eliq out;
  for (const auto& q : qs) out = conjoin(out, q);
  return out;
}

bool compatible(const Ontology& o, const Eliq& q1, const Eliq& q2) { return satisfiable(o, conjoin(q1, q2)); }

bool hom_exists(const Eliq& q, const DataInstance& a, const std::string& ind) {
  DataInstance b = a;
  b.add_individual(ind);
  return Entailer(Ontology{}, b).entails(ind, q);
}

bool is_tree_shaped(const DataInstance& a, const std::string& ind) {
  if (!a.individuals.count(ind)) return false;
  std::set<std::pair<std::string, std::string>> links;
  for (const auto& [p, x, y] : a.role_atoms) {
    if (x == y) return false;
    auto key = std::minmax(x, y);
    if (!links.emplace(key.first, key.second).second) return false;
  }
  if (links.size() + 1 != a.individuals.size()) return false;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [x, y] : links) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  std::set<std::string> seen{ind};
  std::vector<std::string> stack{ind};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (const auto& y : adj[x])
      if (seen.insert(y).second) stack.push_back(y);
  }
  return seen.size() == a.individuals.size();
}

Eliq instance_to_eliq(const DataInstance& a, const std::string& ind) {
  if (!is_tree_shaped(a, ind)) throw NotTreeShaped("instance is not a tree rooted at " + ind);
  std::function<Eliq(const std::string&, const std::string&)> rec = [&](const std::string& x,
                                                                        const std::string& from) {
    Eliq q;
    for (const auto& c : a.concepts_of(x)) q.concepts.push_back(c);
    for (const auto& [p, u, v] : a.role_atoms) {
      if (u == x && v != from) q.edges.push_back({Role{p, false}, rec(v, x)});
      if (v == x && u != from) q.edges.push_back({Role{p, true}, rec(u, x)});
    }
    return q;
  };
  Eliq q = rec(ind, "");
  q.canonicalize();
  return q;
}

bool instance_hom(const PointedInstance& from, const PointedInstance& to) {
  const auto& src = from.instance;
  const auto& dst = to.instance;
  std::vector<std::string> order{from.point};
  std::set<std::string> placed{from.point};
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [p, x, y] : src.role_atoms) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (size_t i = 0; i < order.size(); ++i)
    for (const auto& y : adj[order[i]])
      if (placed.insert(y).second) order.push_back(y);
  for (const auto& x : src.individuals)
    if (placed.insert(x).second) order.push_back(x);
  std::map<std::string, std::set<std::string>> need;
  for (const auto& [c, x] : src.concept_atoms) need[x].insert(c);
  std::map<std::string, std::set<std::string>> have;
  for (const auto& [c, x] : dst.concept_atoms) have[x].insert(c);
  std::map<std::string, std::string> h;
  std::function<bool(size_t)> go = [&](size_t i) {
    if (i == order.size()) return true;
    const auto& x = order[i];
    std::vector<std::string> cands;
    if (i == 0)
      cands.push_back(to.point);
    else
      cands.assign(dst.individuals.begin(), dst.individuals.end());
    for (const auto& y : cands) {
      if (!dst.individuals.count(y)) continue;
      const auto& nx = need[x];
      const auto& hy = have[y];
      if (!std::includes(hy.begin(), hy.end(), nx.begin(), nx.end())) continue;
      h[x] = y;
      bool ok = true;
      for (const auto& [p, u, v] : src.role_atoms) {
        if (u != x && v != x) continue;
        auto iu = h.find(u), iv = h.find(v);
        if (iu == h.end() || iv == h.end()) continue;
        if (!dst.role_atoms.count({p, iu->second, iv->second})) {
          ok = false;
          break;
        }
      }
      if (ok && go(i + 1)) return true;
      h.erase(x);
    }
    return false;
  };
  return go(0);
}

}  // namespace tomq
