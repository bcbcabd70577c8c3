#include <algorithm>
#include <functional>
#include <map>

#include "tomq/verifier.hpp"

namespace tomq {

namespace {

// Bottom-up generator of canonical ELIQs true at an element of a finite structure.
class EliqGenerator {
 public:
  EliqGenerator(const DataInstance& a, const Signature& sigma, DomainClass cls) {
    for (const auto& x : a.individuals) id_[x] = static_cast<int>(names_.size()), names_.push_back(x);
    labels_.resize(names_.size());
    nbrs_.resize(names_.size());
    for (const auto& [c, x] : a.concept_atoms)
      if (sigma.concepts.count(c)) labels_[id_.at(x)].push_back(c);
    if (cls == DomainClass::P) return;
    for (const auto& [p, x, y] : a.role_atoms) {
      if (!sigma.roles.count(p)) continue;
      nbrs_[id_.at(x)].push_back({Role{p, false}, id_.at(y)});
      if (cls == DomainClass::ELIQ) nbrs_[id_.at(y)].push_back({Role{p, true}, id_.at(x)});
    }
  }

  const std::vector<Eliq>& at(const std::string& x, int k) { return gen(id_.at(x), k); }

 private:
  const std::vector<Eliq>& gen(int u, int k) {
    auto key = std::make_pair(u, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<std::pair<EliqEdge, int>> edges;
    if (k >= 1) {
      std::set<EliqEdge> es;
      for (const auto& [r, v] : nbrs_[u])
        for (const auto& c : gen(v, k - 1)) es.insert(EliqEdge{r, c});
      for (auto& e : es) edges.emplace_back(e, static_cast<int>(1 + e.child.size()));
    }
    const auto& lab = labels_[u];
    std::vector<Eliq> out;
    Eliq cur;
    std::function<void(size_t, int)> pick = [&](size_t i, int rem) {
      out.push_back(cur);
      for (size_t j = i; j < edges.size(); ++j) {
        if (edges[j].second > rem) continue;
        cur.edges.push_back(edges[j].first);
        pick(j + 1, rem - edges[j].second);
        cur.edges.pop_back();
      }
    };
    size_t n = lab.size();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
      int bits = __builtin_popcountll(mask);
      if (bits > k) continue;
      cur = Eliq{};
      for (size_t i = 0; i < n; ++i)
        if (mask >> i & 1) cur.concepts.push_back(lab[i]);
      pick(0, k - bits);
    }
    return memo_[key] = std::move(out);
  }

  std::map<std::string, int> id_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::pair<Role, int>>> nbrs_;
  std::map<std::pair<int, int>, std::vector<Eliq>> memo_;
};

void sort_by_size(std::vector<Eliq>& qs) {
  std::stable_sort(qs.begin(), qs.end(), [](const Eliq& a, const Eliq& b) {
    auto sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return a < b;
  });
}

}  // namespace

std::vector<Eliq> enum_eliqs_at(const DataInstance& a, const std::string& point, const Signature& sigma,
                                DomainClass cls, int size_bound) {
  EliqGenerator g(a, sigma, cls);
  std::vector<Eliq> out = g.at(point, std::max(size_bound, 0));
  for (auto& q : out) q.canonicalize();
  sort_by_size(out);
  return out;
}

std::vector<Eliq> enum_eliqs(const Signature& sigma, DomainClass cls, int size_bound) {
  DataInstance u;
  u.add_individual("u");
  for (const auto& c : sigma.concepts) u.add_concept(c, "u");
  for (const auto& r : sigma.roles) u.add_role(Role{r, false}, "u", "u");
  return enum_eliqs_at(u, "u", sigma, cls, size_bound);
}

std::vector<Eliq> enum_entailed_eliqs(const Ontology& o, const Eliq& q, const Signature& sigma, DomainClass cls,
                                      int size_bound) {
  if (q.bottom) return enum_eliqs(sigma, cls, size_bound);
  PointedInstance h = hat(o, q);
  Entailer e(o, h.instance);
  if (!e.consistent()) return enum_eliqs(sigma, cls, size_bound);
  return enum_eliqs_at(e.chase(std::max(size_bound, 0)), h.point, sigma, cls, size_bound);
}

std::vector<PathQuery> enum_pathqueries(const EnumSpec& spec) {
  std::vector<Eliq> bodies = enum_eliqs(spec.sigma, spec.body_class, spec.body_size);
  std::vector<Rel> rels;
  if (spec.allow_suc) rels.push_back(Rel::Suc);
  if (spec.allow_less) rels.push_back(Rel::Less);
  if (spec.allow_leq) rels.push_back(Rel::Leq);
  std::vector<PathQuery> out;
  for (int d = 0; d <= spec.depth; ++d) {
    if (d > 0 && rels.empty()) break;
    PathQuery q;
    q.bodies.assign(d + 1, Eliq{});
    q.rels.assign(d, Rel::Suc);
    std::function<void(int)> fill = [&](int i) {
      if (i > d) {
        out.push_back(q);
        return;
      }
      for (const auto& b : bodies) {
        q.bodies[i] = b;
        if (i == d) {
          fill(i + 1);
          continue;
        }
        for (Rel r : rels) {
          q.rels[i] = r;
          fill(i + 1);
        }
      }
    };
    fill(0);
  }
  return out;
}

std::vector<UntilQuery> enum_untilqueries(const EnumSpec& spec) {
  std::vector<Eliq> bodies = enum_eliqs(spec.sigma, spec.body_class, spec.body_size);
  std::vector<std::optional<Eliq>> fillers;
  if (spec.allow_bot_filler) fillers.push_back(std::nullopt);
  for (const auto& b : bodies) fillers.push_back(b);
  std::vector<UntilQuery> out;
  for (int d = 0; d <= spec.depth; ++d) {
    UntilQuery q;
    q.steps.resize(d);
    std::function<void(int)> fill = [&](int i) {
      if (i == d) {
        out.push_back(q);
        return;
      }
      for (const auto& l : fillers)
        for (const auto& r : bodies) {
          q.steps[i] = UntilStep{l, r};
          fill(i + 1);
        }
    };
    for (const auto& h : bodies) {
      q.head = h;
      fill(0);
    }
  }
  return out;
}

}  // namespace tomq
