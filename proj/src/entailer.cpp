#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <deque>
#include <functional>

#include "tomq/dl.hpp"

namespace tomq {

namespace {

using RoleBits = std::uint64_t;
using Label = boost::dynamic_bitset<>;

RoleBits inv_bits(RoleBits b) {
  const RoleBits even = 0x5555555555555555ULL;
  return ((b & even) << 1) | ((b >> 1) & even);
}

struct Cond {
  int cid = -1;  // -1 is Top
  int role = -1;     // -1: plain cid condition
};

struct Head {
  enum Kind { Name, Bottom, Some } kind = Name;
  int cid = -1;
  int role = -1;
};

struct Rule {
  std::vector<Cond> conds;
  Head head;
};

struct Node {
  Label label;
  int parent = -1;
  bool named = false;
  bool alive = true;
  int forward = -1;
  std::string name;
  std::vector<std::pair<int, RoleBits>> adj;
};

struct Graph {
  std::vector<Label> label;
  std::vector<std::vector<std::pair<int, RoleBits>>> adj;
  std::vector<std::string> names;
  std::map<std::string, int> index;

  int add(const std::string& name, const Label& l) {
    label.push_back(l);
    adj.emplace_back();
    names.push_back(name);
    return static_cast<int>(label.size()) - 1;
  }
  void link(int x, int y, RoleBits bits) {
    auto put = [&](int u, int v, RoleBits b) {
      for (auto& [w, bb] : adj[u])
        if (w == v) {
          bb |= b;
          return;
        }
      adj[u].emplace_back(v, b);
    };
    put(x, y, bits);
    if (x != y)
      put(y, x, inv_bits(bits));
    else
      put(x, x, inv_bits(bits));
  }
};

}  // namespace

struct Entailer::Impl {
  bool una = true;
  std::map<std::string, int> cidx;
  std::vector<std::string> cnames;
  std::map<std::string, int> ridx;
  std::vector<std::string> rnames;
  std::vector<RoleBits> sup;
  RoleBits funcs = 0;
  std::vector<Rule> rules;
  std::vector<Node> nodes;
  std::map<std::string, int> named;
  bool inconsistent = false;
  std::vector<int> blocked;  // 0 open, 1 directly, 2 indirectly
  std::vector<int> blocker;
  std::vector<std::vector<int>> kids;
  mutable std::map<int, Graph> graphs;
  mutable std::map<std::pair<std::string, Eliq>, bool> cache;

  int concept_id(const std::string& c) {
    if (c.empty()) return -1;
    auto [it, fresh] = cidx.emplace(c, static_cast<int>(cnames.size()));
    if (fresh) cnames.push_back(c);
    return it->second;
  }
  int role_id(const Role& r) {
    auto [it, fresh] = ridx.emplace(r.name, static_cast<int>(rnames.size()));
    if (fresh) {
      if (rnames.size() >= 32) throw Error("too many role names (limit 32)");
      rnames.push_back(r.name);
    }
    return 2 * it->second + (r.inverse ? 1 : 0);
  }

  int find(int x) const {
    while (nodes[x].forward >= 0) x = nodes[x].forward;
    return x;
  }

  RoleBits bits_between(int x, int y) const {
    for (const auto& [w, b] : nodes[x].adj)
      if (w == y) return b;
    return 0;
  }

  bool add_bits(int x, int y, RoleBits bits) {
    bool changed = false;
    auto put = [&](int u, int v, RoleBits b) {
      for (auto& [w, bb] : nodes[u].adj)
        if (w == v) {
          if ((bb | b) != bb) changed = true;
          bb |= b;
          return;
        }
      nodes[u].adj.emplace_back(v, b);
      changed = true;
    };
    put(x, y, bits);
    put(y, x, inv_bits(bits));
    return changed;
  }

  int new_node(const std::string& name, bool is_named, int parent) {
    Node n;
    n.label.resize(cnames.size());
    n.name = name;
    n.named = is_named;
    n.parent = parent;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  void compile(const Ontology& o) {
    auto cond_of = [&](const Basic& b, std::vector<Cond>& out) {
      if (b.kind == Basic::Name) out.push_back({concept_id(b.name), -1});
      if (b.kind == Basic::Exists) out.push_back({-1, role_id(b.role)});
    };
    auto push = [&](std::vector<Cond> conds, Head h) { rules.push_back({std::move(conds), h}); };
    std::vector<std::pair<int, int>> subs;
    for (const auto& ax : o.axioms) {
      if (const auto* a = std::get_if<SubBasic>(&ax)) {
        std::vector<Cond> c;
        cond_of(a->lhs, c);
        if (a->rhs.kind == Basic::Name) push(c, {Head::Name, concept_id(a->rhs.name), -1});
        if (a->rhs.kind == Basic::Exists) push(c, {Head::Some, -1, role_id(a->rhs.role)});
      } else if (const auto* a = std::get_if<Disjoint>(&ax)) {
        std::vector<Cond> c;
        cond_of(a->lhs, c);
        cond_of(a->rhs, c);
        push(c, {Head::Bottom, -1, -1});
      } else if (const auto* a = std::get_if<Func>(&ax)) {
        funcs |= RoleBits{1} << role_id(a->role);
      } else if (const auto* a = std::get_if<RoleSub>(&ax)) {
        subs.emplace_back(role_id(a->sub), role_id(a->sup));
      } else if (const auto* a = std::get_if<ExistsRHS>(&ax)) {
        std::vector<Cond> c;
        if (!a->lhs.empty()) c.push_back({concept_id(a->lhs), -1});
        push(c, {Head::Some, concept_id(a->filler), role_id(a->role)});
      } else if (const auto* a = std::get_if<ExistsLHS>(&ax)) {
        if (a->rhs.empty()) continue;
        push({{concept_id(a->filler), role_id(a->role)}}, {Head::Name, concept_id(a->rhs), -1});
      } else if (const auto* a = std::get_if<ConjLHS>(&ax)) {
        std::vector<Cond> c;
        if (!a->a.empty()) c.push_back({concept_id(a->a), -1});
        if (!a->b.empty()) c.push_back({concept_id(a->b), -1});
        if (a->bottom)
          push(c, {Head::Bottom, -1, -1});
        else if (!a->rhs.empty())
          push(c, {Head::Name, concept_id(a->rhs), -1});
      }
    }
    for (const auto& r : o.signature.roles) role_id(Role{r, false});
    for (const auto& c : o.signature.concepts) concept_id(c);
    sup_closure(subs);
  }

  void sup_closure(const std::vector<std::pair<int, int>>& subs) {
    size_t nr = 2 * rnames.size();
    sup.assign(nr, 0);
    for (size_t r = 0; r < nr; ++r) sup[r] = RoleBits{1} << r;
    for (auto [a, b] : subs) {
      sup[a] |= RoleBits{1} << b;
      sup[a ^ 1] |= RoleBits{1} << (b ^ 1);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t r = 0; r < nr; ++r) {
        RoleBits acc = sup[r];
        for (size_t s = 0; s < nr; ++s)
          if (sup[r] >> s & 1) acc |= sup[s];
        if (acc != sup[r]) {
          sup[r] = acc;
          changed = true;
        }
      }
    }
  }

  bool has_succ(int x, int role, int cid) const {
    for (const auto& [y, b] : nodes[x].adj)
      if ((b >> role & 1) && (cid < 0 || nodes[y].label[cid])) return true;
    return false;
  }

  bool holds(const std::vector<Cond>& conds, int x) const {
    for (const auto& c : conds) {
      if (c.role < 0) {
        if (!nodes[x].label[c.cid]) return false;
      } else if (!has_succ(x, c.role, c.cid)) {
        return false;
      }
    }
    return true;
  }

  bool reuse(int x, int role, int cid) {
    RoleBits fs = sup[role] & funcs;
    if (!fs) return false;
    int target = -1;
    for (const auto& [y, b] : nodes[x].adj)
      if (b & fs) {
        target = y;
        break;
      }
    if (target < 0) return false;
    add_bits(x, target, sup[role]);
    if (cid >= 0) nodes[target].label.set(cid);
    return true;
  }

  void compute_kids() {
    kids.assign(nodes.size(), {});
    for (size_t x = 0; x < nodes.size(); ++x)
      if (nodes[x].alive && !nodes[x].named && nodes[x].parent >= 0) kids[nodes[x].parent].push_back(static_cast<int>(x));
  }

  void compute_blocking() {
    compute_kids();
    blocked.assign(nodes.size(), 2);
    blocker.assign(nodes.size(), -1);
    std::deque<int> queue;
    for (size_t x = 0; x < nodes.size(); ++x)
      if (nodes[x].alive && nodes[x].named) {
        blocked[x] = 0;
        queue.push_back(static_cast<int>(x));
      }
    std::map<std::tuple<Label, Label, RoleBits>, int> seen;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int c : kids[x]) {
        if (blocked[x] != 0) {
          blocked[c] = 2;
          continue;
        }
        auto key = std::make_tuple(nodes[c].label, nodes[x].label, bits_between(x, c));
        auto it = seen.find(key);
        if (it != seen.end()) {
          blocked[c] = 1;
          blocker[c] = it->second;
        } else {
          blocked[c] = 0;
          seen.emplace(std::move(key), c);
        }
        queue.push_back(c);
      }
    }
  }

  void merge(int z, int y) {
    nodes[y].label |= nodes[z].label;
    auto adj = nodes[z].adj;
    for (const auto& [nb, b] : adj) {
      if (nb != z) {
        auto& v = nodes[nb].adj;
        v.erase(std::remove_if(v.begin(), v.end(), [&](const auto& e) { return e.first == z; }), v.end());
      }
    }
    nodes[z].adj.clear();
    for (const auto& [nb, b] : adj) add_bits(y, nb == z ? y : nb, b);
    nodes[z].alive = false;
    nodes[z].forward = y;
    for (auto& n : nodes)
      if (n.parent == z) n.parent = y;
    if (nodes[y].parent == y) nodes[y].parent = nodes[z].parent == y ? -1 : nodes[z].parent;
  }

  bool func_merge() {
    if (!funcs) return false;
    for (size_t x = 0; x < nodes.size(); ++x) {
      if (!nodes[x].alive) continue;
      for (const auto& [y, b] : nodes[x].adj) {
        RoleBits fb = b & funcs;
        if (!fb) continue;
        for (const auto& [z, c] : nodes[x].adj) {
          if (z == y || !(c & fb)) continue;
          int keep = y, drop = z;
          const Node& ny = nodes[y];
          const Node& nz = nodes[z];
          if (ny.named && nz.named) {
            if (una) {
              inconsistent = true;
              return true;
            }
            if (z < y) std::swap(keep, drop);
          } else if (nz.named) {
            std::swap(keep, drop);
          } else if (!ny.named) {
            if (z == nodes[x].parent || (y != nodes[x].parent && z < y)) std::swap(keep, drop);
          }
          merge(drop, keep);
          return true;
        }
      }
    }
    return false;
  }

  void run() {
    while (true) {
      bool changed = false;
      compute_blocking();
      size_t n = nodes.size();
      for (size_t xi = 0; xi < n; ++xi) {
        int x = static_cast<int>(xi);
        if (!nodes[x].alive) continue;
        for (const auto& r : rules) {
          if (!holds(r.conds, x)) continue;
          switch (r.head.kind) {
            case Head::Name:
              if (!nodes[x].label[r.head.cid]) {
                nodes[x].label.set(r.head.cid);
                changed = true;
              }
              break;
            case Head::Bottom:
              inconsistent = true;
              return;
            case Head::Some: {
              if (has_succ(x, r.head.role, r.head.cid)) break;
              if (reuse(x, r.head.role, r.head.cid)) {
                changed = true;
                break;
              }
              if (blocked[x] != 0) break;
              int c = new_node("", false, x);
              if (r.head.cid >= 0) nodes[c].label.set(r.head.cid);
              add_bits(x, c, sup[r.head.role]);
              changed = true;
              break;
            }
          }
        }
      }
      while (func_merge()) {
        if (inconsistent) return;
        changed = true;
      }
      if (!changed) break;
    }
    compute_blocking();
  }

  const Graph& graph(int depth) const {
    auto it = graphs.find(depth);
    if (it != graphs.end()) return it->second;
    Graph g;
    std::map<int, int> elem;
    for (size_t x = 0; x < nodes.size(); ++x)
      if (nodes[x].alive && nodes[x].named) elem[static_cast<int>(x)] = g.add(nodes[x].name, nodes[x].label);
    for (const auto& [name, x] : named) g.index[name] = elem.at(find(x));
    for (const auto& [x, ex] : elem)
      for (const auto& [y, b] : nodes[x].adj)
        if (nodes[y].named && x <= y) g.link(ex, elem.at(y), b);
    std::function<void(int, int, int, int, const std::string&)> expand = [&](int pe, int preal, int c, int d,
                                                                               const std::string& nm) {
      if (d > depth) return;
      int e = g.add(nm, nodes[c].label);
      g.link(pe, e, bits_between(preal, c));
      int eff = blocked[c] == 1 ? blocker[c] : c;
      if (RoleBits loop = bits_between(eff, eff)) g.link(e, e, loop);
      int k = 0;
      for (int kid : kids[eff]) expand(e, eff, kid, d + 1, nm + "/" + std::to_string(++k));
    };
    for (const auto& [x, ex] : elem) {
      int k = 0;
      for (int kid : kids[x]) expand(ex, x, kid, 1, nodes[x].name + "/" + std::to_string(++k));
    }
    return graphs.emplace(depth, std::move(g)).first->second;
  }

  std::vector<char> sat(const Graph& g, const Eliq& q) const {
    size_t n = g.label.size();
    std::vector<char> res(n, 1);
    for (const auto& c : q.concepts) {
      auto it = cidx.find(c);
      if (it == cidx.end()) return std::vector<char>(n, 0);
      for (size_t u = 0; u < n; ++u)
        if (res[u] && !g.label[u][it->second]) res[u] = 0;
    }
    for (const auto& e : q.edges) {
      auto it = ridx.find(e.role.name);
      if (it == ridx.end()) return std::vector<char>(n, 0);
      int rid = 2 * it->second + (e.role.inverse ? 1 : 0);
      auto s = sat(g, e.child);
      for (size_t u = 0; u < n; ++u) {
        if (!res[u]) continue;
        bool ok = false;
        for (const auto& [v, b] : g.adj[u])
          if ((b >> rid & 1) && s[v]) {
            ok = true;
            break;
          }
        if (!ok) res[u] = 0;
      }
    }
    return res;
  }

  DataInstance to_instance(const Graph& g) const {
    DataInstance out;
    for (size_t u = 0; u < g.label.size(); ++u) {
      out.individuals.insert(g.names[u]);
      for (size_t c = 0; c < cnames.size(); ++c)
        if (g.label[u][c]) out.concept_atoms.emplace(cnames[c], g.names[u]);
      for (const auto& [v, b] : g.adj[u])
        for (size_t r = 0; r < 2 * rnames.size(); ++r) {
          if (!(b >> r & 1)) continue;
          if (r % 2 == 0)
            out.role_atoms.emplace(rnames[r / 2], g.names[u], g.names[v]);
          else
            out.role_atoms.emplace(rnames[r / 2], g.names[v], g.names[u]);
        }
    }
    return out;
  }
};

Entailer::Entailer(const Ontology& o, const DataInstance& a, bool unique_names) : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.una = unique_names;
  for (const auto& [c, x] : a.concept_atoms) m.concept_id(c);
  for (const auto& [p, x, y] : a.role_atoms) m.role_id(Role{p, false});
  m.compile(o);
  for (const auto& x : a.individuals) m.named[x] = m.new_node(x, true, -1);
  for (const auto& [c, x] : a.concept_atoms) m.nodes[m.named.at(x)].label.set(m.cidx.at(c));
  for (const auto& [p, x, y] : a.role_atoms) {
    int r = m.role_id(Role{p, false});
    m.add_bits(m.named.at(x), m.named.at(y), m.sup[r]);
  }
  m.run();
}

Entailer::~Entailer() = default;
Entailer::Entailer(Entailer&&) noexcept = default;
Entailer& Entailer::operator=(Entailer&&) noexcept = default;

bool Entailer::consistent() const { return !impl_->inconsistent; }

bool Entailer::entails(const std::string& ind, const Eliq& q) const {
  if (impl_->inconsistent) return true;
  if (q.bottom) return false;
  if (q.is_top()) return impl_->named.count(ind) > 0;
  auto key = std::make_pair(ind, q);
  auto it = impl_->cache.find(key);
  if (it != impl_->cache.end()) return it->second;
  const Graph& g = impl_->graph(q.role_depth());
  bool result = false;
  if (auto gi = g.index.find(ind); gi != g.index.end()) result = impl_->sat(g, q)[gi->second];
  impl_->cache.emplace(std::move(key), result);
  return result;
}

DataInstance Entailer::saturated() const { return impl_->to_instance(impl_->graph(0)); }

DataInstance Entailer::chase(int depth) const { return impl_->to_instance(impl_->graph(depth)); }

std::map<std::string, std::string> Entailer::representatives() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, x] : impl_->named) out[name] = impl_->nodes[impl_->find(x)].name;
  return out;
}

size_t Entailer::node_count() const {
  return std::count_if(impl_->nodes.begin(), impl_->nodes.end(), [](const Node& n) { return n.alive; });
}

}  // namespace tomq
