#include <algorithm>

#include "tomq/domain.hpp"
#include "tomq/temporal.hpp"

namespace tomq {

namespace {

bool entailed_by_top(const Ontology& o, const Eliq& q) { return contains(o, Eliq::top(), q); }

// Drop trailing tops; a top border inside a block of length > 1 moves out of
// the block by turning its suc link into <.
bool drop_trivial_borders(PathQuery& q) {
  size_t n = q.rels.size();
  if (n > 0 && q.bodies.back().is_top()) {
    q.bodies.pop_back();
    q.rels.pop_back();
    return true;
  }
  for (size_t v = 1; v <= n; ++v) {
    if (!q.bodies[v].is_top()) continue;
    Rel in = q.rels[v - 1];
    bool has_out = v < n;
    Rel out = has_out ? q.rels[v] : Rel::Less;
    if (in != Rel::Suc && has_out && out == Rel::Suc) {
      q.rels[v] = Rel::Less;
      return true;
    }
    if (in == Rel::Suc && (!has_out || out != Rel::Suc)) {
      q.rels[v - 1] = Rel::Less;
      return true;
    }
  }
  return false;
}

bool collapse_connectors(PathQuery& q) {
  BlockView v = blocks_of(q);
  bool changed = false;
  for (auto& c : v.connectors) {
    bool has_less = std::count(c.begin(), c.end(), Rel::Less) > 0;
    std::vector<Rel> nc;
    if (has_less)
      nc.assign(static_cast<size_t>(less_count(c)), Rel::Less);
    else
      nc = {Rel::Leq};
    if (nc != c) {
      c = nc;
      changed = true;
    }
  }
  if (changed) q = from_blocks(v);
  return changed;
}

bool single_leq(const std::vector<Rel>& c) { return c.size() == 1 && c[0] == Rel::Leq; }

// Primitive block after a <= whose body already follows from the previous border.
bool drop_entailed_next(const Ontology& o, PathQuery& q) {
  BlockView v = blocks_of(q);
  for (size_t i = 0; i + 1 < v.blocks.size(); ++i) {
    if (!single_leq(v.connectors[i]) || v.blocks[i + 1].size() != 1) continue;
    if (v.blocks[i + 1][0].is_top()) continue;
    if (contains(o, v.blocks[i].back(), v.blocks[i + 1][0])) {
      v.blocks[i + 1][0] = Eliq::top();
      q = from_blocks(v);
      return true;
    }
  }
  return false;
}

// Interior primitive block before a <= whose body follows from the next border.
bool drop_entailed_prev(const Ontology& o, PathQuery& q) {
  BlockView v = blocks_of(q);
  for (size_t i = 1; i + 1 < v.blocks.size(); ++i) {
    if (!single_leq(v.connectors[i]) || v.blocks[i].size() != 1) continue;
    if (v.blocks[i][0].is_top()) continue;
    if (contains(o, v.blocks[i + 1].front(), v.blocks[i][0])) {
      v.blocks[i][0] = Eliq::top();
      q = from_blocks(v);
      return true;
    }
  }
  return false;
}

bool promote_incompatible(const Ontology& o, PathQuery& q) {
  BlockView v = blocks_of(q);
  for (size_t i = 0; i + 1 < v.blocks.size(); ++i) {
    if (!single_leq(v.connectors[i])) continue;
    if (!compatible(o, v.blocks[i].back(), v.blocks[i + 1].front())) {
      v.connectors[i] = {Rel::Less};
      q = from_blocks(v);
      return true;
    }
  }
  return false;
}

}  // namespace

PathQuery normalize(const Ontology& o, const PathQuery& q0) {
  PathQuery q = q0;
  q.canonicalize();
  for (auto& b : q.bodies)
    if (!b.is_top() && entailed_by_top(o, b)) b = Eliq::top();
  bool changed = true;
  while (changed) {
    changed = false;
    while (drop_trivial_borders(q)) changed = true;
    while (collapse_connectors(q)) changed = true;
    if (drop_entailed_next(o, q) || drop_entailed_prev(o, q)) {
      changed = true;
      continue;
    }
    if (promote_incompatible(o, q)) changed = true;
  }
  return q;
}

DomainClass infer_class(const PathQuery& q) {
  for (const auto& b : q.bodies)
    if (!b.is_propositional()) return DomainClass::ELIQ;
  return DomainClass::P;
}

std::vector<size_t> interior_primitive_blocks(const BlockView& v) {
  std::vector<size_t> out;
  for (size_t i = 1; i < v.blocks.size(); ++i)
    if (v.blocks[i].size() == 1) out.push_back(i);
  return out;
}

Tri is_safe(const Ontology& o, const PathQuery& q, int bound, std::optional<DomainClass> cls) {
  PathQuery n = normalize(o, q);
  DomainClass c = cls ? *cls : infer_class(n);
  BlockView v = blocks_of(n);
  bool unknown = false;
  for (size_t i : interior_primitive_blocks(v)) {
    Tri r = is_meet_reducible(o, v.blocks[i][0], c, bound);
    if (r == Tri::True) return Tri::False;
    if (r == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::True;
}

}  // namespace tomq
