#include <algorithm>
#include <functional>

#include "tomq/dl.hpp"

namespace tomq {

void Signature::merge(const Signature& o) {
  concepts.insert(o.concepts.begin(), o.concepts.end());
  roles.insert(o.roles.begin(), o.roles.end());
}

std::string dialect_name(Dialect d) {
  switch (d) {
    case Dialect::DLLiteH: return "dl-lite-h";
    case Dialect::DLLiteF: return "dl-lite-f";
    case Dialect::DLLiteFminus: return "dl-lite-f-minus";
    case Dialect::ELHIFbotNF: return "elhif-nf";
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const char* kind_name(const Axiom& ax) {
  static const char* names[] = {"SubBasic", "Disjoint", "Func", "RoleSub", "ExistsRHS", "ExistsLHS", "ConjLHS"};
  return names[ax.index()];
}

void collect_basic(const Basic& b, Signature& s) {
  if (b.kind == Basic::Name) s.concepts.insert(b.name);
  if (b.kind == Basic::Exists) s.roles.insert(b.role.name);
}

void collect_name(const std::string& n, Signature& s) {
  if (!n.empty()) s.concepts.insert(n);
}

}  // namespace

void Ontology::close_signature() {
  for (const auto& ax : axioms) {
    std::visit(overloaded{
                   [&](const SubBasic& a) { collect_basic(a.lhs, signature), collect_basic(a.rhs, signature); },
                   [&](const Disjoint& a) { collect_basic(a.lhs, signature), collect_basic(a.rhs, signature); },
                   [&](const Func& a) { signature.roles.insert(a.role.name); },
                   [&](const RoleSub& a) {
                     signature.roles.insert(a.sub.name);
                     signature.roles.insert(a.sup.name);
                   },
                   [&](const ExistsRHS& a) {
                     collect_name(a.lhs, signature), collect_name(a.filler, signature);
                     signature.roles.insert(a.role.name);
                   },
                   [&](const ExistsLHS& a) {
                     collect_name(a.rhs, signature), collect_name(a.filler, signature);
                     signature.roles.insert(a.role.name);
                   },
                   [&](const ConjLHS& a) {
                     collect_name(a.a, signature), collect_name(a.b, signature);
                     if (!a.bottom) collect_name(a.rhs, signature);
                   },
               },
               ax);
  }
}

bool Ontology::has_func() const {
  return std::any_of(axioms.begin(), axioms.end(), [](const Axiom& a) { return std::holds_alternative<Func>(a); });
}

void Ontology::validate() const {
  for (const auto& ax : axioms) {
    bool ok = false;
    switch (dialect) {
      case Dialect::DLLiteH:
        ok = std::holds_alternative<SubBasic>(ax) || std::holds_alternative<Disjoint>(ax) ||
             std::holds_alternative<RoleSub>(ax);
        break;
      case Dialect::DLLiteF:
      case Dialect::DLLiteFminus:
        ok = std::holds_alternative<SubBasic>(ax) || std::holds_alternative<Disjoint>(ax) ||
             std::holds_alternative<Func>(ax);
        break;
      case Dialect::ELHIFbotNF:
        ok = std::holds_alternative<ExistsRHS>(ax) || std::holds_alternative<ExistsLHS>(ax) ||
             std::holds_alternative<ConjLHS>(ax) || std::holds_alternative<Func>(ax) ||
             std::holds_alternative<RoleSub>(ax);
        break;
    }
    if (!ok) throw UnsupportedAxiom(std::string(kind_name(ax)) + " not allowed in " + dialect_name(dialect));
    if (dialect == Dialect::DLLiteFminus) {
      if (const auto* sb = std::get_if<SubBasic>(&ax); sb && sb->rhs.kind == Basic::Exists) {
        Func f{sb->rhs.role.inv()};
        for (const auto& other : axioms)
          if (const auto* g = std::get_if<Func>(&other); g && *g == f)
            throw UnsupportedAxiom("SubBasic with rhs ex " + sb->rhs.role.str() + " conflicts with func " +
                                   f.role.str() + " in dl-lite-f-minus");
      }
    }
  }
}

void DataInstance::add_concept(const std::string& c, const std::string& a) {
  individuals.insert(a);
  concept_atoms.emplace(c, a);
}

void DataInstance::add_role(const Role& r, const std::string& a, const std::string& b) {
  individuals.insert(a);
  individuals.insert(b);
  if (r.inverse)
    role_atoms.emplace(r.name, b, a);
  else
    role_atoms.emplace(r.name, a, b);
}

void DataInstance::merge(const DataInstance& o) {
  individuals.insert(o.individuals.begin(), o.individuals.end());
  concept_atoms.insert(o.concept_atoms.begin(), o.concept_atoms.end());
  role_atoms.insert(o.role_atoms.begin(), o.role_atoms.end());
}

Signature DataInstance::signature() const {
  Signature s;
  for (const auto& [c, a] : concept_atoms) s.concepts.insert(c);
  for (const auto& [p, a, b] : role_atoms) s.roles.insert(p);
  return s;
}

DataInstance DataInstance::rename(const std::map<std::string, std::string>& m) const {
  auto f = [&](const std::string& x) {
    auto it = m.find(x);
    return it == m.end() ? x : it->second;
  };
  DataInstance out;
  for (const auto& a : individuals) out.individuals.insert(f(a));
  for (const auto& [c, a] : concept_atoms) out.concept_atoms.emplace(c, f(a));
  for (const auto& [p, a, b] : role_atoms) out.role_atoms.emplace(p, f(a), f(b));
  return out;
}

DataInstance DataInstance::restrict_to(const std::set<std::string>& keep) const {
  DataInstance out;
  for (const auto& a : individuals)
    if (keep.count(a)) out.individuals.insert(a);
  for (const auto& [c, a] : concept_atoms)
    if (keep.count(a)) out.concept_atoms.emplace(c, a);
  for (const auto& [p, a, b] : role_atoms)
    if (keep.count(a) && keep.count(b)) out.role_atoms.emplace(p, a, b);
  return out;
}

std::set<std::string> DataInstance::concepts_of(const std::string& a) const {
  std::set<std::string> out;
  for (const auto& [c, x] : concept_atoms)
    if (x == a) out.insert(c);
  return out;
}

Eliq Eliq::exists(const Role& r, Eliq child) {
  Eliq q;
  q.edges.push_back({r, std::move(child)});
  return q;
}

bool Eliq::is_top() const { return !bottom && concepts.empty() && edges.empty(); }

size_t Eliq::size() const {
  size_t n = concepts.size() + edges.size();
  for (const auto& e : edges) n += e.child.size();
  return n;
}

int Eliq::role_depth() const {
  int d = 0;
  for (const auto& e : edges) d = std::max(d, 1 + e.child.role_depth());
  return d;
}

bool Eliq::is_elq() const {
  for (const auto& e : edges)
    if (e.role.inverse || !e.child.is_elq()) return false;
  return true;
}

void Eliq::canonicalize() {
  if (bottom) {
    concepts.clear();
    edges.clear();
    return;
  }
  std::sort(concepts.begin(), concepts.end());
  concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
  for (auto& e : edges) e.child.canonicalize();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

Signature Eliq::signature() const {
  Signature s;
  s.concepts.insert(concepts.begin(), concepts.end());
  for (const auto& e : edges) {
    s.roles.insert(e.role.name);
    s.merge(e.child.signature());
  }
  return s;
}

std::string Eliq::str() const {
  if (bottom) return "bot";
  if (is_top()) return "Top";
  std::string out;
  auto add = [&](const std::string& part) {
    if (!out.empty()) out += " & ";
    out += part;
  };
  for (const auto& c : concepts) add(c);
  for (const auto& e : edges) {
    size_t conj = e.child.concepts.size() + e.child.edges.size();
    std::string inner = e.child.str();
    add("ex " + e.role.str() + "." + (conj > 1 ? "(" + inner + ")" : inner));
  }
  return out;
}

std::strong_ordering operator<=>(const Eliq& a, const Eliq& b) {
  if (auto c = a.bottom <=> b.bottom; c != 0) return c;
  if (auto c = a.concepts <=> b.concepts; c != 0) return c;
  return std::lexicographical_compare_three_way(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end());
}

bool operator==(const Eliq& a, const Eliq& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const EliqEdge& a, const EliqEdge& b) {
  if (auto c = a.role <=> b.role; c != 0) return c;
  return a.child <=> b.child;
}

bool operator==(const EliqEdge& a, const EliqEdge& b) { return (a <=> b) == 0; }

}  // namespace tomq
