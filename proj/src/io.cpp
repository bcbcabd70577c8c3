#include "tomq/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace tomq {

ParseError::ParseError(const std::string& msg, int l, int c)
    : Error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

struct Token {
  enum Kind { Ident, Sym, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string& s, int line = 1) {
  std::vector<Token> out;
  int col = 1;
  for (size_t i = 0; i < s.size();) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i, ++col;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_char(c)) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      t.kind = Token::Ident;
      t.text = s.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
    } else if (c == '[' && i + 1 < s.size() && s[i + 1] == '=') {
      t.kind = Token::Sym;
      t.text = "[=";
      i += 2, col += 2;
    } else if (std::string("&.()-,;[]:=|").find(c) != std::string::npos) {
      t.kind = Token::Sym;
      t.text = std::string(1, c);
      ++i, ++col;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Cursor {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::End; }
  bool is(const std::string& s, size_t k = 0) const { return peek(k).kind != Token::End && peek(k).text == s; }
  bool is_ident(size_t k = 0) const { return peek(k).kind == Token::Ident; }
  Token next() { return toks[std::min(pos++, toks.size() - 1)]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  void expect(const std::string& s) {
    if (!is(s)) fail("expected '" + s + "' but found '" + (at_end() ? std::string("end of input") : peek().text) + "'");
    ++pos;
  }
  std::string ident() {
    if (!is_ident()) fail("expected identifier");
    return next().text;
  }
  Role role() {
    Role r{ident(), false};
    if (is("-")) {
      ++pos;
      r.inverse = true;
    }
    return r;
  }
};

const std::set<std::string> kReserved = {"ex", "Top", "bot", "X", "F", "Fr", "U", "func", "role"};

Eliq parse_conj(Cursor& c);

Eliq parse_atom(Cursor& c) {
  if (c.is("(")) {
    c.next();
    Eliq q = parse_conj(c);
    c.expect(")");
    return q;
  }
  if (c.is("Top")) {
    c.next();
    return Eliq::top();
  }
  if (c.is("bot")) {
    c.next();
    return Eliq::bot();
  }
  if (c.is("ex")) {
    c.next();
    Role r = c.role();
    c.expect(".");
    return Eliq::exists(r, parse_atom(c));
  }
  if (!c.is_ident()) c.fail("expected a query atom");
  if (kReserved.count(c.peek().text)) c.fail("reserved word '" + c.peek().text + "'");
  return Eliq::atom(c.next().text);
}

Eliq parse_conj(Cursor& c) {
  Eliq q = parse_atom(c);
  while (c.is("&")) {
    c.next();
    q = conjoin(q, parse_atom(c));
  }
  q.canonicalize();
  return q;
}

Basic parse_basic(Cursor& c, std::string* filler) {
  if (c.is("Top")) {
    c.next();
    return Basic::top();
  }
  if (c.is("ex")) {
    c.next();
    Role r = c.role();
    if (c.is(".")) {
      c.next();
      if (!filler) c.fail("qualified existential not allowed here");
      if (c.is("Top"))
        c.next();
      else
        *filler = c.ident();
    }
    return Basic::exists(r);
  }
  std::string n = c.ident();
  if (kReserved.count(n)) c.fail("reserved word '" + n + "'");
  return Basic::named(n);
}

std::string name_or_top(const Basic& b) { return b.kind == Basic::Name ? b.name : ""; }

}  // namespace

Ontology parse_ontology(const std::string& text) {
  Ontology o;
  bool have_dialect = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<int, std::string>> body;
  std::set<std::string> roles;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto toks = lex(line, lineno);
    Cursor c{toks};
    if (c.is("dialect") && c.is(":", 1)) {
      c.pos = 2;
      std::string d;
      while (!c.at_end()) d += c.next().text;
      if (d == "dl-lite-h")
        o.dialect = Dialect::DLLiteH;
      else if (d == "dl-lite-f")
        o.dialect = Dialect::DLLiteF;
      else if (d == "dl-lite-f-minus")
        o.dialect = Dialect::DLLiteFminus;
      else if (d == "elhif-nf")
        o.dialect = Dialect::ELHIFbotNF;
      else
        throw ParseError("unknown dialect '" + d + "'", lineno, toks[2].col);
      have_dialect = true;
      continue;
    }
    if ((c.is("roles") || c.is("concepts")) && c.is(":", 1)) {
      bool is_roles = c.is("roles");
      c.pos = 2;
      while (!c.at_end()) {
        std::string n = c.ident();
        (is_roles ? o.signature.roles : o.signature.concepts).insert(n);
        if (is_roles) roles.insert(n);
        if (c.is(",")) c.next();
      }
      continue;
    }
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].text == "ex" || toks[i].text == "func" || toks[i].text == "role") roles.insert(toks[i + 1].text);
      if (toks[i].kind == Token::Ident && toks[i + 1].text == "-") roles.insert(toks[i].text);
    }
    body.emplace_back(lineno, line);
  }
  if (!have_dialect) throw ParseError("missing 'dialect:' header", 1, 1);
  bool elhif = o.dialect == Dialect::ELHIFbotNF;
  for (const auto& [ln, text_line] : body) {
    Cursor c{lex(text_line, ln)};
    if (c.is("func")) {
      c.next();
      o.axioms.push_back(Func{c.role()});
    } else if (c.is("role") ||
               (c.is_ident() && (roles.count(c.peek().text) && !c.is("ex")) && (c.is("[=", 1) || c.is("-", 1)))) {
      if (c.is("role")) c.next();
      Role sub = c.role();
      c.expect("[=");
      Role sup = c.role();
      o.axioms.push_back(RoleSub{sub, sup});
    } else {
      std::vector<std::pair<Basic, std::string>> lhs;
      do {
        if (!lhs.empty()) c.next();
        std::string filler;
        Basic b = parse_basic(c, &filler);
        lhs.emplace_back(b, filler);
      } while (c.is("&"));
      c.expect("[=");
      bool bottom = false;
      Basic rhs;
      std::string rfill;
      if (c.is("bot")) {
        c.next();
        bottom = true;
      } else {
        rhs = parse_basic(c, &rfill);
      }
      if (!c.at_end()) c.fail("trailing input");
      if (lhs.size() > 2) throw ParseError("at most two conjuncts on the left", ln, 1);
      const Basic& l0 = lhs[0].first;
      bool qualified_lhs = l0.kind == Basic::Exists && !lhs[0].second.empty();
      if (lhs.size() == 2) {
        if (lhs[0].first.kind == Basic::Exists || lhs[1].first.kind == Basic::Exists) {
          if (!bottom || elhif) throw ParseError("existential inside a conjunction", ln, 1);
          o.axioms.push_back(Disjoint{lhs[0].first, lhs[1].first});
        } else if (bottom && !elhif) {
          o.axioms.push_back(Disjoint{lhs[0].first, lhs[1].first});
        } else {
          if (rhs.kind == Basic::Exists) throw ParseError("existential right side after a conjunction", ln, 1);
          o.axioms.push_back(ConjLHS{name_or_top(lhs[0].first), name_or_top(lhs[1].first), name_or_top(rhs), bottom});
        }
      } else if (bottom) {
        if (elhif && l0.kind != Basic::Exists)
          o.axioms.push_back(ConjLHS{name_or_top(l0), "", "", true});
        else if (l0.kind == Basic::Exists && (elhif || qualified_lhs))
          throw ParseError("existential left side with bot", ln, 1);
        else
          o.axioms.push_back(Disjoint{l0, l0});
      } else if (l0.kind == Basic::Exists && (elhif || qualified_lhs)) {
        if (rhs.kind == Basic::Exists) throw ParseError("existentials on both sides", ln, 1);
        o.axioms.push_back(ExistsLHS{l0.role, lhs[0].second, name_or_top(rhs)});
      } else if (rhs.kind == Basic::Exists && (elhif || !rfill.empty())) {
        if (l0.kind == Basic::Exists) throw ParseError("existentials on both sides", ln, 1);
        o.axioms.push_back(ExistsRHS{name_or_top(l0), rhs.role, rfill});
      } else if (elhif) {
        o.axioms.push_back(ConjLHS{name_or_top(l0), "", name_or_top(rhs), false});
      } else {
        o.axioms.push_back(SubBasic{l0, rhs});
      }
    }
  }
  o.close_signature();
  o.validate();
  return o;
}

namespace {

std::string basic_str(const Basic& b) {
  switch (b.kind) {
    case Basic::Top: return "Top";
    case Basic::Name: return b.name;
    case Basic::Exists: return "ex " + b.role.str();
  }
  return "";
}

std::string top_or(const std::string& n) { return n.empty() ? "Top" : n; }

}  // namespace

std::string print_ontology(const Ontology& o) {
  std::ostringstream out;
  out << "dialect: " << dialect_name(o.dialect) << "\n";
  bool needs_roles = false;
  for (const auto& ax : o.axioms)
    if (std::holds_alternative<RoleSub>(ax)) needs_roles = true;
  if (needs_roles && !o.signature.roles.empty()) {
    out << "roles: ";
    bool first = true;
    for (const auto& r : o.signature.roles) out << (first ? "" : ", ") << r, first = false;
    out << "\n";
  }
  for (const auto& ax : o.axioms) {
    if (const auto* a = std::get_if<SubBasic>(&ax)) {
      out << basic_str(a->lhs) << " [= " << basic_str(a->rhs);
    } else if (const auto* a = std::get_if<Disjoint>(&ax)) {
      out << basic_str(a->lhs);
      if (a->rhs != a->lhs) out << " & " << basic_str(a->rhs);
      out << " [= bot";
    } else if (const auto* a = std::get_if<Func>(&ax)) {
      out << "func " << a->role.str();
    } else if (const auto* a = std::get_if<RoleSub>(&ax)) {
      out << a->sub.str() << " [= " << a->sup.str();
    } else if (const auto* a = std::get_if<ExistsRHS>(&ax)) {
      out << top_or(a->lhs) << " [= ex " << a->role.str() << " . " << top_or(a->filler);
    } else if (const auto* a = std::get_if<ExistsLHS>(&ax)) {
      out << "ex " << a->role.str() << " . " << top_or(a->filler) << " [= " << top_or(a->rhs);
    } else if (const auto* a = std::get_if<ConjLHS>(&ax)) {
      if (a->a.empty() && a->b.empty())
        out << "Top";
      else if (a->a.empty() || a->b.empty())
        out << (a->a.empty() ? a->b : a->a);
      else
        out << a->a << " & " << a->b;
      out << " [= " << (a->bottom ? "bot" : top_or(a->rhs));
    }
    out << "\n";
  }
  return out.str();
}

Eliq parse_eliq(const std::string& text) {
  Cursor c{lex(text)};
  Eliq q = parse_conj(c);
  if (!c.at_end()) c.fail("trailing input");
  return q;
}

std::string print_eliq(const Eliq& q) { return q.str(); }

namespace {

TFormula parse_tconj(Cursor& c);

TFormula parse_titem(Cursor& c) {
  auto op_of = [&]() -> std::optional<TFormula::Op> {
    if (c.is("X")) return TFormula::Next;
    if (c.is("F")) return TFormula::Dia;
    if (c.is("Fr")) return TFormula::DiaR;
    return std::nullopt;
  };
  if (auto op = op_of()) {
    c.next();
    return TFormula::unary(*op, parse_titem(c));
  }
  if (c.is("(")) {
    c.next();
    TFormula f = parse_tconj(c);
    c.expect(")");
    return f;
  }
  return TFormula::of(parse_atom(c));
}

TFormula parse_tconj(Cursor& c) {
  std::vector<TFormula> parts{parse_titem(c)};
  while (c.is("&")) {
    c.next();
    parts.push_back(parse_titem(c));
  }
  if (parts.size() == 1) return parts[0];
  return TFormula::conj(std::move(parts));
}

void flatten(const TFormula& f, std::vector<Eliq>& atoms, std::vector<const TFormula*>& temporal) {
  if (f.op == TFormula::Atom)
    atoms.push_back(f.atom);
  else if (f.op == TFormula::And)
    for (const auto& k : f.kids) flatten(k, atoms, temporal);
  else
    temporal.push_back(&f);
}

}  // namespace

TFormula parse_formula(const std::string& text) {
  Cursor c{lex(text)};
  TFormula f = parse_tconj(c);
  if (!c.at_end()) c.fail("trailing input");
  return f;
}

PathQuery formula_to_path(const TFormula& f) {
  PathQuery q;
  q.bodies.clear();
  const TFormula* cur = &f;
  while (true) {
    std::vector<Eliq> atoms;
    std::vector<const TFormula*> temporal;
    flatten(*cur, atoms, temporal);
    q.bodies.push_back(conjoin_all(atoms));
    if (temporal.empty()) break;
    if (temporal.size() > 1) throw Error("not a path query: two temporal operators in one conjunction");
    const TFormula* t = temporal[0];
    switch (t->op) {
      case TFormula::Next: q.rels.push_back(Rel::Suc); break;
      case TFormula::Dia: q.rels.push_back(Rel::Less); break;
      case TFormula::DiaR: q.rels.push_back(Rel::Leq); break;
      default: throw Error("not a path query: Until operator");
    }
    cur = &t->kids[0];
  }
  q.canonicalize();
  return q;
}

PathQuery parse_pathquery(const std::string& text, bool allow_leq) {
  PathQuery q = formula_to_path(parse_formula(text));
  if (!allow_leq)
    for (auto r : q.rels)
      if (r == Rel::Leq) throw Error("class violation: Fr not allowed in this query class");
  return q;
}

std::string print_pathquery(const PathQuery& q) { return q.str(); }

UntilQuery parse_untilquery(const std::string& text) {
  Cursor c{lex(text)};
  UntilQuery q;
  q.head = parse_conj(c);
  while (c.is(";")) {
    c.next();
    c.expect("U");
    c.expect("[");
    UntilStep st;
    if (c.is("bot") && c.is("]", 1)) {
      c.next();
    } else {
      st.filler = parse_conj(c);
    }
    c.expect("]");
    st.target = parse_conj(c);
    q.steps.push_back(std::move(st));
  }
  if (!c.at_end()) c.fail("trailing input");
  return q;
}

std::string print_untilquery(const UntilQuery& q) { return q.str(); }

namespace {

void parse_atoms_into(Cursor& c, DataInstance& d) {
  if (c.is("-")) {
    c.next();
    return;
  }
  while (!c.at_end()) {
    std::string pred = c.ident();
    c.expect("(");
    std::string x = c.ident();
    if (c.is(",")) {
      c.next();
      std::string y = c.ident();
      c.expect(")");
      d.add_role(Role{pred, false}, x, y);
    } else {
      c.expect(")");
      d.add_concept(pred, x);
    }
    if (c.is(",")) c.next();
  }
}

std::string atoms_str(const DataInstance& d) {
  std::string out;
  for (const auto& [c, a] : d.concept_atoms) out += (out.empty() ? "" : ", ") + c + "(" + a + ")";
  for (const auto& [p, a, b] : d.role_atoms) out += (out.empty() ? "" : ", ") + p + "(" + a + "," + b + ")";
  return out.empty() ? "-" : out;
}

}  // namespace

TemporalInstance parse_tinstance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<int, DataInstance> slices;
  std::optional<std::string> point;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Cursor c{lex(line, lineno)};
    if (c.is("point")) {
      c.next();
      c.expect(":");
      point = c.ident();
      continue;
    }
    c.expect("t");
    c.expect("=");
    bool neg = false;
    if (c.is("-")) {
      c.next();
      neg = true;
    }
    std::string num = c.ident();
    if (neg || num.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("timestamps must be non-negative integers", lineno, 1);
    c.expect(":");
    int t = std::stoi(num);
    parse_atoms_into(c, slices[t]);
  }
  if (!point) throw ParseError("missing 'point:' line", 1, 1);
  TemporalInstance d;
  d.point = *point;
  int maxt = slices.empty() ? 0 : slices.rbegin()->first;
  d.slices.assign(maxt + 1, DataInstance{});
  for (auto& [t, s] : slices) d.slices[t] = s;
  auto inds = d.individuals();
  if (!inds.count(d.point) && !slices.empty()) {
    bool mentioned = false;
    for (const auto& s : d.slices) mentioned = mentioned || s.individuals.count(d.point);
    bool any_atoms = false;
    for (const auto& s : d.slices) any_atoms = any_atoms || !s.individuals.empty();
    if (any_atoms && !mentioned) throw ParseError("unknown individual '" + d.point + "' in point", 1, 1);
  }
  d.canonicalize();
  return d;
}

std::string print_tinstance(const TemporalInstance& d) {
  std::string out = "point: " + d.point + "\n";
  for (int t = 0; t <= d.max(); ++t) out += "t=" + std::to_string(t) + ": " + atoms_str(d.slices[t]) + "\n";
  return out;
}

std::string inline_tinstance(const TemporalInstance& d) {
  std::string out = "point=" + d.point;
  for (int t = 0; t <= d.max(); ++t) out += "; " + std::to_string(t) + ": " + atoms_str(d.slices[t]);
  return out;
}

ExampleSet parse_exampleset(const std::string& text) {
  ExampleSet e;
  std::istringstream in(text);
  std::string line, buf;
  int kind = 0;
  auto flush = [&]() {
    if (kind == 0) return;
    (kind == 1 ? e.positives : e.negatives).push_back(parse_tinstance(buf));
    buf.clear();
  };
  while (std::getline(in, line)) {
    std::string trimmed = line.substr(0, line.find_last_not_of(" \t\r") + 1);
    if (trimmed == "[positive]" || trimmed == "[negative]") {
      flush();
      kind = trimmed == "[positive]" ? 1 : 2;
      continue;
    }
    buf += line + "\n";
  }
  flush();
  return e;
}

std::string print_exampleset(const ExampleSet& e) {
  std::string out;
  for (const auto& d : e.positives) out += "[positive]\n" + print_tinstance(d);
  for (const auto& d : e.negatives) out += "[negative]\n" + print_tinstance(d);
  return out;
}

PointedInstance parse_pointed(const std::string& text) {
  TemporalInstance d = parse_tinstance(text);
  if (d.max() != 0) throw Error("pointed instance must have a single slice");
  PointedInstance p{d.slices[0], d.point};
  p.instance.add_individual(p.point);
  return p;
}

std::string print_pointed(const PointedInstance& p) {
  TemporalInstance d;
  d.slices = {p.instance};
  d.point = p.point;
  return print_tinstance(d);
}

Signature parse_sigma(const std::string& text, const Signature& known) {
  Signature s;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    auto b = part.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    part = part.substr(b, part.find_last_not_of(" \t") - b + 1);
    if (known.roles.count(part))
      s.roles.insert(part);
    else
      s.concepts.insert(part);
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace tomq
