#include "mukleene/term.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

constexpr int kMaxRank = 3;

TermPtr node(TermKind k, FiniteType ty) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->ty = std::move(ty);
  return t;
}

void require_ground(const TermPtr& t, const char* what) {
  if (!t->ty.is_ground())
    fail(Errc::type_mismatch, std::string(what) + " requires a ground argument, got " + t->ty.str());
}

}  // namespace

TermPtr mk_zero() { return node(TermKind::zero, FiniteType::ground()); }

TermPtr mk_suc(TermPtr t) {
  require_ground(t, "suc");
  auto r = node(TermKind::suc, FiniteType::ground());
  const_cast<Term*>(r.get())->a = std::move(t);
  return r;
}

TermPtr mk_pred(TermPtr t) {
  require_ground(t, "pred");
  auto r = node(TermKind::pred, FiniteType::ground());
  const_cast<Term*>(r.get())->a = std::move(t);
  return r;
}

TermPtr mk_case(TermPtr z, TermPtr ifz, TermPtr ifpos) {
  require_ground(z, "case");
  require_ground(ifz, "case");
  require_ground(ifpos, "case");
  auto r = node(TermKind::kase, FiniteType::ground());
  auto* m = const_cast<Term*>(r.get());
  m->a = std::move(z);
  m->b = std::move(ifz);
  m->c = std::move(ifpos);
  return r;
}

TermPtr mk_var(const std::string& name, const FiniteType& ty) {
  if (ty.rank() > kMaxRank)
    fail(Errc::rank_violation, "variable " + name + " has rank " + std::to_string(ty.rank()));
  auto r = node(TermKind::var, ty);
  const_cast<Term*>(r.get())->name = name;
  return r;
}

TermPtr mk_oracle(const std::string& id, const FiniteType& ty) {
  if (ty.rank() > kMaxRank)
    fail(Errc::rank_violation, "oracle #" + id + " has rank " + std::to_string(ty.rank()));
  auto r = node(TermKind::oracle, ty);
  const_cast<Term*>(r.get())->name = id;
  return r;
}

TermPtr mk_app(TermPtr f, TermPtr arg) {
  if (f->ty.is_ground())
    fail(Errc::type_mismatch, "application head has ground type");
  const FiniteType& want = f->ty.args().front();
  if (arg->ty != want)
    fail(Errc::type_mismatch,
         "argument type " + arg->ty.str() + " does not match expected " + want.str());
  auto r = node(TermKind::app, f->ty.drop_first());
  auto* m = const_cast<Term*>(r.get());
  m->a = std::move(f);
  m->b = std::move(arg);
  return r;
}

TermPtr mk_lam(const std::string& x, const FiniteType& xt, TermPtr body) {
  FiniteType ty = FiniteType::arrow(xt, body->ty);
  if (ty.rank() > kMaxRank)
    fail(Errc::rank_violation, "lambda type " + ty.str() + " has rank " + std::to_string(ty.rank()));
  auto r = node(TermKind::lam, std::move(ty));
  auto* m = const_cast<Term*>(r.get());
  m->name = x;
  m->binder = xt;
  m->a = std::move(body);
  return r;
}

TermPtr mk_mu(const std::string& x, const FiniteType& xt, TermPtr body) {
  if (xt.rank() > kMaxRank)
    fail(Errc::rank_violation, "mu binder type " + xt.str() + " has rank " + std::to_string(xt.rank()));
  if (body->ty != xt)
    fail(Errc::type_mismatch,
         "mu body type " + body->ty.str() + " does not match binder " + xt.str());
  auto r = node(TermKind::mu, xt);
  auto* m = const_cast<Term*>(r.get());
  m->name = x;
  m->binder = xt;
  m->a = std::move(body);
  return r;
}

TermPtr mk_app_spine(TermPtr f, const std::vector<TermPtr>& args) {
  TermPtr cur = std::move(f);
  for (const auto& a : args) cur = mk_app(cur, a);
  return cur;
}

TermPtr numeral(uint64_t n) {
  TermPtr t = mk_zero();
  for (uint64_t i = 0; i < n; ++i) t = mk_suc(t);
  return t;
}

uint64_t node_count(const TermPtr& t) {
  if (!t) return 0;
  return 1 + node_count(t->a) + node_count(t->b) + node_count(t->c);
}

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& bound,
                  std::map<std::string, FiniteType>& out) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::var: {
      if (bound.count(t->name)) return;
      auto it = out.find(t->name);
      if (it == out.end())
        out.emplace(t->name, t->ty);
      else if (it->second != t->ty)
        fail(Errc::type_mismatch, "free variable " + t->name + " used at two types");
      return;
    }
    case TermKind::lam:
    case TermKind::mu: {
      const bool was = bound.count(t->name) > 0;
      bound.insert(t->name);
      collect_free(t->a, bound, out);
      if (!was) bound.erase(t->name);
      return;
    }
    default:
      collect_free(t->a, bound, out);
      collect_free(t->b, bound, out);
      collect_free(t->c, bound, out);
  }
}

void collect_oracles(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == TermKind::oracle) out.insert(t->name);
  collect_oracles(t->a, out);
  collect_oracles(t->b, out);
  collect_oracles(t->c, out);
}

}  // namespace

std::map<std::string, FiniteType> free_vars(const TermPtr& t) {
  std::set<std::string> bound;
  std::map<std::string, FiniteType> out;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

std::vector<std::string> oracle_refs(const TermPtr& t) {
  std::set<std::string> s;
  collect_oracles(t, s);
  return {s.begin(), s.end()};
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base + "'";
  while (avoid.count(cand)) cand += "'";
  return cand;
}

TermPtr subst_rec(const TermPtr& t, const std::string& x, const TermPtr& s,
                  const std::map<std::string, FiniteType>& s_free) {
  switch (t->kind) {
    case TermKind::zero:
    case TermKind::oracle:
      return t;
    case TermKind::var:
      return t->name == x ? s : t;
    case TermKind::suc:
      return mk_suc(subst_rec(t->a, x, s, s_free));
    case TermKind::pred:
      return mk_pred(subst_rec(t->a, x, s, s_free));
    case TermKind::kase:
      return mk_case(subst_rec(t->a, x, s, s_free), subst_rec(t->b, x, s, s_free),
                     subst_rec(t->c, x, s, s_free));
    case TermKind::app:
      return mk_app(subst_rec(t->a, x, s, s_free), subst_rec(t->b, x, s, s_free));
    case TermKind::lam:
    case TermKind::mu: {
      if (t->name == x) return t;  // shadowed
      std::string bname = t->name;
      TermPtr body = t->a;
      if (s_free.count(bname)) {
        // The binder would capture a free variable of s: rename it first.
        std::set<std::string> avoid;
        for (const auto& [n, ty] : s_free) avoid.insert(n);
        for (const auto& [n, ty] : free_vars(body)) avoid.insert(n);
        avoid.insert(x);
        std::string nb = fresh_name(bname, avoid);
        body = substitute(body, bname, mk_var(nb, t->binder));
        bname = nb;
      }
      TermPtr nbody = subst_rec(body, x, s, s_free);
      return t->kind == TermKind::lam ? mk_lam(bname, t->binder, nbody)
                                      : mk_mu(bname, t->binder, nbody);
    }
  }
  fail(Errc::invariant, "unreachable term kind");
}

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  return subst_rec(t, x, s, free_vars(s));
}

namespace {

bool alpha_rec(const TermPtr& a, const TermPtr& b, std::map<std::string, int>& la,
               std::map<std::string, int>& lb, int depth) {
  if (a->kind != b->kind || a->ty != b->ty) return false;
  switch (a->kind) {
    case TermKind::zero:
      return true;
    case TermKind::oracle:
      return a->name == b->name;
    case TermKind::var: {
      auto ia = la.find(a->name);
      auto ib = lb.find(b->name);
      if (ia == la.end() && ib == lb.end()) return a->name == b->name;  // both free
      if (ia == la.end() || ib == lb.end()) return false;
      return ia->second == ib->second;
    }
    case TermKind::suc:
    case TermKind::pred:
      return alpha_rec(a->a, b->a, la, lb, depth);
    case TermKind::kase:
      return alpha_rec(a->a, b->a, la, lb, depth) && alpha_rec(a->b, b->b, la, lb, depth) &&
             alpha_rec(a->c, b->c, la, lb, depth);
    case TermKind::app:
      return alpha_rec(a->a, b->a, la, lb, depth) && alpha_rec(a->b, b->b, la, lb, depth);
    case TermKind::lam:
    case TermKind::mu: {
      if (a->binder != b->binder) return false;
      auto sa = la.find(a->name);
      auto sb = lb.find(b->name);
      std::optional<int> olda, oldb;
      if (sa != la.end()) olda = sa->second;
      if (sb != lb.end()) oldb = sb->second;
      la[a->name] = depth;
      lb[b->name] = depth;
      bool ok = alpha_rec(a->a, b->a, la, lb, depth + 1);
      if (olda) la[a->name] = *olda; else la.erase(a->name);
      if (oldb) lb[b->name] = *oldb; else lb.erase(b->name);
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::map<std::string, int> la, lb;
  return alpha_rec(a, b, la, lb, 0);
}

namespace {

void print_rec(const TermPtr& t, std::ostream& os) {
  switch (t->kind) {
    case TermKind::zero:
      os << '0';
      return;
    case TermKind::suc:
      os << "(suc ";
      print_rec(t->a, os);
      os << ')';
      return;
    case TermKind::pred:
      os << "(pred ";
      print_rec(t->a, os);
      os << ')';
      return;
    case TermKind::kase:
      os << "(case ";
      print_rec(t->a, os);
      os << ' ';
      print_rec(t->b, os);
      os << ' ';
      print_rec(t->c, os);
      os << ')';
      return;
    case TermKind::var:
      os << t->name;
      return;
    case TermKind::oracle:
      os << '#' << t->name;
      return;
    case TermKind::app: {
      // Flatten the spine for readability; parsing re-associates left.
      std::vector<TermPtr> args;
      TermPtr head = t;
      while (head->kind == TermKind::app) {
        args.push_back(head->b);
        head = head->a;
      }
      os << '(';
      print_rec(head, os);
      for (auto it = args.rbegin(); it != args.rend(); ++it) {
        os << ' ';
        print_rec(*it, os);
      }
      os << ')';
      return;
    }
    case TermKind::lam:
    case TermKind::mu:
      os << (t->kind == TermKind::lam ? "(lam (" : "(mu (") << t->name << " : "
         << t->binder.str() << ") ";
      print_rec(t->a, os);
      os << ')';
      return;
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_rec(t, os);
  return os.str();
}

namespace {

struct Parser {
  const std::string& s;
  const std::map<std::string, FiniteType>& oracles;
  size_t pos = 0;
  std::vector<std::pair<std::string, FiniteType>> scope;

  void skip_ws() {
    while (pos < s.size()) {
      char c = s[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == ';') {  // line comment
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  std::string where(size_t p) const {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < p && i < s.size(); ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return "line " + std::to_string(line) + " col " + std::to_string(col);
  }

  [[noreturn]] void err(Errc c, const std::string& msg, size_t at) {
    fail(c, msg + " (" + where(at) + ")");
  }

  // Re-raise a constructor error with source position, without doubling the
  // error-name prefix that Error::what() already carries.
  [[noreturn]] void rethrow_at(const Error& e, size_t at) {
    std::string msg = e.what();
    const std::string prefix = std::string(errc_name(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    err(e.code(), msg, at);
  }

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
  }

  std::string read_ident() {
    size_t start = pos;
    if (pos >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      err(Errc::syntax_error, "expected identifier", pos);
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      err(Errc::syntax_error, std::string("expected '") + c + "'", pos);
    ++pos;
  }

  FiniteType parse_type() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && s[pos] == 'N' &&
        (pos + 1 >= s.size() || !ident_char(s[pos + 1]))) {
      ++pos;
      return FiniteType::ground();
    }
    if (pos >= s.size() || s[pos] != '(')
      err(Errc::syntax_error, "expected type ('N' or '(-> ...)')", start);
    ++pos;
    skip_ws();
    if (s.compare(pos, 2, "->") != 0)
      err(Errc::syntax_error, "expected '->' in type", pos);
    pos += 2;
    std::vector<FiniteType> parts;
    while (true) {
      skip_ws();
      if (pos >= s.size()) err(Errc::syntax_error, "unterminated type", start);
      if (s[pos] == ')') {
        ++pos;
        break;
      }
      parts.push_back(parse_type());
    }
    if (parts.empty() || !parts.back().is_ground())
      err(Errc::syntax_error, "arrow type must end in N", start);
    parts.pop_back();
    if (parts.empty())
      err(Errc::syntax_error, "arrow type needs at least one argument", start);
    return FiniteType::fun(std::move(parts));
  }

  TermPtr parse_binder(bool is_lam, size_t start) {
    skip_ws();
    if (pos >= s.size() || s[pos] != '(')
      err(Errc::type_annotation_missing, "binder needs '(name : type)'", pos);
    ++pos;
    skip_ws();
    std::string name = read_ident();
    skip_ws();
    if (pos >= s.size() || s[pos] != ':')
      err(Errc::type_annotation_missing, "binder for " + name + " lacks ': type'", pos);
    ++pos;
    FiniteType bty = parse_type();
    expect(')');
    scope.emplace_back(name, bty);
    TermPtr body = parse_term_inner();
    scope.pop_back();
    expect(')');
    try {
      return is_lam ? mk_lam(name, bty, body) : mk_mu(name, bty, body);
    } catch (const Error& e) {
      rethrow_at(e, start);
    }
  }

  TermPtr parse_term_inner() {
    skip_ws();
    size_t start = pos;
    if (pos >= s.size()) err(Errc::syntax_error, "unexpected end of input", pos);
    char c = s[pos];
    if (c == '0' && (pos + 1 >= s.size() || !ident_char(s[pos + 1]))) {
      ++pos;
      return mk_zero();
    }
    if (c == '#') {
      ++pos;
      std::string id = read_ident();
      auto it = oracles.find(id);
      if (it == oracles.end())
        err(Errc::unknown_constant, "#" + id + " is not in the oracle registry", start);
      return mk_oracle(id, it->second);
    }
    if (c == '(') {
      ++pos;
      skip_ws();
      size_t head_start = pos;
      // Keyword forms first; otherwise an application spine.
      if (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_') {
        size_t save = pos;
        std::string kw = read_ident();
        if (kw == "suc" || kw == "pred") {
          TermPtr t1 = parse_term_inner();
          expect(')');
          try {
            return kw == "suc" ? mk_suc(t1) : mk_pred(t1);
          } catch (const Error& e) {
            rethrow_at(e, start);
          }
        }
        if (kw == "case") {
          TermPtr t1 = parse_term_inner();
          TermPtr t2 = parse_term_inner();
          TermPtr t3 = parse_term_inner();
          expect(')');
          try {
            return mk_case(t1, t2, t3);
          } catch (const Error& e) {
            rethrow_at(e, start);
          }
        }
        if (kw == "lam" || kw == "mu") return parse_binder(kw == "lam", start);
        pos = save;  // plain identifier head of an application
      }
      TermPtr head = parse_term_inner();
      std::vector<TermPtr> args;
      while (true) {
        skip_ws();
        if (pos >= s.size()) err(Errc::syntax_error, "unterminated application", start);
        if (s[pos] == ')') {
          ++pos;
          break;
        }
        args.push_back(parse_term_inner());
      }
      if (args.empty())
        err(Errc::syntax_error, "application needs at least one argument", head_start);
      try {
        return mk_app_spine(head, args);
      } catch (const Error& e) {
        rethrow_at(e, start);
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = read_ident();
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == name) return mk_var(name, it->second);
      err(Errc::syntax_error, "unbound identifier '" + name + "'", start);
    }
    err(Errc::syntax_error, std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace

TermPtr parse_term(const std::string& src, const std::map<std::string, FiniteType>& oracle_types) {
  Parser p{src, oracle_types, 0, {}};
  TermPtr t = p.parse_term_inner();
  p.skip_ws();
  if (p.pos != src.size())
    p.err(Errc::syntax_error, "trailing input after term", p.pos);
  return t;
}

namespace {

FiniteType typecheck_rec(const TermPtr& t, std::vector<std::pair<std::string, FiniteType>>& env) {
  switch (t->kind) {
    case TermKind::zero:
      if (!t->ty.is_ground()) fail(Errc::type_mismatch, "zero annotated non-ground");
      return t->ty;
    case TermKind::suc:
    case TermKind::pred: {
      if (!typecheck_rec(t->a, env).is_ground())
        fail(Errc::type_mismatch, "suc/pred child not ground");
      if (!t->ty.is_ground()) fail(Errc::type_mismatch, "suc/pred annotated non-ground");
      return t->ty;
    }
    case TermKind::kase: {
      for (const TermPtr& ch : {t->a, t->b, t->c})
        if (!typecheck_rec(ch, env).is_ground())
          fail(Errc::type_mismatch, "case child not ground");
      if (!t->ty.is_ground()) fail(Errc::type_mismatch, "case annotated non-ground");
      return t->ty;
    }
    case TermKind::var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t->name) {
          if (it->second != t->ty)
            fail(Errc::type_mismatch, "variable " + t->name + " annotation differs from binder");
          return t->ty;
        }
      if (t->ty.rank() > kMaxRank)
        fail(Errc::rank_violation, "free variable " + t->name + " exceeds rank 3");
      return t->ty;  // free variable: carries its own declaration
    }
    case TermKind::oracle:
      if (t->ty.rank() > kMaxRank)
        fail(Errc::rank_violation, "oracle #" + t->name + " exceeds rank 3");
      return t->ty;
    case TermKind::app: {
      FiniteType f = typecheck_rec(t->a, env);
      FiniteType x = typecheck_rec(t->b, env);
      if (f.is_ground()) fail(Errc::type_mismatch, "application head has ground type");
      if (f.args().front() != x)
        fail(Errc::type_mismatch, "application argument type mismatch");
      if (t->ty != f.drop_first()) fail(Errc::type_mismatch, "application annotation wrong");
      return t->ty;
    }
    case TermKind::lam: {
      env.emplace_back(t->name, t->binder);
      FiniteType body = typecheck_rec(t->a, env);
      env.pop_back();
      FiniteType want = FiniteType::arrow(t->binder, body);
      if (t->ty != want) fail(Errc::type_mismatch, "lambda annotation wrong");
      if (want.rank() > kMaxRank)
        fail(Errc::rank_violation, "lambda type exceeds rank 3");
      return t->ty;
    }
    case TermKind::mu: {
      if (t->binder.rank() > kMaxRank)
        fail(Errc::rank_violation, "mu binder exceeds rank 3");
      env.emplace_back(t->name, t->binder);
      FiniteType body = typecheck_rec(t->a, env);
      env.pop_back();
      if (body != t->binder) fail(Errc::type_mismatch, "mu body type differs from binder");
      if (t->ty != t->binder) fail(Errc::type_mismatch, "mu annotation wrong");
      return t->ty;
    }
  }
  fail(Errc::invariant, "unreachable term kind");
}

}  // namespace

FiniteType typecheck(const TermPtr& t) {
  std::vector<std::pair<std::string, FiniteType>> env;
  return typecheck_rec(t, env);
}

}  // namespace mukleene
