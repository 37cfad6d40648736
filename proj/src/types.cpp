#include "mukleene/types.hpp"

#include <sstream>

#include "mukleene/errors.hpp"

namespace mukleene {

FiniteType FiniteType::arrow(const FiniteType& arg, const FiniteType& result) {
  std::vector<FiniteType> args;
  args.reserve(1 + result.args_.size());
  args.push_back(arg);
  for (const auto& a : result.args_) args.push_back(a);
  return FiniteType(std::move(args));
}

int FiniteType::rank() const {
  if (args_.empty()) return 0;
  int m = 0;
  for (const auto& a : args_) {
    int r = a.rank();
    if (r > m) m = r;
  }
  return m + 1;
}

FiniteType FiniteType::drop_first() const {
  if (args_.empty()) fail(Errc::type_mismatch, "ground type has no argument to drop");
  return FiniteType(std::vector<FiniteType>(args_.begin() + 1, args_.end()));
}

std::string FiniteType::str() const {
  if (is_ground()) return "N";
  std::ostringstream os;
  os << "(->";
  for (const auto& a : args_) os << ' ' << a.str();
  os << " N)";
  return os.str();
}

namespace {

struct TyParser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void err(const std::string& msg) {
    fail(Errc::syntax_error, msg + " at offset " + std::to_string(pos) + " in type '" + s + "'");
  }

  FiniteType parse_type() {
    skip_ws();
    if (pos >= s.size()) err("unexpected end of type");
    if (s[pos] == 'N') {
      ++pos;
      return FiniteType::ground();
    }
    if (s[pos] != '(') err("expected 'N' or '(->'");
    ++pos;
    skip_ws();
    if (s.compare(pos, 2, "->") != 0) err("expected '->'");
    pos += 2;
    std::vector<FiniteType> parts;
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        break;
      }
      parts.push_back(parse_type());
    }
    if (parts.empty() || !parts.back().is_ground())
      err("arrow type must end in N");
    parts.pop_back();
    if (parts.empty()) err("arrow type needs at least one argument");
    return FiniteType::fun(std::move(parts));
  }
};

}  // namespace

FiniteType FiniteType::parse(const std::string& src) {
  TyParser p{src};
  FiniteType t = p.parse_type();
  p.skip_ws();
  if (p.pos != src.size()) p.err("trailing input after type");
  return t;
}

bool FiniteType::operator<(const FiniteType& o) const {
  if (args_.size() != o.args_.size()) return args_.size() < o.args_.size();
  for (size_t i = 0; i < args_.size(); ++i) {
    if (args_[i] < o.args_[i]) return true;
    if (o.args_[i] < args_[i]) return false;
  }
  return false;
}

size_t FiniteType::hash() const {
  size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& a : args_) h = h * 1099511628211ull + a.hash() + 1;
  return h;
}

}  // namespace mukleene
