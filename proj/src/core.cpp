#include "pta/core.hpp"

namespace pta {

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

Rel parse_rel(const std::string& s) {
  if (s == "<") return Rel::Lt;
  if (s == "<=") return Rel::Le;
  if (s == ">") return Rel::Gt;
  if (s == ">=") return Rel::Ge;
  throw std::invalid_argument("unknown relation '" + s + "'");
}

Rel rel_flip(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
  }
  return r;
}

bool rel_is_strict(Rel r) { return r == Rel::Lt || r == Rel::Gt; }

bool rel_holds(const Rat& lhs, Rel r, const Rat& rhs) {
  switch (r) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Ge: return lhs >= rhs;
  }
  return false;
}

std::string rat_to_string(const Rat& q) { return q.str(); }

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw FormatError("empty rational literal");
  std::size_t slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!is_int(s)) throw FormatError("bad rational literal '" + s + "'");
      return Rat(BigInt(s));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw FormatError("bad rational literal '" + s + "'");
    BigInt d(den);
    if (d == 0) throw FormatError("zero denominator in '" + s + "'");
    return Rat(BigInt(num), d);
  } catch (const std::runtime_error&) {
    throw FormatError("bad rational literal '" + s + "'");
  }
}

}  // namespace pta
