#include "pta/parse.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace pta {
namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int col = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize_line(const std::string& raw, int line_no) {
  std::vector<Token> toks;
  std::string line = raw;
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);

  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      toks.push_back({Tok::Ident, line.substr(i, j - i), line_no, col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      toks.push_back({Tok::Number, line.substr(i, j - i), line_no, col});
      i = j;
    } else if (c == '<' || c == '>') {
      std::string op(1, c);
      if (i + 1 < line.size() && line[i + 1] == '=') op += '=';
      toks.push_back({Tok::Punct, op, line_no, col});
      i += op.size();
    } else if (c == '{' || c == '}' || c == ',' || c == ':' || c == '*' || c == '+' || c == '&') {
      toks.push_back({Tok::Punct, std::string(1, c), line_no, col});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
    }
  }
  toks.push_back({Tok::End, "", line_no, static_cast<int>(line.size()) + 1});
  return toks;
}

class LineParser {
public:
  explicit LineParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what);
    return next().text;
  }
  std::int64_t expect_number(const std::string& what) {
    if (peek().kind != Tok::Number) fail("expected " + what);
    return std::stoll(next().text);
  }
  void expect_punct(const std::string& p) {
    if (peek().kind != Tok::Punct || peek().text != p) fail("expected '" + p + "'");
    next();
  }
  bool accept_punct(const std::string& p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }
  void expect_end() {
    if (!at_end()) fail("trailing tokens on line");
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const char* kReserved[] = {"true", "init", "target", "avoid"};

bool is_reserved(const std::string& s) {
  for (const char* r : kReserved)
    if (s == r) return true;
  return false;
}

std::string parse_name(LineParser& p, const std::string& what) {
  std::string name = p.expect_ident(what);
  if (is_reserved(name)) p.fail("'" + name + "' is a reserved word");
  return name;
}

// expr: term ('+' term)*;  term: nat | nat '*' param | param
AffineParamExpr parse_expr(LineParser& p) {
  AffineParamExpr expr;
  while (true) {
    if (p.peek().kind == Tok::Number) {
      std::int64_t n = p.expect_number("number");
      if (p.accept_punct("*")) {
        expr.add_term(parse_name(p, "parameter name"), n);
      } else {
        expr.constant += n;
      }
    } else if (p.peek().kind == Tok::Ident && !is_reserved(p.peek().text)) {
      expr.add_term(p.next().text, 1);
    } else {
      p.fail("expected expression term");
    }
    if (!p.accept_punct("+")) break;
  }
  return expr;
}

Guard parse_guard(LineParser& p) {
  Guard g;
  if (p.peek().kind == Tok::Ident && p.peek().text == "true") {
    p.next();
    return g;
  }
  while (true) {
    GuardAtom atom;
    atom.clock = parse_name(p, "clock name");
    if (p.peek().kind != Tok::Punct ||
        (p.peek().text != "<" && p.peek().text != "<=" && p.peek().text != ">" &&
         p.peek().text != ">="))
      p.fail("expected comparison operator");
    atom.rel = parse_rel(p.next().text);
    atom.bound = parse_expr(p);
    g.atoms.push_back(std::move(atom));
    if (!p.accept_punct("&")) break;
  }
  return g;
}

struct Builder {
  PTA pta;
  std::vector<LocationId> targets, avoids;
  std::optional<std::int64_t> deadline;
  int init_count = 0;

  void location_line(LineParser& p) {
    std::string id = parse_name(p, "location name");
    bool is_init = false, is_target = false, is_avoid = false;
    while (!p.at_end()) {
      std::string flag = p.expect_ident("location flag");
      if (flag == "init" && !is_init)
        is_init = true;
      else if (flag == "target" && !is_target)
        is_target = true;
      else if (flag == "avoid" && !is_avoid)
        is_avoid = true;
      else
        p.fail("bad or repeated location flag '" + flag + "'");
    }
    pta.locations.push_back(id);
    if (is_init) {
      if (++init_count > 1) throw SemanticError("location '" + id + "': second init location");
      pta.init = id;
    }
    if (is_target) targets.push_back(id);
    if (is_avoid) avoids.push_back(id);
  }

  void clock_line(LineParser& p) {
    std::string id = parse_name(p, "clock name");
    p.expect_end();
    if (id == kGlobalClock)
      throw SemanticError("clock 'x0' is implicit and must not be declared");
    pta.clocks.push_back(id);
  }

  void param_line(LineParser& p) {
    Parameter param;
    param.name = parse_name(p, "parameter name");
    param.lo = p.expect_number("lower bound");
    param.hi = p.expect_number("upper bound");
    p.expect_end();
    pta.parameters.push_back(param);
  }

  void deadline_line(LineParser& p) {
    std::int64_t d = p.expect_number("deadline");
    p.expect_end();
    if (deadline) throw SemanticError("deadline declared twice");
    deadline = d;
  }

  void trans_line(LineParser& p) {
    Transition t;
    std::string first = parse_name(p, "transition id or source location");
    if (p.accept_punct(":")) {
      t.id = first;
      t.source = parse_name(p, "source location");
    } else {
      t.source = first;
    }
    t.input = parse_name(p, "input symbol");
    p.expect_punct("{");
    if (!p.accept_punct("}")) {
      while (true) {
        t.resets.push_back(parse_name(p, "clock name"));
        if (p.accept_punct("}")) break;
        p.expect_punct(",");
      }
    }
    t.guard = parse_guard(p);
    t.target = parse_name(p, "target location");
    p.expect_end();
    pta.transitions.push_back(std::move(t));
  }

  Model finish() {
    if (!deadline) throw SemanticError("no deadline declared");
    pta.finalize();
    Spec spec;
    spec.targets = targets;
    spec.avoids = avoids;
    spec.deadline = *deadline;
    spec.validate(pta);
    return Model{std::move(pta), std::move(spec)};
  }
};

}  // namespace

Model parse_model(std::istream& in) {
  Builder b;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    LineParser p(tokenize_line(raw, line_no));
    if (p.at_end()) continue;
    std::string head = p.expect_ident("directive");
    if (head == "location")
      b.location_line(p);
    else if (head == "clock")
      b.clock_line(p);
    else if (head == "param")
      b.param_line(p);
    else if (head == "deadline")
      b.deadline_line(p);
    else if (head == "trans")
      b.trans_line(p);
    else
      throw ParseError("unknown directive '" + head + "'", line_no, 1);
  }
  return b.finish();
}

Model parse_model(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

Model parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("cannot open model file '" + path + "'");
  return parse_model(in);
}

std::string print_model(const Model& model) {
  std::ostringstream out;
  const PTA& pta = model.pta;
  for (const auto& l : pta.locations) {
    out << "location " << l;
    if (l == pta.init) out << " init";
    if (model.spec.is_target(l)) out << " target";
    if (model.spec.is_avoid(l)) out << " avoid";
    out << "\n";
  }
  for (const auto& c : pta.clocks)
    if (c != kGlobalClock) out << "clock " << c << "\n";
  for (const auto& p : pta.parameters)
    out << "param " << p.name << " " << p.lo << " " << p.hi << "\n";
  out << "deadline " << model.spec.deadline << "\n";
  for (const auto& t : pta.transitions) {
    out << "trans " << t.id << ": " << t.source << " " << t.input << " {";
    for (std::size_t i = 0; i < t.resets.size(); ++i) out << (i ? "," : "") << t.resets[i];
    out << "} " << t.guard.to_string() << " " << t.target << "\n";
  }
  return out.str();
}

}  // namespace pta
