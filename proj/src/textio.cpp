#include "needsem/textio.hpp"

#include <json.hpp>

namespace needsem {

std::string ParseError::describe() const {
  std::string s = "offset " + std::to_string(span.start) + "-" + std::to_string(span.end) + ": " +
                  message;
  if (!expected.empty()) {
    s += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) s += ", ";
      s += expected[i];
    }
    s += ")";
  }
  return s;
}

bool is_keyword(std::string_view name) {
  return name == "let" || name == "letrec" || name == "in";
}

namespace {

bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'';
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty() || !ident_start(name[0]) || is_keyword(name)) return false;
  for (char c : name)
    if (!ident_char(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident,
  Let,
  Letrec,
  In,
  Backslash,
  Dot,
  Equals,
  Comma,
  LParen,
  RParen,
  LAngle,
  RAngle,
  Hole,
  Proj,
  End,
};

std::string tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Let: return "'let'";
    case Tok::Letrec: return "'letrec'";
    case Tok::In: return "'in'";
    case Tok::Backslash: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::Hole: return "'#'";
    case Tok::Proj: return "projection";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  SourceSpan span;
  std::string text;
  int index = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, std::string msg) {
    throw ParseFailure(ParseError{{at, at + 1}, std::move(msg), {}});
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      Tok k = word == "let" ? Tok::Let : word == "letrec" ? Tok::Letrec : word == "in" ? Tok::In
                                                                                      : Tok::Ident;
      out.push_back({k, {start, i}, std::move(word)});
      continue;
    }
    if (c == '.' && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '9') {
      if (s[i + 1] != '1' && s[i + 1] != '2') fail(i + 1, "projection index must be 1 or 2");
      out.push_back({Tok::Proj, {start, i + 2}, std::string(s.substr(i, 2)), s[i + 1] - '0'});
      i += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '\\': k = Tok::Backslash; break;
      case '.': k = Tok::Dot; break;
      case '=': k = Tok::Equals; break;
      case ',': k = Tok::Comma; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '<': k = Tok::LAngle; break;
      case '>': k = Tok::RAngle; break;
      case '#': k = Tok::Hole; break;
      default: fail(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, {start, i + 1}, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, {s.size(), s.size()}, ""});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> toks, Mode mode) : toks_(std::move(toks)), mode_(mode) {}

  Term program() {
    Term t = expr();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseFailure(ParseError{t.span, "unexpected " + got, std::move(expected)});
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) unexpected({tok_name(k)});
    return next();
  }

  void require(bool allowed, const Token& at, std::string_view what) const {
    if (allowed) return;
    std::vector<std::string> expected;
    switch (mode_) {
      case Mode::Let: expected = {"variable", "abstraction", "application", "let"}; break;
      case Mode::Letrec:
      case Mode::Value:
        expected = {"variable", "abstraction", "application", "letrec", "'#'"};
        break;
      case Mode::LetrecPairs:
        expected = {"variable", "abstraction", "application", "letrec", "'#'", "pair",
                    "projection"};
        break;
    }
    throw ParseFailure(ParseError{at.span,
                                  std::string(what) + " is not part of the " +
                                      std::string(to_string(mode_)) + " calculus",
                                  std::move(expected)});
  }

  static bool starts_atom(Tok k) {
    return k == Tok::Ident || k == Tok::Hole || k == Tok::LParen || k == Tok::LAngle;
  }
  static bool starts_open(Tok k) { return k == Tok::Backslash || k == Tok::Let || k == Tok::Letrec; }

  Term expr() {
    Tok k = peek().kind;
    if (starts_open(k)) return open();
    if (!starts_atom(k)) unexpected({"expression"});
    Term t = postfix();
    for (;;) {
      Tok n = peek().kind;
      if (starts_atom(n)) {
        t = Term::app(std::move(t), postfix());
      } else if (starts_open(n)) {
        return Term::app(std::move(t), open());
      } else {
        return t;
      }
    }
  }

  Term open() {
    const Token& head = next();
    switch (head.kind) {
      case Tok::Backslash: {
        Name x = expect(Tok::Ident).text;
        expect(Tok::Dot);
        return Term::lam(std::move(x), expr());
      }
      case Tok::Let: {
        require(mode_ == Mode::Let, head, "'let'");
        Name x = expect(Tok::Ident).text;
        expect(Tok::Equals);
        Term m = expr();
        expect(Tok::In);
        return Term::let(std::move(x), std::move(m), expr());
      }
      case Tok::Letrec: {
        require(mode_ != Mode::Let, head, "'letrec'");
        std::vector<Binding> bs;
        if (peek().kind != Tok::In) {
          for (;;) {
            const Token& id = expect(Tok::Ident);
            for (std::size_t i = 0; i < bs.size(); ++i)
              if (bs[i].name == id.text)
                throw ParseFailure(ParseError{id.span, "letrec binds '" + id.text + "' twice", {}});
            Name x = id.text;
            expect(Tok::Equals);
            bs.push_back({std::move(x), expr()});
            if (peek().kind != Tok::Comma) break;
            next();
          }
        }
        if (peek().kind != Tok::In) unexpected({"','", "'in'"});
        next();
        return Term::letrec(std::move(bs), expr());
      }
      default: unexpected({"expression"});
    }
  }

  Term postfix() {
    Term t = atom();
    while (peek().kind == Tok::Proj) {
      const Token& p = next();
      require(mode_ == Mode::LetrecPairs, p, "projection");
      t = Term::proj(std::move(t), p.index);
    }
    return t;
  }

  Term atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Ident: return Term::var(t.text);
      case Tok::Hole:
        require(mode_ != Mode::Let, t, "black hole '#'");
        return Term::black_hole();
      case Tok::LParen: {
        Term e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::LAngle: {
        require(mode_ == Mode::LetrecPairs, t, "pair");
        Term l = expr();
        expect(Tok::Comma);
        Term r = expr();
        expect(Tok::RAngle);
        return Term::pair(std::move(l), std::move(r));
      }
      default: --pos_; unexpected({"expression"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
};

}  // namespace

std::variant<Term, ParseError> try_parse(std::string_view text, Mode mode) {
  try {
    return parse(text, mode);
  } catch (const ParseFailure& f) {
    return f.error;
  }
}

Term parse(std::string_view text, Mode mode) {
  Term t = Parser(lex(text), mode).program();
  if (auto err = validate(t, mode)) throw ParseFailure(ParseError{{0, text.size()}, *err, {}});
  return t;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

class Printer {
 public:
  std::string out;

  // `tail`: nothing follows the term before a delimiter, so open forms can
  // extend to the right without parentheses.
  void term(const Term& t, bool tail) {
    switch (t.kind()) {
      case TermKind::Lam:
      case TermKind::Let:
      case TermKind::Letrec:
        if (!tail) {
          out += '(';
          open(t);
          out += ')';
        } else {
          open(t);
        }
        return;
      case TermKind::App:
        fn(t.fn());
        out += ' ';
        if (t.arg().is(TermKind::App)) {
          out += '(';
          term(t.arg(), true);
          out += ')';
        } else {
          term(t.arg(), tail);
        }
        return;
      default: postfix(t); return;
    }
  }

  void bindings(const std::vector<Binding>& bs) {
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (i) out += ", ";
      out += bs[i].name;
      out += " = ";
      term(bs[i].value, true);
    }
  }

 private:
  void fn(const Term& t) { term(t, false); }

  void open(const Term& t) {
    switch (t.kind()) {
      case TermKind::Lam:
        out += '\\';
        out += t.name();
        out += '.';
        term(t.body(), true);
        return;
      case TermKind::Let:
        out += "let ";
        out += t.name();
        out += " = ";
        term(t.bound(), true);
        out += " in ";
        term(t.body(), true);
        return;
      case TermKind::Letrec:
        out += "letrec";
        if (!t.bindings().empty()) {
          out += ' ';
          bindings(t.bindings());
        }
        out += " in ";
        term(t.body(), true);
        return;
      default: return;
    }
  }

  void postfix(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: out += t.name(); return;
      case TermKind::BlackHole: out += '#'; return;
      case TermKind::Pair:
        out += '<';
        term(t.left(), true);
        out += ", ";
        term(t.right(), true);
        out += '>';
        return;
      case TermKind::Proj: {
        const Term& m = t.target();
        bool atomic = m.is(TermKind::Var) || m.is(TermKind::BlackHole) || m.is(TermKind::Pair) ||
                      m.is(TermKind::Proj);
        if (atomic) {
          postfix(m);
        } else {
          out += '(';
          term(m, true);
          out += ')';
        }
        out += t.index() == 1 ? ".1" : ".2";
        return;
      }
      default:
        out += '(';
        term(t, true);
        out += ')';
        return;
    }
  }
};

}  // namespace

std::string print(const Term& t) {
  Printer p;
  p.term(t, true);
  return p.out;
}

std::string print_bindings(const std::vector<Binding>& bindings) {
  Printer p;
  p.bindings(bindings);
  return p.out;
}

// ---------------------------------------------------------------------------
// JSON

std::string encode_trace(const TraceView& view) {
  nlohmann::ordered_json j;
  j["mode"] = view.mode;
  j["engine"] = view.engine;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& [rule, term] : view.steps)
    steps.push_back(nlohmann::ordered_json{{"rule", rule}, {"term", print(term)}});
  j["steps"] = std::move(steps);
  j["outcome"] = view.outcome;
  if (view.heap) {
    auto heap = nlohmann::ordered_json::array();
    for (const auto& b : *view.heap)
      heap.push_back(nlohmann::ordered_json{{"name", b.name}, {"term", print(b.value)}});
    j["heap"] = std::move(heap);
  } else {
    j["heap"] = nullptr;
  }
  j["value"] = view.value ? nlohmann::ordered_json(print(*view.value)) : nlohmann::ordered_json();
  j["term"] = view.term ? nlohmann::ordered_json(print(*view.term)) : nlohmann::ordered_json();
  if (!view.detail.empty()) j["detail"] = view.detail;
  return j.dump();
}

}  // namespace needsem
