#include "lpfl/syntax.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

#include "lpfl/errors.hpp"

namespace lpfl {

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << "parse error at " << line << ":" << column << ": " << message;
  return os.str();
}

namespace {

enum class Tok {
  Ident,
  Number,
  Equals,     // =
  Colon,      // :
  ColonSupseteq,  // :>=
  InverseMark,    // ^-1
  Semicolon,
  Comma,
  Dot,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Plus,
  Star,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

struct LexFail {
  int line;
  int column;
  std::string message;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::variant<std::vector<Token>, LexFail> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (pos_ >= src_.size()) break;
      int line = line_, col = col_;
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          word += take();
        }
        out.push_back({Tok::Ident, word, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += take();
        }
        out.push_back({Tok::Number, num, line, col});
        continue;
      }
      switch (c) {
        case '=':
          take();
          out.push_back({Tok::Equals, "=", line, col});
          break;
        case ':':
          take();
          if (pos_ + 1 < src_.size() && src_[pos_] == '>' &&
              src_[pos_ + 1] == '=') {
            take();
            take();
            out.push_back({Tok::ColonSupseteq, ":>=", line, col});
          } else {
            out.push_back({Tok::Colon, ":", line, col});
          }
          break;
        case '^':
          take();
          if (pos_ + 1 < src_.size() && src_[pos_] == '-' &&
              src_[pos_ + 1] == '1') {
            take();
            take();
            out.push_back({Tok::InverseMark, "^-1", line, col});
          } else {
            return LexFail{line, col, "expected '^-1'"};
          }
          break;
        case ';':
          take();
          out.push_back({Tok::Semicolon, ";", line, col});
          break;
        case ',':
          take();
          out.push_back({Tok::Comma, ",", line, col});
          break;
        case '.':
          take();
          out.push_back({Tok::Dot, ".", line, col});
          break;
        case '(':
          take();
          out.push_back({Tok::LParen, "(", line, col});
          break;
        case ')':
          take();
          out.push_back({Tok::RParen, ")", line, col});
          break;
        case '[':
          take();
          out.push_back({Tok::LBracket, "[", line, col});
          break;
        case ']':
          take();
          out.push_back({Tok::RBracket, "]", line, col});
          break;
        case '+':
          take();
          out.push_back({Tok::Plus, "+", line, col});
          break;
        case '*':
          take();
          out.push_back({Tok::Star, "*", line, col});
          break;
        default:
          return LexFail{line, col,
                         std::string("unexpected character '") + c + "'"};
      }
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::variant<ConstraintStore, ParseError> run() {
    try {
      parse_declarations();
      Signature sig = make_signature();
      ConstraintStore store(sig);
      while (peek().kind != Tok::End) parse_statement(store);
      return store;
    } catch (const ParseError& e) {
      return e;
    }
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& message) {
    throw ParseError{at.line, at.column, message};
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  Token expect(Tok kind, const std::string& what) {
    Token t = next();
    if (t.kind != kind) fail(t, "expected " + what + ", got '" + t.text + "'");
    return t;
  }

  void parse_declarations() {
    while (peek().kind == Tok::Ident &&
           (peek().text == "feature" || peek().text == "prec") &&
           peek(1).kind == Tok::Ident) {
      bool features = next().text == "feature";
      while (true) {
        Token name = expect(Tok::Ident, "a symbol name");
        auto& list = features ? feature_decls_ : prec_decls_;
        list.push_back(name);
        Token sep = next();
        if (sep.kind == Tok::Semicolon) break;
        if (sep.kind != Tok::Comma) fail(sep, "expected ',' or ';'");
      }
    }
  }

  Signature make_signature() {
    std::vector<SymbolName> features, precs;
    for (const Token& t : feature_decls_) features.push_back(t.text);
    for (const Token& t : prec_decls_) precs.push_back(t.text);
    try {
      return Signature::declare(features, precs);
    } catch (const Error& e) {
      // Attribute the failure to the last declaration token whose name
      // appears in the message; fall back to the start of input.
      const Token* at = &toks_.front();
      for (const auto* list : {&feature_decls_, &prec_decls_}) {
        for (const Token& t : *list) {
          if (std::string(e.what()).find("'" + t.text + "'") !=
              std::string::npos) {
            at = &t;
          }
        }
      }
      throw ParseError{at->line, at->column, e.what()};
    }
  }

  ClosureKind closure_kind(const Token& t) {
    return t.kind == Tok::Plus ? ClosureKind::Plus : ClosureKind::Star;
  }

  SymbolName checked_feature(const Token& t) {
    if (sig_->is_feature(t.text)) return t.text;
    if (sig_->is_precedence(t.text))
      fail(t, "'" + t.text + "' is a precedence symbol, expected a feature");
    fail(t, "undeclared symbol '" + t.text + "'");
  }

  SymbolName checked_precedence(const Token& t) {
    if (sig_->is_precedence(t.text)) return t.text;
    if (sig_->is_feature(t.text))
      fail(t, "'" + t.text + "' is a feature symbol, expected a precedence");
    fail(t, "undeclared symbol '" + t.text + "'");
  }

  void parse_statement(ConstraintStore& store) {
    sig_ = &store.signature();
    Token first = expect(Tok::Ident, "a variable or symbol");
    if (peek().kind == Tok::LParen) {
      parse_dom_prec(store, first);
      return;
    }
    expect(Tok::Equals, "'='");
    Token t = next();
    switch (t.kind) {
      case Tok::LBracket: {
        SymbolName f = checked_feature(expect(Tok::Ident, "a feature symbol"));
        SymbolName p =
            checked_precedence(expect(Tok::Ident, "a precedence symbol"));
        Token one = next();
        if (one.kind != Tok::Number || one.text != "1")
          fail(one, "expected '1'");
        expect(Tok::RBracket, "']'");
        Token y = expect(Tok::Ident, "a variable");
        add(store, first,
            Constraint::first_daughter(first.text, f, p, y.text));
        break;
      }
      case Tok::Ident: {
        parse_after_ident(store, first, t);
        break;
      }
      default:
        fail(t, "expected a variable, symbol, 'E' or '['");
    }
    expect(Tok::Dot, "'.'");
  }

  // Handles every right-hand side that starts with an identifier.
  void parse_after_ident(ConstraintStore& store, const Token& lhs,
                         const Token& w) {
    switch (peek().kind) {
      case Tok::Dot:
        add(store, lhs, Constraint::eq(lhs.text, w.text));
        return;
      case Tok::Colon: {
        next();
        Token y = expect(Tok::Ident, "a variable");
        if (sig_->is_feature(w.text)) {
          add(store, lhs, Constraint::feature(lhs.text, w.text, y.text));
        } else if (sig_->is_precedence(w.text)) {
          add(store, lhs, Constraint::imm_prec(lhs.text, w.text, y.text));
        } else {
          fail(w, "undeclared symbol '" + w.text + "'");
        }
        return;
      }
      case Tok::ColonSupseteq: {
        next();
        SymbolName f = checked_feature(w);
        SymbolName g = checked_feature(expect(Tok::Ident, "a feature symbol"));
        expect(Tok::LParen, "'('");
        Token y = expect(Tok::Ident, "a variable");
        expect(Tok::RParen, "')'");
        add(store, lhs, Constraint::subset(lhs.text, f, g, y.text));
        return;
      }
      case Tok::InverseMark: {
        next();
        expect(Tok::Colon, "':'");
        Token y = expect(Tok::Ident, "a variable");
        add(store, lhs,
            Constraint::inv_imm_prec(lhs.text, checked_precedence(w), y.text));
        return;
      }
      case Tok::Ident:
      case Tok::Plus:
      case Tok::Star: {
        if (w.text != "E")
          fail(w, "expected 'E' before a membership or closure constraint");
        Token r = expect(Tok::Ident, "a relation symbol");
        if (peek().kind == Tok::Plus || peek().kind == Tok::Star) {
          Token mark = next();
          SymbolName p = checked_precedence(r);
          expect(Tok::Colon, "':'");
          Token y = expect(Tok::Ident, "a variable");
          add(store, lhs,
              Constraint::closure(lhs.text, p, closure_kind(mark), y.text));
        } else {
          expect(Tok::Colon, "':'");
          Token y = expect(Tok::Ident, "a variable");
          if (!sig_->is_declared(r.text))
            fail(r, "undeclared symbol '" + r.text + "'");
          add(store, lhs, Constraint::member(lhs.text, r.text, y.text));
        }
        return;
      }
      default:
        fail(peek(), "expected '.', ':', ':>=', '^-1' or a symbol");
    }
  }

  void parse_dom_prec(ConstraintStore& store, const Token& f) {
    SymbolName fs = checked_feature(f);
    expect(Tok::LParen, "'('");
    Token x = expect(Tok::Ident, "a variable");
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    SymbolName ps =
        checked_precedence(expect(Tok::Ident, "a precedence symbol"));
    Token mark = next();
    if (mark.kind != Tok::Plus && mark.kind != Tok::Star)
      fail(mark, "expected '+' or '*'");
    expect(Tok::Colon, "':'");
    SymbolName gs = checked_feature(expect(Tok::Ident, "a feature symbol"));
    expect(Tok::LParen, "'('");
    Token y = expect(Tok::Ident, "a variable");
    expect(Tok::RParen, "')'");
    add(store, f,
        Constraint::dom_prec(fs, x.text, ps, closure_kind(mark), gs, y.text));
    expect(Tok::Dot, "'.'");
  }

  void add(ConstraintStore& store, const Token& at, const Constraint& c) {
    try {
      store.add(c);
    } catch (const Error& e) {
      fail(at, e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Token> feature_decls_;
  std::vector<Token> prec_decls_;
  const Signature* sig_ = nullptr;
};

}  // namespace

std::variant<ConstraintStore, ParseError> parse_program(std::string_view text) {
  auto lexed = Lexer(text).run();
  if (auto* bad = std::get_if<LexFail>(&lexed))
    return ParseError{bad->line, bad->column, bad->message};
  return Parser(std::get<std::vector<Token>>(std::move(lexed))).run();
}

std::string print_store(const ConstraintStore& store) {
  std::ostringstream os;
  auto emit_decl = [&](const char* keyword, const std::set<SymbolName>& names) {
    if (names.empty()) return;
    os << keyword << " ";
    bool first = true;
    for (const auto& name : names) {
      if (!first) os << ", ";
      os << name;
      first = false;
    }
    os << ";\n";
  };
  emit_decl("feature", store.signature().features());
  emit_decl("prec", store.signature().precedences());

  std::set<std::string> lines;
  for (const auto& [key, c] : store.constraints()) lines.insert(key + " .");
  for (const auto& [from, to] : store.bindings())
    lines.insert(from + " = " + to + " .");
  for (const auto& line : lines) os << line << "\n";
  return os.str();
}

}  // namespace lpfl
