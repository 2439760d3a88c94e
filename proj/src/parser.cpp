#include "dtml/parser.hpp"

#include <cctype>

#include "dtml/errors.hpp"

namespace dtml {

namespace {

enum class Tok {
  ident,
  lparen,
  rparen,
  lbrack,
  rbrack,
  langle,
  rangle,
  comma,
  dot,
  colon,
  at,
  bang,
  neq,
  amp,
  pipe,
  arrow,
  iff,
  eq,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

 private:
  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) step();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Tok::end, "", line_, col_};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          id += d;
          step();
        } else {
          break;
        }
      }
      tok_ = {Tok::ident, id, tok_.line, tok_.col};
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two('!', '=')) {
      step();
      step();
      tok_ = {Tok::neq, "!=", tok_.line, tok_.col};
      return;
    }
    if (two('-', '>')) {
      step();
      step();
      tok_ = {Tok::arrow, "->", tok_.line, tok_.col};
      return;
    }
    if (c == '<' && pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' && text_[pos_ + 2] == '>') {
      step();
      step();
      step();
      tok_ = {Tok::iff, "<->", tok_.line, tok_.col};
      return;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case '[': kind = Tok::lbrack; break;
      case ']': kind = Tok::rbrack; break;
      case '<': kind = Tok::langle; break;
      case '>': kind = Tok::rangle; break;
      case ',': kind = Tok::comma; break;
      case '.': kind = Tok::dot; break;
      case ':': kind = Tok::colon; break;
      case '@': kind = Tok::at; break;
      case '!': kind = Tok::bang; break;
      case '&': kind = Tok::amp; break;
      case '|': kind = Tok::pipe; break;
      case '=': kind = Tok::eq; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    step();
    tok_ = {kind, std::string(1, c), tok_.line, tok_.col};
  }

  void step() {
    if (text_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_{Tok::end, "", 1, 1};
};

bool is_keyword(const std::string& id) {
  return id == "forall" || id == "exists" || id == "true" || id == "false" || id == "K" ||
         id == "N";
}

// --------------------------------------------------------------------------
// Term-modal formulas.

class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Signature& sig, const ActionRegistry* registry)
      : lex_(text), sig_(sig), registry_(registry) {}

  Formula parse() {
    Formula f = formula();
    if (lex_.peek().kind != Tok::end) lex_.fail("unexpected input after formula");
    return f;
  }

 private:
  Formula formula() { return iff(); }

  Formula iff() {
    Formula f = imp();
    while (lex_.peek().kind == Tok::iff) {
      lex_.take();
      f = Formula::iff(f, imp());
    }
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (lex_.peek().kind == Tok::arrow) {
      lex_.take();
      return Formula::implies(f, imp());
    }
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (lex_.peek().kind == Tok::pipe) {
      lex_.take();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (lex_.peek().kind == Tok::amp) {
      lex_.take();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::bang:
        lex_.take();
        return Formula::neg(unary());
      case Tok::langle: {
        lex_.take();
        expect_ident("K");
        expect(Tok::lbrack, "'['");
        Term agent = term();
        expect(Tok::rbrack, "']'");
        expect(Tok::rangle, "'>'");
        return Formula::maybe_knows(agent, formula());
      }
      case Tok::lbrack: {
        lex_.take();
        Token name = expect(Tok::ident, "action model name");
        expect(Tok::colon, "':'");
        Token event = expect(Tok::ident, "event name");
        expect(Tok::rbrack, "']'");
        ActionRef ref{name.text, event.text, nullptr};
        if (registry_) {
          auto it = registry_->find(ref.model_name);
          if (it == registry_->end())
            throw ParseError("unknown action model: " + ref.model_name, name.line, name.col);
          ref.model = it->second;
          if (!ref.model->has_event(ref.event))
            throw ParseError("unknown event " + ref.event + " of action model " +
                                 ref.model_name,
                             event.line, event.col);
        }
        return Formula::box(std::move(ref), formula());
      }
      case Tok::ident:
        if (t.text == "forall" || t.text == "exists") {
          bool universal = t.text == "forall";
          lex_.take();
          Token var = expect(Tok::ident, "variable");
          check_variable(var);
          expect(Tok::dot, "'.'");
          Formula body = formula();
          return universal ? Formula::forall(var.text, std::move(body))
                           : Formula::exists(var.text, std::move(body));
        }
        if (t.text == "K") {
          lex_.take();
          expect(Tok::lbrack, "'['");
          Term agent = term();
          expect(Tok::rbrack, "']'");
          return Formula::know(agent, formula());
        }
        return primary();
      default:
        return primary();
    }
  }

  Formula primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::lparen) {
      lex_.take();
      Formula f = formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (t.kind != Tok::ident) lex_.fail("expected formula");
    if (t.text == "true") {
      lex_.take();
      return Formula::top();
    }
    if (t.text == "false") {
      lex_.take();
      return Formula::bottom();
    }
    if (t.text == "N") {
      lex_.take();
      expect(Tok::lparen, "'('");
      Term t1 = term();
      expect(Tok::comma, "','");
      Term t2 = term();
      expect(Tok::rparen, "')'");
      return Formula::net(t1, t2);
    }
    if (sig_.is_predicate(t.text)) {
      Token p = lex_.take();
      expect(Tok::lparen, "'('");
      Term arg = term();
      expect(Tok::rparen, "')'");
      return Formula::pred(p.text, arg);
    }
    // Equality or inequality between terms.
    Term t1 = term();
    if (lex_.peek().kind == Tok::eq) {
      lex_.take();
      return Formula::eq(t1, term());
    }
    if (lex_.peek().kind == Tok::neq) {
      lex_.take();
      return Formula::neq(t1, term());
    }
    lex_.fail("expected '=' or '!=' after term");
  }

  Term term() {
    Token t = expect(Tok::ident, "term");
    if (is_keyword(t.text) && !sig_.is_constant(t.text))
      throw ParseError("reserved word used as term: " + t.text, t.line, t.col);
    if (sig_.is_constant(t.text)) return Term::con(t.text);
    if (sig_.is_predicate(t.text))
      throw ParseError("predicate used as term: " + t.text, t.line, t.col);
    return Term::var(t.text);
  }

  void check_variable(const Token& t) {
    if (t.text == kEdgeVar)
      throw ParseError("reserved variable " + kEdgeVar + " cannot be bound", t.line, t.col);
    if (sig_.is_constant(t.text) || sig_.is_predicate(t.text) || is_keyword(t.text))
      throw ParseError("cannot quantify over declared symbol: " + t.text, t.line, t.col);
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) lex_.fail("expected " + what);
    return lex_.take();
  }

  void expect_ident(const std::string& text) {
    if (lex_.peek().kind != Tok::ident || lex_.peek().text != text)
      lex_.fail("expected '" + text + "'");
    lex_.take();
  }

  Lexer lex_;
  const Signature& sig_;
  const ActionRegistry* registry_;
};

// --------------------------------------------------------------------------
// Hybrid / feature-model formulas. Prefix operators bind tightest.

class HybridParser {
 public:
  HybridParser(const std::string& text, std::set<std::string> nominals,
               const FeatureSpace* features, const UpdateDefs* updates, bool allow_univ)
      : lex_(text),
        nominals_(std::move(nominals)),
        features_(features),
        updates_(updates),
        allow_univ_(allow_univ) {}

  HybridFormula parse() {
    HybridFormula f = formula();
    if (lex_.peek().kind != Tok::end) lex_.fail("unexpected input after formula");
    return f;
  }

 private:
  HybridFormula formula() { return iff(); }

  HybridFormula iff() {
    HybridFormula f = imp();
    while (lex_.peek().kind == Tok::iff) {
      lex_.take();
      f = HybridFormula::iff(f, imp());
    }
    return f;
  }

  HybridFormula imp() {
    HybridFormula f = disj();
    if (lex_.peek().kind == Tok::arrow) {
      lex_.take();
      return HybridFormula::implies(f, imp());
    }
    return f;
  }

  HybridFormula disj() {
    HybridFormula f = conj();
    while (lex_.peek().kind == Tok::pipe) {
      lex_.take();
      f = HybridFormula::disj(f, conj());
    }
    return f;
  }

  HybridFormula conj() {
    HybridFormula f = unary();
    while (lex_.peek().kind == Tok::amp) {
      lex_.take();
      f = HybridFormula::conj(f, unary());
    }
    return f;
  }

  HybridFormula unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::bang) {
      lex_.take();
      return HybridFormula::neg(unary());
    }
    if (t.kind == Tok::at) {
      lex_.take();
      Token nom = expect(Tok::ident, "nominal");
      nominals_.insert(nom.text);
      return HybridFormula::at(nom.text, unary());
    }
    if (t.kind == Tok::lbrack) {
      Token open = lex_.take();
      Token name = expect(Tok::ident, "update name");
      expect(Tok::rbrack, "']'");
      if (!updates_)
        throw ParseError("no updates declared; cannot resolve [" + name.text + "]", open.line,
                         open.col);
      if (auto it = updates_->transforms.find(name.text); it != updates_->transforms.end())
        return HybridFormula::dyn_transform(it->second, unary());
      if (auto it = updates_->learnings.find(name.text); it != updates_->learnings.end())
        return HybridFormula::dyn_learn(it->second, unary());
      throw ParseError("unknown update: " + name.text, name.line, name.col);
    }
    if (t.kind == Tok::ident) {
      if (t.text == "K") {
        lex_.take();
        return HybridFormula::know(unary());
      }
      if (t.text == "N") {
        lex_.take();
        return HybridFormula::neighbor(unary());
      }
      if (t.text == "U") {
        Token u = lex_.take();
        if (!allow_univ_)
          throw ParseError("the universal modality is not part of this language", u.line,
                           u.col);
        return HybridFormula::univ(unary());
      }
      Token id = lex_.take();
      if (nominals_.count(id.text)) return HybridFormula::nominal(id.text);
      if (features_) {
        if (!features_->split_prop(id.text))
          throw ParseError("unknown feature proposition: " + id.text, id.line, id.col);
      }
      return HybridFormula::prop(id.text);
    }
    if (t.kind == Tok::lparen) {
      lex_.take();
      HybridFormula f = formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    lex_.fail("expected formula");
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) lex_.fail("expected " + what);
    return lex_.take();
  }

  Lexer lex_;
  std::set<std::string> nominals_;
  const FeatureSpace* features_;
  const UpdateDefs* updates_;
  bool allow_univ_;
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig,
                      const ActionRegistry* registry) {
  return FormulaParser(text, sig, registry).parse();
}

HybridFormula parse_hybrid_formula(const std::string& text,
                                   const std::set<std::string>& nominals) {
  return HybridParser(text, nominals, nullptr, nullptr, true).parse();
}

HybridFormula parse_kdl_formula(const std::string& text, const FeatureSpace& features,
                                const std::set<std::string>& nominals,
                                const UpdateDefs* updates) {
  return HybridParser(text, nominals, &features, updates, false).parse();
}

}  // namespace dtml
