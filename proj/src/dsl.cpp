#include "rw2/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "rw2/prooft.hpp"

namespace rw2 {

ParseError::ParseError(std::string f, int l, int c, const std::string& msg)
    : std::runtime_error(f + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
      file(std::move(f)),
      line(l),
      col(c),
      message(msg) {}

namespace {

struct Tok {
  enum T { Ident, Num, Punct, Alias, End } type = End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(const Signature* sig, const std::string& text, const ParseContext& ctx)
      : sig_(sig), s_(text), file_(ctx.file), line_(ctx.line), col_(ctx.col) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip_space();
      Tok t;
      t.line = line_;
      t.col = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      if (auto a = alias_at()) {
        t.type = Tok::Alias;
        t.text = *a;
        advance(a->size());
      } else if (ident_start(s_[i_])) {
        std::size_t j = i_;
        while (j < s_.size() && ident_char(s_[j])) ++j;
        if (s_.compare(j, 3, "^-1") == 0) j += 3;
        t.type = Tok::Ident;
        t.text = s_.substr(i_, j - i_);
        advance(j - i_);
      } else if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        t.type = Tok::Num;
        t.text = s_.substr(i_, j - i_);
        advance(j - i_);
      } else if (s_.compare(i_, 2, "->") == 0) {
        t.type = Tok::Punct;
        t.text = "->";
        advance(2);
      } else if (s_.compare(i_, 3, "→") == 0) {
        t.type = Tok::Punct;
        t.text = "->";
        advance(3);
      } else if (std::string("(),;=:{}+-*$/").find(s_[i_]) != std::string::npos) {
        t.type = Tok::Punct;
        t.text = std::string(1, s_[i_]);
        advance(1);
      } else {
        std::string bad(1, s_[i_]);
        if (s_[i_] == '#') throw ParseError(file_, line_, col_, "'#' is reserved for generated variable names");
        throw ParseError(file_, line_, col_, "unexpected character '" + bad + "'");
      }
      out.push_back(t);
    }
  }

 private:
  std::optional<std::string> alias_at() const {
    if (!sig_) return std::nullopt;
    std::optional<std::string> best;
    for (const auto& [alias, sym] : sig_->aliases) {
      if (s_.compare(i_, alias.size(), alias) != 0) continue;
      if (ident_start(alias[0])) {
        std::size_t e = i_ + alias.size();
        if (e < s_.size() && ident_char(s_[e])) continue;
      }
      if (!best || alias.size() > best->size()) best = alias;
    }
    return best;
  }

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
        ++i_;
      } else {
        advance(1);
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_)
      if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) ++col_;
  }

  const Signature* sig_;
  const std::string& s_;
  std::string file_;
  std::size_t i_ = 0;
  int line_;
  int col_;
};

class TokParser {
 public:
  TokParser(const Signature& sig, std::vector<Tok> toks, const ParseContext& ctx)
      : sig_(sig), toks_(std::move(toks)), ctx_(ctx) {}

  const Tok& peek() const { return toks_[k_]; }
  Tok next() { return toks_[k_ == toks_.size() - 1 ? k_ : k_++]; }
  bool at_end() const { return peek().type == Tok::End; }
  bool is_punct(const std::string& p) const { return peek().type == Tok::Punct && peek().text == p; }

  [[noreturn]] void fail(const Tok& t, const std::string& msg) const {
    throw ParseError(ctx_.file, t.line, t.col, msg);
  }

  void expect(const std::string& p) {
    if (!is_punct(p)) fail(peek(), "expected '" + p + "'" + found());
    next();
  }

  std::string found() const {
    return at_end() ? " but reached end of input" : " but found '" + peek().text + "'";
  }

  bool infix_here() const {
    if (peek().type != Tok::Alias) return false;
    const auto& sym = sig_.aliases.at(peek().text);
    return sig_.arity(sym) == 2 && (k_ + 1 >= toks_.size() || !(toks_[k_ + 1].type == Tok::Punct && toks_[k_ + 1].text == "(") || true);
  }

  Term term() {
    Term left = term_primary();
    while (peek().type == Tok::Alias && sig_.arity(sig_.aliases.at(peek().text)) == 2) {
      Tok op = next();
      Term right = term_primary();
      left = Term::app(sig_.aliases.at(op.text), {left, right});
    }
    return left;
  }

  Term term_primary() {
    Tok t = peek();
    if (is_punct("(")) {
      next();
      Term inner = term();
      expect(")");
      return inner;
    }
    if (t.type != Tok::Ident && t.type != Tok::Alias) fail(t, "expected a term" + found());
    next();
    std::string name = t.type == Tok::Alias ? sig_.aliases.at(t.text) : t.text;
    int ar = sig_.arity(name);
    if (is_punct("(")) {
      if (ar < 0) fail(t, "unknown function symbol '" + name + "'");
      next();
      std::vector<Term> args;
      if (!is_punct(")")) {
        args.push_back(term());
        while (is_punct(",")) {
          next();
          args.push_back(term());
        }
      }
      expect(")");
      if (static_cast<int>(args.size()) != ar)
        fail(t, "symbol '" + name + "' has arity " + std::to_string(ar) + " but got " +
                    std::to_string(args.size()) + " arguments");
      return Term::app(name, std::move(args));
    }
    if (ar == 0) return Term::app(name);
    if (ar > 0) fail(t, "symbol '" + name + "' expects " + std::to_string(ar) + " arguments");
    if (t.type == Tok::Alias || name.find("^-1") != std::string::npos)
      fail(t, "'" + name + "' is not a variable");
    if (!ctx_.implicit_vars && !sig_.declared_vars.count(name))
      fail(t, "undeclared identifier '" + name + "'");
    return Term::var(name);
  }

  WordExpr word() {
    WordExpr first = word_infix();
    if (!is_punct(";")) return first;
    WordExpr seq;
    seq.kind = WordExpr::Kind::Seq;
    seq.line = first.line;
    seq.col = first.col;
    seq.kids.push_back(std::move(first));
    while (is_punct(";")) {
      next();
      seq.kids.push_back(word_infix());
    }
    return seq;
  }

  WordExpr word_infix() {
    WordExpr left = word_primary();
    while (peek().type == Tok::Alias && sig_.arity(sig_.aliases.at(peek().text)) == 2) {
      Tok op = next();
      WordExpr right = word_primary();
      WordExpr call;
      call.kind = WordExpr::Kind::Call;
      call.name = sig_.aliases.at(op.text);
      call.has_parens = true;
      call.line = left.line;
      call.col = left.col;
      call.kids = {std::move(left), std::move(right)};
      left = std::move(call);
    }
    return left;
  }

  WordExpr word_primary() {
    Tok t = peek();
    if (is_punct("(")) {
      next();
      WordExpr inner = word();
      expect(")");
      return inner;
    }
    if (t.type != Tok::Ident && t.type != Tok::Alias) fail(t, "expected a reduction word" + found());
    next();
    WordExpr w;
    w.line = t.line;
    w.col = t.col;
    w.name = t.type == Tok::Alias ? sig_.aliases.at(t.text) : t.text;
    if (is_punct("(")) {
      next();
      w.kind = WordExpr::Kind::Call;
      w.has_parens = true;
      if (!is_punct(")")) {
        w.kids.push_back(word());
        while (is_punct(",")) {
          next();
          w.kids.push_back(word());
        }
      }
      expect(")");
    }
    return w;
  }

 private:
  const Signature& sig_;
  std::vector<Tok> toks_;
  std::size_t k_ = 0;
  ParseContext ctx_;
};

}  // namespace

Term parse_term(const Signature& sig, const std::string& text, const ParseContext& ctx) {
  TokParser p(sig, Lexer(&sig, text, ctx).run(), ctx);
  Term t = p.term();
  if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input '" + p.peek().text + "'");
  return t;
}

WordExpr parse_word(const Signature& sig, const std::string& text, const ParseContext& ctx) {
  TokParser p(sig, Lexer(&sig, text, ctx).run(), ctx);
  WordExpr w = p.word();
  if (!p.at_end()) p.fail(p.peek(), "unexpected trailing input '" + p.peek().text + "'");
  return w;
}

std::string to_string(const WordExpr& w) {
  switch (w.kind) {
    case WordExpr::Kind::Name:
      return w.name;
    case WordExpr::Kind::Call: {
      std::string s = w.name + "(";
      for (std::size_t i = 0; i < w.kids.size(); ++i) s += (i ? "," : "") + to_string(w.kids[i]);
      return s + ")";
    }
    case WordExpr::Kind::Seq: {
      std::string s;
      for (std::size_t i = 0; i < w.kids.size(); ++i) s += (i ? " ; " : "") + to_string(w.kids[i]);
      return s;
    }
  }
  return {};
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Column (1-based, counting code points) of byte offset `off` in `line`.
int column_of(const std::string& line, std::size_t off) {
  int c = 1;
  for (std::size_t i = 0; i < off && i < line.size(); ++i)
    if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++c;
  return c;
}

struct Piece {
  std::string text;
  std::size_t offset;  // byte offset within the line
};

Piece sub_piece(const std::string& line, std::size_t from, std::size_t to) {
  std::size_t a = from;
  while (a < to && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
  std::size_t b = to;
  while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
  return {line.substr(a, b - a), a};
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s[0])) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

struct PendingAxiom {
  std::string label;
  Piece lhs, rhs;
  std::string line;
  int lineno;
};

struct PendingSeed {
  Piece term;
  std::string line;
  int lineno;
};

class TheoryReader {
 public:
  TheoryReader(std::string file) : file_(std::move(file)) {}

  Theory2 read(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool in_modulo = false;
    int modulo_count = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = raw.substr(0, raw.find('#'));
      if (!raw.empty() && raw.back() == '\r') line = line.substr(0, line.find('\r'));
      std::string body = trim(line);
      if (body.empty()) continue;
      std::size_t start = line.find_first_not_of(" \t");
      if (in_modulo) {
        if (body == "}") {
          in_modulo = false;
          continue;
        }
        read_modulo_rule(line, start, lineno, ++modulo_count);
        continue;
      }
      std::size_t kw_end = start;
      while (kw_end < line.size() && ident_char(line[kw_end])) ++kw_end;
      std::string kw = line.substr(start, kw_end - start);
      Piece rest = sub_piece(line, kw_end, line.size());
      if (kw == "theory") {
        th_.name = rest.text;
      } else if (kw == "sig") {
        read_sig(line, rest, lineno);
      } else if (kw == "infix" || kw == "alias") {
        read_alias(line, rest, lineno, kw == "infix");
      } else if (kw == "var") {
        for (auto& w : words(line, rest))
          if (!valid_identifier(w.text))
            fail(line, lineno, w.offset, "invalid variable name '" + w.text + "'");
          else
            th_.sig.declared_vars.insert(w.text);
      } else if (kw == "rule") {
        read_rule(line, rest, lineno);
      } else if (kw == "invertible") {
        for (auto& w : words(line, rest)) {
          if (!th_.find_rule(w.text)) fail(line, lineno, w.offset, "unknown rule '" + w.text + "'");
          try {
            th_.make_invertible(w.text);
          } catch (const TermError& e) {
            fail(line, lineno, w.offset, e.what());
          }
        }
      } else if (kw == "orient") {
        auto ws = words(line, rest);
        if (ws.size() != 2 || (ws[1].text != "+" && ws[1].text != "-"))
          fail(line, lineno, rest.offset, "expected 'orient <rule> +|-'");
        orients_.push_back({ws[0], ws[1].text == "+" ? 1 : -1, line, lineno});
      } else if (kw == "equation") {
        read_equation(line, rest, lineno);
      } else if (kw == "modulo") {
        if (trim(rest.text) != "{") fail(line, lineno, rest.offset, "expected '{' after modulo");
        in_modulo = true;
      } else if (kw == "axiom") {
        read_axiom(line, rest, lineno);
      } else if (kw == "rank") {
        read_rank(line, rest, lineno);
      } else if (kw == "seed") {
        seeds_.push_back({rest, line, lineno});
      } else {
        fail(line, lineno, start, "unknown directive '" + kw + "'");
      }
    }
    if (in_modulo) throw ParseError(file_, lineno, 1, "unterminated modulo block");
    for (auto& o : orients_) {
      const Rule* r = th_.find_rule(o.rule.text);
      if (!r) fail(o.line, o.lineno, o.rule.offset, "unknown rule '" + o.rule.text + "'");
      if (!r->invertible && o.sign < 0)
        fail(o.line, o.lineno, o.rule.offset,
             "non-invertible rule '" + o.rule.text + "' must have positive orientation");
      th_.set_orientation(o.rule.text, o.sign);
    }
    for (auto& a : axioms_) {
      Reduction l = word_at(a.line, a.lineno, a.lhs);
      Reduction r = word_at(a.line, a.lineno, a.rhs);
      if (!(l.source() == r.source()) || !(l.target() == r.target()))
        fail(a.line, a.lineno, a.lhs.offset,
             "axiom '" + a.label + "' sides have different endpoints: " + th_.sig.show(l.source()) +
                 " -> " + th_.sig.show(l.target()) + " versus " + th_.sig.show(r.source()) + " -> " +
                 th_.sig.show(r.target()));
      th_.axioms.push_back({a.label, l, r});
    }
    for (auto& s : seeds_) th_.seeds.push_back(term_at(s.line, s.lineno, s.term));
    return std::move(th_);
  }

 private:
  struct PendingOrient {
    Piece rule;
    int sign;
    std::string line;
    int lineno;
  };

  [[noreturn]] void fail(const std::string& line, int lineno, std::size_t off, const std::string& msg) {
    throw ParseError(file_, lineno, column_of(line, off), msg);
  }

  std::vector<Piece> words(const std::string& line, const Piece& rest) {
    std::vector<Piece> out;
    std::size_t i = 0;
    const std::string& s = rest.text;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i) out.push_back({s.substr(i, j - i), rest.offset + i});
      i = j;
    }
    (void)line;
    return out;
  }

  ParseContext ctx_at(const std::string& line, int lineno, const Piece& p) const {
    ParseContext c;
    c.file = file_;
    c.line = lineno;
    c.col = column_of(line, p.offset);
    return c;
  }

  Term term_at(const std::string& line, int lineno, const Piece& p) {
    if (p.text.empty()) fail(line, lineno, p.offset, "expected a term");
    return parse_term(th_.sig, p.text, ctx_at(line, lineno, p));
  }

  Reduction word_at(const std::string& line, int lineno, const Piece& p) {
    if (p.text.empty()) fail(line, lineno, p.offset, "expected a reduction word");
    ParseContext c = ctx_at(line, lineno, p);
    WordExpr w = parse_word(th_.sig, p.text, c);
    try {
      return infer(th_, w);
    } catch (const InferError& e) {
      throw ParseError(file_, e.line, e.col, e.what());
    }
  }

  void read_sig(const std::string& line, const Piece& rest, int lineno) {
    for (auto& w : words(line, rest)) {
      auto slash = w.text.find('/');
      if (slash == std::string::npos) fail(line, lineno, w.offset, "expected name/arity");
      std::string name = w.text.substr(0, slash);
      std::string ar = w.text.substr(slash + 1);
      if (!valid_identifier(name))
        fail(line, lineno, w.offset, "invalid symbol name '" + name + "'");
      if (ar.empty() || ar.find_first_not_of("0123456789") != std::string::npos)
        fail(line, lineno, w.offset + slash + 1, "invalid arity '" + ar + "'");
      try {
        th_.sig.add({name, std::stoi(ar)});
      } catch (const TermError& e) {
        fail(line, lineno, w.offset, e.what());
      }
    }
  }

  void read_alias(const std::string& line, const Piece& rest, int lineno, bool infix) {
    auto ws = words(line, rest);
    if (ws.size() < 2) fail(line, lineno, rest.offset, "expected a symbol and at least one alias");
    const std::string& sym = ws[0].text;
    if (!th_.sig.has(sym)) fail(line, lineno, ws[0].offset, "unknown symbol '" + sym + "'");
    if (infix && th_.sig.arity(sym) != 2)
      fail(line, lineno, ws[0].offset, "infix symbol '" + sym + "' must be binary");
    for (std::size_t i = 1; i < ws.size(); ++i) {
      const std::string& a = ws[i].text;
      if (a.find_first_of("(),;=:{}$#") != std::string::npos || a == "->" || a == "/")
        fail(line, lineno, ws[i].offset, "alias '" + a + "' clashes with punctuation");
      th_.sig.aliases[a] = sym;
    }
    if (infix) th_.sig.infix.insert(sym);
  }

  // Splits "label: a SEP b" into its parts.
  void split_labelled(const std::string& line, const Piece& rest, int lineno, const std::string& sep,
                      std::string& label, Piece& a, Piece& b) {
    std::size_t colon = line.find(':', rest.offset);
    if (colon == std::string::npos) fail(line, lineno, rest.offset, "expected 'label:'");
    label = trim(line.substr(rest.offset, colon - rest.offset));
    if (!valid_identifier(label)) fail(line, lineno, rest.offset, "invalid label '" + label + "'");
    std::size_t s = line.find(sep, colon + 1);
    std::size_t sep_len = sep.size();
    if (sep == "->" && s == std::string::npos) {
      s = line.find("→", colon + 1);
      sep_len = 3;
    }
    if (s == std::string::npos) fail(line, lineno, colon + 1, "expected '" + sep + "'");
    a = sub_piece(line, colon + 1, s);
    b = sub_piece(line, s + sep_len, line.size());
  }

  void check_rule(const Rule& r, const std::string& line, int lineno, const Piece& lhs) {
    if (r.lhs.is_var()) fail(line, lineno, lhs.offset, "rule lhs must not be a variable");
    if (th_.find_rule(r.label)) fail(line, lineno, lhs.offset, "duplicate rule label '" + r.label + "'");
    if (th_.sig.has(r.label)) fail(line, lineno, lhs.offset, "rule label '" + r.label + "' clashes with a symbol");
  }

  void read_rule(const std::string& line, const Piece& rest, int lineno) {
    std::string label;
    Piece a, b;
    split_labelled(line, rest, lineno, "->", label, a, b);
    Rule r;
    r.label = label;
    r.lhs = term_at(line, lineno, a);
    r.rhs = term_at(line, lineno, b);
    check_rule(r, line, lineno, a);
    if (!r.non_increasing())
      th_.warnings.push_back(file_ + ":" + std::to_string(lineno) + ": rule " + label +
                             " introduces variables not in its lhs");
    th_.rules.push_back(r);
  }

  void read_modulo_rule(const std::string& line, std::size_t start, int lineno, int count) {
    std::size_t arrow = line.find("->", start);
    std::size_t alen = 2;
    if (arrow == std::string::npos) {
      arrow = line.find("→", start);
      alen = 3;
    }
    if (arrow == std::string::npos) fail(line, lineno, start, "expected '->' in modulo rule");
    std::size_t colon = line.find(':', start);
    Rule r;
    r.label = "m" + std::to_string(count);
    std::size_t from = start;
    if (colon != std::string::npos && colon < arrow) {
      r.label = trim(line.substr(start, colon - start));
      if (!valid_identifier(r.label)) fail(line, lineno, start, "invalid label '" + r.label + "'");
      from = colon + 1;
    }
    Piece a = sub_piece(line, from, arrow), b = sub_piece(line, arrow + alen, line.size());
    r.lhs = term_at(line, lineno, a);
    r.rhs = term_at(line, lineno, b);
    if (r.lhs.is_var()) fail(line, lineno, a.offset, "modulo rule lhs must not be a variable");
    th_.modulo.push_back(r);
  }

  void read_equation(const std::string& line, const Piece& rest, int lineno) {
    std::string label;
    Piece a, b;
    split_labelled(line, rest, lineno, "=", label, a, b);
    th_.term_eqs.push_back({label, term_at(line, lineno, a), term_at(line, lineno, b)});
  }

  void read_axiom(const std::string& line, const Piece& rest, int lineno) {
    std::string label;
    Piece a, b;
    split_labelled(line, rest, lineno, "=", label, a, b);
    for (auto& p : axioms_)
      if (p.label == label) fail(line, lineno, rest.offset, "duplicate axiom label '" + label + "'");
    axioms_.push_back({label, a, b, line, lineno});
  }

  void read_rank(const std::string& line, const Piece& rest, int lineno) {
    if (!th_.rank) th_.rank = RankFn{};
    RankFn& rk = *th_.rank;
    std::string s = rest.text;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, lineno, rest.offset, "expected '=' in rank declaration");
    std::string head = trim(s.substr(0, eq));
    std::string measure = "rank";
    std::size_t colon = head.find(':');
    if (colon != std::string::npos) {
      measure = trim(head.substr(0, colon));
      head = trim(head.substr(colon + 1));
    }
    if (!valid_identifier(measure)) fail(line, lineno, rest.offset, "invalid measure name");
    if (!th_.sig.has(head)) fail(line, lineno, rest.offset, "unknown symbol '" + head + "' in rank");
    std::string expr = s.substr(eq + 1);
    std::size_t expr_off = rest.offset + eq + 1;
    std::optional<long> base;
    std::size_t bpos = expr.find("base");
    if (bpos != std::string::npos) {
      std::string bs = trim(expr.substr(bpos + 4));
      try {
        std::size_t used = 0;
        base = std::stol(bs, &used);
        if (used != bs.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(line, lineno, expr_off + bpos, "invalid base value");
      }
      expr = expr.substr(0, bpos);
    }
    RankFn::Affine aff;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i]))) ++i;
    };
    int sign = 1;
    bool expect_term = true;
    skip();
    while (i < expr.size()) {
      skip();
      if (i >= expr.size()) break;
      if (!expect_term) {
        if (expr[i] == '+') sign = 1;
        else if (expr[i] == '-') sign = -1;
        else fail(line, lineno, expr_off + i, "expected '+' or '-'");
        ++i;
        expect_term = true;
        continue;
      }
      if (expr[i] == '-') {
        sign = -sign;
        ++i;
        continue;
      }
      long coef = 1;
      bool have_num = false;
      if (std::isdigit(static_cast<unsigned char>(expr[i]))) {
        std::size_t j = i;
        while (j < expr.size() && std::isdigit(static_cast<unsigned char>(expr[j]))) ++j;
        coef = std::stol(expr.substr(i, j - i));
        have_num = true;
        i = j;
        skip();
        if (i < expr.size() && expr[i] == '*') {
          ++i;
          skip();
        } else {
          aff.constant += sign * coef;
          sign = 1;
          expect_term = false;
          continue;
        }
      }
      std::size_t j = i;
      while (j < expr.size() && ident_char(expr[j])) ++j;
      std::string m = j > i ? expr.substr(i, j - i) : measure;
      i = j;
      if (i >= expr.size() || expr[i] != '$')
        fail(line, lineno, expr_off + i, have_num ? "expected '$k' after '*'" : "expected '$k' or a number");
      ++i;
      std::size_t k = i;
      while (k < expr.size() && std::isdigit(static_cast<unsigned char>(expr[k]))) ++k;
      if (k == i) fail(line, lineno, expr_off + i, "expected child index after '$'");
      int child = std::stoi(expr.substr(i, k - i));
      if (child < 1 || child > th_.sig.arity(head))
        fail(line, lineno, expr_off + i, "child index out of range for " + head);
      aff.terms.push_back({sign * coef, m, child});
      i = k;
      sign = 1;
      expect_term = false;
    }
    auto& meas = rk.measure(measure);
    if (base) {
      meas.base = *base;
    }
    meas.by_symbol[head] = aff;
  }

  std::string file_;
  Theory2 th_;
  std::vector<PendingAxiom> axioms_;
  std::vector<PendingOrient> orients_;
  std::vector<PendingSeed> seeds_;
};

}  // namespace

Theory2 parse_theory(const std::string& text, const std::string& file) {
  TheoryReader r(file);
  Theory2 th = r.read(text);
  if (th.rank) {
    for (const auto& m : th.rank->measures)
      for (const auto& [sym, aff] : m.by_symbol)
        for (const auto& c : aff.terms)
          if (!th.rank->find(c.measure))
            throw ParseError(file, 1, 1, "rank refers to undeclared measure '" + c.measure + "'");
    // The unnamed measure is the rank proper and goes first.
    auto& ms = th.rank->measures;
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (ms[i].name == "rank" && i != 0) std::swap(ms[0], ms[i]);
  }
  return th;
}

Theory2 load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 1, 1, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str(), path);
}

std::string show_word(const Signature& sig, const Reduction& r) {
  switch (r.kind()) {
    case Reduction::Kind::Id:
      return sig.show(r.term());
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::Struct: {
      if (r.kind() == Reduction::Kind::Struct && r.is_identity()) return sig.show(r.source());
      if (r.kind() == Reduction::Kind::Struct && r.kids().size() == 2 && sig.infix.count(r.label())) {
        auto side = [&](const Reduction& k) {
          std::string inner = show_word(sig, k);
          bool wrap = k.kind() == Reduction::Kind::Seq ||
                      (k.kind() == Reduction::Kind::Struct && sig.infix.count(k.label())) ||
                      (k.kind() == Reduction::Kind::Id && !k.term().is_var() && k.term().arity() == 2 &&
                       sig.infix.count(k.term().name()));
          return wrap ? "(" + inner + ")" : inner;
        };
        return side(r.kids()[0]) + " " + sig.display_name(r.label()) + " " + side(r.kids()[1]);
      }
      std::string s = r.kind() == Reduction::Kind::Struct ? sig.display_name(r.label()) : r.label();
      s += "(";
      for (std::size_t i = 0; i < r.kids().size(); ++i) {
        if (i) s += ",";
        const auto& k = r.kids()[i];
        std::string inner = show_word(sig, k);
        s += k.kind() == Reduction::Kind::Seq ? "(" + inner + ")" : inner;
      }
      return s + ")";
    }
    case Reduction::Kind::Seq:
      return show_word(sig, r.kids()[0]) + " ; " + show_word(sig, r.kids()[1]);
  }
  return {};
}

namespace {

void collect_word_vars(const Reduction& r, std::set<std::string>& out) {
  for (const auto& x : vars(r.source())) out.insert(x);
  for (const auto& x : vars(r.target())) out.insert(x);
}

std::string rank_line(const RankFn::Measure& m, const std::string& sym, const RankFn::Affine& a) {
  std::ostringstream os;
  os << "rank ";
  if (m.name != "rank") os << m.name << ": ";
  os << sym << " =";
  bool first = true;
  for (const auto& c : a.terms) {
    long v = c.coef;
    os << (first ? (v < 0 ? " -" : "") : (v < 0 ? " - " : " + "));
    if (first && v < 0) os << "";
    long av = v < 0 ? -v : v;
    if (first && v >= 0) os << " ";
    if (av != 1) os << av << "*";
    if (c.measure != m.name) os << c.measure;
    os << "$" << c.child;
    first = false;
  }
  if (first) {
    os << " " << a.constant;
  } else if (a.constant != 0) {
    os << (a.constant < 0 ? " - " : " + ") << (a.constant < 0 ? -a.constant : a.constant);
  }
  os << " base " << m.base;
  return os.str();
}

}  // namespace

std::string emit_theory(const Theory2& th) {
  std::ostringstream os;
  const auto& sig = th.sig;
  if (!th.name.empty()) os << "theory " << th.name << "\n";
  os << "sig";
  for (const auto& s : sig.symbols) os << " " << s.name << "/" << s.arity;
  os << "\n";
  std::map<std::string, std::vector<std::string>> by_sym;
  for (const auto& [a, s] : sig.aliases) by_sym[s].push_back(a);
  for (const auto& [s, as] : by_sym) {
    os << (sig.infix.count(s) ? "infix " : "alias ") << s;
    for (const auto& a : as) os << " " << a;
    os << "\n";
  }
  std::set<std::string> vs = sig.declared_vars;
  for (const auto& r : th.rules) {
    for (const auto& x : vars(r.lhs)) vs.insert(x);
    for (const auto& x : vars(r.rhs)) vs.insert(x);
  }
  for (const auto& r : th.modulo)
    for (const auto& x : vars(r.lhs)) vs.insert(x);
  for (const auto& e : th.term_eqs) {
    for (const auto& x : vars(e.lhs)) vs.insert(x);
    for (const auto& x : vars(e.rhs)) vs.insert(x);
  }
  for (const auto& a : th.axioms) {
    collect_word_vars(a.lhs, vs);
    collect_word_vars(a.rhs, vs);
  }
  for (const auto& t : th.seeds)
    for (const auto& x : vars(t)) vs.insert(x);
  if (!vs.empty()) {
    os << "var";
    for (const auto& x : vs) os << " " << x;
    os << "\n";
  }
  for (const auto& r : th.rules) {
    if (r.is_formal_inverse) continue;
    os << "rule " << r.label << ": " << sig.show(r.lhs) << " -> " << sig.show(r.rhs) << "\n";
  }
  for (const auto& r : th.rules)
    if (r.invertible && !r.is_formal_inverse) os << "invertible " << r.label << "\n";
  for (const auto& r : th.rules)
    if (!r.is_formal_inverse && r.orientation < 0) os << "orient " << r.label << " -\n";
  for (const auto& e : th.term_eqs)
    os << "equation " << e.label << ": " << sig.show(e.lhs) << " = " << sig.show(e.rhs) << "\n";
  if (!th.modulo.empty()) {
    os << "modulo {\n";
    for (const auto& r : th.modulo)
      os << "  " << r.label << ": " << sig.show(r.lhs) << " -> " << sig.show(r.rhs) << "\n";
    os << "}\n";
  }
  for (const auto& a : th.axioms)
    os << "axiom " << a.label << ": " << show_word(sig, a.lhs) << " = " << show_word(sig, a.rhs) << "\n";
  if (th.rank)
    for (const auto& m : th.rank->measures)
      for (const auto& [sym, aff] : m.by_symbol) os << rank_line(m, sym, aff) << "\n";
  for (const auto& t : th.seeds) os << "seed " << sig.show(t) << "\n";
  return os.str();
}

}  // namespace rw2
