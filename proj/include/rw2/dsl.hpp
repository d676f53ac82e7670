#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/reduction.hpp"
#include "rw2/theory.hpp"

namespace rw2 {

struct ParseError : std::runtime_error {
  ParseError(std::string file, int line, int col, const std::string& msg);
  std::string file;
  int line;
  int col;
  std::string message;
};

// Unresolved reduction word as written.
struct WordExpr {
  enum class Kind { Name, Call, Seq } kind = Kind::Name;
  std::string name;
  std::vector<WordExpr> kids;
  bool has_parens = false;
  int line = 1;
  int col = 1;
};

struct ParseContext {
  std::string file = "<input>";
  int line = 1;
  int col = 1;
  // Accept undeclared identifiers as variables.
  bool implicit_vars = false;
};

Term parse_term(const Signature& sig, const std::string& text, const ParseContext& ctx = {});
WordExpr parse_word(const Signature& sig, const std::string& text, const ParseContext& ctx = {});
std::string to_string(const WordExpr& w);

Theory2 parse_theory(const std::string& text, const std::string& file = "<input>");
Theory2 load_theory(const std::string& path);

std::string show_word(const Signature& sig, const Reduction& r);
std::string emit_theory(const Theory2& th);

}  // namespace rw2
