#pragma once

#include <string>

#include "plans/ast.hpp"

namespace plans {

// Lexical or syntactic failure, with the byte offset of the offending token.
struct ParseError : DslError {
  ParseError(const std::string& msg, size_t offset)
      : DslError(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  size_t offset;
};

// Grammar:
//   program := (stmt ';')* 'end'
//   stmt    := action
//            | 'while' '(' cond ')' ':' body
//            | 'repeat' '(' int ')' ':' body
//            | 'if' '(' cond ')' ':' body ('else' ':' body)?
//   cond    := 'not'? perception
//   body    := action+
// A control keyword where a body action is expected raises StructureError
// (nested control flow); other malformed input raises ParseError.
Program parse(const std::string& text, const DslLimits& limits = {});

// Canonical text: top-level statements joined by " ; ", terminated by
// " ; end" ("end" alone for the empty program); bodies are space-joined.
// parse(pretty(p)) == p for every valid program.
std::string pretty(const Program& p);

std::string pretty(const Cond& c);
std::string pretty(const Stmt& s);

}  // namespace plans
