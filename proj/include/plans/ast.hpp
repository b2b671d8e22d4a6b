#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "plans/world.hpp"

namespace plans {

struct DslError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural violation: nested control flow, empty body, repeat count out of
// range, or an End token used as a statement.
struct StructureError : DslError {
  using DslError::DslError;
};

// Condition literal: a perception primitive, optionally negated once.
struct Cond {
  Perception primitive = Perception::FrontIsClear;
  bool negated = false;
  bool operator==(const Cond&) const = default;
};

inline bool eval_cond(const Cond& c, const PerceptionVector& row) {
  bool v = row[static_cast<int>(c.primitive)];
  return c.negated ? !v : v;
}

// The grammar forbids nested control flow, so every body is a plain action
// sequence and the program is a flat statement list. Encoding that directly
// makes the no-nesting invariant unrepresentable rather than checked.
struct ActStmt {
  Action action = Action::Move;  // never End
  bool operator==(const ActStmt&) const = default;
};

struct WhileStmt {
  Cond cond;
  std::vector<Action> body;
  bool operator==(const WhileStmt&) const = default;
};

struct RepeatStmt {
  int count = 2;
  std::vector<Action> body;
  bool operator==(const RepeatStmt&) const = default;
};

// else_body nullopt = plain if; present = if/else.
struct IfStmt {
  Cond cond;
  std::vector<Action> then_body;
  std::optional<std::vector<Action>> else_body;
  bool operator==(const IfStmt&) const = default;
};

using Stmt = std::variant<ActStmt, WhileStmt, RepeatStmt, IfStmt>;

struct Program {
  std::vector<Stmt> items;  // may be empty: the program "end"
  bool operator==(const Program&) const = default;
};

struct DslLimits {
  int repeat_min = 2;
  int repeat_max = 10;
};

// Throws StructureError on any violated invariant.
void validate(const Program& p, const DslLimits& limits = {});

// Number of branching statements (while and if); repeat is free.
int cost(const Program& p);

// Unrolls every repeat into count copies of its body. Preserves semantics
// and cost; idempotent. Program equivalence for scoring compares these.
Program canonicalize(const Program& p);

// Token vocabulary. Enum order defines the total order used for
// deterministic tie-breaking (lexicographic comparison of token sequences).
struct Token {
  enum class Kind : uint8_t {
    End,
    Move,
    TurnLeft,
    TurnRight,
    PickMarker,
    PutMarker,
    While,
    Repeat,
    If,
    Else,
    Int,
    FrontIsClear,
    LeftIsClear,
    RightIsClear,
    MarkersPresent,
    NoMarkersPresent,
    Not,
    Semi,
    LParen,
    RParen,
    Colon,
  };
  Kind kind = Kind::End;
  int value = 0;  // integer literals only

  bool operator==(const Token&) const = default;
  auto operator<=>(const Token&) const = default;
};

Token action_token(Action a);
Token perception_token(Perception p);
std::string to_string(const Token& t);

// Deterministic linearization ending in End. Delimiters are dropped except
// for a Semi emitted between a control statement and a directly following
// action statement, which keeps the mapping injective: token_seq(p) ==
// token_seq(q) iff the programs print identically.
std::vector<Token> token_seq(const Program& p);

bool token_seq_less(const std::vector<Token>& a, const std::vector<Token>& b);

}  // namespace plans
