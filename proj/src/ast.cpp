#include "plans/ast.hpp"

#include <algorithm>

namespace plans {

namespace {

void validate_body(const std::vector<Action>& body, const char* what) {
  if (body.empty()) throw StructureError(std::string(what) + " has an empty body");
  for (Action a : body)
    if (a == Action::End) throw StructureError("end cannot appear inside a body");
}

}  // namespace

void validate(const Program& p, const DslLimits& limits) {
  for (const Stmt& s : p.items) {
    if (const auto* act = std::get_if<ActStmt>(&s)) {
      if (act->action == Action::End) throw StructureError("end is not a statement");
    } else if (const auto* w = std::get_if<WhileStmt>(&s)) {
      validate_body(w->body, "while");
    } else if (const auto* r = std::get_if<RepeatStmt>(&s)) {
      validate_body(r->body, "repeat");
      if (r->count < limits.repeat_min || r->count > limits.repeat_max)
        throw StructureError("repeat count " + std::to_string(r->count) + " out of range [" +
                             std::to_string(limits.repeat_min) + ", " +
                             std::to_string(limits.repeat_max) + "]");
    } else if (const auto* i = std::get_if<IfStmt>(&s)) {
      validate_body(i->then_body, "if");
      if (i->else_body) validate_body(*i->else_body, "else");
    }
  }
}

int cost(const Program& p) {
  int n = 0;
  for (const Stmt& s : p.items)
    if (std::holds_alternative<WhileStmt>(s) || std::holds_alternative<IfStmt>(s)) ++n;
  return n;
}

Program canonicalize(const Program& p) {
  Program out;
  for (const Stmt& s : p.items) {
    if (const auto* r = std::get_if<RepeatStmt>(&s)) {
      for (int i = 0; i < r->count; ++i)
        for (Action a : r->body) out.items.push_back(ActStmt{a});
    } else {
      out.items.push_back(s);
    }
  }
  return out;
}

Token action_token(Action a) {
  switch (a) {
    case Action::Move: return {Token::Kind::Move, 0};
    case Action::TurnLeft: return {Token::Kind::TurnLeft, 0};
    case Action::TurnRight: return {Token::Kind::TurnRight, 0};
    case Action::PickMarker: return {Token::Kind::PickMarker, 0};
    case Action::PutMarker: return {Token::Kind::PutMarker, 0};
    case Action::End: return {Token::Kind::End, 0};
  }
  return {Token::Kind::End, 0};
}

Token perception_token(Perception p) {
  switch (p) {
    case Perception::FrontIsClear: return {Token::Kind::FrontIsClear, 0};
    case Perception::LeftIsClear: return {Token::Kind::LeftIsClear, 0};
    case Perception::RightIsClear: return {Token::Kind::RightIsClear, 0};
    case Perception::MarkersPresent: return {Token::Kind::MarkersPresent, 0};
    case Perception::NoMarkersPresent: return {Token::Kind::NoMarkersPresent, 0};
  }
  return {Token::Kind::FrontIsClear, 0};
}

std::string to_string(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End: return "end";
    case Token::Kind::Move: return "move";
    case Token::Kind::TurnLeft: return "turnLeft";
    case Token::Kind::TurnRight: return "turnRight";
    case Token::Kind::PickMarker: return "pickMarker";
    case Token::Kind::PutMarker: return "putMarker";
    case Token::Kind::While: return "while";
    case Token::Kind::Repeat: return "repeat";
    case Token::Kind::If: return "if";
    case Token::Kind::Else: return "else";
    case Token::Kind::Int: return std::to_string(t.value);
    case Token::Kind::FrontIsClear: return "frontIsClear";
    case Token::Kind::LeftIsClear: return "leftIsClear";
    case Token::Kind::RightIsClear: return "rightIsClear";
    case Token::Kind::MarkersPresent: return "markersPresent";
    case Token::Kind::NoMarkersPresent: return "noMarkersPresent";
    case Token::Kind::Not: return "not";
    case Token::Kind::Semi: return ";";
    case Token::Kind::LParen: return "(";
    case Token::Kind::RParen: return ")";
    case Token::Kind::Colon: return ":";
  }
  return "?";
}

namespace {

void emit_cond(const Cond& c, std::vector<Token>& out) {
  if (c.negated) out.push_back({Token::Kind::Not, 0});
  out.push_back(perception_token(c.primitive));
}

void emit_body(const std::vector<Action>& body, std::vector<Token>& out) {
  for (Action a : body) out.push_back(action_token(a));
}

}  // namespace

std::vector<Token> token_seq(const Program& p) {
  std::vector<Token> out;
  bool prev_control = false;
  for (const Stmt& s : p.items) {
    bool is_action = std::holds_alternative<ActStmt>(s);
    if (prev_control && is_action) out.push_back({Token::Kind::Semi, 0});
    if (const auto* act = std::get_if<ActStmt>(&s)) {
      out.push_back(action_token(act->action));
    } else if (const auto* w = std::get_if<WhileStmt>(&s)) {
      out.push_back({Token::Kind::While, 0});
      emit_cond(w->cond, out);
      emit_body(w->body, out);
    } else if (const auto* r = std::get_if<RepeatStmt>(&s)) {
      out.push_back({Token::Kind::Repeat, 0});
      out.push_back({Token::Kind::Int, r->count});
      emit_body(r->body, out);
    } else if (const auto* i = std::get_if<IfStmt>(&s)) {
      out.push_back({Token::Kind::If, 0});
      emit_cond(i->cond, out);
      emit_body(i->then_body, out);
      if (i->else_body) {
        out.push_back({Token::Kind::Else, 0});
        emit_body(*i->else_body, out);
      }
    }
    prev_control = !is_action;
  }
  out.push_back({Token::Kind::End, 0});
  return out;
}

bool token_seq_less(const std::vector<Token>& a, const std::vector<Token>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace plans
