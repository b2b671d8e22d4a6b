#include "plans/semantics.hpp"

namespace plans {

namespace {

// Shared driver for both interpreters: walks the flat statement list and
// delegates action emission and condition evaluation to the backend, so the
// two interpreters cannot drift apart on control flow.
//
// Backend contract:
//   bool emit(Action a)       false = stop execution (error or mismatch)
//   bool test(const Cond& c, bool& value)  false = stop execution
//   bool loop_bound_hit(int iterations)
template <typename Backend>
bool walk(const Program& p, Backend& backend) {
  for (const Stmt& s : p.items) {
    if (const auto* act = std::get_if<ActStmt>(&s)) {
      if (!backend.emit(act->action)) return false;
    } else if (const auto* w = std::get_if<WhileStmt>(&s)) {
      int iterations = 0;
      for (;;) {
        bool value = false;
        if (!backend.test(w->cond, value)) return false;
        if (!value) break;
        if (backend.loop_bound_hit(++iterations)) return false;
        for (Action a : w->body)
          if (!backend.emit(a)) return false;
      }
    } else if (const auto* r = std::get_if<RepeatStmt>(&s)) {
      for (int i = 0; i < r->count; ++i)
        for (Action a : r->body)
          if (!backend.emit(a)) return false;
    } else {
      const auto& i = std::get<IfStmt>(s);
      bool value = false;
      if (!backend.test(i.cond, value)) return false;
      if (value) {
        for (Action a : i.then_body)
          if (!backend.emit(a)) return false;
      } else if (i.else_body) {
        for (Action a : *i.else_body)
          if (!backend.emit(a)) return false;
      }
    }
  }
  return backend.emit(Action::End);
}

struct ConcreteBackend {
  WorldState state;
  int t_max;
  Demonstration demo;
  RunStatus status = RunStatus::Ok;

  bool emit(Action a) {
    if (demo.length() + 1 > t_max || (a != Action::End && demo.length() + 2 > t_max)) {
      status = RunStatus::Budget;
      return false;
    }
    demo.states.push_back(state);
    demo.actions.push_back(a);
    demo.perceptions.rows.push_back(perceive(state));
    if (a == Action::End) return true;
    auto next = apply_action(state, a);
    if (!next) {
      status = RunStatus::InvalidAction;
      return false;
    }
    state = std::move(*next);
    return true;
  }

  bool test(const Cond& c, bool& value) {
    value = eval_cond(c, perceive(state));
    return true;
  }

  bool loop_bound_hit(int) { return false; }  // budget bounds every loop
};

struct ReplayBackend {
  const PerceptionMatrix& perceptions;
  const std::vector<Action>& target;
  int cursor = 0;
  ReplayStatus status = ReplayStatus::Match;
  std::vector<Action> emitted;

  int length() const { return static_cast<int>(target.size()); }

  bool emit(Action a) {
    if (cursor >= length()) {
      status = ReplayStatus::Overrun;
      return false;
    }
    emitted.push_back(a);
    if (target[cursor] != a) {
      status = ReplayStatus::Mismatch;
      return false;
    }
    ++cursor;
    if (a == Action::End && cursor != length()) {
      status = ReplayStatus::Mismatch;
      return false;
    }
    return true;
  }

  bool test(const Cond& c, bool& value) {
    if (cursor >= length()) {
      status = ReplayStatus::Overrun;
      return false;
    }
    value = eval_cond(c, perceptions.rows[cursor]);
    return true;
  }

  bool loop_bound_hit(int iterations) {
    if (iterations > length()) {
      status = ReplayStatus::LoopBound;
      return true;
    }
    return false;
  }
};

}  // namespace

RunResult run_concrete(const Program& p, const WorldState& initial, int t_max) {
  validate(p);
  ConcreteBackend backend{initial, t_max, {}, RunStatus::Ok};
  bool ok = walk(p, backend);
  RunResult out;
  out.status = ok ? RunStatus::Ok : backend.status;
  if (ok) out.demo = std::move(backend.demo);
  return out;
}

ReplayOutcome replay_abstract(const Program& p, const PerceptionMatrix& perceptions,
                              const std::vector<Action>& target) {
  ReplayBackend backend{perceptions, target};
  bool ok = walk(p, backend);
  ReplayOutcome out;
  out.emitted = std::move(backend.emitted);
  out.status = ok ? ReplayStatus::Match : backend.status;
  return out;
}

bool satisfies(const Program& p, const Demonstration& demo) {
  return satisfies(p, demo.perceptions, demo.actions);
}

bool validate_demo(const Demonstration& demo) {
  int t = demo.length();
  if (t < 1) return false;
  if (static_cast<int>(demo.states.size()) != t) return false;
  if (demo.perceptions.length() != t) return false;
  if (demo.actions.back() != Action::End) return false;
  for (int i = 0; i < t; ++i) {
    if (!valid_state(demo.states[i])) return false;
    if (demo.perceptions.rows[i] != perceive(demo.states[i])) return false;
    if (i + 1 < t) {
      if (demo.actions[i] == Action::End) return false;
      auto next = apply_action(demo.states[i], demo.actions[i]);
      if (!next || !(*next == demo.states[i + 1])) return false;
    }
  }
  return true;
}

}  // namespace plans
