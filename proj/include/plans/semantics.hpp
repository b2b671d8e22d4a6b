#pragma once

#include <vector>

#include "plans/ast.hpp"
#include "plans/world.hpp"

namespace plans {

// Row i is the perception of the state the agent is in before emitting the
// i-th action of a trace.
struct PerceptionMatrix {
  std::vector<PerceptionVector> rows;
  int length() const { return static_cast<int>(rows.size()); }
};

// A complete trace: states[i] is the world before actions[i]; the final
// action is End and pairs with the final state; perceptions[i] =
// perceive(states[i]). states, actions and perceptions all have length T.
struct Demonstration {
  std::vector<WorldState> states;
  std::vector<Action> actions;
  PerceptionMatrix perceptions;
  int length() const { return static_cast<int>(actions.size()); }
};

enum class RunStatus { Ok, InvalidAction, Budget };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  Demonstration demo;  // meaningful only when status == Ok
};

// Executes p from initial, recording one step per emitted action plus the
// terminal End. InvalidAction if any step is rejected by the world; Budget
// if the trace would exceed t_max steps (End included).
RunResult run_concrete(const Program& p, const WorldState& initial, int t_max = 20);

enum class ReplayStatus { Match, Mismatch, Overrun, LoopBound };

struct ReplayOutcome {
  ReplayStatus status = ReplayStatus::Match;
  std::vector<Action> emitted;
};

// Replays p against a recorded perception matrix and target action sequence
// without touching any world. A cursor starts at 0; emitting an action
// compares it to target[cursor] and advances; a condition reads
// perceptions[cursor]. Overrun when a read or emit needs cursor >= T;
// LoopBound when a while iterates more than T times; Match iff the emitted
// sequence (End included) equals target exactly.
ReplayOutcome replay_abstract(const Program& p, const PerceptionMatrix& perceptions,
                              const std::vector<Action>& target);

inline bool satisfies(const Program& p, const PerceptionMatrix& perceptions,
                      const std::vector<Action>& target) {
  return replay_abstract(p, perceptions, target).status == ReplayStatus::Match;
}

bool satisfies(const Program& p, const Demonstration& demo);

// Checks the Demonstration invariants against the world rules.
bool validate_demo(const Demonstration& demo);

}  // namespace plans
