#pragma once

#include <cstdint>

#include "plans/dataset.hpp"
#include "plans/synth.hpp"

namespace plans {

// Exact token-sequence equality.
bool sequence_match(const Program& predicted, const Program& truth);

// Token-sequence equality after unrolling repeats, so syntactically different
// spellings of the same written program compare equal.
bool program_match(const Program& predicted, const Program& truth);

// The predicted program, run on each held-out initial state, finishes cleanly
// and emits exactly the held-out action sequence.
bool execution_match(const Program& predicted, const Task& task, int t_max = 20);

struct TaskVerdict {
  uint64_t task_seed = 0;
  bool execution = false;
  bool program = false;
  bool sequence = false;
  SynthOutcome outcome = SynthOutcome::Unsat;
  int n_used = -1;
  int solver_calls = 0;
  double wall_time_ms = 0.0;
  double longest_call_ms = 0.0;
};

// All three metrics are false unless synthesis returned a program.
TaskVerdict score_task(const Task& task, const SynthesisResult& result, int t_max = 20);

}  // namespace plans
