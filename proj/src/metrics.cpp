#include "plans/metrics.hpp"

#include "plans/semantics.hpp"

namespace plans {

bool sequence_match(const Program& predicted, const Program& truth) {
  return token_seq(predicted) == token_seq(truth);
}

bool program_match(const Program& predicted, const Program& truth) {
  return token_seq(canonicalize(predicted)) == token_seq(canonicalize(truth));
}

bool execution_match(const Program& predicted, const Task& task, int t_max) {
  for (const Demonstration& demo : task.unseen) {
    RunResult run = run_concrete(predicted, demo.states.front(), t_max);
    if (run.status != RunStatus::Ok) return false;
    if (run.demo.actions != demo.actions) return false;
  }
  return true;
}

TaskVerdict score_task(const Task& task, const SynthesisResult& result, int t_max) {
  TaskVerdict verdict;
  verdict.task_seed = task.seed;
  verdict.outcome = result.outcome;
  verdict.n_used = result.n_used;
  verdict.solver_calls = result.solver_calls;
  verdict.wall_time_ms = result.wall_time_ms;
  verdict.longest_call_ms = result.longest_call_ms;
  if (result.outcome == SynthOutcome::Found) {
    verdict.execution = execution_match(result.program, task, t_max);
    verdict.sequence = sequence_match(result.program, task.ground_truth);
    verdict.program = program_match(result.program, task.ground_truth);
  }
  return verdict;
}

}  // namespace plans
