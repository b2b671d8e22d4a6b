#pragma once

#include <cstdint>
#include <vector>

#include "plans/dataset.hpp"

namespace plans {

// Definition: the action level is the minimum confidence over the action
// tokens (End included); the perception level is the minimum over every
// perception token of every timestep.
struct ConfidenceLevels {
  double action_conf = 1.0;
  double per_conf = 1.0;
};
ConfidenceLevels confidence_levels(const NoisySpec& spec);

struct FilterConfig {
  double eps_action = 0.98;
  double eps_perception = 0.9;
  // Fractions of the action-reliable pool the adaptive pass tries, largest
  // first; must start at 1 and be strictly decreasing.
  std::vector<double> prop_schedule{1, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
};
void validate(const FilterConfig& cfg);

// Indices (input order) of specs with action_conf >= eps_action and
// per_conf >= eps_perception.
std::vector<int> static_filter(const std::vector<NoisySpec>& specs, const FilterConfig& cfg);

struct SynthBounds {
  int max_n = 2;            // largest branching-statement count tried
  int max_block_len = 8;    // longest straight-line action block
  int r_max = 10;           // largest repeat count
  uint64_t node_budget = 100000000;  // partial candidates per solver call
};

enum class SynthOutcome { Found, Unsat, BoundsExceeded };

struct SynthesisResult {
  SynthOutcome outcome = SynthOutcome::Unsat;
  Program program;               // meaningful only when outcome == Found
  int n_used = -1;               // cost of program when Found
  std::vector<int> specs_used;   // input indices of the subset fed to the solver
  int solver_calls = 0;
  double wall_time_ms = 0.0;
  double longest_call_ms = 0.0;  // slowest single bounded solver call
};

struct AtBoundResult {
  SynthOutcome outcome = SynthOutcome::Unsat;
  Program program;
};

// Sound and complete search over flat programs with exactly n branching
// statements within the structural bounds. Candidate order is deterministic:
// skeletons of branching kinds first (while before if/else before if at each
// position), then fewest action emissions outside while bodies, then
// lexicographic token order. Returns the first satisfying candidate.
AtBoundResult synthesize_at_bound(const std::vector<SpecData>& specs, int n,
                                  const SynthBounds& bounds);

// Iterative deepening n = 0..max_n; first Found is cost-minimal.
// BoundsExceeded aborts the deepening and propagates.
SynthesisResult synthesize_min_cost(const std::vector<SpecData>& specs, const SynthBounds& bounds);

// No filtering: every spec is fed to the solver.
SynthesisResult synthesize_none(const std::vector<NoisySpec>& specs, const SynthBounds& bounds);

// Fixed thresholds on both confidence levels, then min-cost synthesis over
// the survivors; Unsat when the filter empties the set.
SynthesisResult synthesize_static(const std::vector<NoisySpec>& specs, const FilterConfig& cfg,
                                  const SynthBounds& bounds);

// Action-level threshold only, then progressively smaller subsets of the
// survivors ordered by decreasing perception confidence (ties by input
// index): for each prop in the schedule the top ceil(prop * k) specs are
// tried with min-cost synthesis and the first Found wins.
SynthesisResult synthesize_dynamic(const std::vector<NoisySpec>& specs, const FilterConfig& cfg,
                                   const SynthBounds& bounds);

}  // namespace plans
