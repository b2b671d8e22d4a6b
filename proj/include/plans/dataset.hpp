#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "plans/semantics.hpp"

namespace plans {

struct GenerationExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  int k_observed = 10;
  int n_unseen = 5;
  int grid_width = 8;
  int grid_height = 8;
  double wall_density = 0.1;
  double marker_density = 0.15;
  int marker_cap = 10;
  int t_max = 20;
  // Weight of cost level n = 0, 1, 2 when drawing a ground-truth program.
  std::array<double, 3> cost_weights{1.0, 1.0, 1.0};
  double p_repeat = 0.25;        // chance a filler block becomes a repeat
  double p_block_extend = 0.5;   // geometric continuation for block lengths
  int max_total_actions = 8;     // written action tokens per program
  int max_block_len = 8;
  DslLimits limits;
  int attempt_budget = 10000;    // program redraws before GenerationExhausted
  int state_tries = 50;          // state redraws per demonstration slot
};

struct Task {
  uint64_t seed = 0;
  Program ground_truth;
  std::vector<Demonstration> observed;
  std::vector<Demonstration> unseen;
};

// Uniform agent pose on a wall/marker-seeded grid. May be invalid as a start
// for a given program; generate_task rejects such pairs.
WorldState sample_state(const GenConfig& cfg, std::mt19937_64& rng);

// Draws the cost level from cost_weights, then a flat program at that level:
// construct kinds and condition literals uniform, block lengths geometric,
// written action tokens capped by max_total_actions.
Program sample_program(const GenConfig& cfg, std::mt19937_64& rng);

// As sample_program but with the branching-statement count fixed.
Program sample_program_at_level(const GenConfig& cfg, int level, std::mt19937_64& rng);

// Rejection-samples a task from the stream seeded with `seed`: k distinct
// observed demonstrations plus unseen ones, all accepted by run_concrete,
// where the observed set exercises both outcomes of every branching
// statement. Throws GenerationExhausted when attempt_budget runs out.
Task generate_task(const GenConfig& cfg, uint64_t seed);

// Both entry outcomes (condition true / false) of each branching statement,
// indexed over the branching statements of the program in order.
struct BranchCoverage {
  std::vector<bool> seen_true;
  std::vector<bool> seen_false;
};
BranchCoverage observe_branches(const Program& p, const std::vector<Demonstration>& demos);
bool covers_all_branches(const Program& p, const std::vector<Demonstration>& demos);

struct BetaParams {
  double alpha = 1;
  double beta = 1;
};

struct NoiseConfig {
  double action_error_rate = 0.0;
  double perception_error_rate = 0.0;
  BetaParams conf_correct{400.0, 1.0};
  BetaParams conf_wrong{5.0, 3.0};
  double calibration_leak = 0.05;  // chance a wrong token draws conf_correct
};

struct ActionPrediction {
  Action value = Action::Move;
  double confidence = 1.0;
};

struct PerceptionPrediction {
  bool value = false;
  double confidence = 1.0;
};

// One corrupted demonstration: per-token predicted values with simulated
// softmax confidences. Length-preserving by construction.
struct NoisySpec {
  std::vector<ActionPrediction> actions;
  std::vector<std::array<PerceptionPrediction, kNumPerceptions>> perceptions;
  int length() const { return static_cast<int>(actions.size()); }
};

double sample_beta(const BetaParams& params, std::mt19937_64& rng);

// Flips each action token to a uniformly random different action with
// probability action_error_rate, and negates each perception bit with
// probability perception_error_rate. Untouched tokens draw confidence from
// conf_correct; flipped ones from conf_wrong, except a calibration_leak
// fraction that draws from conf_correct (confidently wrong). Draw order is
// actions first, then perception rows in row-major order.
NoisySpec corrupt(const Demonstration& demo, const NoiseConfig& noise, std::mt19937_64& rng);

// The hard values a solver consumes, with confidences stripped.
struct SpecData {
  PerceptionMatrix perceptions;
  std::vector<Action> actions;
};
SpecData spec_values(const NoisySpec& spec);
NoisySpec exact_spec(const Demonstration& demo);  // zero-noise, confidence 1

// Stream seed for corrupting task `task_seed` under noise seed `noise_seed`.
uint64_t noise_stream_seed(uint64_t noise_seed, uint64_t task_seed);

}  // namespace plans
