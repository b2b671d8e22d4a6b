#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plans/dataset.hpp"
#include "plans/metrics.hpp"
#include "plans/synth.hpp"

namespace plans {

// Mean and population standard deviation of a per-seed accuracy.
struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_seed;
};

MeanStd aggregate(const std::vector<double>& per_seed);

struct ExperimentConfig {
  std::string mode = "dynamic";  // none | static | dynamic
  NoiseConfig noise;
  FilterConfig filter;
  SynthBounds bounds;
  std::vector<uint64_t> noise_seeds{1};
  int parallel = 1;
  int t_max = 20;
  int use_k = 0;  // cap on demonstrations fed per task; 0 = all observed
};

struct RunReport {
  std::string mode;
  int n_tasks = 0;
  std::vector<uint64_t> noise_seeds;
  MeanStd execution;
  MeanStd program;
  MeanStd sequence;
  std::map<std::string, long> outcomes;  // found/unsat/bounds_exceeded, summed over seeds
};

// Noisy specs for one task: corrupt the (optionally truncated) observed
// demonstrations with a stream seeded from (noise_seed, task seed).
std::vector<NoisySpec> corrupt_task(const Task& task, const NoiseConfig& noise,
                                    uint64_t noise_seed, int use_k = 0);

SynthesisResult synthesize_mode(const std::string& mode, const std::vector<NoisySpec>& specs,
                                const FilterConfig& filter, const SynthBounds& bounds);

// Runs every task under every noise seed and aggregates the three accuracies
// over seeds. Verdicts, when requested, come back as one vector per seed in
// task order regardless of parallelism.
RunReport run_experiment(const std::vector<Task>& tasks, const ExperimentConfig& cfg,
                         std::vector<std::vector<TaskVerdict>>* verdicts_out = nullptr);

std::string to_string(SynthOutcome outcome);

}  // namespace plans
